#include "litiscope/graphfeat.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "litiscope/error.hpp"

namespace litiscope {

std::size_t CitationGraph::edge_count() const noexcept {
    std::size_t n = 0;
    for (const auto& targets : out_) n += targets.size();
    return n;
}

std::size_t CitationGraph::find(const std::string& id) const {
    const auto it = index_.find(id);
    return it == index_.end() ? size() : it->second;
}

std::size_t CitationGraph::add_node(const std::string& id, bool external) {
    const auto [it, inserted] = index_.emplace(id, ids_.size());
    if (inserted) {
        ids_.push_back(id);
        external_.push_back(external);
        out_.emplace_back();
    }
    return it->second;
}

bool CitationGraph::add_edge(std::size_t citing, std::size_t cited) {
    if (citing == cited) return false;
    auto& targets = out_.at(citing);
    const auto pos = std::lower_bound(targets.begin(), targets.end(), cited);
    if (pos != targets.end() && *pos == cited) return false;
    targets.insert(pos, cited);
    return true;
}

CitationGraph build_graph(const Corpus& corpus) {
    CitationGraph graph;
    for (const auto& r : corpus.records) graph.add_node(r.id, false);
    for (const auto& r : corpus.records) {
        const auto citing = graph.find(r.id);
        for (const auto& ref : r.backward_refs) graph.add_edge(citing, graph.add_node(ref, true));
    }
    return graph;
}

std::vector<double> pagerank(const CitationGraph& graph, const PageRankOptions& options) {
    const std::size_t n = graph.size();
    if (n == 0) throw DataError("pagerank: empty graph");

    // Adjacency in the direction score flows.
    std::vector<std::vector<std::size_t>> flow(n);
    for (std::size_t u = 0; u < n; ++u) {
        for (std::size_t v : graph.cited(u)) {
            if (options.reverse)
                flow[v].push_back(u);
            else
                flow[u].push_back(v);
        }
    }

    const double nd = static_cast<double>(n);
    const double d = options.damping;
    std::vector<double> score(n, 1.0 / nd), next(n);
    double residual = 0.0;
    for (std::size_t iter = 0; iter < options.max_iter; ++iter) {
        double dangling = 0.0;
        for (std::size_t u = 0; u < n; ++u)
            if (flow[u].empty()) dangling += score[u];
        std::fill(next.begin(), next.end(), (1.0 - d) / nd + d * dangling / nd);
        for (std::size_t u = 0; u < n; ++u) {
            if (flow[u].empty()) continue;
            const double share = d * score[u] / static_cast<double>(flow[u].size());
            for (std::size_t v : flow[u]) next[v] += share;
        }
        residual = 0.0;
        for (std::size_t u = 0; u < n; ++u) residual += std::abs(next[u] - score[u]);
        score.swap(next);
        if (residual < options.tol) {
            const double total = std::accumulate(score.begin(), score.end(), 0.0);
            for (auto& s : score) s /= total;
            return score;
        }
    }
    throw ConvergenceError("pagerank did not converge in " + std::to_string(options.max_iter) +
                               " iterations",
                           residual);
}

RefFeatures ref_features(const CitationGraph& graph, std::span<const double> pagerank_scores,
                         const std::unordered_set<std::string>& litigated_ids, const std::string& id) {
    const auto node = graph.find(id);
    if (node == graph.size()) throw DataError("ref_features: unknown patent id " + id);

    RefFeatures f;
    const auto first = graph.cited(node);
    f.n_backward = first.size();
    double pr_sum = 0.0;
    for (std::size_t v : first) {
        pr_sum += pagerank_scores[v];
        if (litigated_ids.count(graph.id(v))) ++f.n_lit_backward;
    }
    if (f.n_backward > 0) f.avg_pagerank_backward = pr_sum / static_cast<double>(f.n_backward);

    std::vector<std::size_t> second;
    for (std::size_t v : first)
        for (std::size_t w : graph.cited(v))
            if (w != node && !std::binary_search(first.begin(), first.end(), w)) second.push_back(w);
    std::sort(second.begin(), second.end());
    second.erase(std::unique(second.begin(), second.end()), second.end());
    f.n_backward_2nd = second.size();
    for (std::size_t w : second)
        if (litigated_ids.count(graph.id(w))) ++f.n_lit_backward_2nd;
    return f;
}

} // namespace litiscope
