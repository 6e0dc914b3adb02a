#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "litiscope/corpus.hpp"

namespace litiscope {

/// Directed reference graph. Edges run citing -> cited. Referenced ids that are not
/// corpus records become external nodes.
class CitationGraph {
public:
    std::size_t size() const noexcept { return ids_.size(); }
    std::size_t edge_count() const noexcept;

    const std::string& id(std::size_t node) const { return ids_.at(node); }
    bool is_external(std::size_t node) const { return external_.at(node); }
    /// Node index of an id, or size() when absent.
    std::size_t find(const std::string& id) const;
    bool contains(const std::string& id) const { return find(id) != size(); }

    /// Nodes cited by `node`, ascending by node index.
    std::span<const std::size_t> cited(std::size_t node) const { return out_.at(node); }

    /// Adds a node if absent and returns its index.
    std::size_t add_node(const std::string& id, bool external);
    /// Adds citing -> cited unless it is a self-edge or already present.
    bool add_edge(std::size_t citing, std::size_t cited);

private:
    std::vector<std::string> ids_;
    std::vector<bool> external_;
    std::vector<std::vector<std::size_t>> out_;
    std::unordered_map<std::string, std::size_t> index_;
};

CitationGraph build_graph(const Corpus& corpus);

struct PageRankOptions {
    double damping = 0.85;
    double tol = 1e-8;
    std::size_t max_iter = 1000;
    /// Run on reversed edges (score flows from cited to citing).
    bool reverse = false;

    bool operator==(const PageRankOptions&) const = default;
};

/// Power-iteration PageRank. Dangling mass is spread uniformly. Stops when the L1 change
/// between successive iterates drops below tol; throws ConvergenceError otherwise.
std::vector<double> pagerank(const CitationGraph& graph, const PageRankOptions& options = {});

struct RefFeatures {
    std::size_t n_backward = 0;
    std::size_t n_backward_2nd = 0;
    std::size_t n_lit_backward = 0;
    std::size_t n_lit_backward_2nd = 0;
    double avg_pagerank_backward = 0.0;

    bool operator==(const RefFeatures&) const = default;
};

/// Reference features of one node. The second layer is the set of distinct nodes cited by
/// the node's references, minus the node itself and minus its first layer.
RefFeatures ref_features(const CitationGraph& graph, std::span<const double> pagerank_scores,
                         const std::unordered_set<std::string>& litigated_ids, const std::string& id);

} // namespace litiscope
