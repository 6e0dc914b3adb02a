#include "litiscope/ttlmodel.hpp"

#include <limits>
#include <stdexcept>
#include <string>

#include "litiscope/error.hpp"
#include "litiscope/random.hpp"

namespace litiscope {

std::string_view to_string(YearGroup group) {
    switch (group) {
    case YearGroup::G1: return "T<1";
    case YearGroup::G4: return "T<4";
    case YearGroup::G7: return "T<7";
    case YearGroup::G14: return "T<14";
    }
    return "T<14";
}

YearGroup year_group(double years) {
    if (!(years >= 0.0)) throw std::out_of_range("year_group: negative time to litigation");
    for (std::size_t g = 0; g < kYearGroupBounds.size(); ++g)
        if (years < kYearGroupBounds[g]) return static_cast<YearGroup>(g);
    throw std::out_of_range("year_group: " + std::to_string(years) + " years is outside the modeled range");
}

NodePrediction hierarchy_adjust(const NodePrediction& raw) {
    NodePrediction p = raw;
    p.by_4 = p.by_4 || p.by_1;
    p.by_7 = p.by_7 || p.by_4;
    p.by_14 = true;
    return p;
}

NodePrediction nodes_of(YearGroup group) {
    const int g = static_cast<int>(group);
    return {g <= 0, g <= 1, g <= 2, true};
}

YearGroup group_of(const NodePrediction& p) {
    if (p.by_1) return YearGroup::G1;
    if (p.by_4) return YearGroup::G4;
    if (p.by_7) return YearGroup::G7;
    return YearGroup::G14;
}

PerNodeModels train_per_node(const Matrix& X, const std::vector<YearGroup>& groups, const LitConfig& cfg,
                             const std::vector<std::vector<std::size_t>>& categorical_groups) {
    if (groups.size() != X.rows()) throw TrainingError("train_per_node: group count differs from row count");
    PerNodeModels models;
    for (std::size_t node = 0; node < 3; ++node) {
        std::vector<bool> y(groups.size());
        std::size_t pos = 0;
        for (std::size_t i = 0; i < groups.size(); ++i) {
            y[i] = static_cast<std::size_t>(groups[i]) <= node;
            pos += y[i] ? 1 : 0;
        }
        const auto t = static_cast<int>(kYearGroupBounds[node]);
        if (pos == 0 || pos == y.size())
            throw TrainingError("train_per_node: node by_" + std::to_string(t) + " has no " +
                                (pos == 0 ? "positive" : "negative") + " cases");
        LitConfig node_cfg = cfg;
        node_cfg.seed = derive_seed(cfg.seed, "ttl-node", node);
        models.nodes[node] = train_litigation(X, y, node_cfg, categorical_groups);
    }
    return models;
}

NodePrediction predict_per_node(const PerNodeModels& models, std::span<const double> x, NodeMethod method) {
    std::array<bool, 3> flags{};
    for (std::size_t node = 0; node < 3; ++node) {
        const auto& m = models.nodes[node];
        flags[node] = method == NodeMethod::Cluster ? score_litigation(m, x).label : score_pure(m.ensemble, x);
    }
    return {flags[0], flags[1], flags[2], true};
}

NestedHulls train_nested_hulls(const Matrix& X, const std::vector<YearGroup>& groups, std::size_t k,
                               std::uint64_t seed, const HullOptions& hull, const KMeansOptions& kmeans_options) {
    if (groups.size() != X.rows()) throw TrainingError("train_nested_hulls: group count differs from row count");
    std::array<std::vector<std::size_t>, 4> by_group;
    for (std::size_t i = 0; i < groups.size(); ++i) by_group[static_cast<std::size_t>(groups[i])].push_back(i);
    if (by_group[0].empty()) throw TrainingError("train_nested_hulls: no T<1 cases to cluster");

    const Matrix inner = X.select_rows(by_group[0]);
    if (k == 0 || k > count_distinct_rows(inner))
        throw TrainingError("train_nested_hulls: k = " + std::to_string(k) + " exceeds the distinct T<1 cases");
    const ClusterSet clusters = kmeans(inner, k, derive_seed(seed, "nested-kmeans"), kmeans_options);

    NestedHulls nested;
    nested.hull = hull;
    nested.layers.resize(k);
    for (std::size_t c = 0; c < k; ++c) nested.layers[c][0] = inner.select_rows(clusters.members[c]);

    for (std::size_t stage = 1; stage < 4; ++stage) {
        std::vector<Matrix> expanded;
        for (std::size_t c = 0; c < k; ++c) expanded.push_back(nested.layers[c][stage - 1]);
        for (std::size_t i : by_group[stage]) {
            std::size_t best_c = 0;
            double best = std::numeric_limits<double>::infinity();
            for (std::size_t c = 0; c < k; ++c) {
                const double d = hull_distance(X.row(i), nested.layers[c][stage - 1], hull);
                if (d < best) {
                    best = d;
                    best_c = c;
                }
            }
            expanded[best_c].append_row(X.row(i));
        }
        for (std::size_t c = 0; c < k; ++c) nested.layers[c][stage] = std::move(expanded[c]);
    }
    return nested;
}

YearGroup classify_nested(const NestedHulls& nested, std::span<const double> x) {
    for (std::size_t layer = 0; layer < 4; ++layer)
        for (const auto& cluster : nested.layers)
            if (hull_distance(x, cluster[layer], nested.hull) <= nested.hull.tol) return static_cast<YearGroup>(layer);
    return YearGroup::G14;
}

} // namespace litiscope
