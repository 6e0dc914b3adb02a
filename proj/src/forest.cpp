#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "litiscope/error.hpp"
#include "litiscope/learners.hpp"
#include "litiscope/random.hpp"

namespace litiscope {

bool DecisionTree::predict(std::span<const double> x) const {
    std::uint32_t at = 0;
    while (nodes[at].feature >= 0) {
        const auto& node = nodes[at];
        at = x[static_cast<std::size_t>(node.feature)] <= node.threshold ? node.left : node.right;
    }
    return nodes[at].vote;
}

double ForestModel::probability(std::span<const double> x) const {
    if (trees.empty()) return 0.0;
    std::size_t votes = 0;
    for (const auto& t : trees) votes += t.predict(x) ? 1 : 0;
    return static_cast<double>(votes) / static_cast<double>(trees.size());
}

namespace {

double gini(double pos, double total) {
    if (total <= 0.0) return 0.0;
    const double p = pos / total;
    return 2.0 * p * (1.0 - p);
}

struct Split {
    int feature = -1;
    double threshold = 0.0;
    double impurity = std::numeric_limits<double>::infinity();
};

class TreeBuilder {
public:
    TreeBuilder(const Matrix& X, const std::vector<bool>& y, const ForestConfig& cfg, std::size_t max_features,
                Rng& rng)
        : X_(X), y_(y), cfg_(cfg), max_features_(max_features), rng_(rng) {}

    DecisionTree build(std::vector<std::size_t> sample) {
        DecisionTree tree;
        tree.nodes.emplace_back();
        struct Work {
            std::uint32_t node;
            std::vector<std::size_t> rows;
        };
        std::vector<Work> stack;
        stack.push_back({0, std::move(sample)});
        while (!stack.empty()) {
            Work work = std::move(stack.back());
            stack.pop_back();
            std::size_t pos = 0;
            for (std::size_t r : work.rows) pos += y_[r] ? 1 : 0;
            const std::size_t total = work.rows.size();
            tree.nodes[work.node].vote = 2 * pos >= total;
            if (pos == 0 || pos == total || total < 2 * cfg_.min_leaf) continue;

            const Split split = best_split(work.rows, pos);
            if (split.feature < 0) continue;

            std::vector<std::size_t> left, right;
            for (std::size_t r : work.rows)
                (X_(r, static_cast<std::size_t>(split.feature)) <= split.threshold ? left : right).push_back(r);
            const auto left_id = static_cast<std::uint32_t>(tree.nodes.size());
            tree.nodes.emplace_back();
            tree.nodes.emplace_back();
            auto& node = tree.nodes[work.node];
            node.feature = split.feature;
            node.threshold = split.threshold;
            node.left = left_id;
            node.right = left_id + 1;
            stack.push_back({left_id + 1, std::move(right)});
            stack.push_back({left_id, std::move(left)});
        }
        return tree;
    }

private:
    Split best_split(const std::vector<std::size_t>& rows, std::size_t pos) {
        const std::size_t width = X_.cols();
        std::vector<std::size_t> features(width);
        std::iota(features.begin(), features.end(), 0);
        const double total = static_cast<double>(rows.size());
        const double parent = gini(static_cast<double>(pos), total);

        Split best;
        std::size_t tried = 0;
        std::vector<std::pair<double, bool>> values(rows.size());
        for (std::size_t f = 0; f < width && tried < max_features_; ++f) {
            std::swap(features[f], features[f + uniform_index(rng_, width - f)]);
            const std::size_t feature = features[f];
            for (std::size_t k = 0; k < rows.size(); ++k) values[k] = {X_(rows[k], feature), y_[rows[k]]};
            std::sort(values.begin(), values.end(),
                      [](const auto& a, const auto& b) { return a.first < b.first; });
            if (values.front().first == values.back().first) continue;
            ++tried;

            double left_pos = 0.0;
            for (std::size_t k = 0; k + 1 < values.size(); ++k) {
                left_pos += values[k].second ? 1.0 : 0.0;
                if (values[k].first == values[k + 1].first) continue;
                const std::size_t n_left = k + 1, n_right = values.size() - n_left;
                if (n_left < cfg_.min_leaf || n_right < cfg_.min_leaf) continue;
                const double nl = static_cast<double>(n_left), nr = static_cast<double>(n_right);
                const double impurity = (nl * gini(left_pos, nl) + nr * gini(static_cast<double>(pos) - left_pos, nr)) / total;
                if (impurity < best.impurity) {
                    best.impurity = impurity;
                    best.feature = static_cast<int>(feature);
                    best.threshold = 0.5 * (values[k].first + values[k + 1].first);
                    // Guard against the midpoint rounding onto the right-hand value.
                    if (best.threshold >= values[k + 1].first) best.threshold = values[k].first;
                }
            }
        }
        if (best.feature >= 0 && !(best.impurity < parent - 1e-12)) best.feature = -1;
        return best;
    }

    const Matrix& X_;
    const std::vector<bool>& y_;
    const ForestConfig& cfg_;
    std::size_t max_features_;
    Rng& rng_;
};

} // namespace

ForestModel train_forest(const Matrix& X, const std::vector<bool>& y, const ForestConfig& cfg, std::uint64_t seed) {
    if (y.size() != X.rows()) throw TrainingError("train_forest: label count differs from row count");
    const auto pos = std::count(y.begin(), y.end(), true);
    if (pos == 0 || pos == static_cast<std::ptrdiff_t>(y.size()))
        throw TrainingError("train_forest: training data holds a single class");
    if (cfg.n_trees == 0) throw TrainingError("train_forest: n_trees must be at least 1");

    const std::size_t width = X.cols();
    std::size_t max_features = cfg.max_features;
    if (max_features == 0) max_features = static_cast<std::size_t>(std::ceil(std::sqrt(static_cast<double>(width))));
    max_features = std::clamp<std::size_t>(max_features, 1, std::max<std::size_t>(width, 1));

    ForestModel forest;
    forest.n_features = width;
    forest.trees.reserve(cfg.n_trees);
    const std::size_t n = X.rows();
    for (std::size_t t = 0; t < cfg.n_trees; ++t) {
        Rng rng = make_rng(seed, "forest-tree", t);
        std::vector<std::size_t> sample(n);
        for (auto& s : sample) s = uniform_index(rng, n);
        TreeBuilder builder(X, y, cfg, max_features, rng);
        forest.trees.push_back(builder.build(std::move(sample)));
    }
    return forest;
}

} // namespace litiscope
