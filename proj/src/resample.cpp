#include "litiscope/resample.hpp"

#include <algorithm>
#include <numeric>

#include "litiscope/error.hpp"
#include "litiscope/random.hpp"

namespace litiscope {

namespace {

/// k nearest minority neighbours of each minority row (excluding itself), ties by index.
std::vector<std::vector<std::size_t>> minority_neighbours(const Matrix& rows,
                                                          const std::vector<std::size_t>& minority,
                                                          std::size_t k) {
    const std::size_t m = minority.size();
    std::vector<std::vector<std::size_t>> out(m);
    std::vector<std::pair<double, std::size_t>> dist;
    for (std::size_t a = 0; a < m; ++a) {
        dist.clear();
        for (std::size_t b = 0; b < m; ++b)
            if (b != a) dist.emplace_back(squared_distance(rows.row(minority[a]), rows.row(minority[b])), b);
        const std::size_t take = std::min(k, dist.size());
        std::partial_sort(dist.begin(), dist.begin() + static_cast<std::ptrdiff_t>(take), dist.end());
        for (std::size_t i = 0; i < take; ++i) out[a].push_back(dist[i].second);
    }
    return out;
}

} // namespace

Resampled smote(const Matrix& rows, const std::vector<bool>& labels, const SmoteConfig& cfg,
                const std::vector<std::vector<std::size_t>>& categorical_groups) {
    if (labels.size() != rows.rows()) throw TrainingError("smote: label count differs from row count");
    if (cfg.k_neighbors < 1) throw TrainingError("smote: k_neighbors must be at least 1");

    std::size_t n_pos = 0;
    for (bool y : labels) n_pos += y ? 1 : 0;
    const bool minority_label = n_pos <= labels.size() - n_pos;
    std::vector<std::size_t> minority, majority;
    for (std::size_t i = 0; i < labels.size(); ++i) (labels[i] == minority_label ? minority : majority).push_back(i);

    const std::size_t s = cfg.n_synth_per_minority;
    if (s > 0 && minority.size() < cfg.k_neighbors + 1)
        throw TrainingError("smote: " + std::to_string(minority.size()) +
                            " minority rows are too few for " + std::to_string(cfg.k_neighbors) +
                            " neighbours");

    Rng rng = make_rng(cfg.seed, "smote");
    Resampled out;
    out.rows = Matrix(0, rows.cols());

    auto push = [&](std::span<const double> values, bool label, bool original) {
        out.rows.append_row(values);
        out.labels.push_back(label);
        out.original.push_back(original);
    };

    if (cfg.majority_mode == MajorityMode::Add) {
        for (std::size_t i = 0; i < rows.rows(); ++i) push(rows.row(i), labels[i], true);
    } else {
        const std::size_t keep = std::min(majority.size(), minority.size() * s * cfg.n_major_per_synth);
        std::vector<std::size_t> pool = majority;
        for (std::size_t i = 0; i < keep; ++i) std::swap(pool[i], pool[i + uniform_index(rng, pool.size() - i)]);
        std::vector<char> kept(rows.rows(), 0);
        for (std::size_t i : minority) kept[i] = 1;
        for (std::size_t i = 0; i < keep; ++i) kept[pool[i]] = 1;
        for (std::size_t i = 0; i < rows.rows(); ++i)
            if (kept[i]) push(rows.row(i), labels[i], true);
    }

    if (s > 0) {
        const auto neighbours = minority_neighbours(rows, minority, cfg.k_neighbors);
        std::vector<double> synth(rows.cols());
        for (std::size_t a = 0; a < minority.size(); ++a) {
            const auto x = rows.row(minority[a]);
            for (std::size_t t = 0; t < s; ++t) {
                const auto& nbrs = neighbours[a];
                const auto nn = rows.row(minority[nbrs[uniform_index(rng, nbrs.size())]]);
                const double u = uniform01(rng);
                for (std::size_t c = 0; c < synth.size(); ++c) synth[c] = x[c] + u * (nn[c] - x[c]);
                const auto& parent = u < 0.5 ? x : nn;
                for (const auto& group : categorical_groups)
                    for (std::size_t c : group) synth[c] = parent[c];
                push(synth, minority_label, false);
            }
        }
    }

    if (cfg.majority_mode == MajorityMode::Add && !majority.empty()) {
        const std::size_t extra = minority.size() * s * cfg.n_major_per_synth;
        for (std::size_t t = 0; t < extra; ++t)
            push(rows.row(majority[uniform_index(rng, majority.size())]), !minority_label, false);
    }
    return out;
}

} // namespace litiscope
