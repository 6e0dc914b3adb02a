#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "litiscope/matrix.hpp"

namespace litiscope {

enum class MajorityMode {
    /// Append n_major_per_synth resampled majority rows per synthetic minority row.
    Add,
    /// Classical SMOTE undersampling: keep min(M, m * s * j) majority rows, drawn without replacement.
    Undersample,
};

struct SmoteConfig {
    std::size_t n_synth_per_minority = 5;
    std::size_t n_major_per_synth = 1;
    std::size_t k_neighbors = 5;
    std::uint64_t seed = 0;
    MajorityMode majority_mode = MajorityMode::Add;

    bool operator==(const SmoteConfig&) const = default;
};

struct Resampled {
    Matrix rows;
    std::vector<bool> labels;
    /// True for rows taken from the input, false for interpolated or resampled-copy rows.
    std::vector<bool> original;
};

/// SMOTE over the minority class (the rarer label; positive on a tie).
///
/// Output layout in Add mode: the input rows in input order, then the synthetic minority
/// rows (minority row by row, n_synth_per_minority each), then the sampled majority rows.
/// In Undersample mode the kept input rows come first (input order), then the synthetic rows.
/// Each synthetic row is x + u (nn - x) with u ~ U[0,1] and nn drawn from x's k nearest
/// minority neighbours. Columns listed in `categorical_groups` are copied from whichever
/// parent is nearer (u < 0.5 picks x), so one-hot groups stay one-hot.
Resampled smote(const Matrix& rows, const std::vector<bool>& labels, const SmoteConfig& config,
                const std::vector<std::vector<std::size_t>>& categorical_groups = {});

} // namespace litiscope
