#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace litiscope {

/// Shannon entropy in bits of a two-class split with the given counts.
double binary_entropy(std::size_t positives, std::size_t negatives) noexcept;

/// Information gain in bits of a discrete feature with respect to boolean labels:
/// H(labels) - sum_v p(v) H(labels | feature = v).
double information_gain(std::span<const int> feature, const std::vector<bool>& labels);

/// Information gain of a binary presence feature given its per-class presence counts.
double presence_information_gain(std::size_t present_pos, std::size_t present_neg,
                                 std::size_t total_pos, std::size_t total_neg) noexcept;

} // namespace litiscope
