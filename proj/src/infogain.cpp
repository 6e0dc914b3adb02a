#include "litiscope/infogain.hpp"

#include <cmath>
#include <map>
#include <stdexcept>

namespace litiscope {

double binary_entropy(std::size_t positives, std::size_t negatives) noexcept {
    const double n = static_cast<double>(positives + negatives);
    if (positives == 0 || negatives == 0) return 0.0;
    const double p = static_cast<double>(positives) / n;
    const double q = static_cast<double>(negatives) / n;
    return -(p * std::log2(p) + q * std::log2(q));
}

double information_gain(std::span<const int> feature, const std::vector<bool>& labels) {
    if (feature.size() != labels.size())
        throw std::invalid_argument("information_gain: feature and labels differ in length");
    if (feature.empty()) throw std::invalid_argument("information_gain: no rows");

    std::map<int, std::pair<std::size_t, std::size_t>> counts;
    std::size_t pos = 0;
    for (std::size_t i = 0; i < feature.size(); ++i) {
        auto& c = counts[feature[i]];
        if (labels[i]) {
            ++c.first;
            ++pos;
        } else {
            ++c.second;
        }
    }
    const double n = static_cast<double>(feature.size());
    double conditional = 0.0;
    for (const auto& [value, c] : counts)
        conditional += static_cast<double>(c.first + c.second) / n * binary_entropy(c.first, c.second);
    const double gain = binary_entropy(pos, feature.size() - pos) - conditional;
    return gain > 0.0 ? gain : 0.0;
}

double presence_information_gain(std::size_t present_pos, std::size_t present_neg,
                                 std::size_t total_pos, std::size_t total_neg) noexcept {
    const std::size_t n = total_pos + total_neg;
    if (n == 0) return 0.0;
    const std::size_t absent_pos = total_pos - present_pos;
    const std::size_t absent_neg = total_neg - present_neg;
    const double nd = static_cast<double>(n);
    const double conditional =
        static_cast<double>(present_pos + present_neg) / nd * binary_entropy(present_pos, present_neg) +
        static_cast<double>(absent_pos + absent_neg) / nd * binary_entropy(absent_pos, absent_neg);
    const double gain = binary_entropy(total_pos, total_neg) - conditional;
    return gain > 0.0 ? gain : 0.0;
}

} // namespace litiscope
