#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "litiscope/geometry.hpp"
#include "litiscope/litmodel.hpp"
#include "litiscope/matrix.hpp"

namespace litiscope {

/// Time-to-litigation bucket, ordered innermost first: [0,1), [1,4), [4,7), [7,14) years.
enum class YearGroup { G1 = 0, G4 = 1, G7 = 2, G14 = 3 };

inline constexpr std::array<double, 4> kYearGroupBounds = {1.0, 4.0, 7.0, 14.0};

std::string_view to_string(YearGroup group);

/// Half-open interval lookup; throws std::out_of_range for negative years or years >= 14.
YearGroup year_group(double years);

/// "Litigated before year t" flags.
struct NodePrediction {
    bool by_1 = false;
    bool by_4 = false;
    bool by_7 = false;
    bool by_14 = false;

    bool operator==(const NodePrediction&) const = default;
};

/// Monotone closure by_1 => by_4 => by_7 => by_14, with by_14 always true for a litigated case.
NodePrediction hierarchy_adjust(const NodePrediction& raw);

/// True node flags of a case in the given group.
NodePrediction nodes_of(YearGroup group);
/// Innermost group whose node is set; G14 when only by_14 holds.
YearGroup group_of(const NodePrediction& adjusted);

enum class NodeMethod { Cluster, Pure };

/// Binary models for the nodes by_1, by_4 and by_7, in that order.
struct PerNodeModels {
    std::array<LitigationModel, 3> nodes;

    bool operator==(const PerNodeModels&) const = default;
};

/// Node "by year t" takes cases with T < t as positives and the other litigated cases as
/// negatives; each node is resampled and trained like the litigation model.
PerNodeModels train_per_node(const Matrix& X, const std::vector<YearGroup>& groups, const LitConfig& config,
                             const std::vector<std::vector<std::size_t>>& categorical_groups = {});

NodePrediction predict_per_node(const PerNodeModels& models, std::span<const double> x, NodeMethod method);

/// Per-cluster layers of points; layers[c][L] holds the points of cluster c after the
/// expansion stage L (0: T<1, 1: T<4, 2: T<7, 3: T<14).
struct NestedHulls {
    std::vector<std::array<Matrix, 4>> layers;
    HullOptions hull;

    std::size_t clusters() const noexcept { return layers.size(); }
    bool operator==(const NestedHulls&) const = default;
};

/// k-means on the G1 rows, then each G4 row joins the cluster whose layer-1 hull is nearest,
/// each G7 row the nearest layer-4 hull, each G14 row the nearest layer-7 hull. Distance ties
/// go to the lower cluster index. Throws TrainingError when G1 is empty or k is too large.
NestedHulls train_nested_hulls(const Matrix& X, const std::vector<YearGroup>& groups, std::size_t k,
                               std::uint64_t seed, const HullOptions& hull = {},
                               const KMeansOptions& kmeans_options = {});

/// Group of the innermost layer whose hull (in any cluster) contains x; G14 when none does.
YearGroup classify_nested(const NestedHulls& nested, std::span<const double> x);

} // namespace litiscope
