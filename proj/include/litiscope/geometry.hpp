#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <utility>
#include <vector>

#include "litiscope/matrix.hpp"

namespace litiscope {

struct KMeansOptions {
    std::size_t max_iter = 300;
    /// Converged when no centroid moves farther than this.
    double tol = 1e-9;
};

struct ClusterSet {
    std::size_t k = 0;
    std::vector<std::size_t> assignments;
    Matrix centroids;
    std::vector<std::vector<std::size_t>> members;
    /// Within-cluster sum of squares after seeding and after every Lloyd step.
    std::vector<double> objective_history;
};

/// Number of distinct rows.
std::size_t count_distinct_rows(const Matrix& points);

/// Lloyd's algorithm from k-means++ seeding. An empty cluster is reseeded with the point
/// farthest from its current centroid. Throws std::invalid_argument when k is zero or exceeds
/// the number of distinct points.
ClusterSet kmeans(const Matrix& points, std::size_t k, std::uint64_t seed,
                  const KMeansOptions& options = {});

struct HullOptions {
    double tol = 1e-6;
    std::size_t max_iter = 10000;

    bool operator==(const HullOptions&) const = default;
};

struct HullResult {
    double distance = 0.0;
    /// Frank-Wolfe duality gap ||x||^2 - min_i <x, h_i> at termination (shifted frame).
    double gap = 0.0;
    std::size_t iterations = 0;
    /// Set when the search stopped early because the distance provably exceeds the cutoff;
    /// `distance` then holds a lower bound.
    bool pruned = false;
};

/// Euclidean distance from `point` to the convex hull of the rows of `hull`:
/// min over simplex weights w of ||sum_i w_i h_i - point||.
///
/// Solved with Wolfe's minimum-norm-point method, a fully corrective Frank-Wolfe scheme: each
/// major step adds the vertex returned by the linear minimization oracle, and the minor steps
/// re-optimize exactly over the affine hull of the active vertices. Stops when the duality gap
/// falls to tol; distances at or below tol are reported as 0. Throws ConvergenceError if
/// max_iter major steps pass without reaching the tolerance.
///
/// When `cutoff` is finite the search may stop as soon as a lower bound on the distance
/// reaches it, setting `pruned`.
HullResult hull_distance_detailed(std::span<const double> point, const Matrix& hull,
                                  const HullOptions& options = {},
                                  double cutoff = std::numeric_limits<double>::infinity());

double hull_distance(std::span<const double> point, const Matrix& hull, const HullOptions& options = {});

/// a / b, with +inf for a > 0 = b and 1 for 0 / 0.
double safe_ratio(double numerator, double denominator);

struct BallCounts {
    std::size_t positive = 0;
    std::size_t negative = 0;

    bool operator==(const BallCounts&) const = default;
};

/// Labeled points inside the closed ball ||p - center|| <= radius.
BallCounts ball_counts(std::span<const double> center, double radius, const Matrix& points,
                       const std::vector<bool>& labels);

} // namespace litiscope
