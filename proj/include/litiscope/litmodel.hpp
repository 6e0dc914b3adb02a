#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "litiscope/geometry.hpp"
#include "litiscope/learners.hpp"
#include "litiscope/matrix.hpp"
#include "litiscope/resample.hpp"

namespace litiscope {

/// How the ball radius z follows from the distance r to the nearest point of the initial class.
enum class RadiusRule { Scale, Divide };

struct LitHyperparams {
    /// X: ball-radius scale.
    double radius_scale = 3.5;
    /// A: convex hull distance ratio threshold.
    double hull_ratio_threshold = 1.3;
    /// B: litigated fraction ratio threshold.
    double fraction_ratio_threshold = 0.015;
    RadiusRule radius_rule = RadiusRule::Scale;

    double radius(double r) const { return radius_rule == RadiusRule::Scale ? radius_scale * r : r / radius_scale; }
    bool operator==(const LitHyperparams&) const = default;
};

struct LitConfig {
    std::size_t k_per_class = 5;
    LitHyperparams hyper;
    SmoteConfig smote;
    LearnerConfig learners;
    KMeansOptions kmeans;
    HullOptions hull;
    /// Cluster the SMOTE-resampled rows (true) or the original training rows.
    bool cluster_on_resampled = true;
    /// Count SMOTE rows in the ball and nearest-point search.
    bool ball_includes_synthetic = false;
    std::uint64_t seed = 0;
};

/// Binary cluster-with-ensemble model. "Positive" is the litigated class for the litigation
/// model and "litigated before year t" for a time-to-litigation node.
struct LitigationModel {
    std::vector<Matrix> positive_hulls;
    std::vector<Matrix> negative_hulls;
    /// Points used for the nearest-point radius and the ball counts.
    Matrix ball_points;
    std::vector<bool> ball_labels;
    EnsembleModel ensemble;
    LitHyperparams hyper;
    HullOptions hull;
    std::size_t n_features = 0;
    /// Row counts after resampling, for reporting.
    std::size_t resampled_positive = 0;
    std::size_t resampled_negative = 0;

    bool operator==(const LitigationModel&) const = default;
};

struct ScoreTrace {
    double d_pos = 0.0;
    double d_neg = 0.0;
    double hull_ratio = 0.0;
    bool initial_label = false;
    double r = 0.0;
    double z = 0.0;
    std::size_t n_pos_in_ball = 0;
    std::size_t n_neg_in_ball = 0;
    double fraction_ratio = 0.0;
    std::optional<double> ensemble_p;
    bool final_label = false;

    bool operator==(const ScoreTrace&) const = default;
};

struct ScoreResult {
    bool label = false;
    ScoreTrace trace;
};

/// Resamples with SMOTE, clusters each class with k-means, and trains the SVM + forest
/// ensemble on the resampled rows. Throws TrainingError when a class is absent or smaller
/// than k.
LitigationModel train_litigation(const Matrix& X, const std::vector<bool>& y, const LitConfig& config,
                                 const std::vector<std::vector<std::size_t>>& categorical_groups = {});

/// The three-stage decision: hull distance ratio against A gives the initial label; the
/// positive/negative count ratio inside the ball of radius z around x is compared to B; below B
/// the case is negative, otherwise the ensemble decides.
ScoreResult score_litigation(const LitigationModel& model, std::span<const double> x);

/// Decision flow from precomputed hull distances, shared by score_litigation and tests.
ScoreResult score_from_distances(const LitigationModel& model, std::span<const double> x, double d_pos,
                                 double d_neg);

/// Baseline training: SMOTE then the ensemble, with the same seed derivation as
/// train_litigation, so both produce the same ensemble for the same inputs.
EnsembleModel train_pure(const Matrix& X, const std::vector<bool>& y, const LitConfig& config,
                         const std::vector<std::vector<std::size_t>>& categorical_groups = {});

/// Pure classification baseline: the ensemble label alone.
bool score_pure(const EnsembleModel& model, std::span<const double> x);

/// Smallest hull distance over a set of hulls.
double min_hull_distance(std::span<const double> x, const std::vector<Matrix>& hulls, const HullOptions& options);

} // namespace litiscope
