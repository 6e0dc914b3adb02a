#include "litiscope/litmodel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "litiscope/error.hpp"
#include "litiscope/random.hpp"

namespace litiscope {

namespace {

std::vector<Matrix> class_hulls(const Matrix& rows, const std::vector<bool>& labels, bool cls, std::size_t k,
                                const KMeansOptions& options, std::uint64_t seed) {
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < labels.size(); ++i)
        if (labels[i] == cls) idx.push_back(i);
    const Matrix members = rows.select_rows(idx);
    const std::size_t distinct = count_distinct_rows(members);
    if (k == 0 || k > distinct)
        throw TrainingError("train_litigation: k = " + std::to_string(k) + " exceeds the " +
                            std::to_string(distinct) + " distinct " + (cls ? "positive" : "negative") + " rows");
    const ClusterSet clusters = kmeans(members, k, seed, options);
    std::vector<Matrix> hulls;
    for (const auto& m : clusters.members) hulls.push_back(members.select_rows(m));
    return hulls;
}

} // namespace

LitigationModel train_litigation(const Matrix& X, const std::vector<bool>& y, const LitConfig& cfg,
                                 const std::vector<std::vector<std::size_t>>& categorical_groups) {
    if (y.size() != X.rows()) throw TrainingError("train_litigation: label count differs from row count");
    const auto n_pos = static_cast<std::size_t>(std::count(y.begin(), y.end(), true));
    if (n_pos == 0 || n_pos == y.size()) throw TrainingError("train_litigation: both classes must be present");

    SmoteConfig smote_cfg = cfg.smote;
    smote_cfg.seed = derive_seed(cfg.seed, "smote");
    const Resampled resampled = smote(X, y, smote_cfg, categorical_groups);

    LitigationModel model;
    model.hyper = cfg.hyper;
    model.hull = cfg.hull;
    model.n_features = X.cols();
    for (bool label : resampled.labels) (label ? model.resampled_positive : model.resampled_negative) += 1;

    const Matrix& cluster_rows = cfg.cluster_on_resampled ? resampled.rows : X;
    const std::vector<bool>& cluster_labels = cfg.cluster_on_resampled ? resampled.labels : y;
    model.positive_hulls = class_hulls(cluster_rows, cluster_labels, true, cfg.k_per_class, cfg.kmeans,
                                       derive_seed(cfg.seed, "kmeans-positive"));
    model.negative_hulls = class_hulls(cluster_rows, cluster_labels, false, cfg.k_per_class, cfg.kmeans,
                                       derive_seed(cfg.seed, "kmeans-negative"));

    if (cfg.ball_includes_synthetic) {
        model.ball_points = resampled.rows;
        model.ball_labels = resampled.labels;
    } else {
        model.ball_points = X;
        model.ball_labels = y;
    }

    model.ensemble = train_ensemble(resampled.rows, resampled.labels, cfg.learners, derive_seed(cfg.seed, "ensemble"));
    return model;
}

EnsembleModel train_pure(const Matrix& X, const std::vector<bool>& y, const LitConfig& cfg,
                         const std::vector<std::vector<std::size_t>>& categorical_groups) {
    if (y.size() != X.rows()) throw TrainingError("train_pure: label count differs from row count");
    SmoteConfig smote_cfg = cfg.smote;
    smote_cfg.seed = derive_seed(cfg.seed, "smote");
    const Resampled resampled = smote(X, y, smote_cfg, categorical_groups);
    return train_ensemble(resampled.rows, resampled.labels, cfg.learners, derive_seed(cfg.seed, "ensemble"));
}

double min_hull_distance(std::span<const double> x, const std::vector<Matrix>& hulls, const HullOptions& options) {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& hull : hulls) {
        const HullResult r = hull_distance_detailed(x, hull, options, best);
        if (!r.pruned) best = std::min(best, r.distance);
    }
    return best;
}

ScoreResult score_from_distances(const LitigationModel& model, std::span<const double> x, double d_pos,
                                 double d_neg) {
    ScoreTrace t;
    t.d_pos = d_pos;
    t.d_neg = d_neg;
    t.hull_ratio = safe_ratio(d_pos, d_neg);
    t.initial_label = t.hull_ratio < model.hyper.hull_ratio_threshold;

    double nearest = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < model.ball_points.rows(); ++i)
        if (model.ball_labels[i] == t.initial_label)
            nearest = std::min(nearest, squared_distance(model.ball_points.row(i), x));
    t.r = std::sqrt(nearest);
    t.z = model.hyper.radius(t.r);
    const BallCounts counts = ball_counts(x, t.z, model.ball_points, model.ball_labels);
    t.n_pos_in_ball = counts.positive;
    t.n_neg_in_ball = counts.negative;
    t.fraction_ratio = safe_ratio(static_cast<double>(counts.positive), static_cast<double>(counts.negative));

    if (t.fraction_ratio < model.hyper.fraction_ratio_threshold) {
        t.final_label = false;
    } else {
        const EnsembleDecision d = ensemble_prob(model.ensemble, x);
        t.ensemble_p = d.probability;
        t.final_label = d.label;
    }
    return {t.final_label, t};
}

ScoreResult score_litigation(const LitigationModel& model, std::span<const double> x) {
    if (x.size() != model.n_features)
        throw std::invalid_argument("score_litigation: feature vector has width " + std::to_string(x.size()) +
                                    ", model expects " + std::to_string(model.n_features));
    const double d_pos = min_hull_distance(x, model.positive_hulls, model.hull);
    const double d_neg = min_hull_distance(x, model.negative_hulls, model.hull);
    return score_from_distances(model, x, d_pos, d_neg);
}

bool score_pure(const EnsembleModel& model, std::span<const double> x) {
    return ensemble_prob(model, x).label;
}

} // namespace litiscope
