#include <stdexcept>
#include <string>

#include "litiscope/learners.hpp"
#include "litiscope/random.hpp"

namespace litiscope {

EnsembleModel train_ensemble(const Matrix& X, const std::vector<bool>& y, const LearnerConfig& cfg,
                             std::uint64_t seed) {
    EnsembleModel model;
    model.weights = cfg.ensemble;
    model.n_features = X.cols();
    if (cfg.ensemble.w_svm > 0.0) model.svm = train_svm(X, y, cfg.svm, derive_seed(seed, "svm"));
    if (cfg.ensemble.w_forest > 0.0) model.forest = train_forest(X, y, cfg.forest, derive_seed(seed, "forest"));
    return model;
}

EnsembleDecision combine_probabilities(const EnsembleConfig& w, double p_svm, double p_forest) {
    EnsembleDecision d;
    d.probability = w.w_svm * p_svm + w.w_forest * p_forest;
    d.label = d.probability >= w.cutoff;
    return d;
}

EnsembleDecision ensemble_prob(const EnsembleModel& model, std::span<const double> x) {
    if (x.size() != model.n_features)
        throw std::invalid_argument("ensemble_prob: feature vector has width " + std::to_string(x.size()) +
                                    ", model expects " + std::to_string(model.n_features));
    const double p_svm = model.weights.w_svm > 0.0 ? model.svm.probability(x) : 0.0;
    const double p_forest = model.weights.w_forest > 0.0 ? model.forest.probability(x) : 0.0;
    return combine_probabilities(model.weights, p_svm, p_forest);
}

} // namespace litiscope
