#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "litiscope/matrix.hpp"

namespace litiscope {

// ---------------------------------------------------------------------------
// Support vector machine

struct SvmConfig {
    double gamma = 0.001;
    double C = 0.1;
    /// KKT violation tolerance of the SMO solver.
    double tol = 1e-3;
    std::size_t cache_mb = 256;
    std::size_t max_iter = 10'000'000;
    /// Internal folds used to collect out-of-fold decision values for Platt scaling.
    std::size_t platt_folds = 3;

    bool operator==(const SvmConfig&) const = default;
};

struct SvmModel {
    Matrix support_vectors;
    /// alpha_i * y_i per support vector; |coef| <= C.
    std::vector<double> coef;
    double bias = 0.0;
    double gamma = 0.0;
    /// Platt sigmoid: P(y=1 | f) = 1 / (1 + exp(platt_a * f + platt_b)).
    double platt_a = -1.0;
    double platt_b = 0.0;

    double decision_value(std::span<const double> x) const;
    double probability(std::span<const double> x) const;
    double probability_from_decision(double f) const;

    bool operator==(const SvmModel&) const = default;
};

/// RBF-kernel C-SVM trained by SMO with second-order working set selection, then Platt-scaled
/// on out-of-fold decision values. Throws TrainingError on single-class input.
SvmModel train_svm(const Matrix& X, const std::vector<bool>& y, const SvmConfig& config, std::uint64_t seed);

/// The SMO step alone: returns an uncalibrated model (platt_a = -1, platt_b = 0).
SvmModel fit_svm_dual(const Matrix& X, const std::vector<bool>& y, const SvmConfig& config);

/// Fits Platt's sigmoid to decision values with a regularized-target Newton method.
void fit_platt(std::span<const double> decision_values, const std::vector<bool>& y, double& a, double& b);

// ---------------------------------------------------------------------------
// Random forest

struct ForestConfig {
    std::size_t n_trees = 100;
    std::size_t min_leaf = 2;
    /// Features tried per split; 0 means ceil(sqrt(width)).
    std::size_t max_features = 0;

    bool operator==(const ForestConfig&) const = default;
};

struct TreeNode {
    /// -1 for a leaf.
    int feature = -1;
    double threshold = 0.0;
    std::uint32_t left = 0;
    std::uint32_t right = 0;
    /// Leaf vote: true when the positive fraction at the leaf is at least one half.
    bool vote = false;

    bool operator==(const TreeNode&) const = default;
};

struct DecisionTree {
    std::vector<TreeNode> nodes;

    bool predict(std::span<const double> x) const;
    bool operator==(const DecisionTree&) const = default;
};

struct ForestModel {
    std::vector<DecisionTree> trees;
    std::size_t n_features = 0;

    /// Fraction of trees voting positive.
    double probability(std::span<const double> x) const;
    bool operator==(const ForestModel&) const = default;
};

/// CART trees with Gini splits on bootstrap samples, seeded per tree from (seed, tree index).
ForestModel train_forest(const Matrix& X, const std::vector<bool>& y, const ForestConfig& config,
                         std::uint64_t seed);

// ---------------------------------------------------------------------------
// Weighted ensemble

struct EnsembleConfig {
    double w_svm = 0.3;
    double w_forest = 0.7;
    double cutoff = 0.3;

    bool operator==(const EnsembleConfig&) const = default;
};

struct EnsembleModel {
    SvmModel svm;
    ForestModel forest;
    EnsembleConfig weights;
    std::size_t n_features = 0;

    bool operator==(const EnsembleModel&) const = default;
};

struct LearnerConfig {
    SvmConfig svm;
    ForestConfig forest;
    EnsembleConfig ensemble;

    bool operator==(const LearnerConfig&) const = default;
};

EnsembleModel train_ensemble(const Matrix& X, const std::vector<bool>& y, const LearnerConfig& config,
                             std::uint64_t seed);

struct EnsembleDecision {
    double probability = 0.0;
    bool label = false;
};

/// p = w_svm p_svm + w_forest p_forest; label = p >= cutoff. Throws std::invalid_argument when x
/// does not match the training width.
EnsembleDecision ensemble_prob(const EnsembleModel& model, std::span<const double> x);

/// Combination rule on its own, for given component probabilities.
EnsembleDecision combine_probabilities(const EnsembleConfig& weights, double p_svm, double p_forest);

} // namespace litiscope
