#include <cmath>
#include <random>

#include "doctest.h"
#include "litiscope/error.hpp"
#include "litiscope/learners.hpp"

using namespace litiscope;

namespace {

struct Blobs {
    Matrix X;
    std::vector<bool> y;
};

Blobs blobs(std::size_t n_per_class, std::size_t d, double gap, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> g;
    Blobs b;
    b.X = Matrix(2 * n_per_class, d);
    for (std::size_t i = 0; i < 2 * n_per_class; ++i) {
        const bool pos = i % 2 == 0;
        for (std::size_t j = 0; j < d; ++j) b.X(i, j) = g(rng) + (pos ? gap : 0.0);
        b.y.push_back(pos);
    }
    return b;
}

} // namespace

TEST_CASE("svm: four separable points are classified correctly") {
    Matrix X(4, 2);
    X(0, 0) = 0; X(0, 1) = 0;
    X(1, 0) = 0; X(1, 1) = 1;
    X(2, 0) = 3; X(2, 1) = 0;
    X(3, 0) = 3; X(3, 1) = 1;
    const std::vector<bool> y = {false, false, true, true};
    SvmConfig cfg;
    cfg.gamma = 0.5;
    cfg.C = 10.0;
    const SvmModel m = fit_svm_dual(X, y, cfg);
    for (std::size_t i = 0; i < 4; ++i) CHECK((m.decision_value(X.row(i)) > 0) == y[i]);
    for (double c : m.coef) CHECK(std::abs(c) <= cfg.C + 1e-12);
}

TEST_CASE("svm: calibrated model separates blobs and stays in (0,1)") {
    const Blobs b = blobs(60, 3, 4.0, 1);
    SvmConfig cfg;
    cfg.gamma = 0.2;
    cfg.C = 1.0;
    const SvmModel m = train_svm(b.X, b.y, cfg, 3);
    std::size_t correct = 0;
    for (std::size_t i = 0; i < b.y.size(); ++i) {
        const double p = m.probability(b.X.row(i));
        CHECK(p > 0.0);
        CHECK(p < 1.0);
        correct += (p >= 0.5) == b.y[i];
    }
    CHECK(correct >= 114);
}

TEST_CASE("svm: probability is monotone in the decision value") {
    SvmModel m;
    m.platt_a = -2.0;
    m.platt_b = 0.3;
    double prev = 0.0;
    for (double f = -5; f <= 5; f += 0.25) {
        const double p = m.probability_from_decision(f);
        CHECK(p >= prev);
        prev = p;
    }
}

TEST_CASE("svm: duplicating every row leaves the decision function unchanged") {
    const Blobs b = blobs(15, 2, 6.0, 2);
    Matrix X2(0, 2);
    std::vector<bool> y2;
    for (std::size_t i = 0; i < b.y.size(); ++i)
        for (int r = 0; r < 2; ++r) {
            X2.append_row(b.X.row(i));
            y2.push_back(b.y[i]);
        }
    SvmConfig cfg;
    cfg.gamma = 0.3;
    cfg.C = 1e6;  // no box constraint is active, so splitting a dual weight across copies is exact
    cfg.tol = 1e-10;
    const SvmModel a = fit_svm_dual(b.X, b.y, cfg);
    const SvmModel c = fit_svm_dual(X2, y2, cfg);
    for (double u = -3; u <= 9; u += 1.5)
        for (double v = -3; v <= 9; v += 1.5) {
            const std::vector<double> p = {u, v};
            CHECK(std::abs(a.decision_value(p) - c.decision_value(p)) <= 1e-6);
        }
}

TEST_CASE("svm and forest reject single-class input") {
    const Blobs b = blobs(5, 2, 1.0, 3);
    const std::vector<bool> all(b.y.size(), true);
    CHECK_THROWS_AS(train_svm(b.X, all, SvmConfig{}, 1), TrainingError);
    CHECK_THROWS_AS(train_forest(b.X, all, ForestConfig{}, 1), TrainingError);
}

TEST_CASE("platt: fitted sigmoid increases with the decision value when classes are ordered") {
    const std::vector<double> f = {-3, -2, -1, -0.5, 0.5, 1, 2, 3};
    const std::vector<bool> y = {false, false, false, true, false, true, true, true};
    double a = 0, b = 0;
    fit_platt(f, y, a, b);
    CHECK(a < 0.0);
}

TEST_CASE("forest: held-out accuracy on separated blobs") {
    const Blobs train = blobs(100, 4, 3.0, 4);
    const Blobs test = blobs(100, 4, 3.0, 5);
    const ForestModel f = train_forest(train.X, train.y, ForestConfig{}, 6);
    CHECK(f.trees.size() == 100);
    std::size_t correct = 0;
    for (std::size_t i = 0; i < test.y.size(); ++i) {
        const double p = f.probability(test.X.row(i));
        CHECK(p >= 0.0);
        CHECK(p <= 1.0);
        correct += (p >= 0.5) == test.y[i];
    }
    CHECK(static_cast<double>(correct) / 200.0 >= 0.95);
}

TEST_CASE("forest: fixed seed gives an identical model") {
    const Blobs b = blobs(30, 3, 1.0, 7);
    ForestConfig cfg;
    cfg.n_trees = 1;
    CHECK(train_forest(b.X, b.y, cfg, 11) == train_forest(b.X, b.y, cfg, 11));
    cfg.n_trees = 20;
    CHECK(train_forest(b.X, b.y, cfg, 11) == train_forest(b.X, b.y, cfg, 11));
}

TEST_CASE("ensemble combination rule") {
    const EnsembleConfig w{};
    const auto one = combine_probabilities(w, 1.0, 1.0);
    CHECK(one.probability == doctest::Approx(1.0));
    CHECK(one.label);
    const auto low = combine_probabilities(w, 0.5, 0.2);
    CHECK(low.probability == doctest::Approx(0.29));
    CHECK_FALSE(low.label);
    const auto svm_only = combine_probabilities(EnsembleConfig{1.0, 0.0, 0.3}, 0.4242, 0.9);
    CHECK(svm_only.probability == 0.4242);
}

TEST_CASE("ensemble: probabilities in [0,1], cutoff monotone, reproducible, width-checked") {
    const Blobs b = blobs(40, 3, 1.5, 8);
    const LearnerConfig cfg{};
    const EnsembleModel m = train_ensemble(b.X, b.y, cfg, 21);
    CHECK(m == train_ensemble(b.X, b.y, cfg, 21));
    const Blobs probe = blobs(50, 3, 1.5, 9);
    for (std::size_t i = 0; i < probe.y.size(); ++i) {
        const auto d = ensemble_prob(m, probe.X.row(i));
        CHECK(d.probability >= 0.0);
        CHECK(d.probability <= 1.0);
        EnsembleModel strict = m;
        strict.weights.cutoff = 0.8;
        if (!d.label) CHECK_FALSE(ensemble_prob(strict, probe.X.row(i)).label);
    }
    const std::vector<double> wrong(5, 0.0);
    CHECK_THROWS_AS(ensemble_prob(m, wrong), std::invalid_argument);
}
