#include <cmath>
#include <random>

#include "doctest.h"
#include "litiscope/error.hpp"
#include "litiscope/resample.hpp"

using namespace litiscope;

namespace {

Matrix random_rows(std::size_t n, std::size_t d, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> g;
    Matrix m(n, d);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < d; ++j) m(i, j) = g(rng);
    return m;
}

std::vector<bool> labels_with(std::size_t pos, std::size_t neg) {
    std::vector<bool> y(pos, true);
    y.resize(pos + neg, false);
    return y;
}

std::pair<std::size_t, std::size_t> counts(const std::vector<bool>& y) {
    std::size_t p = 0;
    for (bool b : y) p += b;
    return {p, y.size() - p};
}

// Largest deviation of row s from the segment [a, b] under the best single coefficient.
double segment_residual(std::span<const double> s, std::span<const double> a, std::span<const double> b, double& u) {
    double num = 0.0, den = 0.0;
    for (std::size_t j = 0; j < s.size(); ++j) {
        num += (s[j] - a[j]) * (b[j] - a[j]);
        den += (b[j] - a[j]) * (b[j] - a[j]);
    }
    u = den > 0 ? num / den : 0.0;
    double worst = 0.0;
    for (std::size_t j = 0; j < s.size(); ++j) worst = std::max(worst, std::abs(a[j] + u * (b[j] - a[j]) - s[j]));
    return worst;
}

} // namespace

TEST_CASE("worked example: 140 / 6500 with s=5, j=1 gives 840 / 7200") {
    const Matrix X = random_rows(6640, 3, 1);
    const auto y = labels_with(140, 6500);
    const Resampled r = smote(X, y, SmoteConfig{});
    const auto [p, n] = counts(r.labels);
    CHECK(p == 840);
    CHECK(n == 7200);
    CHECK(r.rows.rows() == r.labels.size());
    CHECK(r.original.size() == r.labels.size());
}

TEST_CASE("closed-form counts hold across parameters") {
    for (std::size_t s : {0u, 1u, 3u})
        for (std::size_t j : {0u, 1u, 2u}) {
            const Matrix X = random_rows(60, 2, s * 7 + j);
            const auto y = labels_with(12, 48);
            SmoteConfig cfg;
            cfg.n_synth_per_minority = s;
            cfg.n_major_per_synth = j;
            const auto [p, n] = counts(smote(X, y, cfg).labels);
            CHECK(p == 12 * (1 + s));
            CHECK(n == 48 + 12 * s * j);
        }
}

TEST_CASE("s=0, j=0 is a no-op") {
    const Matrix X = random_rows(30, 4, 2);
    const auto y = labels_with(6, 24);
    SmoteConfig cfg;
    cfg.n_synth_per_minority = 0;
    cfg.n_major_per_synth = 0;
    const Resampled r = smote(X, y, cfg);
    CHECK(r.rows == X);
    CHECK(r.labels == y);
}

TEST_CASE("synthetic rows lie on segments between two original minority rows") {
    const Matrix X = random_rows(40, 5, 3);
    const auto y = labels_with(10, 30);
    const Resampled r = smote(X, y, SmoteConfig{});
    std::size_t checked = 0;
    for (std::size_t i = X.rows(); i < r.rows.rows(); ++i) {
        if (!r.labels[i]) continue;
        CHECK_FALSE(r.original[i]);
        bool found = false;
        for (std::size_t a = 0; a < 10 && !found; ++a)
            for (std::size_t b = 0; b < 10 && !found; ++b) {
                if (a == b) continue;
                double u = 0.0;
                if (segment_residual(r.rows.row(i), X.row(a), X.row(b), u) < 1e-9 && u >= -1e-12 && u <= 1 + 1e-12)
                    found = true;
            }
        CHECK(found);
        ++checked;
    }
    CHECK(checked == 50);
}

TEST_CASE("sampled majority rows are copies of original majority rows") {
    const Matrix X = random_rows(40, 3, 4);
    const auto y = labels_with(10, 30);
    const Resampled r = smote(X, y, SmoteConfig{});
    for (std::size_t i = X.rows(); i < r.rows.rows(); ++i) {
        if (r.labels[i]) continue;
        bool found = false;
        for (std::size_t k = 10; k < 40 && !found; ++k) found = std::equal(X.row(k).begin(), X.row(k).end(), r.rows.row(i).begin());
        CHECK(found);
    }
}

TEST_CASE("one-hot groups are snapped to a parent") {
    Matrix X = random_rows(30, 5, 5);
    for (std::size_t i = 0; i < 30; ++i) {
        X(i, 2) = X(i, 3) = X(i, 4) = 0.0;
        X(i, 2 + i % 3) = 1.0;
    }
    const auto y = labels_with(9, 21);
    const Resampled r = smote(X, y, SmoteConfig{}, {{2, 3, 4}});
    for (std::size_t i = 0; i < r.rows.rows(); ++i) {
        const double sum = r.rows(i, 2) + r.rows(i, 3) + r.rows(i, 4);
        CHECK(sum == 1.0);
        for (std::size_t c = 2; c < 5; ++c) CHECK((r.rows(i, c) == 0.0 || r.rows(i, c) == 1.0));
    }
}

TEST_CASE("undersampling keeps m*s*j majority rows") {
    const Matrix X = random_rows(100, 2, 6);
    const auto y = labels_with(6, 94);
    SmoteConfig cfg;
    cfg.majority_mode = MajorityMode::Undersample;
    const auto [p, n] = counts(smote(X, y, cfg).labels);
    CHECK(p == 36);
    CHECK(n == 30);
}

TEST_CASE("the rarer class is the minority") {
    const Matrix X = random_rows(40, 2, 7);
    const auto y = labels_with(30, 10);
    const auto [p, n] = counts(smote(X, y, SmoteConfig{}).labels);
    CHECK(n == 60);
    CHECK(p == 80);
}

TEST_CASE("determinism and seed sensitivity") {
    const Matrix X = random_rows(50, 3, 8);
    const auto y = labels_with(10, 40);
    SmoteConfig cfg;
    cfg.seed = 99;
    const Resampled a = smote(X, y, cfg), b = smote(X, y, cfg);
    CHECK(a.rows == b.rows);
    CHECK(a.labels == b.labels);
    cfg.seed = 100;
    CHECK_FALSE(smote(X, y, cfg).rows == a.rows);
}

TEST_CASE("too few minority rows") {
    const Matrix X = random_rows(20, 2, 9);
    CHECK_THROWS_AS(smote(X, labels_with(1, 19), SmoteConfig{}), TrainingError);
    SmoteConfig cfg;
    cfg.k_neighbors = 0;
    CHECK_THROWS_AS(smote(X, labels_with(5, 15), cfg), TrainingError);
}
