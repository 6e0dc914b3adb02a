#include <cmath>
#include <limits>
#include <random>

#include "doctest.h"
#include "litiscope/error.hpp"
#include "litiscope/litmodel.hpp"

using namespace litiscope;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Data {
    Matrix X;
    std::vector<bool> y;
};

// 30 positives around +2, 120 negatives around 0, in 4 dimensions.
Data make_data(std::uint64_t seed, std::size_t n_pos = 30, std::size_t n_neg = 120) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> g;
    Data d;
    d.X = Matrix(n_pos + n_neg, 4);
    for (std::size_t i = 0; i < n_pos + n_neg; ++i) {
        const bool pos = i < n_pos;
        for (std::size_t j = 0; j < 4; ++j) d.X(i, j) = g(rng) + (pos ? 2.0 : 0.0);
        d.y.push_back(pos);
    }
    return d;
}

LitConfig small_config() {
    LitConfig cfg;
    cfg.k_per_class = 3;
    cfg.learners.forest.n_trees = 25;
    cfg.seed = 17;
    return cfg;
}

const LitigationModel& shared_model() {
    static const LitigationModel model = [] {
        const Data d = make_data(1);
        return train_litigation(d.X, d.y, small_config());
    }();
    return model;
}

} // namespace

TEST_CASE("train_litigation: structure") {
    const LitigationModel& m = shared_model();
    CHECK(m.positive_hulls.size() == 3);
    CHECK(m.negative_hulls.size() == 3);
    for (const auto& h : m.positive_hulls) CHECK(h.rows() > 0);
    for (const auto& h : m.negative_hulls) CHECK(h.rows() > 0);
    // s=5, j=1 on 30/120.
    CHECK(m.resampled_positive == 180);
    CHECK(m.resampled_negative == 270);
    // Clusters partition the resampled rows of each class.
    std::size_t pos_rows = 0, neg_rows = 0;
    for (const auto& h : m.positive_hulls) pos_rows += h.rows();
    for (const auto& h : m.negative_hulls) neg_rows += h.rows();
    CHECK(pos_rows == m.resampled_positive);
    CHECK(neg_rows == m.resampled_negative);
    // Ball points are the original rows by default.
    CHECK(m.ball_points.rows() == 150);
}

TEST_CASE("train_litigation: determinism and errors") {
    const Data d = make_data(1);
    CHECK(train_litigation(d.X, d.y, small_config()) == shared_model());
    const std::vector<bool> all_neg(d.y.size(), false);
    CHECK_THROWS_AS(train_litigation(d.X, all_neg, small_config()), TrainingError);
    LitConfig big = small_config();
    big.k_per_class = 10'000;
    CHECK_THROWS_AS(train_litigation(d.X, d.y, big), TrainingError);
}

TEST_CASE("decision flow from hull distances") {
    LitigationModel m = shared_model();
    const std::vector<double> far = {40, 40, 40, 40};

    SUBCASE("equal distances give ratio 1, initially litigated") {
        const auto r = score_from_distances(m, far, 1.0, 1.0);
        CHECK(r.trace.hull_ratio == 1.0);
        CHECK(r.trace.initial_label);
    }
    SUBCASE("inside a litigated hull gives ratio 0, initially litigated") {
        const auto r = score_from_distances(m, far, 0.0, 2.0);
        CHECK(r.trace.hull_ratio == 0.0);
        CHECK(r.trace.initial_label);
    }
    SUBCASE("a ball without litigated points overrides an initial litigated label") {
        // Probe next to one negative point, initial litigated; shrink the radius so only negatives fit.
        m.hyper.radius_scale = 1.0;
        std::vector<double> x(m.ball_points.row(140).begin(), m.ball_points.row(140).end());
        const auto r = score_from_distances(m, x, 1.0, 1.0);
        CHECK(r.trace.initial_label);
        if (r.trace.n_pos_in_ball == 0) {
            CHECK(r.trace.fraction_ratio == 0.0);
            CHECK_FALSE(r.label);
            CHECK_FALSE(r.trace.ensemble_p.has_value());
        }
    }
    SUBCASE("rho at or above B hands over to the ensemble") {
        m.hyper.fraction_ratio_threshold = 0.0;
        const auto r = score_from_distances(m, far, 1.0, 1.0);
        REQUIRE(r.trace.ensemble_p.has_value());
        CHECK(r.label == ensemble_prob(m.ensemble, far).label);
    }
}

TEST_CASE("trace invariants on probe points") {
    const LitigationModel& m = shared_model();
    const Data probe = make_data(2, 20, 20);
    for (std::size_t i = 0; i < probe.y.size(); ++i) {
        const auto r = score_litigation(m, probe.X.row(i));
        const auto& t = r.trace;
        CHECK(t.hull_ratio == safe_ratio(t.d_pos, t.d_neg));
        CHECK(t.initial_label == (t.hull_ratio < m.hyper.hull_ratio_threshold));
        CHECK(t.z == doctest::Approx(m.hyper.radius_scale * t.r));
        CHECK(t.fraction_ratio == safe_ratio(static_cast<double>(t.n_pos_in_ball), static_cast<double>(t.n_neg_in_ball)));
        // Exactly one branch fires.
        if (t.fraction_ratio < m.hyper.fraction_ratio_threshold) {
            CHECK_FALSE(t.ensemble_p.has_value());
            CHECK_FALSE(r.label);
        } else {
            REQUIRE(t.ensemble_p.has_value());
            CHECK(r.label == (*t.ensemble_p >= m.ensemble.weights.cutoff));
        }
        CHECK(r.label == t.final_label);
        CHECK(score_litigation(m, probe.X.row(i)).trace == t);
    }
}

TEST_CASE("B = 0 routes everything to the ensemble; B = inf makes everything negative") {
    LitigationModel m = shared_model();
    const Data probe = make_data(3, 15, 15);
    m.hyper.fraction_ratio_threshold = 0.0;
    for (std::size_t i = 0; i < probe.y.size(); ++i) {
        const auto r = score_litigation(m, probe.X.row(i));
        CHECK(r.trace.ensemble_p.has_value());
        CHECK(r.label == score_pure(m.ensemble, probe.X.row(i)));
    }
    m.hyper.fraction_ratio_threshold = kInf;
    for (std::size_t i = 0; i < probe.y.size(); ++i) {
        const auto r = score_litigation(m, probe.X.row(i));
        if (r.trace.fraction_ratio != kInf) CHECK_FALSE(r.label);
    }
}

TEST_CASE("A = inf and B tiny agree with pure classification") {
    const Data d = make_data(1);
    LitConfig cfg = small_config();
    cfg.hyper.hull_ratio_threshold = kInf;
    cfg.hyper.fraction_ratio_threshold = 1e-300;
    const LitigationModel m = train_litigation(d.X, d.y, cfg);
    const EnsembleModel pure = train_pure(d.X, d.y, cfg);
    CHECK(pure == m.ensemble);
    const Data probe = make_data(4, 25, 25);
    for (std::size_t i = 0; i < probe.y.size(); ++i)
        CHECK(score_litigation(m, probe.X.row(i)).label == score_pure(pure, probe.X.row(i)));
}

TEST_CASE("score_pure: degenerate cutoffs") {
    EnsembleModel m = shared_model().ensemble;
    const Data probe = make_data(5, 10, 10);
    m.weights.cutoff = 0.0;
    for (std::size_t i = 0; i < probe.y.size(); ++i) CHECK(score_pure(m, probe.X.row(i)));
    m.weights.cutoff = 1.0;
    for (std::size_t i = 0; i < probe.y.size(); ++i)
        if (ensemble_prob(m, probe.X.row(i)).probability < 1.0) CHECK_FALSE(score_pure(m, probe.X.row(i)));
}

TEST_CASE("schema mismatch is rejected") {
    const std::vector<double> wrong(3, 0.0);
    CHECK_THROWS_AS(score_litigation(shared_model(), wrong), std::invalid_argument);
    CHECK_THROWS_AS(score_pure(shared_model().ensemble, wrong), std::invalid_argument);
}

TEST_CASE("radius rules") {
    LitHyperparams h;
    CHECK(h.radius(2.0) == 7.0);
    h.radius_rule = RadiusRule::Divide;
    CHECK(h.radius(7.0) == 2.0);
}
