#include <algorithm>
#include <cmath>
#include <random>
#include <set>
#include <sstream>

#include "doctest.h"
#include "litiscope/error.hpp"
#include "litiscope/evalkit.hpp"
#include "litiscope/pipeline.hpp"

using namespace litiscope;

namespace {

RunConfig quick_config() {
    RunConfig cfg;
    cfg.lit.learners.forest.n_trees = 20;
    cfg.lit.k_per_class = 2;
    return cfg;
}

Corpus small_corpus() {
    SynthConfig s;
    s.n = 300;
    s.litigation_rate = 0.1;
    s.seed = 12;
    return generate_synthetic(s);
}

} // namespace

TEST_CASE("confusion") {
    const std::vector<bool> truth = {true, true, true, false, false};
    CHECK(confusion(truth, truth) == ConfusionMatrix{3, 0, 0, 2});
    const std::vector<bool> none(5, false);
    const auto cm = confusion(none, truth);
    CHECK(cm.tp == 0);
    CHECK(cm.fn == 3);
    CHECK(cm.total() == 5);
    CHECK_THROWS_AS(confusion({true}, truth), std::invalid_argument);
    CHECK(ConfusionMatrix{28, 113, 128, 7398}.total() == 7667);
}

TEST_CASE("metrics examples") {
    const Metrics m = metrics({28, 113, 128, 7398});
    CHECK(std::abs(m.f1 - 0.1886) <= 1e-4);
    CHECK(std::abs(m.precision - 0.1986) <= 1e-4);
    CHECK(std::abs(m.recall - 0.1795) <= 1e-4);
    CHECK(std::abs(metrics({24, 92, 132, 7419}).f1 - 0.1765) <= 1e-4);
    CHECK(metrics({5, 0, 0, 9}) == Metrics{1.0, 1.0, 1.0});
    CHECK(metrics({0, 0, 0, 9}) == Metrics{0.0, 0.0, 0.0});
}

TEST_CASE("metrics: F1 matches P and R, and scaling counts changes nothing") {
    std::mt19937_64 rng(1);
    for (int trial = 0; trial < 200; ++trial) {
        const ConfusionMatrix cm{rng() % 50, rng() % 50, rng() % 50, rng() % 500};
        const Metrics m = metrics(cm);
        const double f1 = m.precision + m.recall > 0 ? 2 * m.precision * m.recall / (m.precision + m.recall) : 0.0;
        CHECK(std::abs(m.f1 - f1) <= 1e-12);
        const std::size_t k = 1 + rng() % 7;
        const Metrics scaled = metrics({cm.tp * k, cm.fp * k, cm.fn * k, cm.tn * k});
        CHECK(std::abs(scaled.f1 - m.f1) <= 1e-12);
        CHECK(std::abs(scaled.precision - m.precision) <= 1e-12);
        CHECK(std::abs(scaled.recall - m.recall) <= 1e-12);
    }
}

TEST_CASE("stratified folds") {
    std::vector<bool> labels(503, false);
    for (std::size_t i = 0; i < 37; ++i) labels[i * 13] = true;
    const auto folds = stratified_folds(labels, 10, 4);
    REQUIRE(folds.size() == labels.size());
    std::vector<std::size_t> pos(10, 0), size(10, 0);
    for (std::size_t i = 0; i < labels.size(); ++i) {
        REQUIRE(folds[i] < 10);
        ++size[folds[i]];
        pos[folds[i]] += labels[i];
    }
    CHECK(*std::max_element(pos.begin(), pos.end()) - *std::min_element(pos.begin(), pos.end()) <= 1);
    CHECK(*std::max_element(size.begin(), size.end()) - *std::min_element(size.begin(), size.end()) <= 1);
    CHECK(folds == stratified_folds(labels, 10, 4));
    CHECK_FALSE(folds == stratified_folds(labels, 10, 5));

    std::vector<bool> few(100, false);
    few[0] = few[1] = true;
    CHECK_THROWS_AS(stratified_folds(few, 10, 1), DataError);
    CHECK_THROWS_AS(stratified_folds(labels, 1, 1), ConfigError);
}

TEST_CASE("summarize: mean and sample standard deviation") {
    const auto s = summarize({Metrics{0.2, 0.4, 0.3}, Metrics{0.4, 0.2, 0.5}});
    CHECK(s.mean.f1 == doctest::Approx(0.4));
    CHECK(s.sd.f1 == doctest::Approx(std::sqrt(0.02)));
    CHECK(summarize({Metrics{0.1, 0.1, 0.1}}).sd.f1 == 0.0);
}

TEST_CASE("cross_validate: partition, determinism and report bytes") {
    const Corpus corpus = small_corpus();
    const RunConfig cfg = quick_config();
    const CVReport a = cross_validate(corpus, cfg, 3, 2, 5);
    CHECK(a.results.size() == 6);
    CHECK(a.n_records == corpus.size());
    REQUIRE(a.assignments.size() == 2);
    for (std::size_t rep = 0; rep < 2; ++rep) {
        std::size_t n_test = 0;
        for (const auto& r : a.results)
            if (r.rep == rep) n_test += r.n_test;
        CHECK(n_test == corpus.size());
        std::set<std::size_t> used(a.assignments[rep].begin(), a.assignments[rep].end());
        CHECK(used.size() == 3);
    }
    for (const auto& r : a.results) {
        CHECK(r.cm.total() == r.n_test);
        CHECK(r.m == metrics(r.cm));
    }

    const CVReport b = cross_validate(corpus, cfg, 3, 2, 5);
    std::ostringstream ra, rb;
    write_report(ra, a, cfg);
    write_report(rb, b, cfg);
    CHECK(ra.str() == rb.str());
    CHECK(ra.str().rfind("#litiscope-report v1\n", 0) == 0);

    std::ostringstream table;
    write_summary_table(table, a);
    CHECK(table.str().find("F1") != std::string::npos);
    CHECK(table.str().find("litigation") != std::string::npos);
}

TEST_CASE("cross_validate: time-to-litigation nodes are reported when enabled") {
    SynthConfig s;
    s.n = 400;
    s.litigation_rate = 0.25;
    s.seed = 3;
    RunConfig cfg = quick_config();
    cfg.cv_ttl = true;
    const CVReport r = cross_validate(generate_synthetic(s), cfg, 2, 1, 1);
    REQUIRE(r.ttl_summary.has_value());
    for (const auto& f : r.results) CHECK(f.ttl_cm.has_value());
}

TEST_CASE("no leakage: test-fold labels never reach the trained model") {
    const Corpus corpus = small_corpus();
    RunConfig cfg = quick_config();
    cfg.ttl_enabled = false;
    std::vector<bool> labels;
    for (const auto& r : corpus.records) labels.push_back(r.litigated());
    const auto folds = stratified_folds(labels, 3, 2);

    Corpus train;
    std::vector<std::size_t> test_rows;
    for (std::size_t i = 0; i < corpus.size(); ++i) {
        if (folds[i] == 0) test_rows.push_back(i);
        else train.records.push_back(corpus.records[i]);
    }
    const TrainedPipeline base = train_pipeline(train, corpus, cfg);

    Corpus perturbed = corpus;
    for (std::size_t i : test_rows) {
        auto& r = perturbed.records[i];
        if (r.litigated()) r.first_litigation_date.reset();
        else r.first_litigation_date = r.issue_date;
    }
    CHECK(train_pipeline(train, perturbed, cfg) == base);
}
