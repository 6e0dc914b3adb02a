#include <cmath>
#include <set>

#include "doctest.h"
#include "litiscope/featset.hpp"
#include "litiscope/pipeline.hpp"

using namespace litiscope;

namespace {

struct Fixture {
    Corpus corpus;
    std::vector<bool> labels;
    std::vector<std::string> litigated;
    GraphContext ctx;
    TextFeatureSet text;

    explicit Fixture(DataOption option, std::size_t k = 30) {
        SynthConfig cfg;
        cfg.n = 400;
        cfg.litigation_rate = 0.1;
        cfg.seed = 3;
        corpus = apply_data_option(generate_synthetic(cfg), option);
        for (const auto& r : corpus.records) {
            labels.push_back(r.litigated());
            if (r.litigated()) litigated.push_back(r.id);
        }
        ctx = make_graph_context(corpus, litigated, {});
        const Vocabulary v = build_vocabulary(corpus, 2);
        text = select_top_textual(tfidf_matrix(corpus, v), labels, k);
    }
};

std::vector<std::optional<double>> opt(std::vector<double> v) { return {v.begin(), v.end()}; }

} // namespace

TEST_CASE("discount_value") {
    CHECK(discount_value(100.0, 2010, 0.0, 2016) == 100.0);
    CHECK(discount_value(100.0, 2014, 0.1, 2016) == doctest::Approx(121.0));
    CHECK(discount_value(100.0, std::nullopt, 0.1, 2016) == 100.0);
}

TEST_CASE("quartile bins put 1,2,3,4 in four different groups") {
    const auto values = opt({1, 2, 3, 4});
    const std::vector<std::optional<int>> years(4, std::nullopt);
    const FinancialBins bins = fit_financial_bins(values, years, 4, 0.0, 2016);
    CHECK(bins.cut_points.size() == 3);
    for (std::size_t i = 1; i < bins.cut_points.size(); ++i) CHECK(bins.cut_points[i - 1] < bins.cut_points[i]);
    CHECK(discretize_financial(values, years, bins, 2016) == std::vector<int>{0, 1, 2, 3});

    std::vector<std::optional<double>> with_gap = {std::nullopt, 2.2};
    const std::vector<std::optional<int>> two(2, std::nullopt);
    CHECK(discretize_financial(with_gap, two, bins, 2016) == std::vector<int>{kUnknownCategory, 1});
}

TEST_CASE("duplicate cut points merge") {
    const auto values = opt({5, 5, 5, 5, 5, 9});
    const std::vector<std::optional<int>> years(values.size(), std::nullopt);
    const FinancialBins bins = fit_financial_bins(values, years, 4, 0.0, 2016);
    for (std::size_t i = 1; i < bins.cut_points.size(); ++i) CHECK(bins.cut_points[i - 1] < bins.cut_points[i]);
}

TEST_CASE("nosec schema is 30 textual plus 9 numeric columns") {
    Fixture f(DataOption::NoSec);
    REQUIRE(f.text.grams.size() == 30);
    const auto [m, schema] = assemble_features(f.corpus, f.text, f.ctx, FeatureOptions{});
    CHECK(schema.width() == 39);
    CHECK(m.values.cols() == 39);
    CHECK(m.values.rows() == f.corpus.size());
    CHECK(schema.financial.empty());
    CHECK(schema.categorical_groups().empty());
    std::set<std::string> names;
    for (const auto& c : schema.columns) names.insert(c.name);
    CHECK(names.size() == schema.width());
}

TEST_CASE("z-scored training columns have mean 0 and variance 1") {
    Fixture f(DataOption::NoSec);
    const auto [m, schema] = assemble_features(f.corpus, f.text, f.ctx, FeatureOptions{});
    const double n = static_cast<double>(m.values.rows());
    for (std::size_t c = 0; c < m.values.cols(); ++c) {
        double mean = 0.0, var = 0.0;
        for (std::size_t i = 0; i < m.values.rows(); ++i) mean += m.values(i, c) / n;
        for (std::size_t i = 0; i < m.values.rows(); ++i) var += (m.values(i, c) - mean) * (m.values(i, c) - mean) / n;
        CHECK(std::abs(mean) <= 1e-9);
        if (var > 0.0) CHECK(std::abs(var - 1.0) <= 1e-6);
    }
}

TEST_CASE("transform under the fitted schema reproduces the training matrix exactly") {
    for (auto option : {DataOption::NoSec, DataOption::SecDrop, DataOption::SecImpute}) {
        Fixture f(option);
        FeatureOptions o;
        o.option = option;
        const auto [m, schema] = assemble_features(f.corpus, f.text, f.ctx, o);
        const FeatureMatrix again = transform_features(f.corpus, schema, f.ctx);
        CHECK(again.values == m.values);
        CHECK(again.row_ids == m.row_ids);
    }
}

TEST_CASE("SEC options add one-hot groups that stay one-hot") {
    Fixture f(DataOption::SecDrop);
    FeatureOptions o;
    o.option = DataOption::SecDrop;
    const auto [m, schema] = assemble_features(f.corpus, f.text, f.ctx, o);
    const auto groups = schema.categorical_groups();
    CHECK(groups.size() == 3);
    CHECK(schema.financial.size() == 3);
    for (const auto& g : groups) {
        CHECK(g.size() == 5);  // four quartiles plus unknown
        for (std::size_t i = 0; i < m.values.rows(); ++i) {
            double sum = 0.0;
            for (std::size_t c : g) {
                CHECK((m.values(i, c) == 0.0 || m.values(i, c) == 1.0));
                sum += m.values(i, c);
            }
            CHECK(sum == 1.0);
        }
    }
}

TEST_CASE("transform maps unseen SEC values to a valid level and never throws") {
    Fixture f(DataOption::SecImpute);
    FeatureOptions o;
    o.option = DataOption::SecImpute;
    const auto [m, schema] = assemble_features(f.corpus, f.text, f.ctx, o);
    Corpus test = f.corpus;
    test.records.resize(3);
    test.records[0].sec->revenue = 1e12;
    test.records[1].sec->revenue.reset();
    const FeatureMatrix t = transform_features(test, schema, f.ctx);
    CHECK(t.values.rows() == 3);
    for (double v : t.values.data()) CHECK(std::isfinite(v));
}

TEST_CASE("schema does not depend on rows outside the fitted corpus") {
    Fixture f(DataOption::NoSec);
    const auto [m, schema] = assemble_features(f.corpus, f.text, f.ctx, FeatureOptions{});
    Corpus other = f.corpus;
    for (auto& r : other.records) r.n_claims += 1000;
    const FeatureMatrix t1 = transform_features(other, schema, f.ctx);
    const auto [m2, schema2] = assemble_features(f.corpus, f.text, f.ctx, FeatureOptions{});
    CHECK(schema2 == schema);
    CHECK(m2.values == m.values);
    CHECK(t1.values.rows() == other.size());
}

TEST_CASE("numeric_features reads the record and the graph") {
    Fixture f(DataOption::NoSec);
    const auto& r = f.corpus.records.back();
    const auto v = numeric_features(r, f.ctx);
    CHECK(v[0] == static_cast<double>(r.n_inventors));
    for (double x : v) CHECK(x >= 0.0);
}
