#include "litiscope/featset.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

#include "litiscope/error.hpp"

namespace litiscope {

double discount_value(double value, std::optional<int> report_year, double rate, int as_of) {
    if (!report_year || rate == 0.0) return value;
    return value * std::pow(1.0 + rate, static_cast<double>(as_of - *report_year));
}

FinancialBins fit_financial_bins(std::span<const std::optional<double>> values,
                                 std::span<const std::optional<int>> report_years,
                                 std::size_t n_bins, double discount_rate, int as_of) {
    FinancialBins bins;
    bins.discount_rate = discount_rate;
    std::vector<double> present;
    for (std::size_t i = 0; i < values.size(); ++i)
        if (values[i]) present.push_back(discount_value(*values[i], report_years[i], discount_rate, as_of));
    if (present.empty() || n_bins < 2) return bins;
    std::sort(present.begin(), present.end());
    const double last = static_cast<double>(present.size() - 1);
    for (std::size_t q = 1; q < n_bins; ++q) {
        const double pos = last * static_cast<double>(q) / static_cast<double>(n_bins);
        const auto lo = static_cast<std::size_t>(std::floor(pos));
        const auto hi = std::min(lo + 1, present.size() - 1);
        const double cut = present[lo] + (pos - static_cast<double>(lo)) * (present[hi] - present[lo]);
        if (bins.cut_points.empty() || cut > bins.cut_points.back()) bins.cut_points.push_back(cut);
    }
    return bins;
}

std::vector<int> discretize_financial(std::span<const std::optional<double>> values,
                                      std::span<const std::optional<int>> report_years,
                                      const FinancialBins& bins, int as_of) {
    std::vector<int> out(values.size(), kUnknownCategory);
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (!values[i]) continue;
        const double v = discount_value(*values[i], report_years[i], bins.discount_rate, as_of);
        out[i] = static_cast<int>(std::upper_bound(bins.cut_points.begin(), bins.cut_points.end(), v) -
                                  bins.cut_points.begin());
    }
    return out;
}

std::vector<std::vector<std::size_t>> FeatureSchema::categorical_groups() const {
    std::vector<std::vector<std::size_t>> groups;
    std::string current;
    for (std::size_t c = 0; c < columns.size(); ++c) {
        if (columns[c].kind != ColumnKind::Categorical) continue;
        if (groups.empty() || columns[c].source != current) {
            groups.emplace_back();
            current = columns[c].source;
        }
        groups.back().push_back(c);
    }
    return groups;
}

std::array<double, kNumericFeatureCount> numeric_features(const PatentRecord& r,
                                                          const GraphContext& context) {
    const auto refs = ref_features(context.graph, context.pagerank, context.litigated_ids, r.id);
    return {static_cast<double>(r.n_inventors),
            static_cast<double>(r.n_claims),
            static_cast<double>(r.n_claim_words),
            static_cast<double>(r.n_foreign_refs),
            static_cast<double>(refs.n_backward),
            static_cast<double>(refs.n_backward_2nd),
            static_cast<double>(refs.n_lit_backward),
            static_cast<double>(refs.n_lit_backward_2nd),
            refs.avg_pagerank_backward};
}

namespace {

constexpr std::array<const char*, kNumericFeatureCount> kNumericNames = {
    "n_inventors",     "n_claims",           "n_claim_words",
    "n_foreign_refs",  "n_backward",         "n_backward_2nd",
    "n_lit_backward",  "n_lit_backward_2nd", "avg_pagerank_backward"};

constexpr std::array<const char*, 3> kFinancialNames = {"revenue", "eps", "share_price"};

struct FinancialColumns {
    std::array<std::vector<std::optional<double>>, 3> values;
    std::vector<std::optional<int>> years;
};

FinancialColumns financial_columns(const Corpus& corpus) {
    FinancialColumns f;
    for (const auto& r : corpus.records) {
        const SecData sec = r.sec.value_or(SecData{});
        f.values[0].push_back(sec.revenue);
        f.values[1].push_back(sec.eps);
        f.values[2].push_back(sec.share_price);
        f.years.push_back(sec.report_year);
    }
    return f;
}

/// Unstandardized feature rows under a schema whose columns are already laid out.
Matrix raw_features(const Corpus& corpus, const FeatureSchema& schema, const GraphContext& context) {
    const std::size_t n_text = schema.grams.size();
    std::unordered_map<std::string, std::size_t> gram_col;
    for (std::size_t g = 0; g < n_text; ++g) gram_col.emplace(schema.grams[g].gram, g);

    Matrix m(corpus.size(), schema.width(), 0.0);
    for (std::size_t i = 0; i < corpus.size(); ++i) {
        const auto& r = corpus.records[i];
        auto row = m.row(i);
        for (const auto& g : tokenize_ngrams(r.claims_text)) {
            const auto it = gram_col.find(g);
            if (it != gram_col.end()) row[it->second] += 1.0;
        }
        for (std::size_t g = 0; g < n_text; ++g) row[g] *= schema.grams[g].idf;
        if (!context.graph.contains(r.id))
            throw DataError("assemble_features: record " + r.id + " is not in the citation graph");
        const auto numeric = numeric_features(r, context);
        std::copy(numeric.begin(), numeric.end(), row.begin() + static_cast<std::ptrdiff_t>(n_text));
    }

    if (!schema.financial.empty()) {
        const auto fin = financial_columns(corpus);
        const std::size_t levels = schema.options.n_bins + 1;
        std::size_t base = n_text + kNumericFeatureCount;
        for (std::size_t f = 0; f < 3; ++f, base += levels) {
            const auto cats = discretize_financial(fin.values[f], fin.years, schema.financial[f],
                                                   schema.options.as_of_year);
            for (std::size_t i = 0; i < corpus.size(); ++i) {
                std::size_t level = levels - 1; // unknown
                if (cats[i] != kUnknownCategory)
                    level = std::min<std::size_t>(static_cast<std::size_t>(cats[i]), levels - 2);
                m(i, base + level) = 1.0;
            }
        }
    }
    return m;
}

void standardize(Matrix& m, const FeatureSchema& schema) {
    for (std::size_t i = 0; i < m.rows(); ++i) {
        auto row = m.row(i);
        for (std::size_t c = 0; c < m.cols(); ++c) row[c] = (row[c] - schema.mean[c]) / schema.scale[c];
    }
}

} // namespace

FeatureMatrix transform_features(const Corpus& corpus, const FeatureSchema& schema,
                                 const GraphContext& context) {
    if (schema.mean.size() != schema.width() || schema.scale.size() != schema.width())
        throw DataError("feature schema is missing standardization statistics");
    if (schema.options.option != DataOption::NoSec && schema.financial.size() != 3)
        throw DataError("feature schema lacks financial bins for an SEC data option");
    FeatureMatrix out;
    out.values = raw_features(corpus, schema, context);
    standardize(out.values, schema);
    for (const auto& r : corpus.records) out.row_ids.push_back(r.id);
    return out;
}

std::pair<FeatureMatrix, FeatureSchema> assemble_features(const Corpus& corpus,
                                                          const TextFeatureSet& text_set,
                                                          const GraphContext& context,
                                                          const FeatureOptions& options,
                                                          const FeatureSchema* schema) {
    if (schema) return {transform_features(corpus, *schema, context), *schema};

    FeatureSchema fitted;
    fitted.options = options;
    fitted.grams = text_set.grams;
    for (const auto& g : text_set.grams)
        fitted.columns.push_back({"text:" + g.gram, ColumnKind::Textual, "claims"});
    for (const char* name : kNumericNames) fitted.columns.push_back({name, ColumnKind::Numeric, "patent"});
    if (options.option != DataOption::NoSec) {
        const auto fin = financial_columns(corpus);
        for (std::size_t f = 0; f < 3; ++f) {
            fitted.financial.push_back(fit_financial_bins(fin.values[f], fin.years, options.n_bins,
                                                          options.discount_rate, options.as_of_year));
            for (std::size_t b = 0; b < options.n_bins; ++b)
                fitted.columns.push_back({std::string(kFinancialNames[f]) + "=Q" + std::to_string(b + 1),
                                          ColumnKind::Categorical, kFinancialNames[f]});
            fitted.columns.push_back({std::string(kFinancialNames[f]) + "=unknown",
                                      ColumnKind::Categorical, kFinancialNames[f]});
        }
    }

    const std::size_t width = fitted.width();
    fitted.mean.assign(width, 0.0);
    fitted.scale.assign(width, 1.0);
    Matrix raw = raw_features(corpus, fitted, context);
    const double n = static_cast<double>(raw.rows());
    for (std::size_t c = 0; c < width; ++c) {
        if (fitted.columns[c].kind == ColumnKind::Categorical || raw.rows() == 0) continue;
        double sum = 0.0;
        for (std::size_t i = 0; i < raw.rows(); ++i) sum += raw(i, c);
        const double mean = sum / n;
        double ss = 0.0;
        for (std::size_t i = 0; i < raw.rows(); ++i) ss += (raw(i, c) - mean) * (raw(i, c) - mean);
        const double sd = std::sqrt(ss / n);
        fitted.mean[c] = mean;
        fitted.scale[c] = sd > 0.0 ? sd : 1.0;
    }

    FeatureMatrix out;
    out.values = std::move(raw);
    standardize(out.values, fitted);
    for (const auto& r : corpus.records) out.row_ids.push_back(r.id);
    return {std::move(out), std::move(fitted)};
}

} // namespace litiscope
