#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

#include "litiscope/corpus.hpp"
#include "litiscope/graphfeat.hpp"
#include "litiscope/infogain.hpp"
#include "litiscope/matrix.hpp"
#include "litiscope/textfeat.hpp"

namespace litiscope {

enum class ColumnKind { Textual, Numeric, Categorical };

struct ColumnDescriptor {
    std::string name;
    ColumnKind kind = ColumnKind::Numeric;
    std::string source;

    bool operator==(const ColumnDescriptor&) const = default;
};

inline constexpr int kUnknownCategory = -1;

/// Quantile cut points for one financial field. A value v falls in bin
/// upper_bound(cut_points, v), so there are cut_points.size() + 1 bins.
struct FinancialBins {
    std::vector<double> cut_points;
    double discount_rate = 0.0;

    bool operator==(const FinancialBins&) const = default;
};

/// Value adjusted by (1 + rate)^(as_of - report_year); a missing report year means no adjustment.
double discount_value(double value, std::optional<int> report_year, double rate, int as_of);

/// Fits n_bins quantile groups (linear interpolation between order statistics) on the
/// discounted present values. Duplicate cut points are merged.
FinancialBins fit_financial_bins(std::span<const std::optional<double>> values,
                                 std::span<const std::optional<int>> report_years,
                                 std::size_t n_bins, double discount_rate, int as_of);

/// Category per record: bin index, or kUnknownCategory when the value is absent.
std::vector<int> discretize_financial(std::span<const std::optional<double>> values,
                                      std::span<const std::optional<int>> report_years,
                                      const FinancialBins& bins, int as_of);

struct FeatureOptions {
    DataOption option = DataOption::NoSec;
    double discount_rate = 0.0;
    int as_of_year = 2016;
    std::size_t n_bins = 4;

    bool operator==(const FeatureOptions&) const = default;
};

inline constexpr std::size_t kNumericFeatureCount = 9;

struct FeatureSchema {
    std::vector<ColumnDescriptor> columns;
    /// Standardization statistics; categorical columns carry mean 0 and scale 1.
    std::vector<double> mean;
    std::vector<double> scale;
    std::vector<SelectedGram> grams;
    /// revenue, eps, share_price; empty when the schema has no SEC columns.
    std::vector<FinancialBins> financial;
    FeatureOptions options;

    std::size_t width() const noexcept { return columns.size(); }
    /// Column index ranges of each one-hot group.
    std::vector<std::vector<std::size_t>> categorical_groups() const;

    bool operator==(const FeatureSchema&) const = default;
};

struct FeatureMatrix {
    Matrix values;
    std::vector<std::string> row_ids;
};

/// Citation graph with its PageRank scores and the ids known to be litigated.
struct GraphContext {
    CitationGraph graph;
    std::vector<double> pagerank;
    std::unordered_set<std::string> litigated_ids;
};

/// Fit mode when `schema` is null: builds columns and statistics from this corpus. Transform
/// mode reuses the schema verbatim, mapping unseen categories to "unknown".
std::pair<FeatureMatrix, FeatureSchema> assemble_features(const Corpus& corpus,
                                                          const TextFeatureSet& text_set,
                                                          const GraphContext& context,
                                                          const FeatureOptions& options,
                                                          const FeatureSchema* schema = nullptr);

FeatureMatrix transform_features(const Corpus& corpus, const FeatureSchema& schema,
                                 const GraphContext& context);

/// Raw (unstandardized) Table-1 style counts plus the PageRank average for one record.
std::array<double, kNumericFeatureCount> numeric_features(const PatentRecord& record,
                                                          const GraphContext& context);

} // namespace litiscope
