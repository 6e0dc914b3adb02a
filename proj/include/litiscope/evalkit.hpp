#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <vector>

#include "litiscope/config.hpp"
#include "litiscope/corpus.hpp"

namespace litiscope {

struct ConfusionMatrix {
    std::size_t tp = 0;
    std::size_t fp = 0;
    std::size_t fn = 0;
    std::size_t tn = 0;

    std::size_t total() const noexcept { return tp + fp + fn + tn; }
    ConfusionMatrix& operator+=(const ConfusionMatrix& o) noexcept {
        tp += o.tp;
        fp += o.fp;
        fn += o.fn;
        tn += o.tn;
        return *this;
    }
    bool operator==(const ConfusionMatrix&) const = default;
};

struct Metrics {
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;

    bool operator==(const Metrics&) const = default;
};

/// Positive means litigated. Throws std::invalid_argument on a length mismatch.
ConfusionMatrix confusion(const std::vector<bool>& predicted, const std::vector<bool>& truth);

/// Precision and recall are 0 when their denominator is 0; F1 is the harmonic mean, 0 when P + R = 0.
Metrics metrics(const ConfusionMatrix& cm);

/// Fold index per row. Positives and negatives are shuffled separately and dealt round-robin,
/// so per-fold positive counts differ by at most one, as do fold sizes. Throws DataError when
/// there are fewer positives than folds.
std::vector<std::size_t> stratified_folds(const std::vector<bool>& labels, std::size_t folds, std::uint64_t seed);

/// Node order for time-to-litigation reports.
inline constexpr std::array<const char*, 3> kTtlNodeNames = {"by_7", "by_4", "by_1"};

struct FoldResult {
    std::size_t rep = 0;
    std::size_t fold = 0;
    std::size_t n_test = 0;
    ConfusionMatrix cm;
    Metrics m;
    /// Per-node results over the fold's litigated test cases, in kTtlNodeNames order.
    std::optional<std::array<ConfusionMatrix, 3>> ttl_cm;
    std::array<Metrics, 3> ttl{};
};

struct MetricSummary {
    Metrics mean;
    /// Sample standard deviation over folds (0 for a single fold).
    Metrics sd;
};

struct CVReport {
    std::size_t folds = 0;
    std::size_t reps = 0;
    std::size_t n_records = 0;
    std::vector<FoldResult> results;
    MetricSummary summary;
    /// Summary of the per-node metrics, present for time-to-litigation runs.
    std::optional<std::array<MetricSummary, 3>> ttl_summary;
    /// Fold assignment per replication, indexed like the evaluated corpus.
    std::vector<std::vector<std::size_t>> assignments;
};

MetricSummary summarize(const std::vector<Metrics>& values);

/// Replicated stratified k-fold cross-validation of the configured pipeline. The data option is
/// applied first; every fitted quantity is learned on the training folds only. The citation
/// graph spans the whole evaluated corpus, carrying no labels from the test fold.
CVReport cross_validate(const Corpus& corpus, const RunConfig& config, std::size_t folds, std::size_t reps,
                        std::uint64_t seed);
CVReport cross_validate(const Corpus& corpus, const RunConfig& config);

/// Header line, the resolved configuration, one JSON record per fold and per summary.
/// Contains no timestamps, so equal inputs give identical bytes.
void write_report(std::ostream& out, const CVReport& report, const RunConfig& config);
void write_summary_table(std::ostream& out, const CVReport& report);

} // namespace litiscope
