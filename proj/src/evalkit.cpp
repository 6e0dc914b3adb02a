#include "litiscope/evalkit.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>
#include <string>

#include "json.hpp"
#include "litiscope/error.hpp"
#include "litiscope/log.hpp"
#include "litiscope/pipeline.hpp"
#include "litiscope/random.hpp"

namespace litiscope {

ConfusionMatrix confusion(const std::vector<bool>& predicted, const std::vector<bool>& truth) {
    if (predicted.size() != truth.size())
        throw std::invalid_argument("confusion: " + std::to_string(predicted.size()) + " predictions for " +
                                    std::to_string(truth.size()) + " labels");
    ConfusionMatrix cm;
    for (std::size_t i = 0; i < truth.size(); ++i) {
        if (predicted[i])
            ++(truth[i] ? cm.tp : cm.fp);
        else
            ++(truth[i] ? cm.fn : cm.tn);
    }
    return cm;
}

Metrics metrics(const ConfusionMatrix& cm) {
    Metrics m;
    const auto tp = static_cast<double>(cm.tp);
    if (cm.tp + cm.fp > 0) m.precision = tp / static_cast<double>(cm.tp + cm.fp);
    if (cm.tp + cm.fn > 0) m.recall = tp / static_cast<double>(cm.tp + cm.fn);
    if (m.precision + m.recall > 0.0) m.f1 = 2.0 * m.precision * m.recall / (m.precision + m.recall);
    return m;
}

std::vector<std::size_t> stratified_folds(const std::vector<bool>& labels, std::size_t folds, std::uint64_t seed) {
    if (folds < 2) throw ConfigError("stratified_folds: need at least 2 folds");
    std::vector<std::size_t> pos, neg;
    for (std::size_t i = 0; i < labels.size(); ++i) (labels[i] ? pos : neg).push_back(i);
    if (pos.size() < folds)
        throw DataError("cross-validation: " + std::to_string(pos.size()) + " litigated record(s) cannot be " +
                        "stratified into " + std::to_string(folds) + " folds");
    if (neg.size() < folds)
        throw DataError("cross-validation: " + std::to_string(neg.size()) + " non-litigated record(s) cannot be " +
                        "stratified into " + std::to_string(folds) + " folds");

    auto rng = make_rng(seed, "stratified-folds");
    auto shuffle = [&rng](std::vector<std::size_t>& v) {
        for (std::size_t i = v.size(); i > 1; --i) std::swap(v[i - 1], v[uniform_index(rng, i)]);
    };
    shuffle(pos);
    shuffle(neg);

    // Dealing negatives from where the positives stopped keeps total fold sizes within one.
    std::vector<std::size_t> fold_of(labels.size());
    std::size_t next = 0;
    for (std::size_t i : pos) fold_of[i] = next++ % folds;
    for (std::size_t i : neg) fold_of[i] = next++ % folds;
    return fold_of;
}

MetricSummary summarize(const std::vector<Metrics>& values) {
    MetricSummary s;
    if (values.empty()) return s;
    const auto n = static_cast<double>(values.size());
    for (const auto& v : values) {
        s.mean.precision += v.precision / n;
        s.mean.recall += v.recall / n;
        s.mean.f1 += v.f1 / n;
    }
    if (values.size() > 1) {
        for (const auto& v : values) {
            s.sd.precision += (v.precision - s.mean.precision) * (v.precision - s.mean.precision);
            s.sd.recall += (v.recall - s.mean.recall) * (v.recall - s.mean.recall);
            s.sd.f1 += (v.f1 - s.mean.f1) * (v.f1 - s.mean.f1);
        }
        s.sd.precision = std::sqrt(s.sd.precision / (n - 1.0));
        s.sd.recall = std::sqrt(s.sd.recall / (n - 1.0));
        s.sd.f1 = std::sqrt(s.sd.f1 / (n - 1.0));
    }
    return s;
}

namespace {

Corpus subset(const Corpus& corpus, const std::vector<std::size_t>& fold_of, std::size_t fold, bool in_fold) {
    Corpus out;
    out.keyword_tag = corpus.keyword_tag;
    for (std::size_t i = 0; i < corpus.size(); ++i)
        if ((fold_of[i] == fold) == in_fold) out.records.push_back(corpus.records[i]);
    return out;
}

// Node flags in report order (by_7, by_4, by_1).
std::array<bool, 3> report_nodes(YearGroup g) {
    const NodePrediction n = nodes_of(g);
    return {n.by_7, n.by_4, n.by_1};
}

} // namespace

CVReport cross_validate(const Corpus& corpus, const RunConfig& config, std::size_t folds, std::size_t reps,
                        std::uint64_t seed) {
    // Dropping records without SEC data is a filter with nothing to fit, so it can run up front;
    // imputation medians must come from each training fold and are left to the pipeline.
    const Corpus data = config.features.option == DataOption::SecDrop
                            ? apply_data_option(corpus, DataOption::SecDrop)
                            : corpus;
    std::vector<bool> labels;
    for (const auto& r : data.records) labels.push_back(r.litigated());

    RunConfig fold_cfg = config;
    const bool with_ttl = config.cv_ttl && config.ttl_enabled;
    fold_cfg.ttl_enabled = with_ttl;

    CVReport report;
    report.folds = folds;
    report.reps = reps;
    report.n_records = data.size();

    for (std::size_t rep = 0; rep < reps; ++rep) {
        const auto fold_of = stratified_folds(labels, folds, derive_seed(seed, "cv-folds", rep));
        report.assignments.push_back(fold_of);
        for (std::size_t fold = 0; fold < folds; ++fold) {
            const auto start = std::chrono::steady_clock::now();
            const Corpus train = subset(data, fold_of, fold, false);
            const Corpus test = subset(data, fold_of, fold, true);
            fold_cfg.seed = derive_seed(seed, "cv-model", rep * folds + fold);

            const TrainedPipeline model = train_pipeline(train, data, fold_cfg);
            const auto preds = predict_pipeline(model, test, data, with_ttl);

            FoldResult r;
            r.rep = rep;
            r.fold = fold;
            r.n_test = test.size();
            std::vector<bool> predicted, truth;
            for (std::size_t i = 0; i < test.size(); ++i) {
                predicted.push_back(preds[i].label);
                truth.push_back(test.records[i].litigated());
            }
            r.cm = confusion(predicted, truth);
            r.m = metrics(r.cm);

            if (with_ttl) {
                std::array<ConfusionMatrix, 3> cms{};
                for (std::size_t i = 0; i < test.size(); ++i) {
                    const auto label = litigation_label(test.records[i]);
                    if (!label.litigated || *label.years_to_litigation >= kYearGroupBounds.back()) continue;
                    const auto want = report_nodes(year_group(*label.years_to_litigation));
                    const auto got = report_nodes(*preds[i].year_group);
                    for (std::size_t n = 0; n < 3; ++n) cms[n] += confusion({got[n]}, {want[n]});
                }
                for (std::size_t n = 0; n < 3; ++n) r.ttl[n] = metrics(cms[n]);
                r.ttl_cm = cms;
            }

            const double secs =
                std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
            char line[160];
            std::snprintf(line, sizeof line, "cv rep %zu fold %zu: n_test=%zu tp=%zu fp=%zu fn=%zu f1=%.4f (%.1fs)",
                          rep, fold, r.n_test, r.cm.tp, r.cm.fp, r.cm.fn, r.m.f1, secs);
            log_line(line);
            report.results.push_back(std::move(r));
        }
    }

    std::vector<Metrics> all;
    for (const auto& r : report.results) all.push_back(r.m);
    report.summary = summarize(all);
    if (with_ttl) {
        std::array<MetricSummary, 3> ttl;
        for (std::size_t n = 0; n < 3; ++n) {
            std::vector<Metrics> node;
            for (const auto& r : report.results) node.push_back(r.ttl[n]);
            ttl[n] = summarize(node);
        }
        report.ttl_summary = ttl;
    }
    return report;
}

CVReport cross_validate(const Corpus& corpus, const RunConfig& config) {
    return cross_validate(corpus, config, config.cv_folds, config.cv_reps, config.seed);
}

namespace {

nlohmann::json metrics_json(const Metrics& m) {
    return {{"precision", m.precision}, {"recall", m.recall}, {"f1", m.f1}};
}

nlohmann::json cm_json(const ConfusionMatrix& cm) {
    return {{"tp", cm.tp}, {"fp", cm.fp}, {"fn", cm.fn}, {"tn", cm.tn}};
}

} // namespace

void write_report(std::ostream& out, const CVReport& report, const RunConfig& config) {
    using nlohmann::json;
    out << "#litiscope-report v1\n";
    json cfg = json::object();
    for (const auto& [k, v] : config_entries(config)) cfg[k] = v;
    out << json{{"kind", "config"}, {"config", cfg}}.dump() << '\n';

    for (const auto& r : report.results) {
        out << json{{"kind", "fold"}, {"rep", r.rep}, {"fold", r.fold}, {"n_test", r.n_test},
                    {"confusion", cm_json(r.cm)}, {"metrics", metrics_json(r.m)}}
                   .dump()
            << '\n';
        if (r.ttl_cm)
            for (std::size_t n = 0; n < 3; ++n)
                out << json{{"kind", "ttl_node"}, {"rep", r.rep}, {"fold", r.fold}, {"node", kTtlNodeNames[n]},
                            {"confusion", cm_json((*r.ttl_cm)[n])}, {"metrics", metrics_json(r.ttl[n])}}
                           .dump()
                    << '\n';
    }
    out << json{{"kind", "summary"}, {"folds", report.folds}, {"reps", report.reps},
                {"n_records", report.n_records}, {"mean", metrics_json(report.summary.mean)},
                {"sd", metrics_json(report.summary.sd)}}
               .dump()
        << '\n';
    if (report.ttl_summary)
        for (std::size_t n = 0; n < 3; ++n)
            out << json{{"kind", "ttl_summary"}, {"node", kTtlNodeNames[n]},
                        {"mean", metrics_json((*report.ttl_summary)[n].mean)},
                        {"sd", metrics_json((*report.ttl_summary)[n].sd)}}
                       .dump()
                << '\n';
}

void write_summary_table(std::ostream& out, const CVReport& report) {
    char line[200];
    std::snprintf(line, sizeof line, "%zu-fold cross-validation x %zu replication(s), %zu records\n", report.folds,
                  report.reps, report.n_records);
    out << line;
    std::snprintf(line, sizeof line, "%-12s %10s %10s %10s\n", "", "precision", "recall", "F1");
    out << line;
    auto row = [&](const char* name, const MetricSummary& s) {
        std::snprintf(line, sizeof line, "%-12s %10.4f %10.4f %10.4f\n", name, s.mean.precision, s.mean.recall,
                      s.mean.f1);
        out << line;
        std::snprintf(line, sizeof line, "%-12s %10.4f %10.4f %10.4f\n", "  (sd)", s.sd.precision, s.sd.recall,
                      s.sd.f1);
        out << line;
    };
    row("litigation", report.summary);
    if (report.ttl_summary)
        for (std::size_t n = 0; n < 3; ++n) row(kTtlNodeNames[n], (*report.ttl_summary)[n]);
}

} // namespace litiscope
