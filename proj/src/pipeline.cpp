#include "litiscope/pipeline.hpp"

#include <stdexcept>
#include <unordered_set>

#include "litiscope/error.hpp"
#include "litiscope/graphfeat.hpp"
#include "litiscope/log.hpp"
#include "litiscope/random.hpp"
#include "litiscope/textfeat.hpp"

namespace litiscope {

GraphContext make_graph_context(const Corpus& graph_corpus, const std::vector<std::string>& litigated_ids,
                                const PageRankOptions& options) {
    GraphContext ctx;
    ctx.graph = build_graph(graph_corpus);
    ctx.pagerank = pagerank(ctx.graph, options);
    ctx.litigated_ids.insert(litigated_ids.begin(), litigated_ids.end());
    return ctx;
}

std::vector<std::size_t> ttl_rows(const Corpus& corpus, std::vector<YearGroup>& groups, std::size_t& skipped) {
    std::vector<std::size_t> rows;
    groups.clear();
    skipped = 0;
    for (std::size_t i = 0; i < corpus.records.size(); ++i) {
        const auto label = litigation_label(corpus.records[i]);
        if (!label.litigated) continue;
        const double years = *label.years_to_litigation;
        if (years < 0.0 || years >= kYearGroupBounds.back()) {
            ++skipped;
            continue;
        }
        rows.push_back(i);
        groups.push_back(year_group(years));
    }
    return rows;
}

TrainedPipeline train_pipeline(const Corpus& train, const Corpus& graph_corpus, const RunConfig& cfg) {
    TrainedPipeline model;
    model.features = cfg.features;
    model.pagerank = cfg.pagerank;
    model.method = cfg.lit_method;
    model.seed = cfg.seed;
    model.impute = cfg.features.option == DataOption::SecImpute ? resolve_impute_defaults(train, cfg.impute)
                                                                 : cfg.impute;

    const Corpus data = apply_data_option(train, cfg.features.option, model.impute);
    if (data.records.empty()) throw DataError("train: no records left after applying the data option");

    std::vector<bool> labels;
    labels.reserve(data.size());
    for (const auto& r : data.records) {
        labels.push_back(r.litigated());
        if (r.litigated()) model.litigated_ids.push_back(r.id);
    }

    const GraphContext ctx = make_graph_context(graph_corpus, model.litigated_ids, cfg.pagerank);
    const Vocabulary vocab = build_vocabulary(data, cfg.min_df);
    const TextFeatureSet text_set = select_top_textual(tfidf_matrix(data, vocab), labels, cfg.k_textual);
    if (text_set.degenerate) log_line("warning: training labels hold a single class; textual gains are all zero");

    auto [features, schema] = assemble_features(data, text_set, ctx, cfg.features);
    model.schema = std::move(schema);
    const auto groups = model.schema.categorical_groups();

    LitConfig lit_cfg = cfg.lit;
    lit_cfg.seed = derive_seed(cfg.seed, "litigation");
    if (cfg.lit_method == LitMethod::Cluster) {
        model.lit = train_litigation(features.values, labels, lit_cfg, groups);
    } else {
        model.lit.ensemble = train_pure(features.values, labels, lit_cfg, groups);
        model.lit.hyper = lit_cfg.hyper;
        model.lit.hull = lit_cfg.hull;
        model.lit.n_features = features.values.cols();
    }

    if (cfg.ttl_enabled) {
        std::vector<YearGroup> year_groups;
        std::size_t skipped = 0;
        const auto rows = ttl_rows(data, year_groups, skipped);
        if (skipped > 0)
            log_line("warning: " + std::to_string(skipped) +
                     " litigated record(s) at or beyond 14 years excluded from the time-to-litigation model");
        const Matrix X = features.values.select_rows(rows);
        TtlModel ttl;
        ttl.method = cfg.ttl_method;
        ttl.node_method = cfg.ttl_node_method;
        LitConfig ttl_cfg = cfg.lit;
        ttl_cfg.seed = derive_seed(cfg.seed, "ttl");
        if (cfg.ttl_method == TtlMethod::PerNode)
            ttl.per_node = train_per_node(X, year_groups, ttl_cfg, groups);
        else
            ttl.nested = train_nested_hulls(X, year_groups, cfg.ttl_k, ttl_cfg.seed, cfg.lit.hull, cfg.lit.kmeans);
        model.ttl = std::move(ttl);
    }
    return model;
}

TrainedPipeline train_pipeline(const Corpus& train, const RunConfig& config) {
    return train_pipeline(train, train, config);
}

YearGroup predict_year_group(const TtlModel& ttl, std::span<const double> x) {
    if (ttl.method == TtlMethod::Nested) return classify_nested(ttl.nested, x);
    return group_of(hierarchy_adjust(predict_per_node(ttl.per_node, x, ttl.node_method)));
}

std::vector<Prediction> predict_pipeline(const TrainedPipeline& model, const Corpus& records,
                                         const Corpus& graph_corpus, bool all_year_groups) {
    const Corpus data = apply_data_option(records, model.features.option, model.impute);
    const GraphContext ctx = make_graph_context(graph_corpus, model.litigated_ids, model.pagerank);
    const FeatureMatrix fm = transform_features(data, model.schema, ctx);

    std::vector<Prediction> out;
    out.reserve(data.size());
    for (std::size_t i = 0; i < data.size(); ++i) {
        const auto x = fm.values.row(i);
        Prediction p;
        p.id = data.records[i].id;
        if (model.method == LitMethod::Pure) {
            const EnsembleDecision d = ensemble_prob(model.lit.ensemble, x);
            p.label = d.label;
            p.ensemble_p = d.probability;
        } else {
            const ScoreResult s = score_litigation(model.lit, x);
            p.label = s.label;
            p.ensemble_p = s.trace.ensemble_p;
            p.hull_ratio = s.trace.hull_ratio;
            p.fraction_ratio = s.trace.fraction_ratio;
        }
        if ((p.label || all_year_groups) && model.ttl) p.year_group = predict_year_group(*model.ttl, x);
        out.push_back(std::move(p));
    }
    return out;
}

std::vector<Prediction> predict_pipeline(const TrainedPipeline& model, const Corpus& records) {
    return predict_pipeline(model, records, records);
}

} // namespace litiscope
