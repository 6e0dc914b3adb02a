#pragma once

#include <optional>
#include <string>
#include <vector>

#include "litiscope/config.hpp"
#include "litiscope/corpus.hpp"
#include "litiscope/featset.hpp"
#include "litiscope/litmodel.hpp"
#include "litiscope/ttlmodel.hpp"

namespace litiscope {

struct TtlModel {
    TtlMethod method = TtlMethod::PerNode;
    NodeMethod node_method = NodeMethod::Cluster;
    PerNodeModels per_node;
    NestedHulls nested;

    bool operator==(const TtlModel&) const = default;
};

/// Everything needed to score new records: the fitted schema, the litigation model, and the
/// optional time-to-litigation model.
struct TrainedPipeline {
    FeatureOptions features;
    /// Fill values for SecImpute, resolved on the training corpus.
    ImputeDefaults impute;
    PageRankOptions pagerank;
    FeatureSchema schema;
    /// Training ids known to be litigated; feeds the litigated-reference counts at predict time.
    std::vector<std::string> litigated_ids;
    LitMethod method = LitMethod::Cluster;
    /// For the pure method only `ensemble` is populated.
    LitigationModel lit;
    std::optional<TtlModel> ttl;
    std::uint64_t seed = 0;

    bool operator==(const TrainedPipeline&) const = default;
};

struct Prediction {
    std::string id;
    bool label = false;
    std::optional<double> ensemble_p;
    /// Absent for the pure method, which computes no hull distances.
    std::optional<double> hull_ratio;
    std::optional<double> fraction_ratio;
    std::optional<YearGroup> year_group;
};

/// Builds the graph context: graph and PageRank over `graph_corpus`, litigated ids as given.
GraphContext make_graph_context(const Corpus& graph_corpus, const std::vector<std::string>& litigated_ids,
                                const PageRankOptions& options);

/// Fits vocabulary, schema, litigation model and (when enabled) the time-to-litigation model on
/// `train`. The citation graph spans `graph_corpus`, which must contain `train`; no labels are
/// read from records outside `train`.
TrainedPipeline train_pipeline(const Corpus& train, const Corpus& graph_corpus, const RunConfig& config);
TrainedPipeline train_pipeline(const Corpus& train, const RunConfig& config);

/// Applies the stored data option, transforms features with the stored schema and scores each
/// surviving record. The graph spans `graph_corpus`. Year groups are filled for records predicted
/// litigated, or for every record when `all_year_groups` is set.
std::vector<Prediction> predict_pipeline(const TrainedPipeline& model, const Corpus& records,
                                         const Corpus& graph_corpus, bool all_year_groups = false);
std::vector<Prediction> predict_pipeline(const TrainedPipeline& model, const Corpus& records);

/// Time-to-litigation group for one feature row.
YearGroup predict_year_group(const TtlModel& ttl, std::span<const double> x);

/// Training rows and groups for the time-to-litigation model: litigated records with T < 14.
/// Records at or beyond 14 years are skipped and counted in `skipped`.
std::vector<std::size_t> ttl_rows(const Corpus& corpus, std::vector<YearGroup>& groups, std::size_t& skipped);

} // namespace litiscope
