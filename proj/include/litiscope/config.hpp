#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "litiscope/corpus.hpp"
#include "litiscope/featset.hpp"
#include "litiscope/graphfeat.hpp"
#include "litiscope/litmodel.hpp"
#include "litiscope/ttlmodel.hpp"

namespace litiscope {

enum class LitMethod { Cluster, Pure };
enum class TtlMethod { PerNode, Nested };

struct RunConfig {
    std::uint64_t seed = 7;

    ImputeDefaults impute;
    /// features.option is the data option (nosec, secdrop, secimpute).
    FeatureOptions features;
    std::size_t k_textual = 30;
    std::size_t min_df = 2;
    PageRankOptions pagerank;

    LitMethod lit_method = LitMethod::Cluster;
    /// k per class, hyperparameters, SMOTE, learners, k-means and hull settings. Its seed field
    /// is ignored; model seeds derive from `seed`.
    LitConfig lit;

    bool ttl_enabled = true;
    TtlMethod ttl_method = TtlMethod::PerNode;
    NodeMethod ttl_node_method = NodeMethod::Cluster;
    /// Clusters of the T<1 cases for the nested-hull classifier.
    std::size_t ttl_k = 2;

    std::size_t cv_folds = 10;
    std::size_t cv_reps = 3;
    bool cv_ttl = false;
};

/// Parses `key = value` lines; `#` starts a comment, blank lines are skipped. Absent keys keep
/// their defaults. Unknown keys and malformed values raise ConfigError naming the line and key.
RunConfig parse_config_text(std::string_view text);
RunConfig parse_config(const std::string& path);

/// Applies one assignment; throws ConfigError for an unknown key or a bad value.
void set_config_value(RunConfig& config, std::string_view key, std::string_view value);

/// Every key with its resolved value, in a fixed order. Feeding these back through
/// set_config_value reproduces the configuration.
std::vector<std::pair<std::string, std::string>> config_entries(const RunConfig& config);

/// The resolved configuration as config-file text.
std::string format_config(const RunConfig& config);

std::string_view to_string(LitMethod method);
std::string_view to_string(TtlMethod method);
std::string_view to_string(NodeMethod method);

} // namespace litiscope
