#include "litiscope/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <limits>
#include <optional>
#include <sstream>

#include "litiscope/error.hpp"

namespace litiscope {

namespace {

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

[[noreturn]] void bad_value(std::string_view key, std::string_view value, std::string_view expected) {
    throw ConfigError("config key '" + std::string(key) + "': expected " + std::string(expected) + ", got '" +
                      std::string(value) + "'");
}

double parse_double(std::string_view key, std::string_view v) {
    double out = 0.0;
    if (v == "inf" || v == "+inf") return std::numeric_limits<double>::infinity();
    if (v == "-inf") return -std::numeric_limits<double>::infinity();
    const auto [end, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc() || end != v.data() + v.size() || std::isnan(out)) bad_value(key, v, "a number");
    return out;
}

std::uint64_t parse_uint(std::string_view key, std::string_view v) {
    std::uint64_t out = 0;
    const auto [end, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc() || end != v.data() + v.size()) bad_value(key, v, "a nonnegative integer");
    return out;
}

std::int64_t parse_int(std::string_view key, std::string_view v) {
    std::int64_t out = 0;
    const auto [end, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc() || end != v.data() + v.size()) bad_value(key, v, "an integer");
    return out;
}

bool parse_bool(std::string_view key, std::string_view v) {
    if (v == "true") return true;
    if (v == "false") return false;
    bad_value(key, v, "true or false");
}

std::string fmt(double v) {
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    const auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, end);
}

std::string fmt(std::uint64_t v) { return std::to_string(v); }
std::string fmt(bool v) { return v ? "true" : "false"; }

template <class T>
std::string fmt_opt(const std::optional<T>& v) {
    if (!v) return "median";
    if constexpr (std::is_same_v<T, int>)
        return std::to_string(*v);
    else
        return fmt(*v);
}

struct Key {
    std::string name;
    std::function<void(RunConfig&, std::string_view)> set;
    std::function<std::string(const RunConfig&)> get;
};

template <class Field>
Key size_key(std::string name, Field field, std::uint64_t min = 0) {
    return {name,
            [=](RunConfig& c, std::string_view v) {
                const auto x = parse_uint(name, v);
                if (x < min) bad_value(name, v, "an integer >= " + std::to_string(min));
                field(c) = static_cast<std::remove_reference_t<decltype(field(c))>>(x);
            },
            [=](const RunConfig& c) { return fmt(static_cast<std::uint64_t>(field(const_cast<RunConfig&>(c)))); }};
}

template <class Field>
Key real_key(std::string name, Field field, double lo = -std::numeric_limits<double>::infinity(),
             double hi = std::numeric_limits<double>::infinity()) {
    return {name,
            [=](RunConfig& c, std::string_view v) {
                const double x = parse_double(name, v);
                if (x < lo || x > hi) bad_value(name, v, "a value in [" + fmt(lo) + ", " + fmt(hi) + "]");
                field(c) = x;
            },
            [=](const RunConfig& c) { return fmt(field(const_cast<RunConfig&>(c))); }};
}

template <class Field>
Key bool_key(std::string name, Field field) {
    return {name, [=](RunConfig& c, std::string_view v) { field(c) = parse_bool(name, v); },
            [=](const RunConfig& c) { return fmt(static_cast<bool>(field(const_cast<RunConfig&>(c)))); }};
}

template <class Field>
Key impute_key(std::string name, Field field) {
    return {name,
            [=](RunConfig& c, std::string_view v) {
                if (v == "median")
                    field(c).reset();
                else
                    field(c) = parse_double(name, v);
            },
            [=](const RunConfig& c) { return fmt_opt(field(const_cast<RunConfig&>(c))); }};
}

template <class Enum>
Key enum_key(std::string name, std::function<Enum&(RunConfig&)> field, std::vector<std::pair<std::string, Enum>> names) {
    return {name,
            [=](RunConfig& c, std::string_view v) {
                for (const auto& [text, value] : names)
                    if (v == text) {
                        field(c) = value;
                        return;
                    }
                std::string choices;
                for (const auto& [text, value] : names) choices += (choices.empty() ? "" : "|") + text;
                bad_value(name, v, "one of " + choices);
            },
            [=](const RunConfig& c) {
                for (const auto& [text, value] : names)
                    if (field(const_cast<RunConfig&>(c)) == value) return text;
                return std::string("?");
            }};
}

#define F(expr) [](RunConfig& c) -> decltype(auto) { return (c.expr); }

const std::vector<Key>& keys() {
    static const std::vector<Key> table = [] {
        std::vector<Key> k;
        k.push_back({"seed", [](RunConfig& c, std::string_view v) { c.seed = parse_uint("seed", v); },
                     [](const RunConfig& c) { return fmt(c.seed); }});

        k.push_back({"data.option",
                     [](RunConfig& c, std::string_view v) {
                         const auto o = parse_data_option(v);
                         if (!o) bad_value("data.option", v, "one of nosec|secdrop|secimpute");
                         c.features.option = *o;
                     },
                     [](const RunConfig& c) { return std::string(to_string(c.features.option)); }});
        k.push_back(impute_key("data.impute.revenue", F(impute.revenue)));
        k.push_back(impute_key("data.impute.eps", F(impute.eps)));
        k.push_back(impute_key("data.impute.share_price", F(impute.share_price)));
        k.push_back({"data.impute.report_year",
                     [](RunConfig& c, std::string_view v) {
                         if (v == "median")
                             c.impute.report_year.reset();
                         else
                             c.impute.report_year = static_cast<int>(parse_int("data.impute.report_year", v));
                     },
                     [](const RunConfig& c) { return fmt_opt(c.impute.report_year); }});

        k.push_back(size_key("features.k_textual", F(k_textual)));
        k.push_back(size_key("features.min_df", F(min_df), 1));
        k.push_back(real_key("features.discount_rate", F(features.discount_rate), -0.99, 10.0));
        k.push_back({"features.as_of_year",
                     [](RunConfig& c, std::string_view v) {
                         c.features.as_of_year = static_cast<int>(parse_int("features.as_of_year", v));
                     },
                     [](const RunConfig& c) { return std::to_string(c.features.as_of_year); }});
        k.push_back(size_key("features.bins", F(features.n_bins), 1));

        k.push_back(real_key("graph.damping", F(pagerank.damping), 0.0, 1.0));
        k.push_back(real_key("graph.tol", F(pagerank.tol), 0.0));
        k.push_back(size_key("graph.max_iter", F(pagerank.max_iter), 1));
        k.push_back(bool_key("graph.reverse", F(pagerank.reverse)));

        k.push_back(size_key("smote.s", F(lit.smote.n_synth_per_minority)));
        k.push_back(size_key("smote.j", F(lit.smote.n_major_per_synth)));
        k.push_back(size_key("smote.k", F(lit.smote.k_neighbors), 1));
        k.push_back(enum_key<MajorityMode>("smote.majority", F(lit.smote.majority_mode),
                                           {{"add", MajorityMode::Add}, {"undersample", MajorityMode::Undersample}}));

        k.push_back(size_key("geometry.k_per_class", F(lit.k_per_class), 1));
        k.push_back(real_key("geometry.hull_tol", F(lit.hull.tol), 0.0));
        k.push_back(size_key("geometry.hull_max_iter", F(lit.hull.max_iter), 1));
        k.push_back(size_key("geometry.kmeans_max_iter", F(lit.kmeans.max_iter), 1));
        k.push_back(real_key("geometry.kmeans_tol", F(lit.kmeans.tol), 0.0));

        k.push_back(enum_key<LitMethod>("lit.method", F(lit_method),
                                        {{"cluster", LitMethod::Cluster}, {"pure", LitMethod::Pure}}));
        k.push_back(real_key("lit.X", F(lit.hyper.radius_scale), 0.0));
        k.push_back(real_key("lit.A", F(lit.hyper.hull_ratio_threshold), 0.0));
        k.push_back(real_key("lit.B", F(lit.hyper.fraction_ratio_threshold), 0.0));
        k.push_back(enum_key<RadiusRule>("lit.radius_rule", F(lit.hyper.radius_rule),
                                         {{"scale", RadiusRule::Scale}, {"divide", RadiusRule::Divide}}));
        k.push_back(bool_key("lit.ball_includes_synthetic", F(lit.ball_includes_synthetic)));
        k.push_back(bool_key("lit.cluster_on_resampled", F(lit.cluster_on_resampled)));

        k.push_back(real_key("svm.gamma", F(lit.learners.svm.gamma), 0.0));
        k.push_back(real_key("svm.C", F(lit.learners.svm.C), 0.0));
        k.push_back(real_key("svm.tol", F(lit.learners.svm.tol), 0.0));
        k.push_back(size_key("svm.cache_mb", F(lit.learners.svm.cache_mb), 1));
        k.push_back(size_key("svm.max_iter", F(lit.learners.svm.max_iter), 1));
        k.push_back(size_key("svm.platt_folds", F(lit.learners.svm.platt_folds), 2));
        k.push_back(size_key("forest.trees", F(lit.learners.forest.n_trees), 1));
        k.push_back(size_key("forest.min_leaf", F(lit.learners.forest.min_leaf), 1));
        k.push_back(size_key("forest.max_features", F(lit.learners.forest.max_features)));
        k.push_back(real_key("ensemble.w_svm", F(lit.learners.ensemble.w_svm), 0.0, 1.0));
        k.push_back(real_key("ensemble.w_forest", F(lit.learners.ensemble.w_forest), 0.0, 1.0));
        k.push_back(real_key("ensemble.cutoff", F(lit.learners.ensemble.cutoff), 0.0, 1.0));

        k.push_back(bool_key("ttl.enabled", F(ttl_enabled)));
        k.push_back(enum_key<TtlMethod>("ttl.method", F(ttl_method),
                                        {{"per_node", TtlMethod::PerNode}, {"nested", TtlMethod::Nested}}));
        k.push_back(enum_key<NodeMethod>("ttl.node_method", F(ttl_node_method),
                                         {{"cluster", NodeMethod::Cluster}, {"pure", NodeMethod::Pure}}));
        k.push_back(size_key("ttl.k", F(ttl_k), 1));

        k.push_back(size_key("cv.folds", F(cv_folds), 2));
        k.push_back(size_key("cv.reps", F(cv_reps), 1));
        k.push_back(bool_key("cv.ttl", F(cv_ttl)));
        return k;
    }();
    return table;
}

#undef F

void check_consistency(const RunConfig& c) {
    const auto& w = c.lit.learners.ensemble;
    if (std::abs(w.w_svm + w.w_forest - 1.0) > 1e-9)
        throw ConfigError("config: ensemble.w_svm + ensemble.w_forest must equal 1 (got " + fmt(w.w_svm) + " + " +
                          fmt(w.w_forest) + ")");
}

} // namespace

std::string_view to_string(LitMethod m) { return m == LitMethod::Cluster ? "cluster" : "pure"; }
std::string_view to_string(TtlMethod m) { return m == TtlMethod::PerNode ? "per_node" : "nested"; }
std::string_view to_string(NodeMethod m) { return m == NodeMethod::Cluster ? "cluster" : "pure"; }

void set_config_value(RunConfig& config, std::string_view key, std::string_view value) {
    for (const auto& k : keys())
        if (k.name == key) {
            k.set(config, value);
            return;
        }
    throw ConfigError("unknown config key '" + std::string(key) + "'");
}

RunConfig parse_config_text(std::string_view text) {
    RunConfig config;
    std::size_t line_no = 0;
    while (!text.empty()) {
        ++line_no;
        const auto nl = text.find('\n');
        std::string_view line = text.substr(0, nl);
        text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
        if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string_view::npos)
            throw ConfigError("config line " + std::to_string(line_no) + ": expected 'key = value'");
        const auto key = trim(line.substr(0, eq));
        const auto value = trim(line.substr(eq + 1));
        try {
            set_config_value(config, key, value);
        } catch (const ConfigError& e) {
            throw ConfigError("config line " + std::to_string(line_no) + ": " + e.what());
        }
    }
    check_consistency(config);
    return config;
}

RunConfig parse_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config_text(ss.str());
}

std::vector<std::pair<std::string, std::string>> config_entries(const RunConfig& config) {
    std::vector<std::pair<std::string, std::string>> out;
    for (const auto& k : keys()) out.emplace_back(k.name, k.get(config));
    return out;
}

std::string format_config(const RunConfig& config) {
    std::string out;
    for (const auto& [key, value] : config_entries(config)) out += key + " = " + value + "\n";
    return out;
}

} // namespace litiscope
