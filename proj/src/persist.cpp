#include "litiscope/persist.hpp"

#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>

#include "json.hpp"
#include "litiscope/error.hpp"

namespace litiscope {

using nlohmann::json;

namespace {

// Scalars -------------------------------------------------------------------

json jd(double v) {
    if (std::isfinite(v)) return v;
    if (std::isnan(v)) return "nan";
    return v > 0 ? "inf" : "-inf";
}

double rd(const json& j) {
    if (j.is_number()) return j.get<double>();
    const auto s = j.get<std::string>();
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
    throw DataError("model: '" + s + "' is not a number");
}

json jv(const std::vector<double>& v) {
    json a = json::array();
    for (double x : v) a.push_back(jd(x));
    return a;
}

std::vector<double> rv(const json& j) {
    std::vector<double> v;
    v.reserve(j.size());
    for (const auto& x : j) v.push_back(rd(x));
    return v;
}

json jbits(const std::vector<bool>& v) {
    std::string s;
    s.reserve(v.size());
    for (bool b : v) s.push_back(b ? '1' : '0');
    return s;
}

std::vector<bool> rbits(const json& j) {
    const auto s = j.get<std::string>();
    std::vector<bool> v(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) v[i] = s[i] == '1';
    return v;
}

template <class T>
json jopt(const std::optional<T>& v) {
    if (!v) return nullptr;
    if constexpr (std::is_floating_point_v<T>)
        return jd(*v);
    else
        return *v;
}

std::optional<double> ropt_d(const json& j) {
    if (j.is_null()) return std::nullopt;
    return rd(j);
}

std::optional<int> ropt_i(const json& j) {
    if (j.is_null()) return std::nullopt;
    return j.get<int>();
}

// Geometry and learners -----------------------------------------------------

json jm(const Matrix& m) { return {{"rows", m.rows()}, {"cols", m.cols()}, {"data", jv(m.data())}}; }

Matrix rm(const json& j) {
    return Matrix(j.at("rows").get<std::size_t>(), j.at("cols").get<std::size_t>(), rv(j.at("data")));
}

json jmats(const std::vector<Matrix>& v) {
    json a = json::array();
    for (const auto& m : v) a.push_back(jm(m));
    return a;
}

std::vector<Matrix> rmats(const json& j) {
    std::vector<Matrix> v;
    for (const auto& m : j) v.push_back(rm(m));
    return v;
}

json jhull(const HullOptions& h) { return {{"tol", jd(h.tol)}, {"max_iter", h.max_iter}}; }
HullOptions rhull(const json& j) { return {rd(j.at("tol")), j.at("max_iter").get<std::size_t>()}; }

json jsvm(const SvmModel& m) {
    return {{"support_vectors", jm(m.support_vectors)}, {"coef", jv(m.coef)}, {"bias", jd(m.bias)},
            {"gamma", jd(m.gamma)},  {"platt_a", jd(m.platt_a)}, {"platt_b", jd(m.platt_b)}};
}

SvmModel rsvm(const json& j) {
    SvmModel m;
    m.support_vectors = rm(j.at("support_vectors"));
    m.coef = rv(j.at("coef"));
    m.bias = rd(j.at("bias"));
    m.gamma = rd(j.at("gamma"));
    m.platt_a = rd(j.at("platt_a"));
    m.platt_b = rd(j.at("platt_b"));
    return m;
}

// A tree is stored as parallel arrays to keep the file compact.
json jtree(const DecisionTree& t) {
    json feature = json::array(), threshold = json::array(), left = json::array(), right = json::array();
    std::string vote;
    for (const auto& n : t.nodes) {
        feature.push_back(n.feature);
        threshold.push_back(jd(n.threshold));
        left.push_back(n.left);
        right.push_back(n.right);
        vote.push_back(n.vote ? '1' : '0');
    }
    return {{"feature", feature}, {"threshold", threshold}, {"left", left}, {"right", right}, {"vote", vote}};
}

DecisionTree rtree(const json& j) {
    DecisionTree t;
    const auto& feature = j.at("feature");
    const auto& threshold = j.at("threshold");
    const auto& left = j.at("left");
    const auto& right = j.at("right");
    const auto vote = j.at("vote").get<std::string>();
    if (threshold.size() != feature.size() || left.size() != feature.size() || right.size() != feature.size() ||
        vote.size() != feature.size())
        throw DataError("model: tree arrays differ in length");
    t.nodes.resize(feature.size());
    for (std::size_t i = 0; i < t.nodes.size(); ++i) {
        auto& n = t.nodes[i];
        n.feature = feature[i].get<int>();
        n.threshold = rd(threshold[i]);
        n.left = left[i].get<std::uint32_t>();
        n.right = right[i].get<std::uint32_t>();
        n.vote = vote[i] == '1';
        if (n.feature >= 0 && (n.left >= t.nodes.size() || n.right >= t.nodes.size()))
            throw DataError("model: tree child index out of range");
    }
    return t;
}

json jforest(const ForestModel& f) {
    json trees = json::array();
    for (const auto& t : f.trees) trees.push_back(jtree(t));
    return {{"n_features", f.n_features}, {"trees", trees}};
}

ForestModel rforest(const json& j) {
    ForestModel f;
    f.n_features = j.at("n_features").get<std::size_t>();
    for (const auto& t : j.at("trees")) f.trees.push_back(rtree(t));
    return f;
}

json jensemble(const EnsembleModel& e) {
    return {{"svm", jsvm(e.svm)},
            {"forest", jforest(e.forest)},
            {"w_svm", jd(e.weights.w_svm)},
            {"w_forest", jd(e.weights.w_forest)},
            {"cutoff", jd(e.weights.cutoff)},
            {"n_features", e.n_features}};
}

EnsembleModel rensemble(const json& j) {
    EnsembleModel e;
    e.svm = rsvm(j.at("svm"));
    e.forest = rforest(j.at("forest"));
    e.weights = {rd(j.at("w_svm")), rd(j.at("w_forest")), rd(j.at("cutoff"))};
    e.n_features = j.at("n_features").get<std::size_t>();
    return e;
}

json jlit(const LitigationModel& m) {
    return {{"positive_hulls", jmats(m.positive_hulls)},
            {"negative_hulls", jmats(m.negative_hulls)},
            {"ball_points", jm(m.ball_points)},
            {"ball_labels", jbits(m.ball_labels)},
            {"ensemble", jensemble(m.ensemble)},
            {"radius_scale", jd(m.hyper.radius_scale)},
            {"hull_ratio_threshold", jd(m.hyper.hull_ratio_threshold)},
            {"fraction_ratio_threshold", jd(m.hyper.fraction_ratio_threshold)},
            {"radius_rule", m.hyper.radius_rule == RadiusRule::Scale ? "scale" : "divide"},
            {"hull", jhull(m.hull)},
            {"n_features", m.n_features},
            {"resampled_positive", m.resampled_positive},
            {"resampled_negative", m.resampled_negative}};
}

LitigationModel rlit(const json& j) {
    LitigationModel m;
    m.positive_hulls = rmats(j.at("positive_hulls"));
    m.negative_hulls = rmats(j.at("negative_hulls"));
    m.ball_points = rm(j.at("ball_points"));
    m.ball_labels = rbits(j.at("ball_labels"));
    m.ensemble = rensemble(j.at("ensemble"));
    m.hyper.radius_scale = rd(j.at("radius_scale"));
    m.hyper.hull_ratio_threshold = rd(j.at("hull_ratio_threshold"));
    m.hyper.fraction_ratio_threshold = rd(j.at("fraction_ratio_threshold"));
    m.hyper.radius_rule = j.at("radius_rule").get<std::string>() == "scale" ? RadiusRule::Scale : RadiusRule::Divide;
    m.hull = rhull(j.at("hull"));
    m.n_features = j.at("n_features").get<std::size_t>();
    m.resampled_positive = j.at("resampled_positive").get<std::size_t>();
    m.resampled_negative = j.at("resampled_negative").get<std::size_t>();
    if (m.ball_labels.size() != m.ball_points.rows()) throw DataError("model: ball labels differ from ball points");
    return m;
}

// Schema ----------------------------------------------------------------------

std::string kind_name(ColumnKind k) {
    switch (k) {
    case ColumnKind::Textual: return "textual";
    case ColumnKind::Numeric: return "numeric";
    case ColumnKind::Categorical: return "categorical";
    }
    return "numeric";
}

ColumnKind parse_kind(const std::string& s) {
    if (s == "textual") return ColumnKind::Textual;
    if (s == "numeric") return ColumnKind::Numeric;
    if (s == "categorical") return ColumnKind::Categorical;
    throw DataError("model: unknown column kind '" + s + "'");
}

json jfeatures(const FeatureOptions& o) {
    return {{"option", std::string(to_string(o.option))},
            {"discount_rate", jd(o.discount_rate)},
            {"as_of_year", o.as_of_year},
            {"n_bins", o.n_bins}};
}

FeatureOptions rfeatures(const json& j) {
    FeatureOptions o;
    const auto option = parse_data_option(j.at("option").get<std::string>());
    if (!option) throw DataError("model: unknown data option");
    o.option = *option;
    o.discount_rate = rd(j.at("discount_rate"));
    o.as_of_year = j.at("as_of_year").get<int>();
    o.n_bins = j.at("n_bins").get<std::size_t>();
    return o;
}

json jschema(const FeatureSchema& s) {
    json columns = json::array();
    for (const auto& c : s.columns) columns.push_back({c.name, kind_name(c.kind), c.source});
    json grams = json::array();
    for (const auto& g : s.grams) grams.push_back({g.gram, jd(g.idf), jd(g.information_gain)});
    json financial = json::array();
    for (const auto& f : s.financial) financial.push_back({{"cut_points", jv(f.cut_points)}, {"discount_rate", jd(f.discount_rate)}});
    return {{"columns", columns}, {"mean", jv(s.mean)},       {"scale", jv(s.scale)},
            {"grams", grams},     {"financial", financial}, {"options", jfeatures(s.options)}};
}

FeatureSchema rschema(const json& j) {
    FeatureSchema s;
    for (const auto& c : j.at("columns"))
        s.columns.push_back({c.at(0).get<std::string>(), parse_kind(c.at(1).get<std::string>()), c.at(2).get<std::string>()});
    s.mean = rv(j.at("mean"));
    s.scale = rv(j.at("scale"));
    for (const auto& g : j.at("grams")) s.grams.push_back({g.at(0).get<std::string>(), rd(g.at(1)), rd(g.at(2))});
    for (const auto& f : j.at("financial")) s.financial.push_back({rv(f.at("cut_points")), rd(f.at("discount_rate"))});
    s.options = rfeatures(j.at("options"));
    if (s.mean.size() != s.columns.size() || s.scale.size() != s.columns.size())
        throw DataError("model: schema statistics differ from the column count");
    return s;
}

// Time to litigation ----------------------------------------------------------

json jttl(const TtlModel& t) {
    json j = {{"method", std::string(to_string(t.method))}, {"node_method", std::string(to_string(t.node_method))}};
    if (t.method == TtlMethod::PerNode) {
        json nodes = json::array();
        for (const auto& n : t.per_node.nodes) nodes.push_back(jlit(n));
        j["nodes"] = nodes;
    } else {
        json layers = json::array();
        for (const auto& cluster : t.nested.layers) {
            json c = json::array();
            for (const auto& layer : cluster) c.push_back(jm(layer));
            layers.push_back(c);
        }
        j["layers"] = layers;
        j["hull"] = jhull(t.nested.hull);
    }
    return j;
}

TtlModel rttl(const json& j) {
    TtlModel t;
    const auto method = j.at("method").get<std::string>();
    if (method != "per_node" && method != "nested") throw DataError("model: unknown ttl method '" + method + "'");
    t.method = method == "per_node" ? TtlMethod::PerNode : TtlMethod::Nested;
    t.node_method = j.at("node_method").get<std::string>() == "pure" ? NodeMethod::Pure : NodeMethod::Cluster;
    if (t.method == TtlMethod::PerNode) {
        const auto& nodes = j.at("nodes");
        if (nodes.size() != 3) throw DataError("model: expected 3 ttl nodes");
        for (std::size_t i = 0; i < 3; ++i) t.per_node.nodes[i] = rlit(nodes[i]);
    } else {
        for (const auto& c : j.at("layers")) {
            if (c.size() != 4) throw DataError("model: expected 4 nested layers per cluster");
            std::array<Matrix, 4> cluster;
            for (std::size_t i = 0; i < 4; ++i) cluster[i] = rm(c[i]);
            t.nested.layers.push_back(std::move(cluster));
        }
        t.nested.hull = rhull(j.at("hull"));
    }
    return t;
}

} // namespace

void write_model(std::ostream& out, const TrainedPipeline& m) {
    json j;
    j["features"] = jfeatures(m.features);
    j["impute"] = {{"revenue", jopt(m.impute.revenue)},
                   {"eps", jopt(m.impute.eps)},
                   {"share_price", jopt(m.impute.share_price)},
                   {"report_year", jopt(m.impute.report_year)}};
    j["pagerank"] = {{"damping", jd(m.pagerank.damping)},
                     {"tol", jd(m.pagerank.tol)},
                     {"max_iter", m.pagerank.max_iter},
                     {"reverse", m.pagerank.reverse}};
    j["schema"] = jschema(m.schema);
    j["litigated_ids"] = m.litigated_ids;
    j["method"] = std::string(to_string(m.method));
    j["lit"] = jlit(m.lit);
    j["ttl"] = m.ttl ? jttl(*m.ttl) : json(nullptr);
    j["seed"] = m.seed;
    out << kModelHeader << '\n' << j.dump() << '\n';
}

TrainedPipeline read_model(std::istream& in) {
    std::string header;
    if (!std::getline(in, header) || header != kModelHeader)
        throw DataError("model: missing '" + std::string(kModelHeader) + "' header");
    try {
        const json j = json::parse(in);
        TrainedPipeline m;
        m.features = rfeatures(j.at("features"));
        const auto& imp = j.at("impute");
        m.impute.revenue = ropt_d(imp.at("revenue"));
        m.impute.eps = ropt_d(imp.at("eps"));
        m.impute.share_price = ropt_d(imp.at("share_price"));
        m.impute.report_year = ropt_i(imp.at("report_year"));
        const auto& pr = j.at("pagerank");
        m.pagerank.damping = rd(pr.at("damping"));
        m.pagerank.tol = rd(pr.at("tol"));
        m.pagerank.max_iter = pr.at("max_iter").get<std::size_t>();
        m.pagerank.reverse = pr.at("reverse").get<bool>();
        m.schema = rschema(j.at("schema"));
        m.litigated_ids = j.at("litigated_ids").get<std::vector<std::string>>();
        const auto method = j.at("method").get<std::string>();
        if (method != "cluster" && method != "pure") throw DataError("model: unknown method '" + method + "'");
        m.method = method == "cluster" ? LitMethod::Cluster : LitMethod::Pure;
        m.lit = rlit(j.at("lit"));
        if (!j.at("ttl").is_null()) m.ttl = rttl(j.at("ttl"));
        m.seed = j.at("seed").get<std::uint64_t>();
        return m;
    } catch (const json::exception& e) {
        throw DataError(std::string("model: malformed body: ") + e.what());
    }
}

void save_model(const std::string& path, const TrainedPipeline& model) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write model file '" + path + "'");
    write_model(out, model);
    if (!out) throw DataError("failed writing model file '" + path + "'");
}

TrainedPipeline load_model(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open model file '" + path + "'");
    return read_model(in);
}

} // namespace litiscope
