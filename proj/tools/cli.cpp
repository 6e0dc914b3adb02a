#include "cli.hpp"

#include <algorithm>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "litiscope/config.hpp"
#include "litiscope/corpus.hpp"
#include "litiscope/error.hpp"
#include "litiscope/evalkit.hpp"
#include "litiscope/log.hpp"
#include "litiscope/persist.hpp"
#include "litiscope/pipeline.hpp"

namespace litiscope {

namespace {

nlohmann::json number_or_text(double v) {
    if (std::isfinite(v)) return v;
    if (std::isnan(v)) return "nan";
    return v > 0 ? "inf" : "-inf";
}

RunConfig load_run_config(const std::string& path) {
    RunConfig cfg = path.empty() ? RunConfig{} : parse_config(path);
    std::istringstream lines(format_config(cfg));
    log_line("resolved configuration:");
    for (std::string line; std::getline(lines, line);) log_line("  " + line);
    return cfg;
}

void write_predictions(std::ostream& out, const std::vector<Prediction>& preds) {
    for (const auto& p : preds) {
        nlohmann::json j = {{"id", p.id}, {"label", p.label}};
        j["ensemble_p"] = p.ensemble_p ? number_or_text(*p.ensemble_p) : nlohmann::json(nullptr);
        j["hull_ratio"] = p.hull_ratio ? number_or_text(*p.hull_ratio) : nlohmann::json(nullptr);
        j["rho"] = p.fraction_ratio ? number_or_text(*p.fraction_ratio) : nlohmann::json(nullptr);
        if (p.year_group) j["year_group"] = std::string(to_string(*p.year_group));
        out << j.dump() << '\n';
    }
}

std::ofstream open_output(const std::string& path) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw DataError("cannot write '" + path + "'");
    return f;
}

} // namespace

int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Patent litigation and time-to-litigation prediction", "litiscope"};
    app.require_subcommand(1);

    SynthConfig synth;
    std::string synth_out;
    double sec_rate = -1.0;
    auto* synth_cmd = app.add_subcommand("synth", "Generate a synthetic corpus");
    synth_cmd->add_option("--n", synth.n, "Number of records")->capture_default_str();
    synth_cmd->add_option("--rate", synth.litigation_rate, "Litigation rate")->capture_default_str();
    synth_cmd->add_option("--signal", synth.signal_strength, "Separation of litigated records")->capture_default_str();
    synth_cmd->add_option("--seed", synth.seed, "Random seed")->capture_default_str();
    synth_cmd->add_option("--sec-fraction", synth.sec_fraction, "Fraction of records with SEC data")->capture_default_str();
    synth_cmd->add_option("--sec-rate", sec_rate, "Litigation rate among SEC records (default: --rate)");
    synth_cmd->add_option("--tag", synth.keyword_tag, "Keyword tag")->capture_default_str();
    synth_cmd->add_option("--out", synth_out, "Output corpus file")->required();

    std::string corpus_path, tag, config_path, model_path, out_path;
    auto* ingest_cmd = app.add_subcommand("ingest-check", "Validate a corpus file and print its statistics");
    ingest_cmd->add_option("--corpus", corpus_path, "Corpus file")->required();
    ingest_cmd->add_option("--tag", tag, "Keyword tag");

    auto* train_cmd = app.add_subcommand("train", "Train a model");
    train_cmd->add_option("--config", config_path, "Configuration file (defaults when omitted)");
    train_cmd->add_option("--corpus", corpus_path, "Training corpus")->required();
    train_cmd->add_option("--tag", tag, "Keyword tag");
    train_cmd->add_option("--out", model_path, "Output model file")->required();

    auto* predict_cmd = app.add_subcommand("predict", "Score a corpus with a trained model");
    predict_cmd->add_option("--model", model_path, "Model file")->required();
    predict_cmd->add_option("--corpus", corpus_path, "Corpus to score")->required();
    predict_cmd->add_option("--tag", tag, "Keyword tag");
    predict_cmd->add_option("--out", out_path, "Output file (standard output when omitted)");

    std::optional<std::size_t> folds, reps;
    std::optional<std::uint64_t> seed;
    auto* eval_cmd = app.add_subcommand("evaluate", "Cross-validate the configured pipeline");
    eval_cmd->add_option("--config", config_path, "Configuration file (defaults when omitted)");
    eval_cmd->add_option("--corpus", corpus_path, "Corpus file")->required();
    eval_cmd->add_option("--tag", tag, "Keyword tag");
    eval_cmd->add_option("--out", out_path, "Report file")->required();
    eval_cmd->add_option("--folds", folds, "Override cv.folds");
    eval_cmd->add_option("--reps", reps, "Override cv.reps");
    eval_cmd->add_option("--seed", seed, "Override seed");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (synth_cmd->parsed()) {
            if (sec_rate >= 0.0) synth.sec_litigation_rate = sec_rate;
            const Corpus corpus = generate_synthetic(synth);
            save_corpus(synth_out, corpus);
            const auto n_lit = std::count_if(corpus.records.begin(), corpus.records.end(),
                                             [](const PatentRecord& r) { return r.litigated(); });
            out << "wrote " << corpus.size() << " records (" << n_lit << " litigated) to " << synth_out << '\n';
        } else if (ingest_cmd->parsed()) {
            const Corpus corpus = load_corpus(corpus_path, tag);
            std::size_t n_lit = 0, n_sec = 0;
            for (const auto& r : corpus.records) {
                n_lit += r.litigated() ? 1 : 0;
                n_sec += r.has_sec() ? 1 : 0;
            }
            char rate[32];
            std::snprintf(rate, sizeof rate, "%.2f%%", 100.0 * litigation_rate(corpus));
            out << "records: " << corpus.size() << "\nlitigated: " << n_lit << "\nlitigation rate: " << rate
                << "\nwith SEC data: " << n_sec << '\n';
        } else if (train_cmd->parsed()) {
            const RunConfig cfg = load_run_config(config_path);
            const Corpus corpus = load_corpus(corpus_path, tag);
            const TrainedPipeline model = train_pipeline(corpus, cfg);
            save_model(model_path, model);
            out << "model written to " << model_path << '\n';
        } else if (predict_cmd->parsed()) {
            const TrainedPipeline model = load_model(model_path);
            const Corpus corpus = load_corpus(corpus_path, tag);
            const auto preds = predict_pipeline(model, corpus);
            if (out_path.empty()) {
                write_predictions(out, preds);
            } else {
                auto f = open_output(out_path);
                write_predictions(f, preds);
            }
        } else if (eval_cmd->parsed()) {
            RunConfig cfg = load_run_config(config_path);
            if (folds) cfg.cv_folds = *folds;
            if (reps) cfg.cv_reps = *reps;
            if (seed) cfg.seed = *seed;
            if (folds || reps || seed) log_line("command-line overrides: cv.folds = " + std::to_string(cfg.cv_folds) +
                                                ", cv.reps = " + std::to_string(cfg.cv_reps) +
                                                ", seed = " + std::to_string(cfg.seed));
            const Corpus corpus = load_corpus(corpus_path, tag);
            const CVReport report = cross_validate(corpus, cfg);
            auto f = open_output(out_path);
            write_report(f, report, cfg);
            write_summary_table(out, report);
        }
    } catch (const ConfigError& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const DataError& e) {
        err << "error: " << e.what() << '\n';
        return kExitData;
    } catch (const TrainingError& e) {
        err << "training failed: " << e.what() << '\n';
        return kExitTraining;
    } catch (const ConvergenceError& e) {
        err << "training failed: " << e.what() << '\n';
        return kExitTraining;
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << '\n';
        return 1;
    }
    return kExitOk;
}

} // namespace litiscope
