#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli.hpp"
#include "doctest.h"
#include "litiscope/config.hpp"
#include "litiscope/error.hpp"
#include "litiscope/persist.hpp"
#include "litiscope/pipeline.hpp"

using namespace litiscope;
namespace fs = std::filesystem;

namespace {

fs::path scratch_dir() {
    const fs::path dir = fs::temp_directory_path() / "litiscope_cli_test";
    fs::create_directories(dir);
    return dir;
}

int run(std::vector<std::string> args, std::string* out_text = nullptr) {
    std::ostringstream out, err;
    const int code = run_command(args, out, err);
    if (out_text) *out_text = out.str();
    return code;
}

std::size_t count_lines(const std::string& text) {
    std::size_t n = 0;
    for (char c : text) n += c == '\n';
    return n;
}

void write_file(const fs::path& p, const std::string& text) {
    std::ofstream(p) << text;
}

} // namespace

TEST_CASE("config: empty text gives the documented defaults") {
    const RunConfig cfg = parse_config_text("");
    CHECK(cfg.lit.hyper.radius_scale == 3.5);
    CHECK(cfg.lit.hyper.hull_ratio_threshold == 1.3);
    CHECK(cfg.lit.hyper.fraction_ratio_threshold == 0.015);
    CHECK(cfg.lit.learners.svm.gamma == 0.001);
    CHECK(cfg.lit.learners.svm.C == 0.1);
    CHECK(cfg.lit.learners.forest.n_trees == 100);
    CHECK(cfg.lit.learners.ensemble.w_svm == 0.3);
    CHECK(cfg.lit.learners.ensemble.w_forest == 0.7);
    CHECK(cfg.lit.learners.ensemble.cutoff == 0.3);
    CHECK(cfg.lit.smote.n_synth_per_minority == 5);
    CHECK(cfg.lit.smote.n_major_per_synth == 1);
    CHECK(cfg.k_textual == 30);
    CHECK(config_entries(cfg) == config_entries(RunConfig{}));
}

TEST_CASE("config: unknown keys and bad values") {
    try {
        parse_config_text("gama = 0.1\n");
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(std::string(e.what()).find("gama") != std::string::npos);
    }
    CHECK_THROWS_AS(parse_config_text("svm.gamma = fast\n"), ConfigError);
    CHECK_THROWS_AS(parse_config_text("ensemble.w_svm = 0.5\n"), ConfigError);
    CHECK_THROWS_AS(parse_config_text("just words\n"), ConfigError);
}

TEST_CASE("config: one explicit key changes only that field") {
    const RunConfig cfg = parse_config_text("# comment\n\nensemble.cutoff = 0.5\n");
    CHECK(cfg.lit.learners.ensemble.cutoff == 0.5);
    auto got = config_entries(cfg);
    auto want = config_entries(RunConfig{});
    REQUIRE(got.size() == want.size());
    std::size_t differing = 0;
    for (std::size_t i = 0; i < got.size(); ++i) differing += got[i] != want[i];
    CHECK(differing == 1);
}

TEST_CASE("config: formatted output parses back to the same config") {
    RunConfig cfg = parse_config_text("lit.A = inf\nsmote.majority = undersample\nttl.method = nested\nseed = 99\n");
    const RunConfig again = parse_config_text(format_config(cfg));
    CHECK(config_entries(again) == config_entries(cfg));
}

TEST_CASE("cli: usage errors exit 2, data errors exit 3") {
    CHECK(run({}) == kExitUsage);
    CHECK(run({"frobnicate"}) == kExitUsage);
    const fs::path dir = scratch_dir();
    write_file(dir / "bad.cfg", "gama = 1\n");
    CHECK(run({"evaluate", "--config", (dir / "bad.cfg").string(), "--corpus", (dir / "none.jsonl").string(),
               "--out", (dir / "r.txt").string()}) == kExitUsage);
    CHECK(run({"ingest-check", "--corpus", (dir / "missing.jsonl").string()}) == kExitData);
    write_file(dir / "broken.jsonl", "{not json}\n");
    CHECK(run({"ingest-check", "--corpus", (dir / "broken.jsonl").string()}) == kExitData);
}

TEST_CASE("cli: synth, train, predict") {
    const fs::path dir = scratch_dir();
    const std::string corpus = (dir / "c.jsonl").string();
    const std::string model = (dir / "m.bin").string();
    const std::string cfg = (dir / "fast.cfg").string();
    write_file(cfg, "forest.trees = 20\ngeometry.k_per_class = 2\n");

    REQUIRE(run({"synth", "--n", "600", "--rate", "0.15", "--seed", "7", "--out", corpus}) == kExitOk);
    const Corpus c = load_corpus(corpus, "synthetic");
    CHECK(c.size() == 600);
    std::size_t litigated = 0;
    for (const auto& r : c.records) litigated += r.litigated();
    CHECK(litigated == 90);
    CHECK(run({"ingest-check", "--corpus", corpus}) == kExitOk);

    REQUIRE(run({"train", "--config", cfg, "--corpus", corpus, "--out", model}) == kExitOk);
    std::string predictions;
    REQUIRE(run({"predict", "--model", model, "--corpus", corpus}, &predictions) == kExitOk);
    CHECK(count_lines(predictions) == 600);
    CHECK(predictions.find("\"hull_ratio\"") != std::string::npos);

    SUBCASE("saved model predicts exactly like the in-memory model") {
        const RunConfig rc = parse_config(cfg);
        const TrainedPipeline fresh = train_pipeline(c, rc);
        const TrainedPipeline loaded = load_model(model);
        CHECK(loaded == fresh);
        const auto a = predict_pipeline(fresh, c);
        const auto b = predict_pipeline(loaded, c);
        REQUIRE(a.size() == b.size());
        for (std::size_t i = 0; i < a.size(); ++i) {
            CHECK(a[i].label == b[i].label);
            CHECK(a[i].ensemble_p == b[i].ensemble_p);
            CHECK(a[i].year_group == b[i].year_group);
        }
    }
    SUBCASE("a corrupted model file is a data error") {
        write_file(dir / "junk.bin", "#litiscope-model v0\n{}\n");
        CHECK(run({"predict", "--model", (dir / "junk.bin").string(), "--corpus", corpus}) == kExitData);
    }
}

TEST_CASE("cli: evaluate is byte-reproducible") {
    const fs::path dir = scratch_dir();
    const std::string corpus = (dir / "e.jsonl").string();
    const std::string cfg = (dir / "eval.cfg").string();
    write_file(cfg, "forest.trees = 10\ngeometry.k_per_class = 2\ncv.reps = 1\n");
    REQUIRE(run({"synth", "--n", "300", "--rate", "0.1", "--seed", "3", "--out", corpus}) == kExitOk);
    const std::string r1 = (dir / "r1.txt").string(), r2 = (dir / "r2.txt").string();
    REQUIRE(run({"evaluate", "--config", cfg, "--corpus", corpus, "--folds", "3", "--out", r1}) == kExitOk);
    REQUIRE(run({"evaluate", "--config", cfg, "--corpus", corpus, "--folds", "3", "--out", r2}) == kExitOk);
    std::stringstream a, b;
    a << std::ifstream(r1).rdbuf();
    b << std::ifstream(r2).rdbuf();
    CHECK(a.str() == b.str());
    CHECK_FALSE(a.str().empty());
}
