#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>

#include "meso/pipeline.hpp"
#include "meso/textgen.hpp"
#include "meso/util.hpp"

using namespace meso::pipeline;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    explicit TempDir(const std::string& name) : path(fs::temp_directory_path() / name) {
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

// Small deterministic corpus shared by the tests in this binary.
const fs::path& tiny_corpus() {
    static fs::path manifest = [] {
        const auto dir = fs::temp_directory_path() / "meso_pipe_corpus";
        fs::remove_all(dir);
        meso::textgen::DemoCorpusConfig cfg;
        cfg.num_authors = 2;
        cfg.books_per_author = 3;
        cfg.length_percent = 10;
        cfg.seed = 7;
        return meso::textgen::write_demo_corpus(dir, cfg);
    }();
    return manifest;
}

RunConfig tiny_config(const fs::path& out) {
    RunConfig cfg;
    cfg.manifest = tiny_corpus();
    cfg.stopwords = fs::path(TEST_DATA_DIR) / "stopwords_en.txt";
    cfg.lemmas = fs::path(TEST_DATA_DIR) / "lemmas_en.tsv";
    cfg.delta = 5;
    cfg.k_target = 8.0;
    cfg.layout_iterations = 50;
    cfg.canvas = 128;
    cfg.ring_width = 8;
    cfg.lacunarity_radii = {2, 3};
    cfg.out_dir = out;
    return cfg;
}

}  // namespace

TEST_CASE("load_config parses values and rejects unknown keys") {
    TempDir tmp("meso_pipe_cfg");
    meso::write_file(tmp.path / "ok.json",
                     R"({"delta": 7, "k_target": 12.5, "canvas": 256, "manifest": "m.csv"})");
    const auto cfg = load_config(tmp.path / "ok.json");
    CHECK(cfg.delta == 7);
    CHECK(cfg.k_target == 12.5);
    CHECK(cfg.canvas == 256);
    CHECK(cfg.manifest == fs::path("m.csv"));
    // untouched keys keep their defaults
    CHECK(cfg.layout_seed == 42);
    CHECK(cfg.ring_width == 15);

    meso::write_file(tmp.path / "bad.json", R"({"detla": 7})");
    CHECK_THROWS_AS(load_config(tmp.path / "bad.json"), std::runtime_error);
    meso::write_file(tmp.path / "broken.json", "{");
    CHECK_THROWS_AS(load_config(tmp.path / "broken.json"), std::runtime_error);
}

TEST_CASE("run_pipeline validates configuration") {
    TempDir tmp("meso_pipe_badcfg");
    auto cfg = tiny_config(tmp.path / "out");
    cfg.delta = 0;
    CHECK_THROWS_AS(run_pipeline(cfg, StageSelection::through_features()), std::runtime_error);
}

TEST_CASE("pipeline produces per-book artifacts and feature tables") {
    TempDir tmp("meso_pipe_run");
    const auto cfg = tiny_config(tmp.path / "out");
    const auto report = run_pipeline(cfg, StageSelection::through_features());
    CHECK(report.failures() == 0);
    CHECK(report.books.size() == 6);
    CHECK(report.stats.computed > 0);
    for (const auto& b : report.books) {
        CHECK(fs::exists(cfg.out_dir / "tokens" / (b.id + ".txt")));
        CHECK(fs::exists(cfg.out_dir / "networks" / (b.id + ".edges")));
        CHECK(fs::exists(cfg.out_dir / "networks" / (b.id + ".json")));
        CHECK(fs::exists(cfg.out_dir / "embeddings" / (b.id + ".csv")));
        CHECK(fs::exists(cfg.out_dir / "images" / (b.id + ".png")));
    }
    const auto nf = meso::read_file(cfg.out_dir / "features" / "nf.csv");
    const auto ifc = meso::read_file(cfg.out_dir / "features" / "if.csv");
    CHECK(nf.find("nf.access.h2.mean") != std::string::npos);
    CHECK(ifc.find("if.area") != std::string::npos);
    CHECK(fs::exists(cfg.out_dir / "run_config.json"));
}

TEST_CASE("second run is served from cache and is byte-identical") {
    TempDir tmp("meso_pipe_cache");
    auto cfg = tiny_config(tmp.path / "out1");
    cfg.cache_dir = tmp.path / "cache";
    const auto first = run_pipeline(cfg, StageSelection::through_features());
    REQUIRE(first.failures() == 0);
    const auto nf1 = meso::read_file(cfg.out_dir / "features" / "nf.csv");
    const auto if1 = meso::read_file(cfg.out_dir / "features" / "if.csv");

    auto cfg2 = cfg;
    cfg2.out_dir = tmp.path / "out2";
    const auto second = run_pipeline(cfg2, StageSelection::through_features());
    CHECK(second.failures() == 0);
    CHECK(second.stats.computed == 0);
    CHECK(second.stats.cache_hits > 0);
    CHECK(meso::read_file(cfg2.out_dir / "features" / "nf.csv") == nf1);
    CHECK(meso::read_file(cfg2.out_dir / "features" / "if.csv") == if1);
}

TEST_CASE("full pipeline is deterministic across fresh caches") {
    TempDir tmp("meso_pipe_det");
    auto a = tiny_config(tmp.path / "outA");
    a.cache_dir = tmp.path / "cacheA";
    auto b = tiny_config(tmp.path / "outB");
    b.cache_dir = tmp.path / "cacheB";
    REQUIRE(run_pipeline(a, StageSelection::through_features()).failures() == 0);
    REQUIRE(run_pipeline(b, StageSelection::through_features()).failures() == 0);
    for (const std::string f : {"features/nf.csv", "features/if.csv"})
        CHECK(meso::read_file(a.out_dir / f) == meso::read_file(b.out_dir / f));
}

TEST_CASE("changing delta keeps the token cache but recomputes networks") {
    TempDir tmp("meso_pipe_delta");
    auto cfg = tiny_config(tmp.path / "out");
    cfg.cache_dir = tmp.path / "cache";
    REQUIRE(run_pipeline(cfg, StageSelection::through_features()).failures() == 0);

    auto cfg2 = cfg;
    cfg2.delta = 6;
    cfg2.out_dir = tmp.path / "out2";
    const auto rerun = run_pipeline(cfg2, StageSelection::through_features());
    CHECK(rerun.failures() == 0);
    // token stage is shared (delta does not contribute to the corpus key);
    // everything downstream is recomputed
    CHECK(rerun.stats.cache_hits >= 6);
    CHECK(rerun.stats.computed >= 6 * 4);  // network/netfeat/layout/render at least
}

TEST_CASE("a corrupt book fails without sinking the rest") {
    TempDir tmp("meso_pipe_corrupt");
    // copy the tiny corpus manifest and add a broken entry
    const auto src = tiny_corpus();
    const auto dir = tmp.path / "corpus";
    fs::create_directories(dir / "books");
    for (const auto& e : fs::directory_iterator(src.parent_path() / "books"))
        fs::copy_file(e.path(), dir / "books" / e.path().filename());
    std::string manifest = meso::read_file(src);
    meso::write_file(dir / "books" / "bad.txt", std::string("\xff\xfe not utf8"));
    manifest += "zz01,Nobody,Broken,books/bad.txt\n";
    manifest += "zz02,Nobody,Missing,books/does_not_exist.txt\n";
    meso::write_file(dir / "manifest.csv", manifest);

    auto cfg = tiny_config(tmp.path / "out");
    cfg.manifest = dir / "manifest.csv";
    const auto report = run_pipeline(cfg, StageSelection::through_features());
    CHECK(report.failures() == 2);
    CHECK(report.books.size() == 8);
    int ok = 0;
    for (const auto& b : report.books)
        if (b.ok) ++ok;
    CHECK(ok == 6);
    // failed rows are excluded from the feature tables
    const auto nf = meso::read_file(cfg.out_dir / "features" / "nf.csv");
    CHECK(nf.find("zz01") == std::string::npos);
    CHECK(nf.find("zz02") == std::string::npos);
}

TEST_CASE("classification stages emit result files") {
    TempDir tmp("meso_pipe_ml");
    auto cfg = tiny_config(tmp.path / "out");
    cfg.cache_dir = tmp.path / "cache";
    const auto report = run_pipeline(cfg, StageSelection::all());
    CHECK(report.failures() == 0);
    for (const std::string set : {"if", "nf", "ifnf"}) {
        CHECK(fs::exists(cfg.out_dir / "results" / ("ranking_" + set + ".json")));
        CHECK(fs::exists(cfg.out_dir / "results" / (set + "_EM.json")));
        CHECK(fs::exists(cfg.out_dir / "results" / (set + "_KMeans.json")));
        CHECK(fs::exists(cfg.out_dir / "results" / ("pairwise_" + set + ".csv")));
    }
    CHECK(fs::exists(cfg.out_dir / "results" / "pca.json"));
    CHECK(fs::exists(cfg.out_dir / "results" / "pca_scatter.svg"));
    CHECK(fs::exists(cfg.out_dir / "results" / "pca_weights.svg"));

    const auto summary = meso::pipeline::report(cfg.out_dir);
    CHECK(summary.find("IF+NF") != std::string::npos);
    CHECK(summary.find('%') != std::string::npos);
    CHECK(summary.find("absent") == std::string::npos);
}

TEST_CASE("MESOCAL_CACHE environment variable overrides the cache dir") {
    TempDir tmp("meso_pipe_env");
    const auto env_cache = tmp.path / "env_cache";
    setenv("MESOCAL_CACHE", env_cache.c_str(), 1);
    auto cfg = tiny_config(tmp.path / "out");
    cfg.cache_dir = tmp.path / "ignored";
    const auto report = run_pipeline(cfg, StageSelection::through_features());
    unsetenv("MESOCAL_CACHE");
    CHECK(report.failures() == 0);
    CHECK(fs::exists(env_cache));
    CHECK(!fs::exists(tmp.path / "ignored"));
}
