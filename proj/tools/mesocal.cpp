// mesocal: book -> mesoscopic network -> topological + image features ->
// unsupervised authorship attribution.

#include <CLI11.hpp>

#include <iostream>

#include "meso/pipeline.hpp"
#include "meso/textgen.hpp"

namespace {

struct CliOverrides {
    std::string config_path;
    std::string manifest, stopwords, lemmas, out_dir, cache_dir;
    int delta = -1, iterations = -1, canvas = -1, ring_width = -1, jobs = -1;
    double k_target = -1.0;
    long long layout_seed = -1, ml_seed = -1;
};

void add_common_options(CLI::App* cmd, CliOverrides& o) {
    cmd->add_option("--config", o.config_path, "JSON config file; flags override its values");
    cmd->add_option("--manifest", o.manifest, "corpus manifest CSV (id,author,title,path)");
    cmd->add_option("--stopwords", o.stopwords, "stopword list, one word per line");
    cmd->add_option("--lemmas", o.lemmas, "lemma table, surface<TAB>lemma per line");
    cmd->add_option("--delta", o.delta, "paragraphs per window");
    cmd->add_option("--k-target", o.k_target, "target average degree after thresholding");
    cmd->add_option("--layout-seed", o.layout_seed, "force layout RNG seed");
    cmd->add_option("--iterations", o.iterations, "force layout iterations");
    cmd->add_option("--canvas", o.canvas, "rendered image side in pixels");
    cmd->add_option("--ring-width", o.ring_width, "Fourier ring width in pixels");
    cmd->add_option("--ml-seed", o.ml_seed, "feature ranking / clustering seed");
    cmd->add_option("--out", o.out_dir, "output directory");
    cmd->add_option("--cache-dir", o.cache_dir, "cache directory (MESOCAL_CACHE overrides)");
    cmd->add_option("--jobs", o.jobs, "book-level parallelism");
}

meso::pipeline::RunConfig resolve_config(const CliOverrides& o) {
    meso::pipeline::RunConfig cfg;
    if (!o.config_path.empty()) cfg = meso::pipeline::load_config(o.config_path);
    if (!o.manifest.empty()) cfg.manifest = o.manifest;
    if (!o.stopwords.empty()) cfg.stopwords = o.stopwords;
    if (!o.lemmas.empty()) cfg.lemmas = o.lemmas;
    if (o.delta >= 0) cfg.delta = o.delta;
    if (o.k_target >= 0) cfg.k_target = o.k_target;
    if (o.layout_seed >= 0) cfg.layout_seed = static_cast<std::uint64_t>(o.layout_seed);
    if (o.iterations >= 0) cfg.layout_iterations = o.iterations;
    if (o.canvas >= 0) cfg.canvas = o.canvas;
    if (o.ring_width >= 0) cfg.ring_width = o.ring_width;
    if (o.ml_seed >= 0) cfg.ml_seed = static_cast<std::uint64_t>(o.ml_seed);
    if (!o.out_dir.empty()) cfg.out_dir = o.out_dir;
    if (!o.cache_dir.empty()) cfg.cache_dir = o.cache_dir;
    if (o.jobs >= 1) cfg.jobs = o.jobs;
    if (cfg.manifest.empty()) throw std::runtime_error("a manifest is required (--manifest)");
    if (cfg.stopwords.empty()) throw std::runtime_error("a stopword list is required (--stopwords)");
    if (cfg.lemmas.empty()) throw std::runtime_error("a lemma table is required (--lemmas)");
    return cfg;
}

int run_stages(const CliOverrides& o, const meso::pipeline::StageSelection& stages) {
    const auto cfg = resolve_config(o);
    const auto report = meso::pipeline::run_pipeline(cfg, stages);
    std::cerr << "cache hits: " << report.stats.cache_hits
              << ", computed: " << report.stats.computed << "\n";
    for (const auto& b : report.books)
        if (!b.ok) std::cerr << "FAILED " << b.id << ": " << b.error << "\n";
    const int failures = report.failures();
    if (failures > 0) {
        std::cerr << failures << " of " << report.books.size() << " books failed\n";
        return 2;
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"mesocal: authorship attribution from mesoscopic text networks"};
    app.require_subcommand(1);

    CliOverrides o;
    using Sel = meso::pipeline::StageSelection;
    std::map<std::string, Sel> stage_map;
    {
        Sel s;
        s.ingest = true;
        stage_map["ingest"] = s;
        s.network = true;
        stage_map["network"] = s;
        s.layout = true;
        stage_map["layout"] = s;
        s.render = true;
        stage_map["render"] = s;
        s.features = true;
        stage_map["features"] = s;
        Sel c;
        c.classify = true;
        stage_map["classify"] = c;
        Sel p;
        p.pairwise = true;
        stage_map["pairwise"] = p;
        Sel q;
        q.pca = true;
        stage_map["pca"] = q;
        stage_map["run-all"] = Sel::all();
    }
    const char* descriptions[] = {
        "preprocess books into token paragraphs",
        "build and threshold the mesoscopic networks",
        "compute force-directed embeddings",
        "rasterize and morphologically close the network images",
        "extract network and image feature CSVs",
        "rank features and run EM/KMeans experiments",
        "run the author-pair experiments",
        "project the top features with PCA",
    };
    int di = 0;
    for (const auto& name :
         {"ingest", "network", "layout", "render", "features", "classify", "pairwise", "pca"}) {
        auto* cmd = app.add_subcommand(name, descriptions[di++]);
        add_common_options(cmd, o);
    }
    add_common_options(app.add_subcommand("run-all", "run the whole pipeline"), o);

    auto* report_cmd = app.add_subcommand("report", "summarize experiment results");
    std::string report_dir = "out";
    report_cmd->add_option("--out", report_dir, "results directory");

    auto* gen_cmd = app.add_subcommand("gen-corpus", "write the bundled synthetic demo corpus");
    std::string gen_dir = "demo_corpus";
    int gen_length = 100;
    long long gen_seed = 2024;
    gen_cmd->add_option("--dir", gen_dir, "target directory");
    gen_cmd->add_option("--length-percent", gen_length, "book length scale (100 = full)");
    gen_cmd->add_option("--seed", gen_seed, "corpus generator seed");

    CLI11_PARSE(app, argc, argv);

    try {
        if (report_cmd->parsed()) {
            std::cout << meso::pipeline::report(report_dir);
            return 0;
        }
        if (gen_cmd->parsed()) {
            meso::textgen::DemoCorpusConfig cfg;
            cfg.length_percent = gen_length;
            cfg.seed = static_cast<std::uint64_t>(gen_seed);
            const auto manifest = meso::textgen::write_demo_corpus(gen_dir, cfg);
            std::cout << manifest.string() << "\n";
            return 0;
        }
        for (const auto& [name, sel] : stage_map)
            if (app.get_subcommand(name)->parsed()) return run_stages(o, sel);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
