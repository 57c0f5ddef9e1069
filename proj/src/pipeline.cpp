#include "meso/pipeline.hpp"

#include <json.hpp>

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "meso/corpus.hpp"
#include "meso/layout.hpp"
#include "meso/mesonet.hpp"
#include "meso/netmetrics.hpp"
#include "meso/raster.hpp"
#include "meso/util.hpp"

namespace meso::pipeline {

using nlohmann::json;

std::filesystem::path RunConfig::effective_cache_dir() const {
    if (const char* env = std::getenv("MESOCAL_CACHE"); env && *env) return env;
    if (!cache_dir.empty()) return cache_dir;
    return out_dir / "cache";
}

std::string RunConfig::metadata_json() const {
    json j;
    j["delta"] = delta;
    j["k_target"] = k_target;
    j["layout_seed"] = layout_seed;
    j["layout_iterations"] = layout_iterations;
    j["canvas"] = canvas;
    j["ring_width"] = ring_width;
    j["lacunarity_radii"] = lacunarity_radii;
    j["ml_seed"] = ml_seed;
    return j.dump();
}

RunConfig load_config(const std::filesystem::path& json_path) {
    json j;
    try {
        j = json::parse(read_file(json_path));
    } catch (const std::exception& e) {
        throw std::runtime_error("config parse error in " + json_path.string() + ": " + e.what());
    }
    RunConfig cfg;
    const std::vector<std::string> known = {
        "manifest", "stopwords", "lemmas", "delta", "k_target", "layout_seed",
        "layout_iterations", "canvas", "ring_width", "lacunarity_radii", "ml_seed",
        "out_dir", "cache_dir", "jobs"};
    for (auto it = j.begin(); it != j.end(); ++it)
        if (std::find(known.begin(), known.end(), it.key()) == known.end())
            throw std::runtime_error("unknown config key: " + it.key());
    if (j.contains("manifest")) cfg.manifest = j["manifest"].get<std::string>();
    if (j.contains("stopwords")) cfg.stopwords = j["stopwords"].get<std::string>();
    if (j.contains("lemmas")) cfg.lemmas = j["lemmas"].get<std::string>();
    if (j.contains("delta")) cfg.delta = j["delta"].get<int>();
    if (j.contains("k_target")) cfg.k_target = j["k_target"].get<double>();
    if (j.contains("layout_seed")) cfg.layout_seed = j["layout_seed"].get<std::uint64_t>();
    if (j.contains("layout_iterations")) cfg.layout_iterations = j["layout_iterations"].get<int>();
    if (j.contains("canvas")) cfg.canvas = j["canvas"].get<int>();
    if (j.contains("ring_width")) cfg.ring_width = j["ring_width"].get<int>();
    if (j.contains("lacunarity_radii"))
        cfg.lacunarity_radii = j["lacunarity_radii"].get<std::vector<int>>();
    if (j.contains("ml_seed")) cfg.ml_seed = j["ml_seed"].get<std::uint64_t>();
    if (j.contains("out_dir")) cfg.out_dir = j["out_dir"].get<std::string>();
    if (j.contains("cache_dir")) cfg.cache_dir = j["cache_dir"].get<std::string>();
    if (j.contains("jobs")) cfg.jobs = j["jobs"].get<int>();
    return cfg;
}

int PipelineReport::failures() const {
    int n = 0;
    for (const auto& b : books)
        if (!b.ok) ++n;
    return n;
}

StageSelection StageSelection::all() {
    StageSelection s = through_features();
    s.classify = s.pairwise = s.pca = true;
    return s;
}

StageSelection StageSelection::through_features() {
    StageSelection s;
    s.ingest = s.network = s.layout = s.render = s.features = true;
    return s;
}

namespace {

std::string hash_name(std::uint64_t key) {
    char buf[24];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(key));
    return buf;
}

class Cache {
public:
    Cache(std::filesystem::path dir, StageStats* stats, std::mutex* mu)
        : dir_(std::move(dir)), stats_(stats), mu_(mu) {}

    std::optional<std::string> load(std::uint64_t key, const std::string& ext) const {
        const auto p = dir_ / (hash_name(key) + "." + ext);
        if (!std::filesystem::exists(p)) return std::nullopt;
        auto content = read_file(p);
        std::lock_guard lock(*mu_);
        ++stats_->cache_hits;
        return content;
    }

    void store(std::uint64_t key, const std::string& ext, const std::string& content) const {
        write_file(dir_ / (hash_name(key) + "." + ext), content);
        std::lock_guard lock(*mu_);
        ++stats_->computed;
    }

private:
    std::filesystem::path dir_;
    StageStats* stats_;
    std::mutex* mu_;
};

std::string serialize_tokens(const corpus::Document& doc) {
    std::string out;
    for (const auto& para : doc.paragraphs) {
        for (size_t i = 0; i < para.size(); ++i) {
            if (i) out += ' ';
            out += para[i];
        }
        out += '\n';
    }
    return out;
}

std::vector<std::vector<std::string>> parse_tokens(const std::string& text) {
    std::vector<std::vector<std::string>> paragraphs;
    for (const auto& line : split_lines(text)) {
        if (line.empty()) continue;
        std::vector<std::string> toks;
        std::istringstream ss(line);
        std::string t;
        while (ss >> t) toks.push_back(t);
        if (!toks.empty()) paragraphs.push_back(std::move(toks));
    }
    return paragraphs;
}

std::string feature_vector_json(const features::FeatureVector& fv) {
    json j;
    j["ids"] = fv.ids;
    std::vector<json> vals;
    for (Eigen::Index i = 0; i < fv.values.size(); ++i) {
        const double v = fv.values[i];
        if (std::isnan(v)) vals.emplace_back(nullptr);
        else vals.emplace_back(v);
    }
    j["values"] = vals;
    return j.dump();
}

features::FeatureVector parse_feature_vector(const std::string& text) {
    const json j = json::parse(text);
    features::FeatureVector fv;
    fv.ids = j["ids"].get<std::vector<std::string>>();
    const auto& vals = j["values"];
    fv.values.resize(static_cast<Eigen::Index>(vals.size()));
    for (size_t i = 0; i < vals.size(); ++i)
        fv.values[static_cast<Eigen::Index>(i)] =
            vals[i].is_null() ? std::nan("") : vals[i].get<double>();
    return fv;
}

struct BookArtifacts {
    features::FeatureVector network_features;
    features::FeatureVector image_features;
    bool has_nf = false;
    bool has_if = false;
};

struct StageContext {
    const RunConfig& cfg;
    const StageSelection& stages;
    const Cache& cache;
    const corpus::StopwordSet& stopwords;
    const corpus::LemmaMap& lemmas;
    std::uint64_t aux_hash;  // stopword+lemma file content hash
    std::filesystem::path manifest_dir;
};

void process_book(const StageContext& ctx, const corpus::ManifestEntry& entry,
                  BookArtifacts& artifacts) {
    const auto& cfg = ctx.cfg;
    auto src_path = std::filesystem::path(entry.path);
    if (src_path.is_relative()) src_path = ctx.manifest_dir / src_path;
    const std::string raw = read_file(src_path);

    // --- ingest ---
    const std::uint64_t corpus_key =
        fnv1a64("corpus-v1") ^ fnv1a64(raw) ^ ctx.aux_hash;
    std::string tokens_text;
    if (auto cached = ctx.cache.load(corpus_key, "tokens")) {
        tokens_text = *cached;
    } else {
        const auto doc = corpus::load_document(entry, raw, ctx.stopwords, ctx.lemmas);
        tokens_text = serialize_tokens(doc);
        ctx.cache.store(corpus_key, "tokens", tokens_text);
    }
    write_file(cfg.out_dir / "tokens" / (entry.id + ".txt"), tokens_text);
    if (!ctx.stages.network && !ctx.stages.layout && !ctx.stages.render && !ctx.stages.features)
        return;

    // --- network ---
    const std::uint64_t net_key = fnv1a64("network-v1") ^ corpus_key ^
                                  fnv1a64(std::to_string(cfg.delta) + "|" +
                                          format_double(cfg.k_target));
    corpus::Document doc;
    doc.id = entry.id;
    doc.author = entry.author;
    doc.title = entry.title;
    doc.paragraphs = parse_tokens(tokens_text);

    mesonet::MesoNetwork thresholded;
    if (auto cached = ctx.cache.load(net_key, "edges")) {
        const json sidecar = json::parse(*ctx.cache.load(net_key, "json"));
        thresholded = mesonet::parse_edge_list(*cached, sidecar["N"].get<int>(),
                                               mesonet::Stage::thresholded);
    } else {
        const auto windows = mesonet::build_windows(doc, cfg.delta);
        const auto weighted = mesonet::build_weighted_network(windows);
        thresholded = mesonet::threshold_to_avg_degree(weighted, cfg.k_target);
        ctx.cache.store(net_key, "edges", mesonet::dump_edge_list(thresholded));
        json sidecar;
        sidecar["N"] = thresholded.num_nodes;
        sidecar["delta"] = cfg.delta;
        sidecar["k_target"] = cfg.k_target;
        sidecar["realized_avg_degree"] = thresholded.realized_avg_degree;
        ctx.cache.store(net_key, "json", sidecar.dump());
    }
    {
        const auto sidecar = *ctx.cache.load(net_key, "json");
        write_file(cfg.out_dir / "networks" / (entry.id + ".edges"),
                   mesonet::dump_edge_list(thresholded));
        write_file(cfg.out_dir / "networks" / (entry.id + ".json"), sidecar);
    }
    const auto graph = netmetrics::Graph::from_network(thresholded);

    // --- network features ---
    if (ctx.stages.features) {
        const std::uint64_t nf_key = fnv1a64("netfeat-v1") ^ net_key;
        if (auto cached = ctx.cache.load(nf_key, "json")) {
            artifacts.network_features = parse_feature_vector(*cached);
        } else {
            artifacts.network_features = netmetrics::network_feature_vector(graph);
            ctx.cache.store(nf_key, "json", feature_vector_json(artifacts.network_features));
        }
        artifacts.has_nf = true;
    }
    if (!ctx.stages.layout && !ctx.stages.render) return;

    // --- layout ---
    const std::uint64_t layout_key =
        fnv1a64("layout-v1") ^ net_key ^
        fnv1a64(std::to_string(cfg.layout_seed) + "|" + std::to_string(cfg.layout_iterations));
    layout::Embedding emb;
    if (auto cached = ctx.cache.load(layout_key, "csv")) {
        emb = layout::parse_embedding_csv(*cached);
    } else {
        emb = layout::force_layout(graph, cfg.layout_seed, cfg.layout_iterations);
        ctx.cache.store(layout_key, "csv", layout::dump_embedding_csv(emb));
    }
    emb.seed = cfg.layout_seed;
    emb.iterations = cfg.layout_iterations;
    {
        write_file(cfg.out_dir / "embeddings" / (entry.id + ".csv"),
                   layout::dump_embedding_csv(emb));
        json sidecar;
        sidecar["seed"] = cfg.layout_seed;
        sidecar["iterations"] = cfg.layout_iterations;
        write_file(cfg.out_dir / "embeddings" / (entry.id + ".json"), sidecar.dump());
    }
    if (!ctx.stages.render) return;

    // --- render: rasterize + size-adaptive closing ---
    const std::uint64_t render_key =
        fnv1a64("render-v1") ^ layout_key ^ fnv1a64(std::to_string(cfg.canvas));
    raster::BinaryImage closed;
    if (auto cached = ctx.cache.load(render_key, "pbm")) {
        closed = raster::from_pbm(*cached);
    } else {
        const auto img = raster::rasterize(emb, graph, cfg.canvas);
        const int radius = raster::kernel_radius(img);
        closed = raster::morph_close(img, radius);
        ctx.cache.store(render_key, "pbm", raster::to_pbm(closed));
        json sidecar;
        sidecar["canvas"] = cfg.canvas;
        sidecar["kernel_radius"] = radius;
        ctx.cache.store(render_key, "json", sidecar.dump());
    }
    raster::write_png(closed, cfg.out_dir / "images" / (entry.id + ".png"));
    if (auto sidecar = ctx.cache.load(render_key, "json"))
        write_file(cfg.out_dir / "images" / (entry.id + ".json"), *sidecar);
    if (closed.object_pixel_count() == 0)
        throw std::runtime_error("rendered image has no object pixels: " + entry.id);

    // --- image features ---
    if (ctx.stages.features) {
        std::string radii_tag;
        for (int r : cfg.lacunarity_radii) radii_tag += std::to_string(r) + ",";
        const std::uint64_t if_key =
            fnv1a64("imfeat-v1") ^ render_key ^
            fnv1a64(std::to_string(cfg.ring_width) + "|" + radii_tag);
        if (auto cached = ctx.cache.load(if_key, "json")) {
            artifacts.image_features = parse_feature_vector(*cached);
        } else {
            imfeat::ImfeatConfig icfg;
            icfg.lacunarity_radii = cfg.lacunarity_radii;
            icfg.ring_width = cfg.ring_width;
            artifacts.image_features = imfeat::image_feature_vector(closed, icfg);
            ctx.cache.store(if_key, "json", feature_vector_json(artifacts.image_features));
        }
        artifacts.has_if = true;
    }
}

features::FeatureTable load_table(const std::filesystem::path& p) {
    return features::from_csv(read_file(p));
}

features::FeatureTable concat_tables(const features::FeatureTable& a,
                                     const features::FeatureTable& b) {
    if (a.row_ids != b.row_ids) throw std::runtime_error("feature tables have mismatched rows");
    features::FeatureTable out = a;
    out.col_ids.insert(out.col_ids.end(), b.col_ids.begin(), b.col_ids.end());
    out.values.conservativeResize(Eigen::NoChange, a.values.cols() + b.values.cols());
    out.values.rightCols(b.values.cols()) = b.values;
    return out;
}

std::string experiment_json(const mlpipe::ExperimentResult& res, const std::string& set_name) {
    json j;
    j["method"] = res.method;
    j["feature_set"] = set_name;
    j["seed"] = res.seed;
    j["best_accuracy"] = res.best_accuracy;
    j["best_n"] = res.best_n;
    j["curve"] = res.curve;
    return j.dump(2) + "\n";
}

std::string pairwise_csv(const mlpipe::PairwiseResult& pw) {
    std::string out = "author";
    for (const auto& a : pw.authors) out += "," + a;
    out += '\n';
    for (Eigen::Index r = 0; r < pw.accuracy.rows(); ++r) {
        out += pw.authors[r];
        for (Eigen::Index c = 0; c < pw.accuracy.cols(); ++c) {
            out += ',';
            if (!std::isnan(pw.accuracy(r, c))) out += format_double(pw.accuracy(r, c));
        }
        out += '\n';
    }
    return out;
}

const char* kPalette[10] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd",
                            "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};

std::string pca_scatter_svg(const mlpipe::PcaResult& pca,
                            const std::vector<std::string>& authors) {
    std::vector<std::string> distinct;
    for (const auto& a : authors)
        if (std::find(distinct.begin(), distinct.end(), a) == distinct.end())
            distinct.push_back(a);
    const double w = 640, h = 520, margin = 50;
    const double min_x = pca.coords.col(0).minCoeff(), max_x = pca.coords.col(0).maxCoeff();
    const double min_y = pca.coords.col(1).minCoeff(), max_y = pca.coords.col(1).maxCoeff();
    const double sx = (w - 2 * margin) / std::max(max_x - min_x, 1e-12);
    const double sy = (h - 2 * margin) / std::max(max_y - min_y, 1e-12);
    std::string svg = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" +
                      format_double(w + 160) + "\" height=\"" + format_double(h) + "\">\n";
    svg += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    for (Eigen::Index i = 0; i < pca.coords.rows(); ++i) {
        const auto color_idx =
            std::find(distinct.begin(), distinct.end(), authors[i]) - distinct.begin();
        const double px = margin + (pca.coords(i, 0) - min_x) * sx;
        const double py = h - margin - (pca.coords(i, 1) - min_y) * sy;
        svg += "<circle cx=\"" + format_double(px) + "\" cy=\"" + format_double(py) +
               "\" r=\"5\" fill=\"" + kPalette[color_idx % 10] + "\"/>\n";
    }
    for (size_t a = 0; a < distinct.size(); ++a) {
        const double ly = 30 + 22.0 * static_cast<double>(a);
        svg += "<circle cx=\"" + format_double(w + 20) + "\" cy=\"" + format_double(ly) +
               "\" r=\"5\" fill=\"" + kPalette[a % 10] + "\"/>\n";
        svg += "<text x=\"" + format_double(w + 32) + "\" y=\"" + format_double(ly + 4) +
               "\" font-size=\"13\">" + distinct[a] + "</text>\n";
    }
    svg += "</svg>\n";
    return svg;
}

std::string pca_weights_svg(const mlpipe::PcaResult& pca) {
    const auto n = static_cast<int>(pca.feature_ids.size());
    const double bar_w = 22, panel_h = 220, label_h = 150;
    const double w = 60 + n * bar_w + 20;
    const double h = 2 * (panel_h + label_h) + 40;
    std::string svg = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + format_double(w) +
                      "\" height=\"" + format_double(h) + "\">\n";
    svg += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    for (int pc = 0; pc < 2 && pc < pca.abs_weights.cols(); ++pc) {
        const double top = 20 + pc * (panel_h + label_h + 20);
        const double maxw = std::max(pca.abs_weights.col(pc).maxCoeff(), 1e-12);
        svg += "<text x=\"10\" y=\"" + format_double(top + 12) + "\" font-size=\"14\">PC" +
               std::to_string(pc + 1) + "</text>\n";
        for (int f = 0; f < n; ++f) {
            const double bh = pca.abs_weights(f, pc) / maxw * (panel_h - 20);
            const double x = 60 + f * bar_w;
            svg += "<rect x=\"" + format_double(x) + "\" y=\"" +
                   format_double(top + panel_h - bh) + "\" width=\"" + format_double(bar_w - 4) +
                   "\" height=\"" + format_double(bh) + "\" fill=\"#4682b4\"/>\n";
            svg += "<text x=\"" + format_double(x + bar_w / 2) + "\" y=\"" +
                   format_double(top + panel_h + 8) + "\" font-size=\"10\" transform=\"rotate(60 " +
                   format_double(x + bar_w / 2) + " " + format_double(top + panel_h + 8) + ")\">" +
                   pca.feature_ids[f] + "</text>\n";
        }
    }
    svg += "</svg>\n";
    return svg;
}

}  // namespace

PipelineReport run_pipeline(const RunConfig& cfg, const StageSelection& stages) {
    if (cfg.delta < 1 || cfg.k_target <= 0 || cfg.canvas < 64 || cfg.ring_width < 1 ||
        cfg.jobs < 1)
        throw std::runtime_error("invalid configuration values");
    PipelineReport report;

    const auto manifest = corpus::load_manifest(cfg.manifest);
    const auto stopwords = corpus::load_stopwords(cfg.stopwords);
    const auto lemmas = corpus::load_lemmas(cfg.lemmas);
    const std::uint64_t aux_hash =
        fnv1a64(read_file(cfg.stopwords)) ^ fnv1a64(read_file(cfg.lemmas));

    std::filesystem::create_directories(cfg.out_dir);
    write_file(cfg.out_dir / "run_config.json", cfg.metadata_json() + "\n");
    std::mutex stats_mu;
    const Cache cache(cfg.effective_cache_dir(), &report.stats, &stats_mu);

    StageContext ctx{cfg, stages, cache, stopwords, lemmas, aux_hash,
                     cfg.manifest.has_parent_path() ? cfg.manifest.parent_path()
                                                    : std::filesystem::path(".")};

    const auto n_books = manifest.entries.size();
    std::vector<BookArtifacts> artifacts(n_books);
    report.books.resize(n_books);

    const bool per_book =
        stages.ingest || stages.network || stages.layout || stages.render || stages.features;
    if (per_book) {
        std::atomic<size_t> next{0};
        auto worker = [&] {
            while (true) {
                const size_t i = next.fetch_add(1);
                if (i >= n_books) break;
                report.books[i].id = manifest.entries[i].id;
                try {
                    process_book(ctx, manifest.entries[i], artifacts[i]);
                } catch (const std::exception& e) {
                    report.books[i].ok = false;
                    report.books[i].error = e.what();
                }
            }
        };
        if (cfg.jobs <= 1) {
            worker();
        } else {
            std::vector<std::thread> threads;
            for (int t = 0; t < cfg.jobs; ++t) threads.emplace_back(worker);
            for (auto& t : threads) t.join();
        }
    } else {
        for (size_t i = 0; i < n_books; ++i) report.books[i].id = manifest.entries[i].id;
    }

    if (stages.features) {
        auto build_table = [&](bool image) {
            features::FeatureTable t;
            for (size_t i = 0; i < n_books; ++i) {
                if (!report.books[i].ok) continue;
                const auto& fv =
                    image ? artifacts[i].image_features : artifacts[i].network_features;
                if (t.col_ids.empty()) {
                    t.col_ids = fv.ids;
                    t.values.resize(0, static_cast<Eigen::Index>(fv.ids.size()));
                }
                t.row_ids.push_back(manifest.entries[i].id);
                t.authors.push_back(manifest.entries[i].author);
                t.values.conservativeResize(t.values.rows() + 1, Eigen::NoChange);
                t.values.row(t.values.rows() - 1) = fv.values.transpose();
            }
            return t;
        };
        write_file(cfg.out_dir / "features" / "if.csv", features::to_csv(build_table(true)));
        write_file(cfg.out_dir / "features" / "nf.csv", features::to_csv(build_table(false)));
    }

    if (stages.classify || stages.pairwise || stages.pca) {
        const auto table_if = load_table(cfg.out_dir / "features" / "if.csv");
        const auto table_nf = load_table(cfg.out_dir / "features" / "nf.csv");
        const auto table_both = concat_tables(table_if, table_nf);
        const std::vector<std::pair<std::string, const features::FeatureTable*>> sets = {
            {"if", &table_if}, {"nf", &table_nf}, {"ifnf", &table_both}};
        std::vector<std::string> distinct;
        for (const auto& a : table_if.authors)
            if (std::find(distinct.begin(), distinct.end(), a) == distinct.end())
                distinct.push_back(a);
        const int k = static_cast<int>(distinct.size());

        if (stages.classify) {
            for (const auto& [name, table] : sets) {
                const auto standardized = mlpipe::standardize(*table);
                const auto ranking = mlpipe::svm_rank(standardized, cfg.ml_seed);
                write_file(cfg.out_dir / "results" / ("ranking_" + name + ".json"),
                           json(ranking).dump(2) + "\n");
                for (auto method : {mlpipe::Method::em, mlpipe::Method::kmeans}) {
                    auto res = mlpipe::sweep_top_n(standardized, ranking, method, k, cfg.ml_seed);
                    res.feature_set = name;
                    write_file(cfg.out_dir / "results" /
                                   (name + "_" + mlpipe::method_name(method) + ".json"),
                               experiment_json(res, name));
                }
            }
        }
        if (stages.pairwise) {
            for (const auto& [name, table] : sets) {
                const auto pw =
                    mlpipe::pairwise_experiments(*table, mlpipe::Method::em, cfg.ml_seed);
                write_file(cfg.out_dir / "results" / ("pairwise_" + name + ".csv"),
                           pairwise_csv(pw));
            }
        }
        if (stages.pca) {
            const auto standardized = mlpipe::standardize(table_both);
            const auto ranking = mlpipe::svm_rank(standardized, cfg.ml_seed);
            const int n_features = std::min<int>(14, static_cast<int>(ranking.size()));
            const auto pca = mlpipe::pca_project(standardized, ranking, n_features, 2);
            json j;
            j["feature_ids"] = pca.feature_ids;
            j["explained_ratio"] = std::vector<double>(
                pca.explained_ratio.data(), pca.explained_ratio.data() + pca.explained_ratio.size());
            std::vector<std::vector<double>> coords, weights;
            for (Eigen::Index r = 0; r < pca.coords.rows(); ++r)
                coords.push_back({pca.coords(r, 0), pca.coords(r, 1)});
            for (Eigen::Index r = 0; r < pca.abs_weights.rows(); ++r)
                weights.push_back({pca.abs_weights(r, 0), pca.abs_weights(r, 1)});
            j["coords"] = coords;
            j["abs_weights"] = weights;
            j["row_ids"] = standardized.row_ids;
            j["authors"] = standardized.authors;
            write_file(cfg.out_dir / "results" / "pca.json", j.dump(2) + "\n");
            write_file(cfg.out_dir / "results" / "pca_scatter.svg",
                       pca_scatter_svg(pca, standardized.authors));
            write_file(cfg.out_dir / "results" / "pca_weights.svg", pca_weights_svg(pca));
        }
    }
    return report;
}

std::string report(const std::filesystem::path& out_dir) {
    std::string out;
    out += "Feature set |   EM accuracy / n   | KMeans accuracy / n\n";
    out += "------------+---------------------+--------------------\n";
    for (const std::string set : {"if", "nf", "ifnf"}) {
        std::string row = set == "ifnf" ? "IF+NF" : (set == "if" ? "IF" : "NF");
        row.resize(12, ' ');
        row += "|";
        for (const std::string method : {"EM", "KMeans"}) {
            const auto p = out_dir / "results" / (set + "_" + method + ".json");
            std::string cell = " absent";
            if (std::filesystem::exists(p)) {
                const json j = json::parse(read_file(p));
                char buf[64];
                std::snprintf(buf, sizeof(buf), " %5.1f%% / %-3d",
                              j["best_accuracy"].get<double>() * 100.0,
                              j["best_n"].get<int>());
                cell = buf;
            }
            cell.resize(21, ' ');
            row += cell;
            if (method == "EM") row += "|";
        }
        out += row + "\n";
    }
    for (const std::string set : {"if", "nf", "ifnf"}) {
        const auto p = out_dir / "results" / ("pairwise_" + set + ".csv");
        if (std::filesystem::exists(p)) {
            out += "\nPairwise accuracies (" + set + "):\n";
            out += read_file(p);
        }
    }
    return out;
}

}  // namespace meso::pipeline
