#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "meso/features.hpp"
#include "meso/imfeat.hpp"
#include "meso/mlpipe.hpp"

namespace meso::pipeline {

struct RunConfig {
    std::filesystem::path manifest;
    std::filesystem::path stopwords;
    std::filesystem::path lemmas;
    int delta = 20;
    double k_target = 40.0;
    std::uint64_t layout_seed = 42;
    int layout_iterations = 500;
    int canvas = 1024;
    int ring_width = 15;
    std::vector<int> lacunarity_radii = {5, 10, 15, 20, 25, 31, 40, 50};
    std::uint64_t ml_seed = 1;
    std::filesystem::path out_dir = "out";
    std::filesystem::path cache_dir;  // default: out_dir / "cache"; env MESOCAL_CACHE overrides
    int jobs = 1;

    std::filesystem::path effective_cache_dir() const;
    std::string metadata_json() const;  // stamped into output sidecars
};

RunConfig load_config(const std::filesystem::path& json_path);

struct BookOutcome {
    std::string id;
    bool ok = true;
    std::string error;
};

struct StageStats {
    int cache_hits = 0;
    int computed = 0;
};

struct PipelineReport {
    std::vector<BookOutcome> books;
    StageStats stats;
    int failures() const;
};

// Which pipeline stages to run (orchestration entry points for the CLI
// subcommands; run-all enables everything).
struct StageSelection {
    bool ingest = false;
    bool network = false;
    bool layout = false;
    bool render = false;
    bool features = false;
    bool classify = false;
    bool pairwise = false;
    bool pca = false;
    static StageSelection all();
    // everything needed to produce the two feature CSVs
    static StageSelection through_features();
};

// Runs the selected stages over every manifest book, caching per-book stage
// outputs by content hash. Book failures are recorded, not fatal.
PipelineReport run_pipeline(const RunConfig& cfg, const StageSelection& stages);

// Emits the Table-2-shaped summary from the result JSONs in out_dir.
std::string report(const std::filesystem::path& out_dir);

}  // namespace meso::pipeline
