#pragma once

#include <cstdint>
#include <filesystem>
#include <string>

namespace meso::textgen {

/// Deterministic synthetic corpus: 10 authors x `books_per_author` books,
/// each author with a distinct narrative-dynamics profile (topic count,
/// persistence, recurrence, paragraph length). Produces Gutenberg-style
/// plain-text files plus a manifest CSV.
struct DemoCorpusConfig {
    int books_per_author = 5;
    // Percentage applied to per-book paragraph counts; 100 gives books of
    // roughly 380-620 paragraphs, small values make fast test corpora.
    int length_percent = 100;
    int num_authors = 10;
    std::uint64_t seed = 2024;
};

// Writes books under dir/books/ and dir/manifest.csv; returns the manifest path.
std::filesystem::path write_demo_corpus(const std::filesystem::path& dir,
                                        const DemoCorpusConfig& cfg = {});

}  // namespace meso::textgen
