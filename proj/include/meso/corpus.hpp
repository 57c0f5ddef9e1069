#pragma once

#include <filesystem>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

namespace meso::corpus {

using StopwordSet = std::unordered_set<std::string>;
using LemmaMap = std::unordered_map<std::string, std::string>;

/// One book after preprocessing: ordered paragraphs of lowercased lemmas.
struct Document {
    std::string id;
    std::string author;
    std::string title;
    std::vector<std::vector<std::string>> paragraphs;
    bool boilerplate_markers_found = true;
};

struct ManifestEntry {
    std::string id;
    std::string author;
    std::string title;
    std::string path;
};

struct CorpusManifest {
    std::vector<ManifestEntry> entries;
};

// Throws std::runtime_error on malformed rows or duplicate ids.
CorpusManifest load_manifest(const std::filesystem::path& csv_path);

StopwordSet load_stopwords(const std::filesystem::path& path);
LemmaMap load_lemmas(const std::filesystem::path& path);

// Returns the body between the Project Gutenberg "*** START OF" / "*** END OF"
// marker lines when both are present; otherwise the input unchanged with
// *markers_found = false. Throws on empty or non-UTF-8 input.
std::string strip_boilerplate(const std::string& raw_text, bool* markers_found = nullptr);

// Splits on runs of blank lines, trims, drops empty segments.
// Throws if nothing remains.
std::vector<std::string> segment_paragraphs(const std::string& text);

// Alphabetic-run tokenizer, lowercase, stopword removal, lemma lookup
// (identity fallback). May return an empty list.
std::vector<std::string> preprocess(const std::string& paragraph,
                                    const StopwordSet& stopwords,
                                    const LemmaMap& lemmas);

// Full ingestion of one manifest entry. Paragraphs that preprocess to
// empty token lists are dropped; throws if the whole document ends up empty.
Document load_document(const ManifestEntry& entry,
                       const std::string& raw_text,
                       const StopwordSet& stopwords,
                       const LemmaMap& lemmas);

}  // namespace meso::corpus
