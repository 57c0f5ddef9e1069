#include "meso/corpus.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "meso/util.hpp"

namespace meso::corpus {

namespace {

bool is_valid_utf8(const std::string& s) {
    size_t i = 0;
    const auto n = s.size();
    while (i < n) {
        unsigned char c = s[i];
        size_t len;
        if (c < 0x80) len = 1;
        else if ((c & 0xE0) == 0xC0) len = 2;
        else if ((c & 0xF0) == 0xE0) len = 3;
        else if ((c & 0xF8) == 0xF0) len = 4;
        else return false;
        if (i + len > n) return false;
        for (size_t k = 1; k < len; ++k)
            if ((static_cast<unsigned char>(s[i + k]) & 0xC0) != 0x80) return false;
        i += len;
    }
    return true;
}

std::string trim(std::string_view s) {
    size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return std::string(s.substr(b, e - b));
}

// Minimal CSV field parser supporting double-quoted fields.
std::vector<std::string> parse_csv_row(const std::string& line) {
    std::vector<std::string> out;
    std::string field;
    bool quoted = false;
    for (size_t i = 0; i < line.size(); ++i) {
        char c = line[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') { field += '"'; ++i; }
                else quoted = false;
            } else field += c;
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            out.push_back(field);
            field.clear();
        } else if (c != '\r') {
            field += c;
        }
    }
    out.push_back(field);
    return out;
}

}  // namespace

CorpusManifest load_manifest(const std::filesystem::path& csv_path) {
    std::string content = read_file(csv_path);
    auto lines = split_lines(content);
    if (lines.empty()) throw std::runtime_error("manifest is empty: " + csv_path.string());
    auto header = parse_csv_row(lines[0]);
    if (header != std::vector<std::string>{"id", "author", "title", "path"})
        throw std::runtime_error("manifest header must be id,author,title,path: " + csv_path.string());
    CorpusManifest m;
    std::unordered_set<std::string> seen;
    for (size_t i = 1; i < lines.size(); ++i) {
        if (trim(lines[i]).empty()) continue;
        auto row = parse_csv_row(lines[i]);
        if (row.size() != 4)
            throw std::runtime_error("manifest row " + std::to_string(i + 1) + " has " +
                                     std::to_string(row.size()) + " fields, expected 4");
        if (!seen.insert(row[0]).second)
            throw std::runtime_error("duplicate manifest id: " + row[0]);
        m.entries.push_back({row[0], row[1], row[2], row[3]});
    }
    return m;
}

StopwordSet load_stopwords(const std::filesystem::path& path) {
    StopwordSet set;
    for (auto& line : split_lines(read_file(path))) {
        auto w = trim(line);
        if (!w.empty()) set.insert(w);
    }
    return set;
}

LemmaMap load_lemmas(const std::filesystem::path& path) {
    LemmaMap map;
    for (auto& line : split_lines(read_file(path))) {
        if (trim(line).empty()) continue;
        auto tab = line.find('\t');
        if (tab == std::string::npos)
            throw std::runtime_error("lemma file line missing tab: " + line);
        auto surface = trim(line.substr(0, tab));
        auto lemma = trim(line.substr(tab + 1));
        if (surface.empty() || lemma.empty())
            throw std::runtime_error("lemma file line malformed: " + line);
        map[surface] = lemma;
    }
    return map;
}

std::string strip_boilerplate(const std::string& raw_text, bool* markers_found) {
    if (raw_text.empty()) throw std::runtime_error("empty document");
    if (!is_valid_utf8(raw_text)) throw std::runtime_error("document is not valid UTF-8");

    auto lines = split_lines(raw_text);
    ptrdiff_t start = -1, end = -1;
    for (size_t i = 0; i < lines.size(); ++i) {
        const auto& l = lines[i];
        if (l.rfind("*** START OF", 0) == 0 && start < 0) start = static_cast<ptrdiff_t>(i);
        else if (l.rfind("*** END OF", 0) == 0 && end < 0 && start >= 0) end = static_cast<ptrdiff_t>(i);
    }
    if (start >= 0 && end > start) {
        if (markers_found) *markers_found = true;
        std::string body;
        for (ptrdiff_t i = start + 1; i < end; ++i) {
            body += lines[i];
            body += '\n';
        }
        return body;
    }
    if (markers_found) *markers_found = false;
    return raw_text;
}

std::vector<std::string> segment_paragraphs(const std::string& text) {
    if (text.empty()) throw std::runtime_error("cannot segment empty text");
    std::vector<std::string> paragraphs;
    std::string current;
    auto lines = split_lines(text);
    auto flush = [&] {
        auto p = trim(current);
        if (!p.empty()) paragraphs.push_back(std::move(p));
        current.clear();
    };
    for (auto& line : lines) {
        if (trim(line).empty()) flush();
        else {
            if (!current.empty()) current += '\n';
            current += line;
        }
    }
    flush();
    if (paragraphs.empty()) throw std::runtime_error("no paragraphs after segmentation");
    return paragraphs;
}

std::vector<std::string> preprocess(const std::string& paragraph,
                                    const StopwordSet& stopwords,
                                    const LemmaMap& lemmas) {
    std::vector<std::string> tokens;
    std::string word;
    auto flush = [&] {
        if (word.empty()) return;
        if (!stopwords.count(word)) {
            auto it = lemmas.find(word);
            tokens.push_back(it != lemmas.end() ? it->second : word);
        }
        word.clear();
    };
    for (unsigned char c : paragraph) {
        if (std::isalpha(c)) word += static_cast<char>(std::tolower(c));
        else flush();
    }
    flush();
    return tokens;
}

Document load_document(const ManifestEntry& entry,
                       const std::string& raw_text,
                       const StopwordSet& stopwords,
                       const LemmaMap& lemmas) {
    Document doc;
    doc.id = entry.id;
    doc.author = entry.author;
    doc.title = entry.title;
    std::string body;
    try {
        body = strip_boilerplate(raw_text, &doc.boilerplate_markers_found);
    } catch (const std::exception& e) {
        throw std::runtime_error("ingestion error for '" + entry.id + "': " + e.what());
    }
    for (auto& para : segment_paragraphs(body)) {
        auto tokens = preprocess(para, stopwords, lemmas);
        if (!tokens.empty()) doc.paragraphs.push_back(std::move(tokens));
    }
    if (doc.paragraphs.empty())
        throw std::runtime_error("document '" + entry.id + "' has no non-empty paragraphs");
    return doc;
}

}  // namespace meso::corpus
