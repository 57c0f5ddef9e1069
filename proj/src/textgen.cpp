#include "meso/textgen.hpp"

#include <random>
#include <stdexcept>
#include <vector>

#include "meso/util.hpp"

namespace meso::textgen {

namespace {

struct AuthorProfile {
    const char* name;
    int n_topics;
    double stay_prob;   // topic persistence per paragraph
    double hub_prob;    // chance of returning to topic 0
    bool cyclic;        // advance topics in order instead of jumping
    int para_len;       // mean words per paragraph
    double p_topic;     // share of topic-specific words
    int base_paragraphs;
};

// Ten deliberately spread narrative-dynamics profiles; the differences in
// topic count, persistence and recurrence shape the mesoscopic networks.
const AuthorProfile kProfiles[10] = {
    // Each profile aims at a distinct mesoscopic phenotype: topic run length
    // (1/(1-stay)) relative to the default 20-paragraph window, the share of
    // topic vocabulary, and the recurrence pattern (cyclic / jump / hub)
    // together decide whether the network is a filament, a ring of
    // communities, a few dense blobs, a hub-and-spokes, or a hairball.
    {"Arden", 16, 0.55, 0.00, false, 20, 0.12, 260},   // filament: sequential edges dominate
    {"Bellamy", 2, 0.995, 0.00, true, 28, 0.65, 640},  // two dense blobs
    {"Corwin", 10, 0.975, 0.00, true, 24, 0.60, 500},  // ring of ten communities
    {"Deverell", 6, 0.90, 0.35, false, 22, 0.55, 420}, // hub-and-spokes
    {"Ellsworth", 3, 0.50, 0.00, false, 34, 0.65, 360}, // hairball: topics mix everywhere
    {"Fairburn", 5, 0.95, 0.00, true, 26, 0.50, 560},  // coarse ring, run length ~ window
    {"Grantley", 20, 0.80, 0.00, false, 16, 0.25, 700}, // long sparse filament with shortcuts
    {"Holloway", 4, 0.99, 0.00, false, 30, 0.60, 480}, // four blobs, jump order
    {"Iverson", 8, 0.93, 0.10, true, 22, 0.45, 300},   // small ring with a hub
    {"Jardine", 12, 0.88, 0.00, true, 32, 0.35, 520},  // loose loop of short runs
};

const char* kStopwords[] = {"the", "of", "and", "a", "to", "in", "is", "it",
                            "that", "was", "he", "for", "on", "with", "as"};

std::uint64_t splitmix(std::uint64_t& s) {
    s += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = s;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

std::string make_word(std::uint64_t key, int unique_index) {
    static const char* onsets[] = {"b", "br", "c", "cl", "d", "dr", "f", "g",
                                   "gr", "h", "l", "m", "n", "p", "pr", "qu",
                                   "r", "s", "st", "t", "tr", "v", "w"};
    static const char* nuclei[] = {"a", "e", "i", "o", "u", "ae", "ei", "ou"};
    static const char* codas[] = {"", "n", "r", "l", "s", "m", "nd", "rt"};
    std::uint64_t s = key;
    std::string w;
    const int syllables = 2 + static_cast<int>(splitmix(s) % 2);
    for (int i = 0; i < syllables; ++i) {
        w += onsets[splitmix(s) % std::size(onsets)];
        w += nuclei[splitmix(s) % std::size(nuclei)];
        w += codas[splitmix(s) % std::size(codas)];
    }
    // unique alphabetic suffix so pools never collide
    int v = unique_index;
    for (int i = 0; i < 3; ++i) {
        w += static_cast<char>('a' + v % 26);
        v /= 26;
    }
    return w;
}

// Zipf-ish sampling: weight 1/(rank + 3).
int zipf_pick(std::mt19937_64& rng, int n, double total_weight) {
    double target = uniform01(rng) * total_weight;
    for (int r = 0; r < n; ++r) {
        target -= 1.0 / (r + 3.0);
        if (target <= 0.0) return r;
    }
    return n - 1;
}

double zipf_total(int n) {
    double t = 0.0;
    for (int r = 0; r < n; ++r) t += 1.0 / (r + 3.0);
    return t;
}

std::string wrap_text(const std::vector<std::string>& words, size_t width = 70) {
    std::string out;
    size_t line_len = 0;
    for (size_t i = 0; i < words.size(); ++i) {
        const auto& w = words[i];
        if (line_len > 0 && line_len + 1 + w.size() > width) {
            out += '\n';
            line_len = 0;
        } else if (line_len > 0) {
            out += ' ';
            ++line_len;
        }
        out += w;
        line_len += w.size();
    }
    return out;
}

}  // namespace

std::filesystem::path write_demo_corpus(const std::filesystem::path& dir,
                                        const DemoCorpusConfig& cfg) {
    if (cfg.num_authors < 1 || cfg.num_authors > 10)
        throw std::runtime_error("demo corpus supports 1..10 authors");
    if (cfg.length_percent < 1) throw std::runtime_error("length_percent must be positive");

    std::filesystem::create_directories(dir / "books");

    // Word pools. Pools are global so tf-idf sees a realistic shared core.
    int unique_counter = 0;
    const int common_n = 600, author_n = 200, topic_n = 80;
    std::vector<std::string> common_pool;
    std::uint64_t key_seed = cfg.seed * 0x2545f4914f6cdd1dULL + 17;
    for (int i = 0; i < common_n; ++i)
        common_pool.push_back(make_word(splitmix(key_seed), unique_counter++));
    std::vector<std::vector<std::string>> author_pool(cfg.num_authors);
    std::vector<std::vector<std::vector<std::string>>> topic_pool(cfg.num_authors);
    for (int a = 0; a < cfg.num_authors; ++a) {
        for (int i = 0; i < author_n; ++i)
            author_pool[a].push_back(make_word(splitmix(key_seed), unique_counter++));
        topic_pool[a].resize(kProfiles[a].n_topics);
        for (int t = 0; t < kProfiles[a].n_topics; ++t)
            for (int i = 0; i < topic_n; ++i)
                topic_pool[a][t].push_back(make_word(splitmix(key_seed), unique_counter++));
    }
    const double common_total = zipf_total(common_n);
    const double author_total = zipf_total(author_n);
    const double topic_total = zipf_total(topic_n);

    std::string manifest = "id,author,title,path\n";
    for (int a = 0; a < cfg.num_authors; ++a) {
        const auto& prof = kProfiles[a];
        for (int b = 0; b < cfg.books_per_author; ++b) {
            std::mt19937_64 rng(cfg.seed ^ (static_cast<std::uint64_t>(a) * 1000003ULL +
                                            static_cast<std::uint64_t>(b) * 7919ULL + 1));
            char idbuf[16];
            std::snprintf(idbuf, sizeof(idbuf), "a%02db%02d", a + 1, b + 1);
            const std::string id = idbuf;
            const std::string title = std::string(prof.name) + " Tale " + std::to_string(b + 1);

            // small per-book jitter around the author profile
            const int paragraphs = std::max(
                30, static_cast<int>((prof.base_paragraphs +
                                      static_cast<int>(uniform_index(rng, 20)) - 10) *
                                     cfg.length_percent / 100));
            const double stay = prof.stay_prob + uniform_range(rng, -0.005, 0.005);

            std::string body;
            int topic = static_cast<int>(uniform_index(rng, prof.n_topics));
            for (int p = 0; p < paragraphs; ++p) {
                // topic dynamics
                if (uniform01(rng) < prof.hub_prob) topic = 0;
                else if (uniform01(rng) >= stay) {
                    if (prof.cyclic) topic = (topic + 1) % prof.n_topics;
                    else topic = static_cast<int>(uniform_index(rng, prof.n_topics));
                }
                const int len = std::max(
                    6, prof.para_len + static_cast<int>(uniform_index(rng, 11)) - 5);
                std::vector<std::string> words;
                words.reserve(len);
                for (int wi = 0; wi < len; ++wi) {
                    const double u = uniform01(rng);
                    if (u < 0.30) {
                        words.push_back(kStopwords[uniform_index(rng, std::size(kStopwords))]);
                    } else if (u < 0.30 + prof.p_topic) {
                        words.push_back(
                            topic_pool[a][topic][zipf_pick(rng, topic_n, topic_total)]);
                    } else if (u < 0.30 + prof.p_topic + 0.20) {
                        words.push_back(author_pool[a][zipf_pick(rng, author_n, author_total)]);
                    } else {
                        words.push_back(common_pool[zipf_pick(rng, common_n, common_total)]);
                    }
                }
                words.back() += '.';
                body += wrap_text(words);
                body += "\n\n";
            }

            std::string text = "Synthetic corpus edition.\nTitle: " + title + "\n\n";
            text += "*** START OF THE SYNTHETIC EBOOK " + id + " ***\n\n";
            text += body;
            text += "*** END OF THE SYNTHETIC EBOOK " + id + " ***\n";

            const std::string rel = "books/" + id + ".txt";
            write_file(dir / rel, text);
            manifest += id + "," + prof.name + "," + title + "," + rel + "\n";
        }
    }
    const auto manifest_path = dir / "manifest.csv";
    write_file(manifest_path, manifest);
    return manifest_path;
}

}  // namespace meso::textgen
