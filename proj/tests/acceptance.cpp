// Acceptance gate: five criteria, one pass/fail line per sub-check.
// Usage: acceptance <oracles|invariants|full-scale|pairwise|pca>

#include <unsupported/Eigen/FFT>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "meso/imfeat.hpp"
#include "meso/mesonet.hpp"
#include "meso/mlpipe.hpp"
#include "meso/netmetrics.hpp"
#include "meso/pipeline.hpp"
#include "meso/raster.hpp"
#include "meso/textgen.hpp"
#include "meso/util.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using meso::raster::BinaryImage;

namespace {

int g_failures = 0;

void check(const std::string& name, bool ok, const std::string& detail = "") {
    std::cout << (ok ? "PASS " : "FAIL ") << name;
    if (!detail.empty()) std::cout << "  (" << detail << ")";
    std::cout << "\n";
    if (!ok) ++g_failures;
}

double urand(std::mt19937_64& rng) { return meso::uniform01(rng); }

// ---------------------------------------------------------------------------
// Criterion 1: oracle suites
// ---------------------------------------------------------------------------

bool tfidf_oracle() {
    // several toy corpora; recount everything by hand
    std::mt19937_64 rng(101);
    const std::vector<std::string> vocab = {"sea",  "ship", "rope", "sail", "wind",
                                            "gull", "salt", "deck", "mast", "wave"};
    for (int trial = 0; trial < 20; ++trial) {
        meso::corpus::Document doc;
        const int paras = 4 + static_cast<int>(urand(rng) * 6);
        for (int p = 0; p < paras; ++p) {
            std::vector<std::string> words;
            const int len = 3 + static_cast<int>(urand(rng) * 10);
            for (int w = 0; w < len; ++w)
                words.push_back(vocab[static_cast<size_t>(urand(rng) * vocab.size())]);
            doc.paragraphs.push_back(words);
        }
        const int delta = 1 + static_cast<int>(urand(rng) * 3);
        const auto windows = meso::mesonet::build_windows(doc, delta);
        const auto df = meso::mesonet::document_frequencies(windows);
        const int n = static_cast<int>(windows.size());
        for (int i = 0; i < n; ++i) {
            const auto v = meso::mesonet::tfidf(windows[i], df, n);
            for (const auto& word : vocab) {
                // brute force: recount frequency, window total, and d_w
                int freq = 0, total = 0, dw = 0;
                for (const auto& [w, c] : windows[i].bag) {
                    if (w == word) freq = c;
                    total += c;
                }
                for (const auto& win : windows)
                    if (win.bag.count(word)) ++dw;
                const double expect =
                    freq == 0 ? 0.0
                              : (static_cast<double>(freq) / total) *
                                    std::log(static_cast<double>(n) / dw);
                const double got = v.count(word) ? v.at(word) : 0.0;
                if (std::abs(got - expect) > 1e-12) return false;
            }
        }
    }
    return true;
}

struct Pt {
    double x, y;
};

// Jarvis-march hull oracle (independent of the monotone chain in the library).
std::vector<Pt> jarvis_hull(std::vector<Pt> pts) {
    std::sort(pts.begin(), pts.end(), [](const Pt& a, const Pt& b) {
        return a.x < b.x || (a.x == b.x && a.y < b.y);
    });
    pts.erase(std::unique(pts.begin(), pts.end(),
                          [](const Pt& a, const Pt& b) { return a.x == b.x && a.y == b.y; }),
              pts.end());
    const size_t n = pts.size();
    if (n < 3) return pts;
    auto cross = [](const Pt& o, const Pt& a, const Pt& b) {
        return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
    };
    size_t start = 0;
    for (size_t i = 1; i < n; ++i)
        if (pts[i].x < pts[start].x || (pts[i].x == pts[start].x && pts[i].y < pts[start].y))
            start = i;
    std::vector<Pt> hull;
    size_t p = start;
    do {
        hull.push_back(pts[p]);
        size_t q = (p + 1) % n;
        for (size_t r = 0; r < n; ++r) {
            const double c = cross(pts[p], pts[q], pts[r]);
            if (c < 0) {
                q = r;
            } else if (c == 0) {
                // collinear: take the farthest
                const double dq = std::hypot(pts[q].x - pts[p].x, pts[q].y - pts[p].y);
                const double dr = std::hypot(pts[r].x - pts[p].x, pts[r].y - pts[p].y);
                if (dr > dq) q = r;
            }
        }
        p = q;
    } while (p != start && hull.size() <= n);
    return hull;
}

double polygon_area(const std::vector<Pt>& poly) {
    double a = 0.0;
    const size_t n = poly.size();
    for (size_t i = 0; i < n; ++i) {
        const auto& p = poly[i];
        const auto& q = poly[(i + 1) % n];
        a += p.x * q.y - q.x * p.y;
    }
    return std::abs(a) / 2.0;
}

double polygon_perimeter(const std::vector<Pt>& poly) {
    if (poly.size() < 2) return 0.0;
    double per = 0.0;
    const size_t n = poly.size();
    for (size_t i = 0; i < n; ++i) {
        const auto& p = poly[i];
        const auto& q = poly[(i + 1) % n];
        per += std::hypot(p.x - q.x, p.y - q.y);
    }
    if (poly.size() == 2) per /= 2.0;  // open segment counted once
    return per;
}

// O(n^3) minimum enclosing circle: all pair-diameter and triple circumcircles.
meso::imfeat::Circle brute_mec(const std::vector<Pt>& pts) {
    auto covers = [&pts](double cx, double cy, double r) {
        for (const auto& p : pts)
            if (std::hypot(p.x - cx, p.y - cy) > r + 1e-9) return false;
        return true;
    };
    meso::imfeat::Circle best{1e18, 0, 0};
    if (pts.size() == 1) return {0.0, pts[0].x, pts[0].y};
    for (size_t i = 0; i < pts.size(); ++i)
        for (size_t j = i + 1; j < pts.size(); ++j) {
            const double cx = (pts[i].x + pts[j].x) / 2, cy = (pts[i].y + pts[j].y) / 2;
            const double r = std::hypot(pts[i].x - cx, pts[i].y - cy);
            if (r < best.radius && covers(cx, cy, r)) best = {r, cx, cy};
        }
    for (size_t i = 0; i < pts.size(); ++i)
        for (size_t j = i + 1; j < pts.size(); ++j)
            for (size_t k = j + 1; k < pts.size(); ++k) {
                const Pt &a = pts[i], &b = pts[j], &c = pts[k];
                const double d = 2.0 * (a.x * (b.y - c.y) + b.x * (c.y - a.y) + c.x * (a.y - b.y));
                if (std::abs(d) < 1e-12) continue;
                const double a2 = a.x * a.x + a.y * a.y, b2 = b.x * b.x + b.y * b.y,
                             c2 = c.x * c.x + c.y * c.y;
                const double cx = (a2 * (b.y - c.y) + b2 * (c.y - a.y) + c2 * (a.y - b.y)) / d;
                const double cy = (a2 * (c.x - b.x) + b2 * (a.x - c.x) + c2 * (b.x - a.x)) / d;
                const double r = std::hypot(a.x - cx, a.y - cy);
                if (r < best.radius && covers(cx, cy, r)) best = {r, cx, cy};
            }
    return best;
}

bool geometry_oracle() {
    std::mt19937_64 rng(313);
    for (int trial = 0; trial < 200; ++trial) {
        BinaryImage img(64, 64);
        std::vector<Pt> pts;
        const int count = 3 + static_cast<int>(urand(rng) * 20);
        for (int i = 0; i < count; ++i) {
            const int x = static_cast<int>(urand(rng) * 60) + 2;
            const int y = static_cast<int>(urand(rng) * 60) + 2;
            if (!img.at(x, y)) {
                img.set(x, y);
                pts.push_back({static_cast<double>(x), static_cast<double>(y)});
            }
        }
        const auto hull = meso::imfeat::convex_hull_features(img);
        const auto oracle_poly = jarvis_hull(pts);
        const double oa = polygon_area(oracle_poly);
        const double op = polygon_perimeter(oracle_poly);
        if (std::abs(hull.area - oa) > 1e-7) return false;
        if (std::abs(hull.perimeter - op) > 1e-7) return false;
        const double expect_res = std::max(0.0, oa - static_cast<double>(pts.size()));
        if (std::abs(hull.residual - expect_res) > 1e-7) return false;

        const auto mec = meso::imfeat::min_enclosing_circle(img);
        const auto bm = brute_mec(pts);
        if (std::abs(mec.radius - bm.radius) > 1e-7) return false;
    }
    return true;
}

bool lacunarity_oracle() {
    std::mt19937_64 rng(77);
    for (int trial = 0; trial < 5; ++trial) {
        BinaryImage img(64, 64);
        const double density = 0.1 + 0.2 * trial;
        for (int y = 0; y < 64; ++y)
            for (int x = 0; x < 64; ++x)
                if (urand(rng) < density) img.set(x, y);
        const std::vector<int> radii = {2, 3, 5, 7, 10};
        const auto fast = meso::imfeat::lacunarity(img, radii);
        for (size_t ri = 0; ri < radii.size(); ++ri) {
            const int r = radii[ri];
            double sum = 0.0, sum2 = 0.0;
            long long windows = 0;
            for (int cy = r; cy < 64 - r; ++cy)
                for (int cx = r; cx < 64 - r; ++cx) {
                    if (!img.at(cx, cy)) continue;
                    long long m = 0;
                    for (int dy = -r; dy <= r; ++dy)
                        for (int dx = -r; dx <= r; ++dx)
                            if (dx * dx + dy * dy <= r * r && img.at(cx + dx, cy + dy)) ++m;
                    sum += static_cast<double>(m);
                    sum2 += static_cast<double>(m) * m;
                    ++windows;
                }
            if (windows == 0) {
                if (!std::isnan(fast[ri])) return false;
                continue;
            }
            const double mean = sum / windows;
            const double expect = (sum2 / windows) / (mean * mean);
            if (std::abs(fast[ri] - expect) > 1e-12 * std::max(1.0, std::abs(expect)))
                return false;
        }
    }
    return true;
}

// Pratt's quad-count Euler number for 8-connected objects / 4-connected holes.
int quad_euler(const BinaryImage& img) {
    int q1 = 0, q3 = 0, qd = 0;
    auto bit = [&img](int x, int y) {
        if (x < 0 || y < 0 || x >= img.width || y >= img.height) return 0;
        return img.at(x, y) ? 1 : 0;
    };
    for (int y = -1; y < img.height; ++y)
        for (int x = -1; x < img.width; ++x) {
            const int a = bit(x, y), b = bit(x + 1, y), c = bit(x, y + 1), d = bit(x + 1, y + 1);
            const int s = a + b + c + d;
            if (s == 1) ++q1;
            else if (s == 3) ++q3;
            else if (s == 2 && ((a && d) || (b && c))) ++qd;
        }
    return (q1 - q3 - 2 * qd) / 4;
}

bool euler_oracle() {
    std::mt19937_64 rng(555);
    for (int trial = 0; trial < 500; ++trial) {
        const int w = 4 + static_cast<int>(urand(rng) * 28);
        const int h = 4 + static_cast<int>(urand(rng) * 28);
        BinaryImage img(w, h);
        const double density = 0.2 + 0.6 * urand(rng);
        for (int y = 0; y < h; ++y)
            for (int x = 0; x < w; ++x)
                if (urand(rng) < density) img.set(x, y);
        if (meso::imfeat::euler_number(img) != quad_euler(img)) return false;
    }
    return true;
}

// Exhaustive self-avoiding-walk enumeration (iterative, bitmask visited sets).
std::vector<double> enum_accessibility(const meso::netmetrics::Graph& g, int h) {
    std::vector<double> out(g.n, 0.0);
    struct State {
        int node;
        unsigned visited;
        int depth;
        double prob;
    };
    for (int s = 0; s < g.n; ++s) {
        if (g.adj[s].empty()) continue;
        std::vector<double> mass(g.n, 0.0);
        std::vector<State> stack{{s, 1u << s, 0, 1.0}};
        while (!stack.empty()) {
            const State st = stack.back();
            stack.pop_back();
            if (st.depth == h) {
                mass[st.node] += st.prob;
                continue;
            }
            std::vector<int> options;
            for (int v : g.adj[st.node])
                if (!(st.visited & (1u << v))) options.push_back(v);
            if (options.empty()) {
                mass[st.node] += st.prob;
                continue;
            }
            for (int v : options)
                stack.push_back({v, st.visited | (1u << v), st.depth + 1,
                                 st.prob / static_cast<double>(options.size())});
        }
        double ent = 0.0;
        for (double p : mass)
            if (p > 0.0) ent -= p * std::log(p);
        out[s] = std::exp(ent);
    }
    return out;
}

// Independent concentric-symmetry computation (map-based entity transition).
std::vector<double> enum_symmetry(const meso::netmetrics::Graph& g, int h, bool merged) {
    std::vector<double> out(g.n, 0.0);
    for (int s = 0; s < g.n; ++s) {
        // BFS rings
        std::vector<int> dist(g.n, -1);
        std::vector<int> frontier{s};
        dist[s] = 0;
        for (int d = 0; d < h && !frontier.empty(); ++d) {
            std::vector<int> next;
            for (int u : frontier)
                for (int v : g.adj[u])
                    if (dist[v] < 0) {
                        dist[v] = d + 1;
                        next.push_back(v);
                    }
            frontier = next;
        }
        bool has_ring_h = false;
        for (int v = 0; v < g.n; ++v)
            if (dist[v] == h) has_ring_h = true;
        if (!has_ring_h) continue;

        // entity labels per node
        std::vector<int> entity(g.n, -1);
        std::vector<int> n_entities(h + 1, 0);
        for (int r = 0; r <= h; ++r) {
            for (int v = 0; v < g.n; ++v) {
                if (dist[v] != r || entity[v] >= 0) continue;
                const int id = n_entities[r]++;
                if (!merged) {
                    entity[v] = id;
                    continue;
                }
                std::vector<int> stack{v};
                entity[v] = id;
                while (!stack.empty()) {
                    const int u = stack.back();
                    stack.pop_back();
                    for (int w : g.adj[u])
                        if (dist[w] == r && entity[w] < 0) {
                            entity[w] = id;
                            stack.push_back(w);
                        }
                }
            }
        }

        std::map<int, double> prob{{entity[s], 1.0}};
        double dead_entropy = 0.0;
        int dead = 0;
        for (int r = 0; r < h; ++r) {
            std::map<int, std::set<int>> fwd;
            for (int v = 0; v < g.n; ++v) {
                if (dist[v] != r) continue;
                for (int w : g.adj[v])
                    if (dist[w] == r + 1) fwd[entity[v]].insert(entity[w]);
            }
            std::map<int, double> next;
            for (const auto& [e, p] : prob) {
                const auto it = fwd.find(e);
                if (it == fwd.end() || it->second.empty()) {
                    dead_entropy -= p * std::log(p);
                    ++dead;
                    continue;
                }
                const double share = p / static_cast<double>(it->second.size());
                for (int t : it->second) next[t] += share;
            }
            prob = std::move(next);
        }
        double ent = dead_entropy;
        int reached = 0;
        for (const auto& [e, p] : prob)
            if (p > 0.0) {
                ++reached;
                ent -= p * std::log(p);
            }
        const int denom = reached + dead;
        out[s] = denom > 0 ? std::exp(ent) / denom : 0.0;
    }
    return out;
}

bool graph_enumeration_oracle() {
    using meso::netmetrics::Graph;
    for (int n = 2; n <= 6; ++n) {
        std::vector<std::pair<int, int>> all_edges;
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j) all_edges.emplace_back(i, j);
        const int m = static_cast<int>(all_edges.size());
        for (unsigned mask = 0; mask < (1u << m); ++mask) {
            std::vector<std::pair<int, int>> edges;
            for (int b = 0; b < m; ++b)
                if (mask & (1u << b)) edges.push_back(all_edges[b]);
            // connectivity check (union-find)
            std::vector<int> parent(n);
            for (int i = 0; i < n; ++i) parent[i] = i;
            std::function<int(int)> find = [&](int x) {
                return parent[x] == x ? x : parent[x] = find(parent[x]);
            };
            for (auto [i, j] : edges) parent[find(i)] = find(j);
            bool connected = true;
            for (int i = 1; i < n; ++i)
                if (find(i) != find(0)) connected = false;
            if (!connected) continue;

            const auto g = Graph::from_edges(n, edges);
            for (int h : {2, 3}) {
                const auto lib = meso::netmetrics::accessibility(g, h);
                const auto ora = enum_accessibility(g, h);
                for (int v = 0; v < n; ++v)
                    if (std::abs(lib[v] - ora[v]) > 1e-10) return false;
            }
            for (int h : {2, 3, 4}) {
                for (bool merged : {false, true}) {
                    const auto lib = meso::netmetrics::concentric_symmetry(
                        g, h,
                        merged ? meso::netmetrics::SymmetryVariant::merged
                               : meso::netmetrics::SymmetryVariant::backbone);
                    const auto ora = enum_symmetry(g, h, merged);
                    for (int v = 0; v < n; ++v)
                        if (std::abs(lib[v] - ora[v]) > 1e-10) return false;
                }
            }
        }
    }
    return true;
}

bool assortativity_p4() {
    const auto g = meso::netmetrics::Graph::from_edges(4, {{0, 1}, {1, 2}, {2, 3}});
    const auto r = meso::netmetrics::assortativity(g);
    return r.has_value() && std::abs(*r + 0.5) <= 1e-12;
}

void run_oracles() {
    check("criterion-1.tfidf-brute-force", tfidf_oracle());
    check("criterion-1.hull-and-mec-vs-brute-force", geometry_oracle());
    check("criterion-1.lacunarity-vs-naive", lacunarity_oracle());
    check("criterion-1.euler-vs-quad-count", euler_oracle());
    check("criterion-1.accessibility-symmetry-enumeration", graph_enumeration_oracle());
    check("criterion-1.assortativity-p4", assortativity_p4());
}

// ---------------------------------------------------------------------------
// Criterion 2: invariant suites
// ---------------------------------------------------------------------------

fs::path accept_root() {
    if (const char* env = std::getenv("MESOCAL_ACCEPT_DIR"); env && *env) return env;
    return fs::temp_directory_path() / "mesocal_acceptance";
}

meso::pipeline::RunConfig small_run_config(const fs::path& out, const fs::path& cache) {
    meso::pipeline::RunConfig cfg;
    cfg.stopwords = fs::path(TEST_DATA_DIR) / "stopwords_en.txt";
    cfg.lemmas = fs::path(TEST_DATA_DIR) / "lemmas_en.tsv";
    cfg.delta = 5;
    cfg.k_target = 8.0;
    cfg.layout_iterations = 60;
    cfg.canvas = 128;
    cfg.ring_width = 8;
    cfg.lacunarity_radii = {2, 3, 5};
    cfg.out_dir = out;
    cfg.cache_dir = cache;
    return cfg;
}

bool threshold_avg_degree_invariant(std::string* detail) {
    // medium corpus so that k = 40 is feasible, run through the network stage
    const auto root = accept_root() / "invariants";
    meso::textgen::DemoCorpusConfig gen;
    gen.num_authors = 5;
    gen.books_per_author = 2;
    gen.length_percent = 30;
    gen.seed = 99;
    const auto manifest = meso::textgen::write_demo_corpus(root / "corpus_k40", gen);

    meso::pipeline::RunConfig cfg = small_run_config(root / "out_k40", root / "cache_k40");
    cfg.manifest = manifest;
    cfg.delta = 20;
    cfg.k_target = 40.0;
    meso::pipeline::StageSelection sel;
    sel.ingest = sel.network = true;
    const auto report = meso::pipeline::run_pipeline(cfg, sel);
    if (report.failures() > 0) {
        *detail = "pipeline failures";
        return false;
    }
    for (const auto& b : report.books) {
        const json side = json::parse(meso::read_file(cfg.out_dir / "networks" / (b.id + ".json")));
        const double n = side["N"].get<double>();
        const double realized = side["realized_avg_degree"].get<double>();
        if (std::abs(realized - 40.0) > 2.0 / n + 1e-12) {
            *detail = b.id + ": realized " + std::to_string(realized) + " with N " +
                      std::to_string(n);
            return false;
        }
    }
    return true;
}

bool closing_invariants() {
    std::mt19937_64 rng(808);
    for (int trial = 0; trial < 10; ++trial) {
        BinaryImage img(80, 80);
        for (int y = 0; y < 80; ++y)
            for (int x = 0; x < 80; ++x)
                if (urand(rng) < 0.15) img.set(x, y);
        const int radius = 1 + static_cast<int>(urand(rng) * 4);
        const auto once = meso::raster::morph_close(img, radius);
        for (int y = 0; y < 80; ++y)
            for (int x = 0; x < 80; ++x)
                if (img.at(x, y) && !once.at(x, y)) return false;  // extensive
        if (meso::raster::morph_close(once, radius) != once) return false;  // idempotent
    }
    return true;
}

bool imfeat_invariances() {
    std::mt19937_64 rng(909);
    BinaryImage img(64, 64);
    // a blob comfortably away from the borders so shifts stay in frame
    for (int i = 0; i < 120; ++i) {
        const int x = 20 + static_cast<int>(urand(rng) * 16);
        const int y = 22 + static_cast<int>(urand(rng) * 14);
        img.set(x, y);
    }
    BinaryImage shifted(64, 64), rotated(64, 64);
    for (int y = 0; y < 64; ++y)
        for (int x = 0; x < 64; ++x)
            if (img.at(x, y)) {
                shifted.set(x + 7, y - 9);
                rotated.set(63 - y, x);  // 90 degree rotation
            }
    using namespace meso::imfeat;
    auto close_to = [](double a, double b) {
        return std::abs(a - b) <= 1e-9 * std::max({1.0, std::abs(a), std::abs(b)});
    };
    for (const BinaryImage* other : {&shifted, &rotated}) {
        if (area(img) != area(*other)) return false;
        if (!close_to(perimeter(img), perimeter(*other))) return false;
        if (euler_number(img) != euler_number(*other)) return false;
        if (!close_to(min_enclosing_circle(img).radius, min_enclosing_circle(*other).radius))
            return false;
        const auto ha = convex_hull_features(img), hb = convex_hull_features(*other);
        if (!close_to(ha.area, hb.area) || !close_to(ha.perimeter, hb.perimeter)) return false;
        if (!close_to(elongation(img), elongation(*other))) return false;
        const auto la = lacunarity(img, {3, 5}), lb = lacunarity(*other, {3, 5});
        for (size_t i = 0; i < la.size(); ++i)
            if (!close_to(la[i], lb[i])) return false;
    }
    return true;
}

bool parseval_and_spectrum() {
    std::mt19937_64 rng(606);
    const int side = 32;
    BinaryImage img(side, side);
    for (int y = 0; y < side; ++y)
        for (int x = 0; x < side; ++x)
            if (urand(rng) < 0.3) img.set(x, y);

    // naive O(N^4) DFT
    std::vector<std::vector<std::complex<double>>> F(side,
                                                     std::vector<std::complex<double>>(side));
    double signal_energy = 0.0;
    for (int ky = 0; ky < side; ++ky)
        for (int kx = 0; kx < side; ++kx) {
            std::complex<double> acc(0, 0);
            for (int y = 0; y < side; ++y)
                for (int x = 0; x < side; ++x) {
                    if (!img.at(x, y)) continue;
                    const double phase =
                        -2.0 * M_PI * (static_cast<double>(kx) * x / side +
                                       static_cast<double>(ky) * y / side);
                    acc += std::complex<double>(std::cos(phase), std::sin(phase));
                }
            F[ky][kx] = acc;
        }
    signal_energy = static_cast<double>(img.object_pixel_count());  // f is 0/1

    // Parseval: sum |F|^2 == N^2 * sum |f|^2
    double spec_energy = 0.0;
    for (int ky = 0; ky < side; ++ky)
        for (int kx = 0; kx < side; ++kx) spec_energy += std::norm(F[ky][kx]);
    const double expect = static_cast<double>(side) * side * signal_energy;
    if (std::abs(spec_energy - expect) > 1e-9 * expect) return false;

    // ring stats vs the library (same binning, independent transform)
    const int ring_width = 4;
    const int num_rings = (side / 2) / ring_width;
    std::vector<std::vector<double>> mags(num_rings);
    for (int y = 0; y < side; ++y) {
        const int v = y <= side / 2 ? y : y - side;
        for (int x = 0; x < side; ++x) {
            if (x == 0 && y == 0) continue;
            const int u = x <= side / 2 ? x : x - side;
            const double dist = std::sqrt(static_cast<double>(u) * u + static_cast<double>(v) * v);
            const int ring = static_cast<int>(dist / ring_width);
            if (ring < num_rings) mags[ring].push_back(std::abs(F[y][x]));
        }
    }
    const auto lib = meso::imfeat::fourier_ring_features(img, ring_width);
    for (int k = 0; k < num_rings; ++k) {
        double total = 0.0;
        for (double m : mags[k]) total += m;
        const double n = static_cast<double>(mags[k].size());
        const double mean = total / n;
        double var = 0.0, ent = 0.0;
        for (double m : mags[k]) {
            var += (m - mean) * (m - mean);
            const double p = m / total;
            if (p > 0.0) ent -= p * std::log(p);
        }
        if (std::abs(lib[k].mean - mean) > 1e-8 * std::max(1.0, mean)) return false;
        if (std::abs(lib[k].stddev - std::sqrt(var / n)) > 1e-8 * std::max(1.0, mean))
            return false;
        if (std::abs(lib[k].entropy - ent) > 1e-8 * std::max(1.0, std::abs(ent))) return false;
    }
    return true;
}

bool em_monotone() {
    // em_cluster throws if any EM iteration decreases the log-likelihood
    std::mt19937_64 rng(404);
    try {
        for (int trial = 0; trial < 5; ++trial) {
            Eigen::MatrixXd data(40, 3);
            for (int i = 0; i < 40; ++i)
                for (int j = 0; j < 3; ++j)
                    data(i, j) = urand(rng) * 10.0 + (i % 3) * 4.0;
            meso::mlpipe::em_cluster(data, 3, 1000 + trial, 10);
        }
    } catch (const std::exception&) {
        return false;
    }
    return true;
}

bool accuracy_permutation_invariance() {
    std::mt19937_64 rng(222);
    for (int trial = 0; trial < 30; ++trial) {
        const int n = 8 + static_cast<int>(urand(rng) * 10);
        const int k = 2 + static_cast<int>(urand(rng) * 4);
        std::vector<int> labels;
        std::vector<std::string> authors;
        for (int i = 0; i < n; ++i) {
            labels.push_back(static_cast<int>(urand(rng) * k));
            authors.push_back(std::string(1, static_cast<char>('a' + static_cast<int>(
                                                 urand(rng) * 3))));
        }
        const double base = meso::mlpipe::cluster_accuracy(labels, authors);
        std::vector<int> perm(k);
        for (int i = 0; i < k; ++i) perm[i] = (i + 1) % k;
        std::vector<int> relabeled;
        for (int l : labels) relabeled.push_back(perm[l]);
        if (std::abs(meso::mlpipe::cluster_accuracy(relabeled, authors) - base) > 1e-12)
            return false;
    }
    return true;
}

bool full_pipeline_determinism(std::string* detail) {
    const auto root = accept_root() / "invariants";
    meso::textgen::DemoCorpusConfig gen;
    gen.num_authors = 3;
    gen.books_per_author = 2;
    gen.length_percent = 10;
    gen.seed = 5;
    const auto manifest = meso::textgen::write_demo_corpus(root / "corpus_det", gen);

    std::vector<std::string> snapshots;
    for (int run = 0; run < 2; ++run) {
        const auto tag = "det" + std::to_string(run);
        auto cfg = small_run_config(root / ("out_" + tag), root / ("cache_" + tag));
        cfg.manifest = manifest;
        fs::remove_all(cfg.out_dir);
        fs::remove_all(cfg.cache_dir);
        const auto report =
            meso::pipeline::run_pipeline(cfg, meso::pipeline::StageSelection::all());
        if (report.failures() > 0) {
            *detail = "pipeline failures on run " + std::to_string(run);
            return false;
        }
        std::string snap;
        std::vector<fs::path> files;
        for (const auto& e : fs::recursive_directory_iterator(cfg.out_dir))
            if (e.is_regular_file()) files.push_back(e.path());
        std::sort(files.begin(), files.end());
        for (const auto& f : files) {
            snap += fs::relative(f, cfg.out_dir).string();
            snap += ':';
            snap += std::to_string(meso::fnv1a64(meso::read_file(f)));
            snap += '\n';
        }
        snapshots.push_back(snap);
    }
    if (snapshots[0] != snapshots[1]) {
        *detail = "artifact hashes differ between runs";
        return false;
    }
    return true;
}

void run_invariants() {
    std::string detail;
    bool ok = threshold_avg_degree_invariant(&detail);
    check("criterion-2.thresholded-avg-degree-40", ok, ok ? "" : detail);
    check("criterion-2.closing-extensive-idempotent", closing_invariants());
    check("criterion-2.imfeat-translation-rotation-invariance", imfeat_invariances());
    check("criterion-2.parseval-and-ring-spectrum", parseval_and_spectrum());
    check("criterion-2.em-loglikelihood-monotone", em_monotone());
    check("criterion-2.cluster-accuracy-permutation-invariance",
          accuracy_permutation_invariance());
    detail.clear();
    ok = full_pipeline_determinism(&detail);
    check("criterion-2.full-pipeline-byte-determinism", ok, ok ? "" : detail);
}

// ---------------------------------------------------------------------------
// Criteria 3-5: full-scale runs on the 50-book demo corpus with defaults
// ---------------------------------------------------------------------------

struct FullRun {
    meso::pipeline::RunConfig cfg;
};

FullRun full_run(const std::string& out_tag) {
    const auto root = accept_root() / "full";
    const auto manifest = meso::textgen::write_demo_corpus(root / "corpus");
    FullRun run;
    run.cfg.manifest = manifest;
    run.cfg.stopwords = fs::path(TEST_DATA_DIR) / "stopwords_en.txt";
    run.cfg.lemmas = fs::path(TEST_DATA_DIR) / "lemmas_en.tsv";
    run.cfg.out_dir = root / out_tag;
    run.cfg.cache_dir = root / "cache";  // shared across the three criteria
    return run;
}

json load_result(const fs::path& p) { return json::parse(meso::read_file(p)); }

void run_full_scale() {
    auto run = full_run("out_classify");
    meso::pipeline::StageSelection sel = meso::pipeline::StageSelection::through_features();
    sel.classify = true;
    const auto report = meso::pipeline::run_pipeline(run.cfg, sel);
    check("criterion-3.pipeline-clean", report.failures() == 0,
          std::to_string(report.failures()) + " book failures");
    if (report.failures() > 0) return;

    std::map<std::string, std::map<std::string, double>> best;
    std::map<std::string, std::map<std::string, int>> best_n;
    for (const std::string set : {"if", "nf", "ifnf"})
        for (const std::string method : {"EM", "KMeans"}) {
            const auto j =
                load_result(run.cfg.out_dir / "results" / (set + "_" + method + ".json"));
            best[method][set] = j["best_accuracy"].get<double>();
            best_n[method][set] = j["best_n"].get<int>();
        }
    char buf[160];
    std::snprintf(buf, sizeof(buf),
                  "EM if=%.3f nf=%.3f ifnf=%.3f/n=%d | KMeans if=%.3f nf=%.3f ifnf=%.3f",
                  best["EM"]["if"], best["EM"]["nf"], best["EM"]["ifnf"],
                  best_n["EM"]["ifnf"], best["KMeans"]["if"], best["KMeans"]["nf"],
                  best["KMeans"]["ifnf"]);
    const std::string summary = buf;

    const double em_max_single = std::max(best["EM"]["if"], best["EM"]["nf"]);
    check("criterion-3a.em-ifnf-accuracy",
          best["EM"]["ifnf"] >= 0.40 && best["EM"]["ifnf"] >= em_max_single - 0.02, summary);
    bool all_above = true;
    for (const auto& [method, sets] : best)
        for (const auto& [set, acc] : sets)
            if (acc < 0.30) all_above = false;
    check("criterion-3b.all-best-accuracies-over-0.30", all_above, summary);
    const double km_max_single = std::max(best["KMeans"]["if"], best["KMeans"]["nf"]);
    check("criterion-3c.kmeans-ifnf-ordering",
          best["KMeans"]["ifnf"] >= km_max_single - 0.02, summary);
}

void run_pairwise() {
    auto run = full_run("out_pairwise");
    meso::pipeline::StageSelection sel = meso::pipeline::StageSelection::through_features();
    sel.pairwise = true;
    const auto report = meso::pipeline::run_pipeline(run.cfg, sel);
    check("criterion-4.pipeline-clean", report.failures() == 0,
          std::to_string(report.failures()) + " book failures");
    if (report.failures() > 0) return;

    // parse the IF+NF pairwise matrix and collect the upper triangle
    const auto csv = meso::read_file(run.cfg.out_dir / "results" / "pairwise_ifnf.csv");
    const auto lines = meso::split_lines(csv);
    std::vector<double> pairs;
    for (size_t r = 1; r < lines.size(); ++r) {
        if (lines[r].empty()) continue;
        std::stringstream ss(lines[r]);
        std::string cell;
        int c = -1;
        while (std::getline(ss, cell, ',')) {
            if (c >= 0 && static_cast<size_t>(c) > r - 1 && !cell.empty())
                pairs.push_back(std::stod(cell));
            ++c;
        }
    }
    check("criterion-4.pair-count-45", pairs.size() == 45,
          std::to_string(pairs.size()) + " pairs");
    std::sort(pairs.begin(), pairs.end());
    const double median =
        pairs.empty() ? 0.0 : (pairs[pairs.size() / 2] + pairs[(pairs.size() - 1) / 2]) / 2.0;
    const long strong = std::count_if(pairs.begin(), pairs.end(),
                                      [](double a) { return a >= 0.90; });
    char buf[96];
    std::snprintf(buf, sizeof(buf), "median=%.3f, %ld pairs >= 0.90", median, strong);
    check("criterion-4.median-over-0.80", median >= 0.80, buf);
    check("criterion-4.at-least-30-pairs-over-0.90", strong >= 30, buf);
}

void run_pca() {
    auto run = full_run("out_pca");
    meso::pipeline::StageSelection sel = meso::pipeline::StageSelection::through_features();
    sel.pca = true;
    const auto report = meso::pipeline::run_pipeline(run.cfg, sel);
    check("criterion-5.pipeline-clean", report.failures() == 0,
          std::to_string(report.failures()) + " book failures");
    if (report.failures() > 0) return;

    const auto j = load_result(run.cfg.out_dir / "results" / "pca.json");
    const auto ids = j["feature_ids"].get<std::vector<std::string>>();
    check("criterion-5.top-14-features", ids.size() == 14,
          std::to_string(ids.size()) + " features");
    double ratio_sum = 0.0;
    for (const auto& r : j["explained_ratio"]) ratio_sum += r.get<double>();
    check("criterion-5.explained-ratios-sum-to-1", std::abs(ratio_sum - 1.0) <= 1e-9,
          "sum " + std::to_string(ratio_sum));
    const bool has_if = std::any_of(ids.begin(), ids.end(), [](const std::string& s) {
        return s.rfind("if.", 0) == 0;
    });
    const bool has_nf = std::any_of(ids.begin(), ids.end(), [](const std::string& s) {
        return s.rfind("nf.", 0) == 0;
    });
    check("criterion-5.weight-chart-covers-if-and-nf", has_if && has_nf);
    check("criterion-5.weights-chart-emitted",
          fs::exists(run.cfg.out_dir / "results" / "pca_weights.svg") &&
              fs::exists(run.cfg.out_dir / "results" / "pca_scatter.svg"));
    const auto svg = meso::read_file(run.cfg.out_dir / "results" / "pca_weights.svg");
    bool svg_has_all = true;
    for (const auto& id : ids)
        if (svg.find(id) == std::string::npos) svg_has_all = false;
    check("criterion-5.chart-labels-all-14-features", svg_has_all);
}

}  // namespace

int main(int argc, char** argv) {
    if (argc != 2) {
        std::cerr << "usage: acceptance <oracles|invariants|full-scale|pairwise|pca>\n";
        return 2;
    }
    const std::string mode = argv[1];
    try {
        if (mode == "oracles") run_oracles();
        else if (mode == "invariants") run_invariants();
        else if (mode == "full-scale") run_full_scale();
        else if (mode == "pairwise") run_pairwise();
        else if (mode == "pca") run_pca();
        else {
            std::cerr << "unknown mode: " << mode << "\n";
            return 2;
        }
    } catch (const std::exception& e) {
        std::cout << "FAIL " << mode << "  (exception: " << e.what() << ")\n";
        return 1;
    }
    std::cout << (g_failures == 0 ? "ALL PASS" : "FAILURES: " + std::to_string(g_failures))
              << " [" << mode << "]\n";
    return g_failures == 0 ? 0 : 1;
}
