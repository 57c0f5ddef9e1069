#include "meso/mesonet.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "meso/util.hpp"

namespace meso::mesonet {

std::vector<WindowNode> build_windows(const corpus::Document& doc, int delta) {
    const int n = static_cast<int>(doc.paragraphs.size());
    if (delta < 1) throw std::runtime_error("window size must be positive");
    if (delta > n)
        throw std::runtime_error("window size " + std::to_string(delta) + " exceeds paragraph count " +
                                 std::to_string(n) + " in document '" + doc.id + "'");
    std::vector<WindowNode> windows;
    windows.reserve(n - delta + 1);
    for (int i = 0; i + delta <= n; ++i) {
        WindowNode w;
        w.index = i;
        for (int p = i; p < i + delta; ++p) {
            for (const auto& tok : doc.paragraphs[p]) {
                ++w.bag[tok];
                ++w.n_tokens;
            }
        }
        windows.push_back(std::move(w));
    }
    return windows;
}

DocFreq document_frequencies(const std::vector<WindowNode>& windows) {
    DocFreq df;
    for (const auto& w : windows)
        for (const auto& [word, count] : w.bag) ++df[word];
    return df;
}

TfidfVector tfidf(const WindowNode& node, const DocFreq& doc_freq, int d_count) {
    TfidfVector v;
    for (const auto& [word, count] : node.bag) {
        auto it = doc_freq.find(word);
        if (it == doc_freq.end() || it->second < 1)
            throw std::runtime_error("document frequency missing for word present in window: " + word);
        const int dw = it->second;
        if (dw == d_count) continue;  // idf = ln(1) = 0
        const double value = (static_cast<double>(count) / node.n_tokens) *
                             std::log(static_cast<double>(d_count) / dw);
        if (value != 0.0) v[word] = value;
    }
    return v;
}

double cosine(const TfidfVector& u, const TfidfVector& v) {
    double nu = 0.0, nv = 0.0;
    for (const auto& [w, x] : u) nu += x * x;
    for (const auto& [w, x] : v) nv += x * x;
    if (nu == 0.0 || nv == 0.0) return 0.0;
    const TfidfVector& small = u.size() <= v.size() ? u : v;
    const TfidfVector& large = u.size() <= v.size() ? v : u;
    double dot = 0.0;
    for (const auto& [w, x] : small) {
        auto it = large.find(w);
        if (it != large.end()) dot += x * it->second;
    }
    return dot / (std::sqrt(nu) * std::sqrt(nv));
}

namespace {

// Interned sparse vector, sorted by term id, unit-normalized.
struct SparseVec {
    std::vector<std::pair<int, double>> terms;
};

}  // namespace

MesoNetwork build_weighted_network(const std::vector<WindowNode>& windows) {
    const int n = static_cast<int>(windows.size());
    if (n < 1) throw std::runtime_error("cannot build network from zero windows");

    std::unordered_map<std::string, int> vocab;
    std::unordered_map<std::string, int> df;
    for (const auto& w : windows)
        for (const auto& [word, count] : w.bag) {
            vocab.emplace(word, static_cast<int>(vocab.size()));
            ++df[word];
        }

    std::vector<SparseVec> vecs(n);
    for (int i = 0; i < n; ++i) {
        double norm2 = 0.0;
        auto& terms = vecs[i].terms;
        for (const auto& [word, count] : windows[i].bag) {
            const int dw = df[word];
            if (dw == n) continue;
            const double value = (static_cast<double>(count) / windows[i].n_tokens) *
                                 std::log(static_cast<double>(n) / dw);
            if (value != 0.0) {
                terms.emplace_back(vocab[word], value);
                norm2 += value * value;
            }
        }
        std::sort(terms.begin(), terms.end());
        if (norm2 > 0.0) {
            const double inv = 1.0 / std::sqrt(norm2);
            for (auto& [id, x] : terms) x *= inv;
        } else {
            terms.clear();
        }
    }

    MesoNetwork net;
    net.num_nodes = n;
    net.stage = Stage::weighted;
    net.edges.reserve(static_cast<size_t>(n) * (n - 1) / 2);
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            const auto& a = vecs[i].terms;
            const auto& b = vecs[j].terms;
            double dot = 0.0;
            size_t p = 0, q = 0;
            while (p < a.size() && q < b.size()) {
                if (a[p].first < b[q].first) ++p;
                else if (a[p].first > b[q].first) ++q;
                else { dot += a[p].second * b[q].second; ++p; ++q; }
            }
            net.edges.push_back({i, j, dot});
        }
    }
    {
        long long deg_sum = 2LL * static_cast<long long>(net.edges.size());
        net.realized_avg_degree = n > 0 ? static_cast<double>(deg_sum) / n : 0.0;
    }
    return net;
}

MesoNetwork threshold_to_avg_degree(const MesoNetwork& net, double k_target) {
    if (net.stage != Stage::weighted)
        throw std::runtime_error("threshold_to_avg_degree requires the weighted stage");
    const int n = net.num_nodes;
    if (k_target >= n - 1)
        throw std::runtime_error("network too small for target degree: k_target=" +
                                 format_double(k_target) + ", N=" + std::to_string(n));
    const auto target_edges = static_cast<size_t>(round_half_up(k_target * n / 2.0));
    if (target_edges > net.edges.size())
        throw std::runtime_error("target edge count exceeds available pairs");

    std::vector<Edge> edges = net.edges;
    std::sort(edges.begin(), edges.end(), [](const Edge& a, const Edge& b) {
        if (a.weight != b.weight) return a.weight > b.weight;
        if (a.i != b.i) return a.i < b.i;
        return a.j < b.j;
    });
    edges.resize(target_edges);
    std::sort(edges.begin(), edges.end(), [](const Edge& a, const Edge& b) {
        if (a.i != b.i) return a.i < b.i;
        return a.j < b.j;
    });

    MesoNetwork out;
    out.num_nodes = n;
    out.stage = Stage::thresholded;
    out.edges = std::move(edges);
    out.realized_avg_degree = n > 0 ? 2.0 * static_cast<double>(out.edges.size()) / n : 0.0;
    return out;
}

std::string dump_edge_list(const MesoNetwork& net) {
    std::string out;
    for (const auto& e : net.edges) {
        out += std::to_string(e.i);
        out += ' ';
        out += std::to_string(e.j);
        if (net.stage == Stage::weighted) {
            out += ' ';
            out += format_double(e.weight);
        }
        out += '\n';
    }
    return out;
}

MesoNetwork parse_edge_list(const std::string& text, int num_nodes, Stage stage) {
    MesoNetwork net;
    net.num_nodes = num_nodes;
    net.stage = stage;
    for (const auto& line : split_lines(text)) {
        if (line.empty()) continue;
        std::istringstream ss(line);
        Edge e;
        ss >> e.i >> e.j;
        if (stage == Stage::weighted) ss >> e.weight;
        else e.weight = 1.0;
        if (!ss && stage == Stage::weighted)
            throw std::runtime_error("malformed edge-list line: " + line);
        net.edges.push_back(e);
    }
    net.realized_avg_degree =
        num_nodes > 0 ? 2.0 * static_cast<double>(net.edges.size()) / num_nodes : 0.0;
    return net;
}

}  // namespace meso::mesonet
