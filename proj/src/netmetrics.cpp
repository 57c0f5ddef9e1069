#include "meso/netmetrics.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <stdexcept>
#include <unordered_map>

namespace meso::netmetrics {

Graph Graph::from_network(const mesonet::MesoNetwork& net) {
    std::vector<std::pair<int, int>> edges;
    edges.reserve(net.edges.size());
    for (const auto& e : net.edges) edges.emplace_back(e.i, e.j);
    return from_edges(net.num_nodes, edges);
}

Graph Graph::from_edges(int n, const std::vector<std::pair<int, int>>& edges) {
    Graph g;
    g.n = n;
    g.adj.assign(n, {});
    for (auto [i, j] : edges) {
        if (i == j) throw std::runtime_error("self-loop in edge list");
        if (i < 0 || j < 0 || i >= n || j >= n) throw std::runtime_error("edge endpoint out of range");
        g.adj[i].push_back(j);
        g.adj[j].push_back(i);
    }
    for (auto& nbrs : g.adj) {
        std::sort(nbrs.begin(), nbrs.end());
        nbrs.erase(std::unique(nbrs.begin(), nbrs.end()), nbrs.end());
    }
    return g;
}

int Graph::edge_count() const {
    size_t deg_sum = 0;
    for (const auto& nbrs : adj) deg_sum += nbrs.size();
    return static_cast<int>(deg_sum / 2);
}

Eigen::VectorXd degrees(const Graph& g) {
    Eigen::VectorXd k(g.n);
    for (int i = 0; i < g.n; ++i) k[i] = static_cast<double>(g.adj[i].size());
    return k;
}

Eigen::VectorXd local_clustering(const Graph& g) {
    Eigen::VectorXd c = Eigen::VectorXd::Zero(g.n);
    for (int i = 0; i < g.n; ++i) {
        const auto& nbrs = g.adj[i];
        const auto k = nbrs.size();
        if (k < 2) continue;
        int links = 0;
        for (size_t a = 0; a < k; ++a)
            for (size_t b = a + 1; b < k; ++b)
                if (std::binary_search(g.adj[nbrs[a]].begin(), g.adj[nbrs[a]].end(), nbrs[b])) ++links;
        c[i] = static_cast<double>(links) / (static_cast<double>(k) * (k - 1) / 2.0);
    }
    return c;
}

std::optional<double> assortativity(const Graph& g) {
    // Pearson correlation over ordered endpoint pairs (each edge both ways).
    double sx = 0, sy = 0, sxx = 0, syy = 0, sxy = 0;
    long long m = 0;
    for (int i = 0; i < g.n; ++i) {
        const double ki = static_cast<double>(g.adj[i].size());
        for (int j : g.adj[i]) {
            const double kj = static_cast<double>(g.adj[j].size());
            sx += ki; sy += kj;
            sxx += ki * ki; syy += kj * kj; sxy += ki * kj;
            ++m;
        }
    }
    if (m < 2) return std::nullopt;
    const double n = static_cast<double>(m);
    const double vx = sxx / n - (sx / n) * (sx / n);
    const double vy = syy / n - (sy / n) * (sy / n);
    const double cov = sxy / n - (sx / n) * (sy / n);
    if (vx < 1e-12 || vy < 1e-12) return std::nullopt;
    return cov / std::sqrt(vx * vy);
}

Eigen::VectorXd avg_neighbor_degree(const Graph& g) {
    Eigen::VectorXd knn = Eigen::VectorXd::Zero(g.n);
    for (int i = 0; i < g.n; ++i) {
        if (g.adj[i].empty()) continue;
        double sum = 0;
        for (int j : g.adj[i]) sum += static_cast<double>(g.adj[j].size());
        knn[i] = sum / static_cast<double>(g.adj[i].size());
    }
    return knn;
}

namespace {

void walk_mass(const Graph& g, int u, int depth, int h, double prob,
               std::vector<char>& on_path, std::vector<double>& mass) {
    if (depth == h) {
        mass[u] += prob;
        return;
    }
    int cnt = 0;
    for (int v : g.adj[u])
        if (!on_path[v]) ++cnt;
    if (cnt == 0) {
        mass[u] += prob;
        return;
    }
    const double p = prob / cnt;
    for (int v : g.adj[u]) {
        if (on_path[v]) continue;
        on_path[v] = 1;
        walk_mass(g, v, depth + 1, h, p, on_path, mass);
        on_path[v] = 0;
    }
}

double entropy_exp(const std::vector<double>& probs) {
    double ent = 0.0;
    for (double p : probs)
        if (p > 0.0) ent -= p * std::log(p);
    return std::exp(ent);
}

}  // namespace

Eigen::VectorXd accessibility(const Graph& g, int h) {
    if (h < 1) throw std::runtime_error("accessibility requires h >= 1");
    Eigen::VectorXd alpha = Eigen::VectorXd::Zero(g.n);
    std::vector<char> on_path(g.n, 0);
    std::vector<double> mass(g.n, 0.0);
    for (int s = 0; s < g.n; ++s) {
        if (g.adj[s].empty()) {
            alpha[s] = 0.0;  // no walk of length >= 1
            continue;
        }
        std::fill(mass.begin(), mass.end(), 0.0);
        on_path[s] = 1;
        walk_mass(g, s, 0, h, 1.0, on_path, mass);
        on_path[s] = 0;
        double ent = 0.0;
        for (double p : mass)
            if (p > 0.0) ent -= p * std::log(p);
        alpha[s] = std::exp(ent);
    }
    return alpha;
}

Eigen::VectorXd concentric_symmetry(const Graph& g, int h, SymmetryVariant variant) {
    if (h < 2) throw std::runtime_error("concentric symmetry requires h >= 2");
    Eigen::VectorXd sym = Eigen::VectorXd::Zero(g.n);
    std::vector<int> dist(g.n);

    for (int s = 0; s < g.n; ++s) {
        std::fill(dist.begin(), dist.end(), -1);
        std::queue<int> q;
        dist[s] = 0;
        q.push(s);
        bool ring_h_nonempty = false;
        while (!q.empty()) {
            int u = q.front();
            q.pop();
            if (dist[u] == h) { ring_h_nonempty = true; continue; }
            for (int v : g.adj[u])
                if (dist[v] < 0) {
                    dist[v] = dist[u] + 1;
                    q.push(v);
                }
        }
        if (!ring_h_nonempty) {
            sym[s] = 0.0;
            continue;
        }

        // Entities per ring: nodes (backbone) or connected same-ring groups
        // (merged). entity_of[v] maps node -> entity index within its ring.
        std::vector<std::vector<int>> ring_nodes(h + 1);
        for (int v = 0; v < g.n; ++v)
            if (dist[v] >= 0 && dist[v] <= h) ring_nodes[dist[v]].push_back(v);

        std::vector<int> entity_of(g.n, -1);
        std::vector<int> entities_per_ring(h + 1, 0);
        if (variant == SymmetryVariant::backbone) {
            for (int r = 0; r <= h; ++r) {
                int idx = 0;
                for (int v : ring_nodes[r]) entity_of[v] = idx++;
                entities_per_ring[r] = idx;
            }
        } else {
            for (int r = 0; r <= h; ++r) {
                int idx = 0;
                for (int v : ring_nodes[r]) {
                    if (entity_of[v] >= 0) continue;
                    // flood fill within the ring
                    std::vector<int> stack{v};
                    entity_of[v] = idx;
                    while (!stack.empty()) {
                        int u = stack.back();
                        stack.pop_back();
                        for (int w : g.adj[u])
                            if (dist[w] == r && entity_of[w] < 0) {
                                entity_of[w] = idx;
                                stack.push_back(w);
                            }
                    }
                    ++idx;
                }
                entities_per_ring[r] = idx;
            }
        }

        // Forward adjacency between entities of ring r and r+1.
        // key: from_entity * stride + to_entity, deduplicated per ring.
        std::vector<double> prob(entities_per_ring[0], 0.0);
        prob[entity_of[s]] = 1.0;
        double dead_mass_entropy = 0.0;  // -sum p ln p accumulated over dead ends
        int dead_branches = 0;

        for (int r = 0; r < h; ++r) {
            const int from_n = entities_per_ring[r];
            const int to_n = entities_per_ring[r + 1];
            std::vector<std::vector<char>> fwd(from_n, std::vector<char>(to_n, 0));
            for (int v : ring_nodes[r])
                for (int w : g.adj[v])
                    if (dist[w] == r + 1) fwd[entity_of[v]][entity_of[w]] = 1;
            std::vector<double> next(to_n, 0.0);
            for (int e = 0; e < from_n; ++e) {
                const double p = prob[e];
                if (p <= 0.0) continue;
                int cnt = 0;
                for (int t = 0; t < to_n; ++t) cnt += fwd[e][t];
                if (cnt == 0) {
                    dead_mass_entropy -= p * std::log(p);
                    ++dead_branches;
                    continue;
                }
                const double share = p / cnt;
                for (int t = 0; t < to_n; ++t)
                    if (fwd[e][t]) next[t] += share;
            }
            prob = std::move(next);
        }

        int reached = 0;
        double ent = dead_mass_entropy;
        for (double p : prob) {
            if (p > 0.0) {
                ++reached;
                ent -= p * std::log(p);
            }
        }
        const int denom = reached + dead_branches;
        sym[s] = denom > 0 ? std::exp(ent) / denom : 0.0;
    }
    return sym;
}

DistributionSummary summarize(const Eigen::VectorXd& values) {
    if (values.size() == 0) throw std::runtime_error("summarize requires non-empty values");
    DistributionSummary s;
    const double n = static_cast<double>(values.size());
    s.mean = values.mean();
    const Eigen::VectorXd d = values.array() - s.mean;
    const double m2 = d.array().square().sum() / n;
    const double m3 = d.array().cube().sum() / n;
    s.stddev = std::sqrt(m2);
    s.skewness = m2 < 1e-15 ? 0.0 : m3 / std::pow(m2, 1.5);
    return s;
}

namespace {

const std::vector<std::string> kMetricIds = {
    "nf.access.h2", "nf.access.h3", "nf.degree",
    "nf.backbone_sym.h2", "nf.backbone_sym.h3", "nf.backbone_sym.h4",
    "nf.merged_sym.h2", "nf.merged_sym.h3", "nf.merged_sym.h4",
    "nf.knn", "nf.clustering"};

}  // namespace

std::vector<std::string> network_feature_ids() {
    std::vector<std::string> ids;
    for (const auto& m : kMetricIds)
        for (const char* stat : {".mean", ".std", ".skew"}) ids.push_back(m + stat);
    ids.push_back("nf.assortativity");
    return ids;
}

features::FeatureVector network_feature_vector(const Graph& g) {
    std::vector<Eigen::VectorXd> metrics;
    metrics.push_back(accessibility(g, 2));
    metrics.push_back(accessibility(g, 3));
    metrics.push_back(degrees(g));
    for (int h : {2, 3, 4}) metrics.push_back(concentric_symmetry(g, h, SymmetryVariant::backbone));
    for (int h : {2, 3, 4}) metrics.push_back(concentric_symmetry(g, h, SymmetryVariant::merged));
    metrics.push_back(avg_neighbor_degree(g));
    metrics.push_back(local_clustering(g));

    features::FeatureVector fv;
    for (size_t m = 0; m < metrics.size(); ++m) {
        const auto s = summarize(metrics[m]);
        fv.push(kMetricIds[m] + ".mean", s.mean);
        fv.push(kMetricIds[m] + ".std", s.stddev);
        fv.push(kMetricIds[m] + ".skew", s.skewness);
    }
    const auto r = assortativity(g);
    fv.push("nf.assortativity", r ? *r : std::nan(""));
    return fv;
}

}  // namespace meso::netmetrics
