#include "meso/layout.hpp"

#include <cmath>
#include <random>
#include <sstream>
#include <stdexcept>

#include "meso/util.hpp"

namespace meso::layout {

Embedding force_layout(const netmetrics::Graph& g, std::uint64_t seed, int iterations) {
    const int n = g.n;
    if (n < 1) throw std::runtime_error("force_layout requires at least one node");

    Eigen::Matrix<double, Eigen::Dynamic, 2> initial(n, 2);
    std::mt19937_64 rng(seed);
    const double side = std::sqrt(static_cast<double>(n));  // area = N, l = 1
    for (int i = 0; i < n; ++i) {
        initial(i, 0) = uniform_range(rng, 0.0, side);
        initial(i, 1) = uniform_range(rng, 0.0, side);
    }
    Embedding emb = force_layout_from(g, initial, iterations);
    emb.seed = seed;
    return emb;
}

Embedding force_layout_from(const netmetrics::Graph& g,
                            const Eigen::Matrix<double, Eigen::Dynamic, 2>& initial,
                            int iterations) {
    const int n = g.n;
    if (n < 1) throw std::runtime_error("force_layout requires at least one node");
    if (initial.rows() != n) throw std::runtime_error("initial positions must match node count");

    Embedding emb;
    emb.iterations = iterations;
    emb.positions = initial;
    const double side = std::sqrt(static_cast<double>(n));
    if (n == 1 || iterations == 0) return emb;

    const double l = 1.0;
    const double t0 = 0.1 * side;
    Eigen::Matrix<double, Eigen::Dynamic, 2> disp(n, 2);

    for (int it = 0; it < iterations; ++it) {
        disp.setZero();
        // repulsion l^2/d between all pairs
        for (int i = 0; i < n; ++i) {
            for (int j = i + 1; j < n; ++j) {
                double dx = emb.positions(i, 0) - emb.positions(j, 0);
                double dy = emb.positions(i, 1) - emb.positions(j, 1);
                double d2 = dx * dx + dy * dy;
                if (d2 < 1e-18) { dx = 1e-9; dy = 0.0; d2 = 1e-18; }
                const double f = (l * l) / d2;  // (l^2/d) / d, applied to the delta
                disp(i, 0) += dx * f;
                disp(i, 1) += dy * f;
                disp(j, 0) -= dx * f;
                disp(j, 1) -= dy * f;
            }
        }
        // attraction d^2/l on edges
        for (int i = 0; i < n; ++i) {
            for (int j : g.adj[i]) {
                if (j <= i) continue;
                double dx = emb.positions(i, 0) - emb.positions(j, 0);
                double dy = emb.positions(i, 1) - emb.positions(j, 1);
                double d = std::sqrt(dx * dx + dy * dy);
                if (d < 1e-9) continue;
                const double f = d / l;  // (d^2/l) / d
                disp(i, 0) -= dx * f;
                disp(i, 1) -= dy * f;
                disp(j, 0) += dx * f;
                disp(j, 1) += dy * f;
            }
        }
        const double temp = t0 * (1.0 - static_cast<double>(it) / iterations);
        for (int i = 0; i < n; ++i) {
            const double dx = disp(i, 0), dy = disp(i, 1);
            const double d = std::sqrt(dx * dx + dy * dy);
            if (d < 1e-12) continue;
            const double step = std::min(d, temp);
            emb.positions(i, 0) += dx / d * step;
            emb.positions(i, 1) += dy / d * step;
        }
    }
    return emb;
}

std::string dump_embedding_csv(const Embedding& emb) {
    std::string out = "node,x,y\n";
    for (Eigen::Index i = 0; i < emb.positions.rows(); ++i) {
        out += std::to_string(i);
        out += ',';
        out += format_double(emb.positions(i, 0));
        out += ',';
        out += format_double(emb.positions(i, 1));
        out += '\n';
    }
    return out;
}

Embedding parse_embedding_csv(const std::string& csv) {
    auto lines = split_lines(csv);
    if (lines.empty() || lines[0] != "node,x,y")
        throw std::runtime_error("embedding CSV must start with node,x,y header");
    Embedding emb;
    emb.positions.resize(static_cast<Eigen::Index>(lines.size()) - 1, 2);
    for (size_t i = 1; i < lines.size(); ++i) {
        std::istringstream ss(lines[i]);
        long node;
        char c1, c2;
        double x, y;
        ss >> node >> c1 >> x >> c2 >> y;
        if (!ss || c1 != ',' || c2 != ',' || node != static_cast<long>(i) - 1)
            throw std::runtime_error("malformed embedding CSV line: " + lines[i]);
        emb.positions(static_cast<Eigen::Index>(i) - 1, 0) = x;
        emb.positions(static_cast<Eigen::Index>(i) - 1, 1) = y;
    }
    return emb;
}

}  // namespace meso::layout
