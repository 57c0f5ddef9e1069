#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "meso/netmetrics.hpp"

namespace meso::layout {

struct Embedding {
    Eigen::Matrix<double, Eigen::Dynamic, 2> positions;
    std::uint64_t seed = 0;
    int iterations = 0;
};

// Fruchterman-Reingold with area = N (ideal edge length 1), exact O(N^2)
// repulsion, linearly cooling displacement cap, no frame clamp.
// Same (graph, seed, iterations) gives bit-identical positions.
Embedding force_layout(const netmetrics::Graph& g, std::uint64_t seed, int iterations);

// Same iteration, starting from caller-supplied positions.
Embedding force_layout_from(const netmetrics::Graph& g,
                            const Eigen::Matrix<double, Eigen::Dynamic, 2>& initial,
                            int iterations);

std::string dump_embedding_csv(const Embedding& emb);
Embedding parse_embedding_csv(const std::string& csv);

}  // namespace meso::layout
