#pragma once

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <vector>

#include "meso/features.hpp"
#include "meso/mesonet.hpp"

namespace meso::netmetrics {

/// Simple undirected graph as adjacency lists (sorted, no self-loops).
struct Graph {
    int n = 0;
    std::vector<std::vector<int>> adj;

    static Graph from_network(const mesonet::MesoNetwork& net);
    static Graph from_edges(int n, const std::vector<std::pair<int, int>>& edges);
    int edge_count() const;
};

struct DistributionSummary {
    double mean = 0.0;
    double stddev = 0.0;   // population
    double skewness = 0.0; // g1 = m3 / m2^{3/2}, 0 for (near-)constant data
};

enum class SymmetryVariant { backbone, merged };

Eigen::VectorXd degrees(const Graph& g);
Eigen::VectorXd local_clustering(const Graph& g);
// Degree Pearson correlation over ordered edge endpoint pairs; nullopt when
// either endpoint degree sequence has zero variance.
std::optional<double> assortativity(const Graph& g);
Eigen::VectorXd avg_neighbor_degree(const Graph& g);

// Exponential of the entropy of arrival probabilities after h steps of a
// uniformly branching self-avoiding walk; dead ends keep their mass.
Eigen::VectorXd accessibility(const Graph& g, int h);

// Concentric symmetry at radius h through the layered (ring) pattern.
Eigen::VectorXd concentric_symmetry(const Graph& g, int h, SymmetryVariant variant);

DistributionSummary summarize(const Eigen::VectorXd& values);

// 34 features: (mean, std, skewness) of accessibility h2/h3, degree,
// backbone and merged symmetry h2/h3/h4, knn, clustering, plus assortativity.
features::FeatureVector network_feature_vector(const Graph& g);

// Stable ids, in output order.
std::vector<std::string> network_feature_ids();

}  // namespace meso::netmetrics
