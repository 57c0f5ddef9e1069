#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

#include "meso/features.hpp"

namespace meso::mlpipe {

enum class Method { em, kmeans };

std::string method_name(Method m);

struct StandardizeReport {
    std::vector<std::string> dropped_columns;  // zero variance or all-missing
    std::vector<std::string> imputed_columns;
};

// Mean-imputation of missing cells, per-column z-score, constant columns
// dropped. Requires >= 2 rows.
features::FeatureTable standardize(const features::FeatureTable& table,
                                   StandardizeReport* report = nullptr);

// SVM recursive feature elimination over a standardized table. Linear
// one-vs-rest SVM trained by seeded subgradient descent; per-feature score
// sum of squared weights across classes; lowest score eliminated each round.
// Returns feature ids best-first.
std::vector<std::string> svm_rank(const features::FeatureTable& table, std::uint64_t seed);

// k-means++ / Lloyd, best of `restarts` by inertia.
std::vector<int> kmeans(const Eigen::MatrixXd& data, int k, std::uint64_t seed,
                        int restarts = 25);

// Diagonal-covariance Gaussian mixture EM, best of `restarts` by final
// log-likelihood; hard labels by max responsibility.
std::vector<int> em_cluster(const Eigen::MatrixXd& data, int k, std::uint64_t seed,
                            int restarts = 25);

// Fraction matched under the optimal cluster-to-author assignment
// (Hungarian algorithm on the contingency table).
double cluster_accuracy(const std::vector<int>& labels, const std::vector<std::string>& authors);

struct ExperimentResult {
    std::string method;
    std::string feature_set;
    double best_accuracy = 0.0;
    int best_n = 0;
    std::vector<double> curve;  // accuracy for n = 1..F
    std::uint64_t seed = 0;
};

// Clusters on the top-n ranked features for n = 1..F; best = max accuracy at
// the smallest n.
ExperimentResult sweep_top_n(const features::FeatureTable& standardized,
                             const std::vector<std::string>& ranking, Method method, int k,
                             std::uint64_t seed);

// Author-pair experiments on the raw (unstandardized) table: per pair,
// re-standardize, re-rank, sweep with k = 2. Returns a symmetric matrix in
// author order with NaN diagonal.
struct PairwiseResult {
    std::vector<std::string> authors;
    Eigen::MatrixXd accuracy;
};
PairwiseResult pairwise_experiments(const features::FeatureTable& raw, Method method,
                                    std::uint64_t seed);

struct PcaResult {
    Eigen::MatrixXd coords;            // rows x dims
    Eigen::VectorXd explained_ratio;   // all n_features components, sums to 1
    Eigen::MatrixXd abs_weights;       // n_features x dims
    std::vector<std::string> feature_ids;
};

// PCA of the covariance of the top-n standardized features.
PcaResult pca_project(const features::FeatureTable& standardized,
                      const std::vector<std::string>& ranking, int n_features, int dims = 2);

}  // namespace meso::mlpipe
