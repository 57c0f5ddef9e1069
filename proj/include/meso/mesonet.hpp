#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <unordered_map>
#include <vector>

#include "meso/corpus.hpp"

namespace meso::mesonet {

/// One network node: the bag of words of Delta consecutive paragraphs.
struct WindowNode {
    int index = 0;
    std::unordered_map<std::string, int> bag;
    int n_tokens = 0;
};

struct Edge {
    int i = 0;
    int j = 0;
    double weight = 0.0;
};

enum class Stage { weighted, thresholded };

struct MesoNetwork {
    int num_nodes = 0;
    std::vector<Edge> edges;
    Stage stage = Stage::weighted;
    double realized_avg_degree = 0.0;
};

using TfidfVector = std::unordered_map<std::string, double>;
using DocFreq = std::unordered_map<std::string, int>;

// Sliding windows of Delta consecutive paragraphs; N = n - Delta + 1.
std::vector<WindowNode> build_windows(const corpus::Document& doc, int delta);

// d_w over a window set: number of windows containing each word.
DocFreq document_frequencies(const std::vector<WindowNode>& windows);

// tf-idf(w) = (f_w / n_tokens) * ln(D_count / d_w); zero entries dropped.
TfidfVector tfidf(const WindowNode& node, const DocFreq& doc_freq, int d_count);

double cosine(const TfidfVector& u, const TfidfVector& v);

// Complete weighted network over all window pairs (cosine of tf-idf vectors).
MesoNetwork build_weighted_network(const std::vector<WindowNode>& windows);

// Keeps the round(k_target*N/2) highest-weight edges; ties broken by
// ascending (i, j). Throws when k_target >= N-1.
MesoNetwork threshold_to_avg_degree(const MesoNetwork& net, double k_target);

// Edge-list text dump: "i j weight" (weighted) or "i j" (thresholded).
std::string dump_edge_list(const MesoNetwork& net);
MesoNetwork parse_edge_list(const std::string& text, int num_nodes, Stage stage);

}  // namespace meso::mesonet
