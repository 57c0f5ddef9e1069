#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

namespace meso::features {

/// Named, ordered real-valued features for one book. NaN marks a missing
/// (flagged) value.
struct FeatureVector {
    std::vector<std::string> ids;
    Eigen::VectorXd values;

    void push(const std::string& id, double value);
    void append(const FeatureVector& other);
};

/// Row-per-book feature table with author labels.
struct FeatureTable {
    std::vector<std::string> row_ids;
    std::vector<std::string> authors;
    std::vector<std::string> col_ids;
    Eigen::MatrixXd values;  // NaN = missing
};

// CSV with header `id,author,<feature ids...>`; missing values as empty cells.
std::string to_csv(const FeatureTable& table);
FeatureTable from_csv(const std::string& csv);

}  // namespace meso::features
