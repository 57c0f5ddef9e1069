#include "meso/features.hpp"

#include <cmath>
#include <stdexcept>

#include "meso/util.hpp"

namespace meso::features {

void FeatureVector::push(const std::string& id, double value) {
    ids.push_back(id);
    values.conservativeResize(values.size() + 1);
    values[values.size() - 1] = value;
}

void FeatureVector::append(const FeatureVector& other) {
    const auto old = values.size();
    values.conservativeResize(old + other.values.size());
    values.tail(other.values.size()) = other.values;
    ids.insert(ids.end(), other.ids.begin(), other.ids.end());
}

std::string to_csv(const FeatureTable& table) {
    std::string out = "id,author";
    for (const auto& id : table.col_ids) {
        out += ',';
        out += id;
    }
    out += '\n';
    for (Eigen::Index r = 0; r < table.values.rows(); ++r) {
        out += table.row_ids[r];
        out += ',';
        out += table.authors[r];
        for (Eigen::Index c = 0; c < table.values.cols(); ++c) {
            out += ',';
            const double v = table.values(r, c);
            if (!std::isnan(v)) out += format_double(v);
        }
        out += '\n';
    }
    return out;
}

FeatureTable from_csv(const std::string& csv) {
    auto lines = split_lines(csv);
    if (lines.empty()) throw std::runtime_error("empty feature CSV");
    FeatureTable t;
    {
        size_t pos = 0;
        std::vector<std::string> header;
        const auto& h = lines[0];
        while (pos <= h.size()) {
            auto comma = h.find(',', pos);
            if (comma == std::string::npos) { header.push_back(h.substr(pos)); break; }
            header.push_back(h.substr(pos, comma - pos));
            pos = comma + 1;
        }
        if (header.size() < 2 || header[0] != "id" || header[1] != "author")
            throw std::runtime_error("feature CSV header must start with id,author");
        t.col_ids.assign(header.begin() + 2, header.end());
    }
    const auto ncols = static_cast<Eigen::Index>(t.col_ids.size());
    t.values.resize(static_cast<Eigen::Index>(lines.size()) - 1, ncols);
    for (size_t i = 1; i < lines.size(); ++i) {
        const auto& line = lines[i];
        std::vector<std::string> cells;
        size_t pos = 0;
        while (pos <= line.size()) {
            auto comma = line.find(',', pos);
            if (comma == std::string::npos) { cells.push_back(line.substr(pos)); break; }
            cells.push_back(line.substr(pos, comma - pos));
            pos = comma + 1;
        }
        if (cells.size() != t.col_ids.size() + 2)
            throw std::runtime_error("feature CSV row has wrong cell count: " + line);
        t.row_ids.push_back(cells[0]);
        t.authors.push_back(cells[1]);
        for (Eigen::Index c = 0; c < ncols; ++c) {
            const auto& cell = cells[c + 2];
            t.values(static_cast<Eigen::Index>(i) - 1, c) =
                cell.empty() ? std::nan("") : std::stod(cell);
        }
    }
    return t;
}

}  // namespace meso::features
