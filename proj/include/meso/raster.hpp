#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "meso/layout.hpp"
#include "meso/netmetrics.hpp"

namespace meso::raster {

/// Binary bitmap; object = 1, background = 0.
struct BinaryImage {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> bits;  // row-major

    BinaryImage() = default;
    BinaryImage(int w, int h) : width(w), height(h), bits(static_cast<size_t>(w) * h, 0) {}

    bool at(int x, int y) const { return bits[static_cast<size_t>(y) * width + x] != 0; }
    void set(int x, int y, bool v = true) {
        bits[static_cast<size_t>(y) * width + x] = v ? 1 : 0;
    }
    long long object_pixel_count() const;
    bool operator==(const BinaryImage&) const = default;
};

// Scales positions (aspect preserved, 5% margin) into a canvas x canvas
// bitmap; edges as 1-px Bresenham lines, nodes as filled discs of radius 2.
BinaryImage rasterize(const layout::Embedding& emb, const netmetrics::Graph& g, int canvas);

// max(1, round(c * lambda1)) with c = 3e-4 and lambda1 the larger eigenvalue
// of the object-pixel coordinate covariance.
int kernel_radius(const BinaryImage& img);

// Morphological closing (dilate then erode) with a disc element of the
// given radius; exact Euclidean disc via distance transform, border-padded.
BinaryImage morph_close(const BinaryImage& img, int radius);

// 1-bit PNG.
void write_png(const BinaryImage& img, const std::filesystem::path& path);

// PBM (P4) serialization, used for caching.
std::string to_pbm(const BinaryImage& img);
BinaryImage from_pbm(const std::string& data);

}  // namespace meso::raster
