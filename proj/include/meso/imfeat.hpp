#pragma once

#include <string>
#include <vector>

#include "meso/features.hpp"
#include "meso/raster.hpp"

namespace meso::imfeat {

using raster::BinaryImage;

struct Circle {
    double radius = 0.0;
    double cx = 0.0;
    double cy = 0.0;
};

struct HullFeatures {
    double area = 0.0;       // C_a
    double perimeter = 0.0;  // C_p
    double residual = 0.0;   // C_r = max(0, C_a - A)
};

struct RingStats {
    double entropy = 0.0;
    double mean = 0.0;
    double stddev = 0.0;
};

struct ImfeatConfig {
    std::vector<int> lacunarity_radii = {5, 10, 15, 20, 25, 31, 40, 50};
    int ring_width = 15;
};

// Object pixel count.
double area(const BinaryImage& img);

// Arc length of the traced outer contour of the largest 8-connected object;
// 1 per axis step, sqrt(2) per diagonal step. Single pixel -> 0.
double perimeter(const BinaryImage& img);

// e = N_o - N_h; 8-connected objects, 4-connected holes (background
// components not touching the border).
int euler_number(const BinaryImage& img);

// Exact minimum enclosing circle of object pixel centers (Welzl).
Circle min_enclosing_circle(const BinaryImage& img);

// Monotone-chain hull of object pixel centers; shoelace area.
HullFeatures convex_hull_features(const BinaryImage& img);

// lambda1/lambda2 of the coordinate covariance; *degenerate set when
// lambda2 < 1e-9 (value then uses the epsilon floor).
double elongation(const BinaryImage& img, bool* degenerate = nullptr);

// Self-referred lacunarity L(r) = E[M^2]/E[M]^2 over circular windows
// centered at object pixels lying fully inside the canvas. NaN when no
// window fits.
std::vector<double> lacunarity(const BinaryImage& img, const std::vector<int>& radii);

// Ring statistics of the centered DFT magnitude spectrum; rings of fixed
// width out to side/2; DC bin excluded. Requires a square power-of-two side.
std::vector<RingStats> fourier_ring_features(const BinaryImage& img, int ring_width);

features::FeatureVector image_feature_vector(const BinaryImage& img, const ImfeatConfig& cfg);
std::vector<std::string> image_feature_ids(const ImfeatConfig& cfg, int canvas);

}  // namespace meso::imfeat
