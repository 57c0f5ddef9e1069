#include "meso/imfeat.hpp"

#include <unsupported/Eigen/FFT>

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <queue>
#include <random>
#include <stdexcept>

#include "meso/util.hpp"

namespace meso::imfeat {

namespace {

struct Labeling {
    std::vector<int> labels;  // -1 = background
    int count = 0;
    std::vector<long long> sizes;
};

// 8-connected object components.
Labeling label_objects(const BinaryImage& img) {
    const int w = img.width, h = img.height;
    Labeling lab;
    lab.labels.assign(static_cast<size_t>(w) * h, -1);
    std::vector<std::pair<int, int>> stack;
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            if (!img.at(x, y) || lab.labels[static_cast<size_t>(y) * w + x] >= 0) continue;
            const int id = lab.count++;
            lab.sizes.push_back(0);
            stack.push_back({x, y});
            lab.labels[static_cast<size_t>(y) * w + x] = id;
            while (!stack.empty()) {
                auto [cx, cy] = stack.back();
                stack.pop_back();
                ++lab.sizes[id];
                for (int dy = -1; dy <= 1; ++dy)
                    for (int dx = -1; dx <= 1; ++dx) {
                        if (dx == 0 && dy == 0) continue;
                        const int nx = cx + dx, ny = cy + dy;
                        if (nx < 0 || ny < 0 || nx >= w || ny >= h) continue;
                        auto& l = lab.labels[static_cast<size_t>(ny) * w + nx];
                        if (img.at(nx, ny) && l < 0) {
                            l = id;
                            stack.push_back({nx, ny});
                        }
                    }
            }
        }
    }
    return lab;
}

// 4-connected background components that do not touch the border.
int count_holes(const BinaryImage& img) {
    const int w = img.width, h = img.height;
    std::vector<int> mark(static_cast<size_t>(w) * h, 0);  // 0 unseen, 1 outside, 2 hole
    auto idx = [&](int x, int y) { return static_cast<size_t>(y) * w + x; };
    std::vector<std::pair<int, int>> stack;
    auto flood = [&](int sx, int sy, int value) {
        stack.push_back({sx, sy});
        mark[idx(sx, sy)] = value;
        while (!stack.empty()) {
            auto [cx, cy] = stack.back();
            stack.pop_back();
            const int nbr[4][2] = {{1, 0}, {-1, 0}, {0, 1}, {0, -1}};
            for (auto& d : nbr) {
                const int nx = cx + d[0], ny = cy + d[1];
                if (nx < 0 || ny < 0 || nx >= w || ny >= h) continue;
                if (!img.at(nx, ny) && mark[idx(nx, ny)] == 0) {
                    mark[idx(nx, ny)] = value;
                    stack.push_back({nx, ny});
                }
            }
        }
    };
    for (int x = 0; x < w; ++x) {
        if (!img.at(x, 0) && mark[idx(x, 0)] == 0) flood(x, 0, 1);
        if (!img.at(x, h - 1) && mark[idx(x, h - 1)] == 0) flood(x, h - 1, 1);
    }
    for (int y = 0; y < h; ++y) {
        if (!img.at(0, y) && mark[idx(0, y)] == 0) flood(0, y, 1);
        if (!img.at(w - 1, y) && mark[idx(w - 1, y)] == 0) flood(w - 1, y, 1);
    }
    int holes = 0;
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x)
            if (!img.at(x, y) && mark[idx(x, y)] == 0) {
                ++holes;
                flood(x, y, 2);
            }
    return holes;
}

std::vector<std::pair<int, int>> object_pixels(const BinaryImage& img) {
    std::vector<std::pair<int, int>> pts;
    for (int y = 0; y < img.height; ++y)
        for (int x = 0; x < img.width; ++x)
            if (img.at(x, y)) pts.emplace_back(x, y);
    return pts;
}

struct Covariance2 {
    double lambda1 = 0.0;
    double lambda2 = 0.0;
};

Covariance2 coord_covariance_eigen(const std::vector<std::pair<int, int>>& pts) {
    double sx = 0, sy = 0, sxx = 0, syy = 0, sxy = 0;
    const double n = static_cast<double>(pts.size());
    for (auto [x, y] : pts) {
        sx += x; sy += y;
        sxx += static_cast<double>(x) * x;
        syy += static_cast<double>(y) * y;
        sxy += static_cast<double>(x) * y;
    }
    const double a = sxx / n - (sx / n) * (sx / n);
    const double c = syy / n - (sy / n) * (sy / n);
    const double b = sxy / n - (sx / n) * (sy / n);
    const double root = std::sqrt((a - c) * (a - c) + 4.0 * b * b);
    return {0.5 * (a + c + root), 0.5 * (a + c - root)};
}

}  // namespace

double area(const BinaryImage& img) {
    return static_cast<double>(img.object_pixel_count());
}

double perimeter(const BinaryImage& img) {
    auto lab = label_objects(img);
    if (lab.count == 0) throw std::runtime_error("perimeter of an empty image");
    const int target = static_cast<int>(
        std::max_element(lab.sizes.begin(), lab.sizes.end()) - lab.sizes.begin());
    if (lab.sizes[target] == 1) return 0.0;

    const int w = img.width, h = img.height;
    auto is_obj = [&](int x, int y) {
        return x >= 0 && y >= 0 && x < w && y < h &&
               lab.labels[static_cast<size_t>(y) * w + x] == target;
    };
    // topmost-leftmost pixel of the component
    int sx = -1, sy = -1;
    for (int y = 0; y < h && sx < 0; ++y)
        for (int x = 0; x < w; ++x)
            if (lab.labels[static_cast<size_t>(y) * w + x] == target) { sx = x; sy = y; break; }

    // Moore-neighbor tracing, clockwise, Jacobs stopping criterion.
    static const int dx8[8] = {1, 1, 0, -1, -1, -1, 0, 1};
    static const int dy8[8] = {0, 1, 1, 1, 0, -1, -1, -1};
    const double step_len[8] = {1, std::numbers::sqrt2, 1, std::numbers::sqrt2,
                                1, std::numbers::sqrt2, 1, std::numbers::sqrt2};
    int px = sx, py = sy;
    int start_scan = 4;  // backtrack points west
    double length = 0.0;
    int first_exit = -1;
    const long long max_steps = 8 * lab.sizes[target] + 16;
    long long steps = 0;
    while (steps++ < max_steps) {
        int found = -1;
        for (int k = 1; k <= 8; ++k) {
            const int d = (start_scan + k) % 8;
            if (is_obj(px + dx8[d], py + dy8[d])) { found = d; break; }
        }
        if (found < 0) return 0.0;  // isolated pixel (cannot happen for size > 1)
        if (px == sx && py == sy) {
            // Jacobs stopping criterion: the start pixel is exited in the
            // same direction as on the first visit.
            if (first_exit < 0) first_exit = found;
            else if (found == first_exit) break;
        }
        px += dx8[found];
        py += dy8[found];
        length += step_len[found];
        start_scan = (found + 4) % 8;
    }
    return length;
}

int euler_number(const BinaryImage& img) {
    return label_objects(img).count - count_holes(img);
}

namespace {

Circle circle_two(double ax, double ay, double bx, double by) {
    Circle c;
    c.cx = (ax + bx) / 2.0;
    c.cy = (ay + by) / 2.0;
    c.radius = std::hypot(ax - bx, ay - by) / 2.0;
    return c;
}

Circle circle_three(double ax, double ay, double bx, double by, double cx, double cy) {
    const double d = 2.0 * (ax * (by - cy) + bx * (cy - ay) + cx * (ay - by));
    if (std::abs(d) < 1e-12) {
        // collinear: diametral circle of the farthest pair
        Circle best = circle_two(ax, ay, bx, by);
        for (auto [px, py, qx, qy] : {std::array<double, 4>{ax, ay, cx, cy},
                                      std::array<double, 4>{bx, by, cx, cy}}) {
            Circle cand = circle_two(px, py, qx, qy);
            if (cand.radius > best.radius) best = cand;
        }
        return best;
    }
    const double a2 = ax * ax + ay * ay, b2 = bx * bx + by * by, c2 = cx * cx + cy * cy;
    Circle c;
    c.cx = (a2 * (by - cy) + b2 * (cy - ay) + c2 * (ay - by)) / d;
    c.cy = (a2 * (cx - bx) + b2 * (ax - cx) + c2 * (bx - ax)) / d;
    c.radius = std::hypot(ax - c.cx, ay - c.cy);
    return c;
}

bool in_circle(const Circle& c, double x, double y) {
    return std::hypot(x - c.cx, y - c.cy) <= c.radius + 1e-7 * (1.0 + c.radius);
}

}  // namespace

Circle min_enclosing_circle(const BinaryImage& img) {
    auto pts = object_pixels(img);
    if (pts.empty()) throw std::runtime_error("minimum enclosing circle of an empty image");
    std::mt19937_64 rng(0x9e3779b97f4a7c15ULL);
    for (size_t i = pts.size(); i > 1; --i)
        std::swap(pts[i - 1], pts[uniform_index(rng, i)]);

    Circle c{0.0, static_cast<double>(pts[0].first), static_cast<double>(pts[0].second)};
    for (size_t i = 1; i < pts.size(); ++i) {
        const double xi = pts[i].first, yi = pts[i].second;
        if (in_circle(c, xi, yi)) continue;
        c = Circle{0.0, xi, yi};
        for (size_t j = 0; j < i; ++j) {
            const double xj = pts[j].first, yj = pts[j].second;
            if (in_circle(c, xj, yj)) continue;
            c = circle_two(xi, yi, xj, yj);
            for (size_t k = 0; k < j; ++k) {
                const double xk = pts[k].first, yk = pts[k].second;
                if (in_circle(c, xk, yk)) continue;
                c = circle_three(xi, yi, xj, yj, xk, yk);
            }
        }
    }
    return c;
}

namespace {

double cross(const std::pair<int, int>& o, const std::pair<int, int>& a,
             const std::pair<int, int>& b) {
    return static_cast<double>(a.first - o.first) * (b.second - o.second) -
           static_cast<double>(a.second - o.second) * (b.first - o.first);
}

std::vector<std::pair<int, int>> monotone_chain(std::vector<std::pair<int, int>> pts) {
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    const size_t n = pts.size();
    if (n <= 2) return pts;
    std::vector<std::pair<int, int>> hull(2 * n);
    size_t k = 0;
    for (size_t i = 0; i < n; ++i) {
        while (k >= 2 && cross(hull[k - 2], hull[k - 1], pts[i]) <= 0) --k;
        hull[k++] = pts[i];
    }
    const size_t lower = k + 1;
    for (size_t i = n - 1; i-- > 0;) {
        while (k >= lower && cross(hull[k - 2], hull[k - 1], pts[i]) <= 0) --k;
        hull[k++] = pts[i];
    }
    hull.resize(k - 1);
    return hull;
}

}  // namespace

HullFeatures convex_hull_features(const BinaryImage& img) {
    auto pts = object_pixels(img);
    if (pts.empty()) throw std::runtime_error("convex hull of an empty image");
    const double a = static_cast<double>(pts.size());
    auto hull = monotone_chain(std::move(pts));
    HullFeatures f;
    if (hull.size() >= 2) {
        double area2 = 0.0, perim = 0.0;
        for (size_t i = 0; i < hull.size(); ++i) {
            const auto& p = hull[i];
            const auto& q = hull[(i + 1) % hull.size()];
            area2 += static_cast<double>(p.first) * q.second - static_cast<double>(q.first) * p.second;
            perim += std::hypot(static_cast<double>(q.first - p.first),
                                static_cast<double>(q.second - p.second));
        }
        f.area = std::abs(area2) / 2.0;
        f.perimeter = perim;
    }
    f.residual = std::max(0.0, f.area - a);
    return f;
}

double elongation(const BinaryImage& img, bool* degenerate) {
    auto pts = object_pixels(img);
    if (pts.size() < 2) throw std::runtime_error("elongation requires at least two object pixels");
    const auto cov = coord_covariance_eigen(pts);
    constexpr double kEps = 1e-9;
    const bool degen = cov.lambda2 < kEps;
    if (degenerate) *degenerate = degen;
    return cov.lambda1 / std::max(cov.lambda2, kEps);
}

std::vector<double> lacunarity(const BinaryImage& img, const std::vector<int>& radii) {
    const int w = img.width, h = img.height;
    // row prefix sums
    std::vector<std::vector<long long>> prefix(h, std::vector<long long>(w + 1, 0));
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x)
            prefix[y][x + 1] = prefix[y][x] + (img.at(x, y) ? 1 : 0);

    std::vector<double> out;
    out.reserve(radii.size());
    for (int r : radii) {
        if (r < 1) throw std::runtime_error("lacunarity radius must be >= 1");
        std::vector<int> hw(2 * r + 1);
        for (int dy = -r; dy <= r; ++dy)
            hw[dy + r] = static_cast<int>(std::floor(std::sqrt(
                static_cast<double>(r) * r - static_cast<double>(dy) * dy)));
        double sum_m = 0.0, sum_m2 = 0.0;
        long long windows = 0;
        for (int y = r; y < h - r; ++y) {
            for (int x = r; x < w - r; ++x) {
                if (!img.at(x, y)) continue;
                long long m = 0;
                for (int dy = -r; dy <= r; ++dy) {
                    const int half = hw[dy + r];
                    m += prefix[y + dy][x + half + 1] - prefix[y + dy][x - half];
                }
                sum_m += static_cast<double>(m);
                sum_m2 += static_cast<double>(m) * m;
                ++windows;
            }
        }
        if (windows == 0) {
            out.push_back(std::nan(""));
        } else {
            const double em = sum_m / windows;
            const double em2 = sum_m2 / windows;
            out.push_back(em2 / (em * em));
        }
    }
    return out;
}

std::vector<RingStats> fourier_ring_features(const BinaryImage& img, int ring_width) {
    const int side = img.width;
    if (img.height != side) throw std::runtime_error("Fourier features require a square canvas");
    if (side < 2 || (side & (side - 1)) != 0)
        throw std::runtime_error("Fourier features require a power-of-two canvas side");
    if (ring_width < 1) throw std::runtime_error("ring width must be >= 1");

    Eigen::MatrixXcd spectrum(side, side);
    {
        Eigen::FFT<double> fft;
        Eigen::MatrixXcd tmp(side, side);
        std::vector<std::complex<double>> in(side), out(side);
        for (int y = 0; y < side; ++y) {
            for (int x = 0; x < side; ++x) in[x] = std::complex<double>(img.at(x, y) ? 1.0 : 0.0, 0.0);
            fft.fwd(out, in);
            for (int x = 0; x < side; ++x) tmp(y, x) = out[x];
        }
        for (int x = 0; x < side; ++x) {
            for (int y = 0; y < side; ++y) in[y] = tmp(y, x);
            fft.fwd(out, in);
            for (int y = 0; y < side; ++y) spectrum(y, x) = out[y];
        }
    }

    const int num_rings = (side / 2) / ring_width;
    std::vector<std::vector<double>> mags(num_rings);
    for (int y = 0; y < side; ++y) {
        const int v = y <= side / 2 ? y : y - side;
        for (int x = 0; x < side; ++x) {
            if (x == 0 && y == 0) continue;  // DC excluded
            const int u = x <= side / 2 ? x : x - side;
            const double dist = std::sqrt(static_cast<double>(u) * u + static_cast<double>(v) * v);
            const int ring = static_cast<int>(dist / ring_width);
            if (ring < num_rings) mags[ring].push_back(std::abs(spectrum(y, x)));
        }
    }

    std::vector<RingStats> stats(num_rings);
    for (int k = 0; k < num_rings; ++k) {
        const auto& m = mags[k];
        if (m.empty()) continue;
        double total = 0.0;
        for (double v : m) total += v;
        if (total <= 0.0) continue;  // all-zero ring -> (0,0,0)
        const double n = static_cast<double>(m.size());
        const double mean = total / n;
        double var = 0.0, ent = 0.0;
        for (double v : m) {
            var += (v - mean) * (v - mean);
            const double p = v / total;
            if (p > 0.0) ent -= p * std::log(p);
        }
        stats[k] = {ent, mean, std::sqrt(var / n)};
    }
    return stats;
}

std::vector<std::string> image_feature_ids(const ImfeatConfig& cfg, int canvas) {
    std::vector<std::string> ids = {"if.area",        "if.perimeter",      "if.euler",
                                    "if.circle.radius", "if.circle.cx",    "if.circle.cy",
                                    "if.hull.area",   "if.hull.perimeter", "if.hull.residual",
                                    "if.elongation"};
    for (int r : cfg.lacunarity_radii) ids.push_back("if.lacunarity.r" + std::to_string(r));
    const int num_rings = (canvas / 2) / cfg.ring_width;
    for (int k = 0; k < num_rings; ++k) {
        const std::string base = "if.fourier.ring" + std::to_string(k * cfg.ring_width);
        ids.push_back(base + ".entropy");
        ids.push_back(base + ".mean");
        ids.push_back(base + ".std");
    }
    return ids;
}

features::FeatureVector image_feature_vector(const BinaryImage& img, const ImfeatConfig& cfg) {
    features::FeatureVector fv;
    fv.push("if.area", area(img));
    fv.push("if.perimeter", perimeter(img));
    fv.push("if.euler", static_cast<double>(euler_number(img)));
    const auto circ = min_enclosing_circle(img);
    fv.push("if.circle.radius", circ.radius);
    fv.push("if.circle.cx", circ.cx);
    fv.push("if.circle.cy", circ.cy);
    const auto hull = convex_hull_features(img);
    fv.push("if.hull.area", hull.area);
    fv.push("if.hull.perimeter", hull.perimeter);
    fv.push("if.hull.residual", hull.residual);
    bool degen = false;
    const double elong = elongation(img, &degen);
    fv.push("if.elongation", degen ? std::nan("") : elong);
    const auto lac = lacunarity(img, cfg.lacunarity_radii);
    for (size_t i = 0; i < lac.size(); ++i)
        fv.push("if.lacunarity.r" + std::to_string(cfg.lacunarity_radii[i]), lac[i]);
    const auto rings = fourier_ring_features(img, cfg.ring_width);
    for (size_t k = 0; k < rings.size(); ++k) {
        const std::string base =
            "if.fourier.ring" + std::to_string(static_cast<int>(k) * cfg.ring_width);
        fv.push(base + ".entropy", rings[k].entropy);
        fv.push(base + ".mean", rings[k].mean);
        fv.push(base + ".std", rings[k].stddev);
    }
    return fv;
}

}  // namespace meso::imfeat
