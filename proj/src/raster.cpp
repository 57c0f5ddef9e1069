#include "meso/raster.hpp"

#include <zlib.h>

#include <cmath>
#include <cstring>
#include <limits>
#include <stdexcept>

#include "meso/util.hpp"

namespace meso::raster {

long long BinaryImage::object_pixel_count() const {
    long long n = 0;
    for (auto b : bits) n += b;
    return n;
}

namespace {

void draw_disc(BinaryImage& img, int cx, int cy, int r) {
    for (int dy = -r; dy <= r; ++dy)
        for (int dx = -r; dx <= r; ++dx) {
            if (dx * dx + dy * dy > r * r) continue;
            const int x = cx + dx, y = cy + dy;
            if (x >= 0 && y >= 0 && x < img.width && y < img.height) img.set(x, y);
        }
}

void draw_line(BinaryImage& img, int x0, int y0, int x1, int y1) {
    const int dx = std::abs(x1 - x0), dy = -std::abs(y1 - y0);
    const int sx = x0 < x1 ? 1 : -1, sy = y0 < y1 ? 1 : -1;
    int err = dx + dy;
    while (true) {
        if (x0 >= 0 && y0 >= 0 && x0 < img.width && y0 < img.height) img.set(x0, y0);
        if (x0 == x1 && y0 == y1) break;
        const int e2 = 2 * err;
        if (e2 >= dy) { err += dy; x0 += sx; }
        if (e2 <= dx) { err += dx; y0 += sy; }
    }
}

}  // namespace

BinaryImage rasterize(const layout::Embedding& emb, const netmetrics::Graph& g, int canvas) {
    if (canvas < 64) throw std::runtime_error("canvas must be at least 64");
    const auto n = emb.positions.rows();
    if (n < 1 || g.n < 1) throw std::runtime_error("cannot rasterize an empty network");
    if (n != g.n) throw std::runtime_error("embedding/network size mismatch");

    const double min_x = emb.positions.col(0).minCoeff();
    const double max_x = emb.positions.col(0).maxCoeff();
    const double min_y = emb.positions.col(1).minCoeff();
    const double max_y = emb.positions.col(1).maxCoeff();
    const double extent = std::max(max_x - min_x, max_y - min_y);
    const double margin = 0.05 * canvas;
    const double usable = canvas - 2.0 * margin;
    const double scale = extent > 0.0 ? usable / extent : 0.0;

    auto to_px = [&](double v, double lo, double span) {
        // center the shorter axis
        const double offset = margin + (usable - span * scale) / 2.0;
        int p = static_cast<int>(std::floor(offset + (v - lo) * scale + 0.5));
        return std::clamp(p, 0, canvas - 1);
    };
    std::vector<int> px(n), py(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        px[i] = to_px(emb.positions(i, 0), min_x, max_x - min_x);
        py[i] = to_px(emb.positions(i, 1), min_y, max_y - min_y);
    }

    BinaryImage img(canvas, canvas);
    for (int i = 0; i < g.n; ++i)
        for (int j : g.adj[i])
            if (j > i) draw_line(img, px[i], py[i], px[j], py[j]);
    for (Eigen::Index i = 0; i < n; ++i) draw_disc(img, px[i], py[i], 2);
    return img;
}

int kernel_radius(const BinaryImage& img) {
    double sx = 0, sy = 0, sxx = 0, syy = 0, sxy = 0;
    long long cnt = 0;
    for (int y = 0; y < img.height; ++y)
        for (int x = 0; x < img.width; ++x)
            if (img.at(x, y)) {
                sx += x; sy += y;
                sxx += static_cast<double>(x) * x;
                syy += static_cast<double>(y) * y;
                sxy += static_cast<double>(x) * y;
                ++cnt;
            }
    if (cnt < 2) throw std::runtime_error("kernel_radius requires at least two object pixels");
    const double n = static_cast<double>(cnt);
    const double a = sxx / n - (sx / n) * (sx / n);
    const double c = syy / n - (sy / n) * (sy / n);
    const double b = sxy / n - (sx / n) * (sy / n);
    const double lambda1 = 0.5 * (a + c + std::sqrt((a - c) * (a - c) + 4.0 * b * b));
    constexpr double kSizeConstant = 3e-4;
    return std::max(1LL, round_half_up(kSizeConstant * lambda1));
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Felzenszwalb-Huttenlocher 1D squared distance transform.
void edt_1d(const std::vector<double>& f, std::vector<double>& d, int n,
            std::vector<int>& v, std::vector<double>& z) {
    int first = 0;
    while (first < n && f[first] == kInf) ++first;
    if (first == n) {
        std::fill(d.begin(), d.begin() + n, kInf);
        return;
    }
    int k = 0;
    v[0] = first;
    z[0] = -kInf;
    z[1] = kInf;
    auto intersect = [&](int q, int p) {
        return ((f[q] + static_cast<double>(q) * q) - (f[p] + static_cast<double>(p) * p)) /
               (2.0 * q - 2.0 * p);
    };
    for (int q = first + 1; q < n; ++q) {
        if (f[q] == kInf) continue;
        double s = intersect(q, v[k]);
        while (k > 0 && s <= z[k]) {
            --k;
            s = intersect(q, v[k]);
        }
        ++k;
        v[k] = q;
        z[k] = s;
        z[k + 1] = kInf;
    }
    k = 0;
    for (int q = 0; q < n; ++q) {
        while (z[k + 1] < q) ++k;
        const double dq = q - v[k];
        d[q] = dq * dq + f[v[k]];
    }
}

// Squared Euclidean distance to the nearest seed pixel (seed = true).
std::vector<double> edt_sq(const BinaryImage& img, bool seed_value) {
    const int w = img.width, h = img.height;
    std::vector<double> grid(static_cast<size_t>(w) * h);
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x)
            grid[static_cast<size_t>(y) * w + x] = img.at(x, y) == seed_value ? 0.0 : kInf;

    const int m = std::max(w, h);
    std::vector<double> f(m), d(m);
    std::vector<int> v(m);
    std::vector<double> z(m + 1);

    for (int x = 0; x < w; ++x) {  // columns
        for (int y = 0; y < h; ++y) f[y] = grid[static_cast<size_t>(y) * w + x];
        edt_1d(f, d, h, v, z);
        for (int y = 0; y < h; ++y) grid[static_cast<size_t>(y) * w + x] = d[y];
    }
    for (int y = 0; y < h; ++y) {  // rows
        for (int x = 0; x < w; ++x) f[x] = grid[static_cast<size_t>(y) * w + x];
        edt_1d(f, d, w, v, z);
        for (int x = 0; x < w; ++x) grid[static_cast<size_t>(y) * w + x] = d[x];
    }
    return grid;
}

}  // namespace

BinaryImage morph_close(const BinaryImage& img, int radius) {
    if (radius < 1) throw std::runtime_error("structuring element radius must be >= 1");
    if (img.object_pixel_count() == 0) return img;

    const int pad = radius + 1;
    BinaryImage padded(img.width + 2 * pad, img.height + 2 * pad);
    for (int y = 0; y < img.height; ++y)
        for (int x = 0; x < img.width; ++x)
            if (img.at(x, y)) padded.set(x + pad, y + pad);

    const double r2 = static_cast<double>(radius) * radius;

    auto dist_obj = edt_sq(padded, true);
    BinaryImage dilated(padded.width, padded.height);
    for (size_t i = 0; i < dist_obj.size(); ++i)
        if (dist_obj[i] <= r2) dilated.bits[i] = 1;

    auto dist_bg = edt_sq(dilated, false);
    BinaryImage out(img.width, img.height);
    for (int y = 0; y < img.height; ++y)
        for (int x = 0; x < img.width; ++x)
            if (dist_bg[static_cast<size_t>(y + pad) * padded.width + (x + pad)] > r2)
                out.set(x, y);
    return out;
}

std::string to_pbm(const BinaryImage& img) {
    std::string out = "P4\n" + std::to_string(img.width) + " " + std::to_string(img.height) + "\n";
    const int row_bytes = (img.width + 7) / 8;
    std::string row(row_bytes, '\0');
    for (int y = 0; y < img.height; ++y) {
        std::fill(row.begin(), row.end(), '\0');
        for (int x = 0; x < img.width; ++x)
            if (img.at(x, y)) row[x / 8] |= static_cast<char>(0x80 >> (x % 8));
        out += row;
    }
    return out;
}

BinaryImage from_pbm(const std::string& data) {
    if (data.rfind("P4\n", 0) != 0) throw std::runtime_error("not a P4 PBM");
    size_t pos = 3;
    auto nl = data.find('\n', pos);
    if (nl == std::string::npos) throw std::runtime_error("malformed PBM header");
    int w = 0, h = 0;
    if (std::sscanf(data.substr(pos, nl - pos).c_str(), "%d %d", &w, &h) != 2 || w <= 0 || h <= 0)
        throw std::runtime_error("malformed PBM dimensions");
    pos = nl + 1;
    const int row_bytes = (w + 7) / 8;
    if (data.size() - pos < static_cast<size_t>(row_bytes) * h)
        throw std::runtime_error("truncated PBM data");
    BinaryImage img(w, h);
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x)
            if (data[pos + static_cast<size_t>(y) * row_bytes + x / 8] & (0x80 >> (x % 8)))
                img.set(x, y);
    return img;
}

namespace {

void append_be32(std::string& s, std::uint32_t v) {
    s += static_cast<char>(v >> 24);
    s += static_cast<char>(v >> 16);
    s += static_cast<char>(v >> 8);
    s += static_cast<char>(v);
}

void append_chunk(std::string& png, const char type[4], const std::string& payload) {
    append_be32(png, static_cast<std::uint32_t>(payload.size()));
    std::string body(type, 4);
    body += payload;
    png += body;
    const auto c = crc32(0, reinterpret_cast<const Bytef*>(body.data()),
                         static_cast<uInt>(body.size()));
    append_be32(png, static_cast<std::uint32_t>(c));
}

}  // namespace

void write_png(const BinaryImage& img, const std::filesystem::path& path) {
    // 1-bit grayscale; object pixels render black.
    std::string raw;
    const int row_bytes = (img.width + 7) / 8;
    raw.reserve(static_cast<size_t>(row_bytes + 1) * img.height);
    for (int y = 0; y < img.height; ++y) {
        raw += '\0';  // filter: none
        std::string row(row_bytes, '\0');
        for (int x = 0; x < img.width; ++x)
            if (!img.at(x, y)) row[x / 8] |= static_cast<char>(0x80 >> (x % 8));  // white bg
        raw += row;
    }
    uLongf comp_size = compressBound(static_cast<uLong>(raw.size()));
    std::string compressed(comp_size, '\0');
    if (compress2(reinterpret_cast<Bytef*>(compressed.data()), &comp_size,
                  reinterpret_cast<const Bytef*>(raw.data()), static_cast<uLong>(raw.size()),
                  9) != Z_OK)
        throw std::runtime_error("PNG deflate failed");
    compressed.resize(comp_size);

    std::string png("\x89PNG\r\n\x1a\n", 8);
    std::string ihdr;
    append_be32(ihdr, static_cast<std::uint32_t>(img.width));
    append_be32(ihdr, static_cast<std::uint32_t>(img.height));
    ihdr += '\x01';  // bit depth 1
    ihdr += '\x00';  // grayscale
    ihdr += '\x00';
    ihdr += '\x00';
    ihdr += '\x00';
    append_chunk(png, "IHDR", ihdr);
    append_chunk(png, "IDAT", compressed);
    append_chunk(png, "IEND", "");
    write_file(path, png);
}

}  // namespace meso::raster
