#include "gridsight/features.hpp"

#include <bit>
#include <cmath>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>

namespace gridsight {

namespace {

void require_grayscale(const Image& cell, const char* op) {
    if (cell.channels != 1) {
        throw ValidationError(std::string(op) + ": grayscale input required");
    }
}

void validate_hog_params(const HogParams& p) {
    if (p.sub_cell_size < 1) throw ValidationError("hog: sub_cell_size must be >= 1");
    if (p.orientations < 2) throw ValidationError("hog: orientations must be >= 2");
}

void validate_lbp_params(const LbpParams& p) {
    if (p.radius < 1) throw ValidationError("lbp: radius must be >= 1");
    if (p.points < 4 || p.points > 63) {
        throw ValidationError("lbp: points must be in [4, 63]");
    }
}

// x gradient: central difference on interior pixels, one-sided at the cell
// borders, zero on single-column cells.
inline int grad_x(const Image& img, int x, int y) {
    if (img.width == 1) return 0;
    if (x == 0) return img.at(1, y) - img.at(0, y);
    if (x == img.width - 1) return img.at(x, y) - img.at(x - 1, y);
    return img.at(x + 1, y) - img.at(x - 1, y);
}

inline int grad_y(const Image& img, int x, int y) {
    if (img.height == 1) return 0;
    if (y == 0) return img.at(x, 1) - img.at(x, 0);
    if (y == img.height - 1) return img.at(x, y) - img.at(x, y - 1);
    return img.at(x, y + 1) - img.at(x, y - 1);
}

// Unsigned orientation in [0, 180) degrees; theta and theta + 180 identified.
inline double orientation_degrees(double gx, double gy) {
    double deg = std::atan2(gy, gx) * (180.0 / std::numbers::pi);
    if (deg < 0.0) deg += 180.0;
    if (deg >= 180.0) deg -= 180.0;
    return deg;
}

inline int orientation_bin(double gx, double gy, int orientations) {
    const double deg = orientation_degrees(gx, gy);
    int bin = static_cast<int>(deg / (180.0 / orientations));
    if (bin >= orientations) bin = orientations - 1;
    return bin;
}

// Hard bin assignment depends only on the integer gradient pair, so the
// whole (gx, gy) plane is memoized once per orientation count. Gradients of
// 8-bit images stay in [-255, 255].
constexpr int kGradRange = 511;

const std::int16_t* orientation_bin_lut(int orientations) {
    static std::mutex mu;
    static std::map<int, std::unique_ptr<std::vector<std::int16_t>>> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto& slot = cache[orientations];
    if (!slot) {
        slot = std::make_unique<std::vector<std::int16_t>>(
            static_cast<std::size_t>(kGradRange) * kGradRange);
        auto& lut = *slot;
        for (int gy = -255; gy <= 255; ++gy) {
            for (int gx = -255; gx <= 255; ++gx) {
                lut[static_cast<std::size_t>(gy + 255) * kGradRange + (gx + 255)] =
                    static_cast<std::int16_t>(orientation_bin(
                        static_cast<double>(gx), static_cast<double>(gy),
                        orientations));
            }
        }
    }
    return slot->data();
}

// Sample coordinates within 1e-9 of a grid point snap to it, keeping the
// bilinear weights stable against rounding in the angle tables.
inline double snapped(double v) {
    const double r = std::round(v);
    return std::abs(v - r) <= 1e-9 ? r : v;
}

} // namespace

std::size_t hog_length(int cell_width, int cell_height, const HogParams& p) {
    validate_hog_params(p);
    return static_cast<std::size_t>(cell_width / p.sub_cell_size) *
           static_cast<std::size_t>(cell_height / p.sub_cell_size) *
           static_cast<std::size_t>(p.orientations);
}

std::size_t lbp_length(const LbpParams& p) {
    validate_lbp_params(p);
    return static_cast<std::size_t>(p.points) + 2;
}

std::size_t feature_length(int cell_width, int cell_height, const HogParams& hog,
                           const LbpParams& lbp) {
    return hog_length(cell_width, cell_height, hog) + lbp_length(lbp);
}

GradientField compute_gradients(const Image& cell) {
    require_grayscale(cell, "compute_gradients");
    GradientField field;
    field.width = cell.width;
    field.height = cell.height;
    const std::size_t n = static_cast<std::size_t>(cell.width) * cell.height;
    field.magnitude.resize(n);
    field.orientation_deg.resize(n);
    for (int y = 0; y < cell.height; ++y) {
        for (int x = 0; x < cell.width; ++x) {
            const int gx = grad_x(cell, x, y);
            const int gy = grad_y(cell, x, y);
            const std::size_t i = static_cast<std::size_t>(y) * cell.width + x;
            field.magnitude[i] = std::sqrt(static_cast<double>(gx * gx + gy * gy));
            field.orientation_deg[i] = orientation_degrees(
                static_cast<double>(gx), static_cast<double>(gy));
        }
    }
    return field;
}

std::vector<double> compute_hog(const Image& cell, const HogParams& params) {
    require_grayscale(cell, "compute_hog");
    validate_hog_params(params);
    const int s = params.sub_cell_size;
    const int o = params.orientations;
    if (cell.width < s || cell.height < s) {
        throw ValidationError("compute_hog: cell smaller than one sub-cell");
    }
    const int nx = cell.width / s;
    const int ny = cell.height / s;

    std::vector<double> hist(static_cast<std::size_t>(nx) * ny * o, 0.0);
    const std::int16_t* lut = orientation_bin_lut(o);

    // Trailing pixels right of / below the sub-cell tiling carry no
    // histogram mass but still act as gradient neighbors.
    for (int y = 0; y < ny * s; ++y) {
        double* row_hist = hist.data() + static_cast<std::size_t>(y / s) * nx * o;
        for (int x = 0; x < nx * s; ++x) {
            const int gx = grad_x(cell, x, y);
            const int gy = grad_y(cell, x, y);
            const double mag = std::sqrt(static_cast<double>(gx * gx + gy * gy));
            const int bin = lut[static_cast<std::size_t>(gy + 255) * kGradRange +
                                (gx + 255)];
            row_hist[static_cast<std::size_t>(x / s) * o + bin] += mag;
        }
    }

    for (int c = 0; c < nx * ny; ++c) {
        double* v = hist.data() + static_cast<std::size_t>(c) * o;
        double ss = 0.0;
        for (int b = 0; b < o; ++b) ss += v[b] * v[b];
        const double denom = std::sqrt(ss + 1e-10 * 1e-10);
        for (int b = 0; b < o; ++b) v[b] = v[b] / denom;
    }
    return hist;
}

std::vector<double> compute_lbp(const Image& cell, const LbpParams& params) {
    require_grayscale(cell, "compute_lbp");
    validate_lbp_params(params);
    const int radius = params.radius;
    const int points = params.points;
    if (cell.width <= 2 * radius || cell.height <= 2 * radius) {
        throw ValidationError("compute_lbp: cell too small for radius " +
                              std::to_string(radius));
    }

    // Angle table is the expensive part of the plain formulation; hoist it.
    // Angles run counterclockwise while image y grows downward, hence -sin.
    std::vector<double> dx(points), dy(points);
    for (int k = 0; k < points; ++k) {
        const double theta = (2.0 * std::numbers::pi * k) / points;
        dx[k] = radius * std::cos(theta);
        dy[k] = -(radius * std::sin(theta));
    }

    const std::uint64_t ring_mask = (points == 63)
        ? 0x7FFFFFFFFFFFFFFFull
        : ((1ull << points) - 1);
    std::vector<std::uint64_t> counts(static_cast<std::size_t>(points) + 2, 0);

    std::vector<int> y0(points);
    std::vector<double> fy(points);
    const std::uint8_t* pix = cell.pixels.data();
    const int w = cell.width;

    for (int y = radius; y < cell.height - radius; ++y) {
        for (int k = 0; k < points; ++k) {
            const double py = snapped(y + dy[k]);
            y0[k] = static_cast<int>(std::floor(py));
            fy[k] = py - y0[k];
        }
        for (int x = radius; x < cell.width - radius; ++x) {
            const double center = pix[static_cast<std::size_t>(y) * w + x];
            std::uint64_t bits = 0;
            for (int k = 0; k < points; ++k) {
                const double px = snapped(x + dx[k]);
                const int x0 = static_cast<int>(std::floor(px));
                const double fx = px - x0;
                const std::uint8_t* r0 =
                    pix + static_cast<std::size_t>(y0[k]) * w + x0;
                double v;
                if (fx == 0.0 && fy[k] == 0.0) {
                    v = r0[0];
                } else {
                    const double p00 = r0[0];
                    const double p01 = r0[1];
                    const double p10 = r0[w];
                    const double p11 = r0[w + 1];
                    v = p00 + fx * (p01 - p00) + fy[k] * (p10 - p00) +
                        fx * fy[k] * (p00 - p01 - p10 + p11);
                }
                if (v >= center) bits |= 1ull << k;
            }
            // Transition count around the ring; <= 2 means a uniform pattern.
            const std::uint64_t next =
                ((bits >> 1) | (bits << (points - 1))) & ring_mask;
            const int transitions = std::popcount(bits ^ next);
            const int bin = transitions <= 2
                ? std::popcount(bits)
                : points + 1;
            ++counts[bin];
        }
    }

    const int valid_x = cell.width - 2 * radius;
    const int valid_y = cell.height - 2 * radius;
    const double total = static_cast<double>(valid_x) * valid_y;
    std::vector<double> hist(counts.size());
    for (std::size_t i = 0; i < counts.size(); ++i) {
        hist[i] = static_cast<double>(counts[i]) / total;
    }
    return hist;
}

std::vector<double> extract_features(const Image& cell, const HogParams& hog,
                                     const LbpParams& lbp) {
    const Image gray = to_grayscale(cell);
    std::vector<double> out = compute_hog(gray, hog);
    const std::vector<double> texture = compute_lbp(gray, lbp);
    out.insert(out.end(), texture.begin(), texture.end());
    return out;
}

} // namespace gridsight
