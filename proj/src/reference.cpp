#include "gridsight/reference.hpp"

#include <cmath>
#include <cstdint>
#include <numbers>
#include <string>

namespace gridsight::reference {

namespace {

void require_grayscale(const Image& cell, const char* op) {
    if (cell.channels != 1) {
        throw ValidationError(std::string(op) + ": grayscale input required");
    }
}

double gradient_x(const Image& img, int x, int y) {
    if (img.width == 1) return 0.0;
    if (x == 0) {
        return static_cast<double>(img.at(1, y)) - static_cast<double>(img.at(0, y));
    }
    if (x == img.width - 1) {
        return static_cast<double>(img.at(x, y)) -
               static_cast<double>(img.at(x - 1, y));
    }
    return static_cast<double>(img.at(x + 1, y)) -
           static_cast<double>(img.at(x - 1, y));
}

double gradient_y(const Image& img, int x, int y) {
    if (img.height == 1) return 0.0;
    if (y == 0) {
        return static_cast<double>(img.at(x, 1)) - static_cast<double>(img.at(x, 0));
    }
    if (y == img.height - 1) {
        return static_cast<double>(img.at(x, y)) -
               static_cast<double>(img.at(x, y - 1));
    }
    return static_cast<double>(img.at(x, y + 1)) -
           static_cast<double>(img.at(x, y - 1));
}

double unsigned_orientation(double gx, double gy) {
    double deg = std::atan2(gy, gx) * (180.0 / std::numbers::pi);
    if (deg < 0.0) deg += 180.0;
    if (deg >= 180.0) deg -= 180.0;
    return deg;
}

double snap_to_grid(double v) {
    const double r = std::round(v);
    return std::abs(v - r) <= 1e-9 ? r : v;
}

double sample_circle(const Image& img, double px, double py) {
    const int x0 = static_cast<int>(std::floor(px));
    const int y0 = static_cast<int>(std::floor(py));
    const double fx = px - x0;
    const double fy = py - y0;
    if (fx == 0.0 && fy == 0.0) {
        return img.at(x0, y0);
    }
    const double p00 = img.at(x0, y0);
    const double p01 = img.at(x0 + 1, y0);
    const double p10 = img.at(x0, y0 + 1);
    const double p11 = img.at(x0 + 1, y0 + 1);
    return p00 + fx * (p01 - p00) + fy * (p10 - p00) +
           fx * fy * (p00 - p01 - p10 + p11);
}

} // namespace

GradientField compute_gradients(const Image& cell) {
    require_grayscale(cell, "reference::compute_gradients");
    GradientField field;
    field.width = cell.width;
    field.height = cell.height;
    for (int y = 0; y < cell.height; ++y) {
        for (int x = 0; x < cell.width; ++x) {
            const double gx = gradient_x(cell, x, y);
            const double gy = gradient_y(cell, x, y);
            field.magnitude.push_back(std::sqrt(gx * gx + gy * gy));
            field.orientation_deg.push_back(unsigned_orientation(gx, gy));
        }
    }
    return field;
}

std::vector<double> compute_hog(const Image& cell, const HogParams& params) {
    require_grayscale(cell, "reference::compute_hog");
    const int s = params.sub_cell_size;
    const int o = params.orientations;
    if (s < 1 || o < 2) throw ValidationError("reference::compute_hog: bad params");
    if (cell.width < s || cell.height < s) {
        throw ValidationError("reference::compute_hog: cell smaller than one sub-cell");
    }
    const int nx = cell.width / s;
    const int ny = cell.height / s;

    std::vector<double> hist;
    hist.reserve(static_cast<std::size_t>(nx) * ny * o);
    for (int sy = 0; sy < ny; ++sy) {
        for (int sx = 0; sx < nx; ++sx) {
            std::vector<double> h(o, 0.0);
            for (int py = 0; py < s; ++py) {
                for (int px = 0; px < s; ++px) {
                    const int x = sx * s + px;
                    const int y = sy * s + py;
                    const double gx = gradient_x(cell, x, y);
                    const double gy = gradient_y(cell, x, y);
                    const double deg = unsigned_orientation(gx, gy);
                    int bin = static_cast<int>(deg / (180.0 / o));
                    if (bin >= o) bin = o - 1;
                    h[bin] += std::sqrt(gx * gx + gy * gy);
                }
            }
            double ss = 0.0;
            for (int b = 0; b < o; ++b) ss += h[b] * h[b];
            const double denom = std::sqrt(ss + 1e-10 * 1e-10);
            for (int b = 0; b < o; ++b) hist.push_back(h[b] / denom);
        }
    }
    return hist;
}

std::vector<double> compute_lbp(const Image& cell, const LbpParams& params) {
    require_grayscale(cell, "reference::compute_lbp");
    const int radius = params.radius;
    const int points = params.points;
    if (radius < 1 || points < 4 || points > 63) {
        throw ValidationError("reference::compute_lbp: bad params");
    }
    if (cell.width <= 2 * radius || cell.height <= 2 * radius) {
        throw ValidationError("reference::compute_lbp: cell too small for radius");
    }

    std::vector<double> hist(static_cast<std::size_t>(points) + 2, 0.0);
    std::size_t valid = 0;
    for (int y = radius; y < cell.height - radius; ++y) {
        for (int x = radius; x < cell.width - radius; ++x) {
            const double center = cell.at(x, y);
            std::vector<int> bits(points);
            for (int k = 0; k < points; ++k) {
                const double theta = (2.0 * std::numbers::pi * k) / points;
                const double px = snap_to_grid(x + radius * std::cos(theta));
                const double py = snap_to_grid(y - radius * std::sin(theta));
                bits[k] = sample_circle(cell, px, py) >= center ? 1 : 0;
            }
            int transitions = 0;
            int ones = 0;
            for (int k = 0; k < points; ++k) {
                if (bits[k] != bits[(k + 1) % points]) ++transitions;
                ones += bits[k];
            }
            const int bin = transitions <= 2 ? ones : points + 1;
            hist[bin] += 1.0;
            ++valid;
        }
    }
    for (double& h : hist) h /= static_cast<double>(valid);
    return hist;
}

} // namespace gridsight::reference
