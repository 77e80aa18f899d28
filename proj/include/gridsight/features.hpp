#pragma once

#include <cstddef>
#include <vector>

#include "gridsight/image.hpp"

namespace gridsight {

/// HOG configuration. Orientations are unsigned, i.e. angles live in
/// [0, 180) degrees with theta and theta + 180 identified.
struct HogParams {
    int sub_cell_size = 3;
    int orientations = 8;

    bool operator==(const HogParams&) const = default;
};

/// Circular LBP configuration, rotation-invariant uniform binning
/// (points + 2 histogram bins).
struct LbpParams {
    int radius = 8;
    int points = 24;

    bool operator==(const LbpParams&) const = default;
};

/// Per-pixel gradient magnitude and orientation (degrees in [0, 180)).
struct GradientField {
    int width = 0;
    int height = 0;
    std::vector<double> magnitude;
    std::vector<double> orientation_deg;
};

/// Central-difference gradients (one-sided at the borders) of a grayscale
/// cell. Throws ValidationError on multi-channel input.
GradientField compute_gradients(const Image& cell);

/// HOG descriptor: the cell is tiled into floor(w/s) x floor(h/s) sub-cells
/// (trailing pixels ignored), each contributing an `orientations`-bin
/// magnitude histogram with hard bin assignment, L2-normalized per sub-cell.
/// Output length floor(w/s) * floor(h/s) * orientations, sub-cells row major.
std::vector<double> compute_hog(const Image& cell, const HogParams& params);

/// Rotation-invariant uniform LBP histogram over every pixel whose sampling
/// circle lies fully inside the cell, normalized by the valid-pixel count.
/// Output length points + 2.
std::vector<double> compute_lbp(const Image& cell, const LbpParams& params);

/// HOG block followed by LBP block. RGB cells are grayscale-converted first.
std::vector<double> extract_features(const Image& cell, const HogParams& hog,
                                     const LbpParams& lbp);

std::size_t hog_length(int cell_width, int cell_height, const HogParams& params);
std::size_t lbp_length(const LbpParams& params);
std::size_t feature_length(int cell_width, int cell_height,
                           const HogParams& hog, const LbpParams& lbp);

} // namespace gridsight
