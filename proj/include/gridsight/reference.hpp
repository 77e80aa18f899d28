#pragma once

#include <vector>

#include "gridsight/features.hpp"
#include "gridsight/image.hpp"

namespace gridsight::reference {

// Straightforward single-loop implementations of the descriptor kernels,
// written directly from their definitions and kept deliberately independent
// of the optimized code paths in features.cpp. Tests compare the two, and
// the kernel benchmark measures the gap.

GradientField compute_gradients(const Image& cell);
std::vector<double> compute_hog(const Image& cell, const HogParams& params);
std::vector<double> compute_lbp(const Image& cell, const LbpParams& params);

} // namespace gridsight::reference
