#pragma once

#include "gridsight/pipeline.hpp"

namespace gridsight {

struct BenchResult {
    int threads = 1;
    int iterations = 0;
    double median_ms = 0.0;
    double min_ms = 0.0;
};

/// Times the full estimate path (cell slicing, features, prediction) over
/// `iterations` runs at the given thread count and reports the median and
/// minimum wall time per frame. This is the measurement behind `bench`.
BenchResult bench_estimate(const Image& frame, const Roi& roi,
                           const GridSpec& grid, const LinearSvmModel& model,
                           const HogParams& hog, const LbpParams& lbp,
                           int iterations, int threads);

} // namespace gridsight
