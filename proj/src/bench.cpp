#include "gridsight/bench.hpp"

#include <algorithm>
#include <chrono>

namespace gridsight {

BenchResult bench_estimate(const Image& frame, const Roi& roi,
                           const GridSpec& grid, const LinearSvmModel& model,
                           const HogParams& hog, const LbpParams& lbp,
                           int iterations, int threads) {
    if (iterations < 1) {
        throw ValidationError("bench: iterations must be >= 1");
    }
    // Warm-up run outside the timed loop (page faults, orientation LUT).
    estimate_density(frame, roi, grid, model, hog, lbp, "bench", threads);

    std::vector<double> times_ms;
    times_ms.reserve(iterations);
    for (int i = 0; i < iterations; ++i) {
        const auto start = std::chrono::steady_clock::now();
        estimate_density(frame, roi, grid, model, hog, lbp, "bench", threads);
        const auto stop = std::chrono::steady_clock::now();
        times_ms.push_back(
            std::chrono::duration<double, std::milli>(stop - start).count());
    }
    std::sort(times_ms.begin(), times_ms.end());

    BenchResult result;
    result.threads = threads;
    result.iterations = iterations;
    result.min_ms = times_ms.front();
    const std::size_t n = times_ms.size();
    result.median_ms = n % 2 == 1
        ? times_ms[n / 2]
        : 0.5 * (times_ms[n / 2 - 1] + times_ms[n / 2]);
    return result;
}

} // namespace gridsight
