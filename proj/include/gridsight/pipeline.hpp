#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "gridsight/features.hpp"
#include "gridsight/image.hpp"
#include "gridsight/svm.hpp"

namespace gridsight {

enum class CellClass : std::uint8_t { Road = 0, Traffic = 1 };

/// Ground-truth class for one grid cell of one frame.
struct CellLabel {
    std::string frame_id;
    int row = 0;
    int col = 0;
    CellClass label = CellClass::Road;

    bool operator==(const CellLabel&) const = default;
};

/// Which frame/cell a dataset row came from.
struct CellRef {
    std::string frame_id;
    int row = 0;
    int col = 0;

    bool operator==(const CellRef&) const = default;
    auto operator<=>(const CellRef&) const = default;
};

struct Dataset {
    FeatureMatrix features;      // n x dim
    std::vector<int> labels;     // +1 traffic, -1 road
    std::vector<CellRef> provenance;
};

/// Per-frame classification grid plus the traffic-cell count.
struct DensityReport {
    std::string frame_id;
    int rows = 0;
    int cols = 0;
    std::vector<CellClass> grid;  // row major, rows*cols entries
    int traffic_cells = 0;
    int total_cells = 0;
    double density = 0.0;

    CellClass cell(int r, int c) const { return grid[r * cols + c]; }
};

/// Desk-scale stand-in for real camera footage: flat-noise road texture with
/// high-contrast vehicle rectangles planted in chosen cells.
struct SyntheticSceneSpec {
    int rows = 9;
    int cols = 8;
    int cell_width = 44;
    int cell_height = 44;
    std::vector<std::pair<int, int>> vehicle_cells;  // (row, col)
    std::uint64_t noise_seed = 0;
};

/// One feature row per labeled cell, in label order; labels map
/// traffic -> +1, road -> -1. Throws ValidationError when a label names a
/// missing frame or an out-of-grid cell. threads <= 0 means all cores.
Dataset build_dataset(const std::vector<std::pair<std::string, Image>>& frames,
                      const Roi& roi, const GridSpec& grid,
                      const std::vector<CellLabel>& labels,
                      const HogParams& hog, const LbpParams& lbp,
                      int threads = 0);

/// Seeded uniform shuffle, first round(n*fraction) rows train, rest test.
/// Deterministic per seed; throws if either side would be empty.
std::pair<Dataset, Dataset> split_dataset(const Dataset& dataset,
                                          double train_fraction,
                                          std::uint64_t seed);

/// Classifies every grid cell of the frame and counts the traffic cells.
/// Identical to sequential evaluation at any thread count.
DensityReport estimate_density(const Image& frame, const Roi& roi,
                               const GridSpec& grid, const LinearSvmModel& model,
                               const HogParams& hog, const LbpParams& lbp,
                               const std::string& frame_id = "", int threads = 0);

/// RGB copy of the frame with a 2-pixel border drawn just inside each cell,
/// red (255,0,0) for traffic and green (0,255,0) for road. Pixels off the
/// borders are untouched.
Image annotate(const Image& frame, const Roi& roi, const GridSpec& grid,
               const DensityReport& report);

/// Deterministic per noise_seed; returns the frame plus full ground truth
/// (vehicle cells -> traffic, everything else -> road).
std::pair<Image, std::vector<CellLabel>>
generate_synthetic_frame(const SyntheticSceneSpec& spec,
                         const std::string& frame_id = "synthetic");

/// Label manifest: UTF-8 CSV with header "frame_id,row,col,label",
/// label in {traffic, road}. Duplicate (frame_id,row,col) rows are rejected.
std::vector<CellLabel> parse_manifest(const std::string& text);
std::string format_manifest(const std::vector<CellLabel>& labels);

/// "GSDS" dataset format: magic, version u32, n u64, dim u64, row-major
/// little-endian doubles, n label bytes (1 traffic / 0 road), then a
/// length-prefixed UTF-8 provenance block. Round trips exactly.
std::vector<std::uint8_t> save_dataset(const Dataset& dataset);
Dataset load_dataset(std::span<const std::uint8_t> bytes);

/// Density report as a JSON object (grid entries 1 = traffic, 0 = road).
std::string report_to_json(const DensityReport& report);

} // namespace gridsight
