#pragma once

#include <optional>
#include <string>

#include "gridsight/features.hpp"
#include "gridsight/image.hpp"
#include "gridsight/svm.hpp"

namespace gridsight {

/// Everything a run needs, loadable from a flat JSON config file.
/// Missing keys keep their defaults; unknown keys are rejected.
struct RunConfig {
    std::optional<Roi> roi;   // absent = full frame
    GridSpec grid;
    HogParams hog;
    LbpParams lbp;
    TrainConfig train;
    double train_fraction = 0.8;
    int threads = 0;          // <= 0: machine parallelism

    // Default input/output locations; CLI arguments take precedence.
    std::string frames_dir;
    std::string manifest;
    std::string dataset;
    std::string model;
    std::string frame;
    std::string out;

    bool operator==(const RunConfig&) const = default;
};

/// Parses the flat-key JSON config. Throws ValidationError on malformed
/// JSON, unknown keys, wrong value types, or invariant violations.
RunConfig parse_run_config(const std::string& json_text);

/// Emits JSON that parses back to an equal RunConfig.
std::string emit_run_config(const RunConfig& config);

} // namespace gridsight
