#include "gridsight/config.hpp"

#include <json.hpp>

namespace gridsight {

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

int get_int(const json& v, const std::string& key) {
    if (!v.is_number_integer()) {
        throw ValidationError("config: '" + key + "' must be an integer");
    }
    return v.get<int>();
}

double get_number(const json& v, const std::string& key) {
    if (!v.is_number()) {
        throw ValidationError("config: '" + key + "' must be a number");
    }
    return v.get<double>();
}

std::uint64_t get_seed(const json& v, const std::string& key) {
    if (v.is_number_unsigned()) return v.get<std::uint64_t>();
    if (v.is_number_integer() && v.get<std::int64_t>() >= 0) {
        return static_cast<std::uint64_t>(v.get<std::int64_t>());
    }
    throw ValidationError("config: '" + key + "' must be a non-negative integer");
}

std::string get_string(const json& v, const std::string& key) {
    if (!v.is_string()) {
        throw ValidationError("config: '" + key + "' must be a string");
    }
    return v.get<std::string>();
}

void validate_config(const RunConfig& c) {
    if (c.roi) {
        if (c.roi->width < 1 || c.roi->height < 1 || c.roi->x < 0 || c.roi->y < 0) {
            throw ValidationError("config: roi must have non-negative origin and "
                                  "positive size");
        }
    }
    if (c.grid.rows < 1 || c.grid.cols < 1 || c.grid.cell_width < 1 ||
        c.grid.cell_height < 1) {
        throw ValidationError("config: grid rows/cols/cell sizes must be >= 1");
    }
    if (c.hog.sub_cell_size < 1) {
        throw ValidationError("config: hog_sub_cell_size must be >= 1");
    }
    if (c.hog.orientations < 2) {
        throw ValidationError("config: hog_orientations must be >= 2");
    }
    if (c.lbp.radius < 1) throw ValidationError("config: lbp_radius must be >= 1");
    if (c.lbp.points < 4 || c.lbp.points > 63) {
        throw ValidationError("config: lbp_points must be in [4, 63]");
    }
    if (!(c.train.lambda > 0.0)) {
        throw ValidationError("config: lambda must be > 0");
    }
    if (c.train.epochs < 1) throw ValidationError("config: epochs must be >= 1");
    if (!(c.train_fraction > 0.0 && c.train_fraction < 1.0)) {
        throw ValidationError("config: train_fraction must be in (0,1)");
    }
}

} // namespace

RunConfig parse_run_config(const std::string& json_text) {
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::exception& e) {
        throw ValidationError(std::string("config: malformed JSON: ") + e.what());
    }
    if (!doc.is_object()) {
        throw ValidationError("config: top level must be a JSON object");
    }

    RunConfig c;
    bool roi_seen[4] = {false, false, false, false};
    Roi roi;
    for (const auto& [key, value] : doc.items()) {
        if (key == "roi_x") { roi.x = get_int(value, key); roi_seen[0] = true; }
        else if (key == "roi_y") { roi.y = get_int(value, key); roi_seen[1] = true; }
        else if (key == "roi_width") { roi.width = get_int(value, key); roi_seen[2] = true; }
        else if (key == "roi_height") { roi.height = get_int(value, key); roi_seen[3] = true; }
        else if (key == "grid_rows") c.grid.rows = get_int(value, key);
        else if (key == "grid_cols") c.grid.cols = get_int(value, key);
        else if (key == "cell_width") c.grid.cell_width = get_int(value, key);
        else if (key == "cell_height") c.grid.cell_height = get_int(value, key);
        else if (key == "hog_sub_cell_size") c.hog.sub_cell_size = get_int(value, key);
        else if (key == "hog_orientations") c.hog.orientations = get_int(value, key);
        else if (key == "lbp_radius") c.lbp.radius = get_int(value, key);
        else if (key == "lbp_points") c.lbp.points = get_int(value, key);
        else if (key == "lambda") c.train.lambda = get_number(value, key);
        else if (key == "epochs") c.train.epochs = get_int(value, key);
        else if (key == "seed") c.train.seed = get_seed(value, key);
        else if (key == "mode") {
            const std::string mode = get_string(value, key);
            if (mode == "stochastic") c.train.mode = TrainMode::Stochastic;
            else if (mode == "full-batch") c.train.mode = TrainMode::FullBatch;
            else throw ValidationError("config: mode must be 'stochastic' or "
                                       "'full-batch', got '" + mode + "'");
        }
        else if (key == "train_fraction") c.train_fraction = get_number(value, key);
        else if (key == "threads") c.threads = get_int(value, key);
        else if (key == "frames_dir") c.frames_dir = get_string(value, key);
        else if (key == "manifest") c.manifest = get_string(value, key);
        else if (key == "dataset") c.dataset = get_string(value, key);
        else if (key == "model") c.model = get_string(value, key);
        else if (key == "frame") c.frame = get_string(value, key);
        else if (key == "out") c.out = get_string(value, key);
        else throw ValidationError("config: unknown key '" + key + "'");
    }

    const int roi_count = roi_seen[0] + roi_seen[1] + roi_seen[2] + roi_seen[3];
    if (roi_count == 4) {
        c.roi = roi;
    } else if (roi_count != 0) {
        throw ValidationError("config: roi needs all of roi_x, roi_y, roi_width, "
                              "roi_height");
    }
    validate_config(c);
    return c;
}

std::string emit_run_config(const RunConfig& config) {
    validate_config(config);
    ordered_json doc;
    if (config.roi) {
        doc["roi_x"] = config.roi->x;
        doc["roi_y"] = config.roi->y;
        doc["roi_width"] = config.roi->width;
        doc["roi_height"] = config.roi->height;
    }
    doc["grid_rows"] = config.grid.rows;
    doc["grid_cols"] = config.grid.cols;
    doc["cell_width"] = config.grid.cell_width;
    doc["cell_height"] = config.grid.cell_height;
    doc["hog_sub_cell_size"] = config.hog.sub_cell_size;
    doc["hog_orientations"] = config.hog.orientations;
    doc["lbp_radius"] = config.lbp.radius;
    doc["lbp_points"] = config.lbp.points;
    doc["lambda"] = config.train.lambda;
    doc["epochs"] = config.train.epochs;
    doc["seed"] = config.train.seed;
    doc["mode"] = config.train.mode == TrainMode::Stochastic ? "stochastic"
                                                             : "full-batch";
    doc["train_fraction"] = config.train_fraction;
    doc["threads"] = config.threads;
    doc["frames_dir"] = config.frames_dir;
    doc["manifest"] = config.manifest;
    doc["dataset"] = config.dataset;
    doc["model"] = config.model;
    doc["frame"] = config.frame;
    doc["out"] = config.out;
    return doc.dump(2) + "\n";
}

} // namespace gridsight
