#include "gridsight/pipeline.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <cstring>
#include <exception>
#include <numeric>
#include <random>
#include <set>
#include <sstream>
#include <unordered_map>

#include <json.hpp>

#include "gridsight/detail/wire.hpp"

namespace gridsight {

using detail::get_f64;
using detail::get_u32;
using detail::get_u64;
using detail::put_f64;
using detail::put_u32;
using detail::put_u64;

namespace {

constexpr char kDatasetMagic[4] = {'G', 'S', 'D', 'S'};
constexpr std::uint32_t kDatasetVersion = 1;

int resolve_threads(int threads) {
    return threads > 0 ? threads : omp_get_max_threads();
}

// Cell geometry must be checked once up front so the parallel feature loops
// cannot throw mid-flight.
void validate_cell_geometry(const GridSpec& grid, const HogParams& hog,
                            const LbpParams& lbp) {
    if (grid.cell_width < hog.sub_cell_size || grid.cell_height < hog.sub_cell_size) {
        throw ValidationError("grid cell smaller than one HOG sub-cell");
    }
    if (grid.cell_width <= 2 * lbp.radius || grid.cell_height <= 2 * lbp.radius) {
        throw ValidationError("grid cell too small for LBP radius " +
                              std::to_string(lbp.radius));
    }
}

void rethrow_first(const std::vector<std::exception_ptr>& errors) {
    for (const auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
}

Image cell_view(const Image& roi_gray, const GridSpec& grid, int row, int col) {
    return extract_roi(roi_gray, Roi{col * grid.cell_width, row * grid.cell_height,
                                     grid.cell_width, grid.cell_height});
}

int parse_int_field(const std::string& field, std::size_t line_no,
                    const char* what) {
    if (field.empty() || field.size() > 9 ||
        !std::all_of(field.begin(), field.end(),
                     [](unsigned char ch) { return std::isdigit(ch); })) {
        throw ValidationError("manifest line " + std::to_string(line_no) +
                              ": bad " + what + " '" + field + "'");
    }
    return std::stoi(field);
}

} // namespace

Dataset build_dataset(const std::vector<std::pair<std::string, Image>>& frames,
                      const Roi& roi, const GridSpec& grid,
                      const std::vector<CellLabel>& labels,
                      const HogParams& hog, const LbpParams& lbp, int threads) {
    validate_grid(grid, roi.width, roi.height);
    validate_cell_geometry(grid, hog, lbp);
    if (labels.empty()) {
        throw ValidationError("build_dataset: no labels provided");
    }

    std::unordered_map<std::string, std::size_t> frame_index;
    for (std::size_t i = 0; i < frames.size(); ++i) {
        frame_index.emplace(frames[i].first, i);
    }

    std::set<std::tuple<std::string, int, int>> seen;
    std::vector<std::size_t> label_frame(labels.size());
    for (std::size_t i = 0; i < labels.size(); ++i) {
        const CellLabel& l = labels[i];
        const auto it = frame_index.find(l.frame_id);
        if (it == frame_index.end()) {
            throw ValidationError("label references missing frame '" + l.frame_id + "'");
        }
        if (l.row < 0 || l.row >= grid.rows || l.col < 0 || l.col >= grid.cols) {
            throw ValidationError("label for frame '" + l.frame_id + "' cell (" +
                                  std::to_string(l.row) + "," + std::to_string(l.col) +
                                  ") outside " + std::to_string(grid.rows) + "x" +
                                  std::to_string(grid.cols) + " grid");
        }
        if (!seen.emplace(l.frame_id, l.row, l.col).second) {
            throw ValidationError("duplicate label for frame '" + l.frame_id +
                                  "' cell (" + std::to_string(l.row) + "," +
                                  std::to_string(l.col) + ")");
        }
        label_frame[i] = it->second;
    }

    // Grayscale ROI extracted once per frame; cells are sliced from it.
    std::vector<Image> roi_gray(frames.size());
    std::vector<char> frame_used(frames.size(), 0);
    for (std::size_t i : label_frame) frame_used[i] = 1;
    for (std::size_t i = 0; i < frames.size(); ++i) {
        if (!frame_used[i]) continue;
        const Image& frame = frames[i].second;
        validate_roi(roi, frame.width, frame.height);
        roi_gray[i] = to_grayscale(extract_roi(frame, roi));
    }

    Dataset ds;
    ds.features.rows = labels.size();
    ds.features.cols = feature_length(grid.cell_width, grid.cell_height, hog, lbp);
    ds.features.values.resize(ds.features.rows * ds.features.cols);
    ds.labels.resize(labels.size());
    ds.provenance.resize(labels.size());

    const int nthreads = resolve_threads(threads);
    std::vector<std::exception_ptr> errors(labels.size());
#pragma omp parallel for num_threads(nthreads) schedule(static)
    for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(labels.size()); ++i) {
        try {
            const CellLabel& l = labels[i];
            const Image cell = cell_view(roi_gray[label_frame[i]], grid, l.row, l.col);
            const std::vector<double> fv = extract_features(cell, hog, lbp);
            std::copy(fv.begin(), fv.end(), ds.features.row(i).begin());
            ds.labels[i] = l.label == CellClass::Traffic ? 1 : -1;
            ds.provenance[i] = CellRef{l.frame_id, l.row, l.col};
        } catch (...) {
            errors[i] = std::current_exception();
        }
    }
    rethrow_first(errors);
    return ds;
}

std::pair<Dataset, Dataset> split_dataset(const Dataset& dataset,
                                          double train_fraction,
                                          std::uint64_t seed) {
    const std::size_t n = dataset.features.rows;
    if (n < 2) throw ValidationError("split_dataset: need at least 2 rows");
    if (!(train_fraction > 0.0 && train_fraction < 1.0)) {
        throw ValidationError("split_dataset: train_fraction must be in (0,1)");
    }
    // Round half up, pinned for determinism.
    const auto train_n = static_cast<std::size_t>(
        std::floor(static_cast<double>(n) * train_fraction + 0.5));
    if (train_n == 0 || train_n == n) {
        throw ValidationError("split_dataset: split leaves one side empty");
    }

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::mt19937_64 rng(seed);
    for (std::size_t i = n; i > 1; --i) {
        const std::size_t j = static_cast<std::size_t>(rng() % i);
        std::swap(order[i - 1], order[j]);
    }

    const std::size_t d = dataset.features.cols;
    auto take = [&](std::size_t begin, std::size_t end) {
        Dataset out;
        out.features.rows = end - begin;
        out.features.cols = d;
        out.features.values.resize(out.features.rows * d);
        out.labels.resize(out.features.rows);
        out.provenance.resize(out.features.rows);
        for (std::size_t k = begin; k < end; ++k) {
            const std::size_t src = order[k];
            const std::size_t dst = k - begin;
            const auto row = dataset.features.row(src);
            std::copy(row.begin(), row.end(), out.features.row(dst).begin());
            out.labels[dst] = dataset.labels[src];
            out.provenance[dst] = dataset.provenance[src];
        }
        return out;
    };
    return {take(0, train_n), take(train_n, n)};
}

DensityReport estimate_density(const Image& frame, const Roi& roi,
                               const GridSpec& grid, const LinearSvmModel& model,
                               const HogParams& hog, const LbpParams& lbp,
                               const std::string& frame_id, int threads) {
    validate_roi(roi, frame.width, frame.height);
    validate_grid(grid, roi.width, roi.height);
    validate_cell_geometry(grid, hog, lbp);
    const std::size_t dim = feature_length(grid.cell_width, grid.cell_height, hog, lbp);
    if (dim != model.dimension()) {
        throw DimensionError("estimate_density: feature dimension " +
                             std::to_string(dim) + " vs model " +
                             std::to_string(model.dimension()));
    }

    const Image roi_gray = to_grayscale(extract_roi(frame, roi));
    const int total = grid.rows * grid.cols;

    DensityReport report;
    report.frame_id = frame_id;
    report.rows = grid.rows;
    report.cols = grid.cols;
    report.grid.assign(total, CellClass::Road);
    report.total_cells = total;

    const int nthreads = resolve_threads(threads);
    std::vector<std::exception_ptr> errors(total);
#pragma omp parallel for num_threads(nthreads) schedule(static)
    for (int i = 0; i < total; ++i) {
        try {
            const Image cell = cell_view(roi_gray, grid, i / grid.cols, i % grid.cols);
            const std::vector<double> fv = extract_features(cell, hog, lbp);
            report.grid[i] = predict(model, fv).label == 1 ? CellClass::Traffic
                                                           : CellClass::Road;
        } catch (...) {
            errors[i] = std::current_exception();
        }
    }
    rethrow_first(errors);

    report.traffic_cells = static_cast<int>(
        std::count(report.grid.begin(), report.grid.end(), CellClass::Traffic));
    report.density = static_cast<double>(report.traffic_cells) /
                     static_cast<double>(total);
    return report;
}

Image annotate(const Image& frame, const Roi& roi, const GridSpec& grid,
               const DensityReport& report) {
    validate_roi(roi, frame.width, frame.height);
    validate_grid(grid, roi.width, roi.height);
    if (report.rows != grid.rows || report.cols != grid.cols ||
        report.grid.size() != static_cast<std::size_t>(grid.rows) * grid.cols) {
        throw DimensionError("annotate: report grid does not match the grid spec");
    }

    Image out(frame.width, frame.height, 3);
    if (frame.channels == 3) {
        out.pixels = frame.pixels;
    } else {
        for (int y = 0; y < frame.height; ++y) {
            for (int x = 0; x < frame.width; ++x) {
                const std::uint8_t v = frame.at(x, y);
                out.at(x, y, 0) = v;
                out.at(x, y, 1) = v;
                out.at(x, y, 2) = v;
            }
        }
    }

    constexpr int kBorder = 2;
    for (int r = 0; r < grid.rows; ++r) {
        for (int c = 0; c < grid.cols; ++c) {
            const bool traffic = report.cell(r, c) == CellClass::Traffic;
            const std::uint8_t red = traffic ? 255 : 0;
            const std::uint8_t green = traffic ? 0 : 255;
            const int ox = roi.x + c * grid.cell_width;
            const int oy = roi.y + r * grid.cell_height;
            for (int v = 0; v < grid.cell_height; ++v) {
                for (int u = 0; u < grid.cell_width; ++u) {
                    const bool border = u < kBorder || u >= grid.cell_width - kBorder ||
                                        v < kBorder || v >= grid.cell_height - kBorder;
                    if (!border) continue;
                    out.at(ox + u, oy + v, 0) = red;
                    out.at(ox + u, oy + v, 1) = green;
                    out.at(ox + u, oy + v, 2) = 0;
                }
            }
        }
    }
    return out;
}

std::pair<Image, std::vector<CellLabel>>
generate_synthetic_frame(const SyntheticSceneSpec& spec, const std::string& frame_id) {
    if (spec.rows < 1 || spec.cols < 1 || spec.cell_width < 1 || spec.cell_height < 1) {
        throw ValidationError("synthetic scene: bad grid geometry");
    }
    std::set<std::pair<int, int>> vehicles;
    for (const auto& [r, c] : spec.vehicle_cells) {
        if (r < 0 || r >= spec.rows || c < 0 || c >= spec.cols) {
            throw ValidationError("synthetic scene: vehicle cell (" +
                                  std::to_string(r) + "," + std::to_string(c) +
                                  ") outside grid");
        }
        vehicles.emplace(r, c);
    }

    const int cw = spec.cell_width;
    const int ch = spec.cell_height;
    Image frame(spec.cols * cw, spec.rows * ch, 1);

    // Road texture: flat gray with low-amplitude noise, row-major fill so the
    // frame is a pure function of the seed.
    std::mt19937_64 rng(spec.noise_seed);
    for (auto& px : frame.pixels) {
        px = static_cast<std::uint8_t>(110 + static_cast<int>(rng() % 21));
    }

    // Vehicles: dark body over most of the cell plus one bright windshield
    // stripe, giving strong boundary gradients and flat interior texture.
    const int mx = cw / 10;
    const int my = ch / 10;
    const int body_h = ch - 2 * my;
    const int stripe_y0 = my + body_h / 4;
    const int stripe_h = std::max(1, body_h / 12);
    for (const auto& [r, c] : vehicles) {
        const int ox = c * cw;
        const int oy = r * ch;
        for (int v = my; v < ch - my; ++v) {
            const bool stripe = v >= stripe_y0 && v < stripe_y0 + stripe_h;
            const std::uint8_t shade = stripe ? 220 : 30;
            for (int u = mx; u < cw - mx; ++u) {
                frame.at(ox + u, oy + v) = shade;
            }
        }
    }

    std::vector<CellLabel> labels;
    labels.reserve(static_cast<std::size_t>(spec.rows) * spec.cols);
    for (int r = 0; r < spec.rows; ++r) {
        for (int c = 0; c < spec.cols; ++c) {
            labels.push_back(CellLabel{
                frame_id, r, c,
                vehicles.count({r, c}) ? CellClass::Traffic : CellClass::Road});
        }
    }
    return {std::move(frame), std::move(labels)};
}

std::vector<CellLabel> parse_manifest(const std::string& text) {
    std::vector<std::string> lines;
    std::string current;
    std::istringstream in(text);
    while (std::getline(in, current)) {
        if (!current.empty() && current.back() == '\r') current.pop_back();
        lines.push_back(current);
    }
    if (lines.empty() || lines[0] != "frame_id,row,col,label") {
        throw ValidationError("manifest: missing 'frame_id,row,col,label' header");
    }

    std::vector<CellLabel> labels;
    std::set<std::tuple<std::string, int, int>> seen;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        const std::string& line = lines[i];
        if (line.empty()) continue;
        std::vector<std::string> fields;
        std::size_t start = 0;
        while (true) {
            const std::size_t comma = line.find(',', start);
            fields.push_back(line.substr(start, comma - start));
            if (comma == std::string::npos) break;
            start = comma + 1;
        }
        if (fields.size() != 4) {
            throw ValidationError("manifest line " + std::to_string(i + 1) +
                                  ": expected 4 fields, got " +
                                  std::to_string(fields.size()));
        }
        if (fields[0].empty()) {
            throw ValidationError("manifest line " + std::to_string(i + 1) +
                                  ": empty frame_id");
        }
        CellLabel label;
        label.frame_id = fields[0];
        label.row = parse_int_field(fields[1], i + 1, "row");
        label.col = parse_int_field(fields[2], i + 1, "col");
        if (fields[3] == "traffic") {
            label.label = CellClass::Traffic;
        } else if (fields[3] == "road") {
            label.label = CellClass::Road;
        } else {
            throw ValidationError("manifest line " + std::to_string(i + 1) +
                                  ": label must be 'traffic' or 'road', got '" +
                                  fields[3] + "'");
        }
        if (!seen.emplace(label.frame_id, label.row, label.col).second) {
            throw ValidationError("manifest line " + std::to_string(i + 1) +
                                  ": duplicate cell (" + label.frame_id + "," +
                                  fields[1] + "," + fields[2] + ")");
        }
        labels.push_back(std::move(label));
    }
    return labels;
}

std::string format_manifest(const std::vector<CellLabel>& labels) {
    std::string out = "frame_id,row,col,label\n";
    for (const CellLabel& l : labels) {
        out += l.frame_id;
        out += ',';
        out += std::to_string(l.row);
        out += ',';
        out += std::to_string(l.col);
        out += ',';
        out += l.label == CellClass::Traffic ? "traffic" : "road";
        out += '\n';
    }
    return out;
}

std::vector<std::uint8_t> save_dataset(const Dataset& dataset) {
    const std::size_t n = dataset.features.rows;
    if (dataset.labels.size() != n || dataset.provenance.size() != n) {
        throw DimensionError("save_dataset: rows, labels and provenance disagree");
    }
    std::string prov;
    for (const CellRef& ref : dataset.provenance) {
        prov += ref.frame_id;
        prov += ',';
        prov += std::to_string(ref.row);
        prov += ',';
        prov += std::to_string(ref.col);
        prov += '\n';
    }

    std::vector<std::uint8_t> out;
    out.reserve(24 + dataset.features.values.size() * 8 + n + 8 + prov.size());
    out.insert(out.end(), kDatasetMagic, kDatasetMagic + 4);
    put_u32(out, kDatasetVersion);
    put_u64(out, n);
    put_u64(out, dataset.features.cols);
    for (double v : dataset.features.values) put_f64(out, v);
    for (int y : dataset.labels) {
        out.push_back(y == 1 ? std::uint8_t{1} : std::uint8_t{0});
    }
    put_u64(out, prov.size());
    out.insert(out.end(), prov.begin(), prov.end());
    return out;
}

Dataset load_dataset(std::span<const std::uint8_t> bytes) {
    if (bytes.size() < 4 || std::memcmp(bytes.data(), kDatasetMagic, 4) != 0) {
        throw ParseError(ParseFault::BadMagic, "dataset: bad magic");
    }
    std::size_t pos = 4;
    if (bytes.size() < pos + 4 + 8 + 8) {
        throw ParseError(ParseFault::LengthMismatch, "dataset: header truncated");
    }
    const std::uint32_t version = get_u32(bytes, pos);
    if (version != kDatasetVersion) {
        throw ParseError(ParseFault::BadVersion,
                         "dataset: unsupported format version " +
                         std::to_string(version));
    }
    const std::uint64_t n = get_u64(bytes, pos);
    const std::uint64_t dim = get_u64(bytes, pos);
    const std::uint64_t feature_bytes = n * dim * 8;
    if (bytes.size() < pos + feature_bytes + n + 8) {
        throw ParseError(ParseFault::LengthMismatch, "dataset: body truncated");
    }

    Dataset ds;
    ds.features.rows = n;
    ds.features.cols = dim;
    ds.features.values.resize(n * dim);
    for (auto& v : ds.features.values) v = get_f64(bytes, pos);
    ds.labels.resize(n);
    for (auto& y : ds.labels) {
        const std::uint8_t raw = bytes[pos++];
        if (raw > 1) throw ValidationError("dataset: label byte must be 0 or 1");
        y = raw == 1 ? 1 : -1;
    }
    const std::uint64_t prov_len = get_u64(bytes, pos);
    if (bytes.size() != pos + prov_len) {
        throw ParseError(ParseFault::LengthMismatch,
                         "dataset: provenance length mismatch");
    }
    const std::string prov(bytes.begin() + pos, bytes.end());

    std::istringstream in(prov);
    std::string line;
    while (std::getline(in, line)) {
        const std::size_t c1 = line.find(',');
        const std::size_t c2 = line.rfind(',');
        if (c1 == std::string::npos || c2 == c1) {
            throw ValidationError("dataset: malformed provenance line '" + line + "'");
        }
        CellRef ref;
        ref.frame_id = line.substr(0, c1);
        ref.row = std::stoi(line.substr(c1 + 1, c2 - c1 - 1));
        ref.col = std::stoi(line.substr(c2 + 1));
        ds.provenance.push_back(std::move(ref));
    }
    if (ds.provenance.size() != n) {
        throw ValidationError("dataset: provenance rows " +
                              std::to_string(ds.provenance.size()) +
                              " != sample count " + std::to_string(n));
    }
    return ds;
}

std::string report_to_json(const DensityReport& report) {
    nlohmann::ordered_json grid = nlohmann::ordered_json::array();
    for (int r = 0; r < report.rows; ++r) {
        nlohmann::ordered_json row = nlohmann::ordered_json::array();
        for (int c = 0; c < report.cols; ++c) {
            row.push_back(report.cell(r, c) == CellClass::Traffic ? 1 : 0);
        }
        grid.push_back(std::move(row));
    }
    nlohmann::ordered_json doc;
    doc["frame_id"] = report.frame_id;
    doc["rows"] = report.rows;
    doc["cols"] = report.cols;
    doc["grid"] = std::move(grid);
    doc["traffic_cells"] = report.traffic_cells;
    doc["total_cells"] = report.total_cells;
    doc["density"] = report.density;
    return doc.dump(2) + "\n";
}

} // namespace gridsight
