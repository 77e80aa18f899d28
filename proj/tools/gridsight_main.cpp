// gridsight: grid-cell traffic density estimation from roadside camera frames.
//
// Subcommands: extract, train, estimate, annotate, synth, bench.
// Exit codes: 0 success, 2 I/O failure, 3 invalid input, 4 dimension mismatch.

#include <omp.h>

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "gridsight/bench.hpp"
#include "gridsight/config.hpp"
#include "gridsight/pipeline.hpp"

namespace fs = std::filesystem;
using namespace gridsight;

namespace {

std::vector<std::uint8_t> read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());
    std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                    std::istreambuf_iterator<char>());
    if (in.bad()) throw IoError("read failed on " + path.string());
    return bytes;
}

void write_file(const fs::path& path, std::span<const std::uint8_t> bytes) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot create " + path.string());
    out.write(reinterpret_cast<const char*>(bytes.data()),
              static_cast<std::streamsize>(bytes.size()));
    if (!out) throw IoError("write failed on " + path.string());
}

void write_text(const fs::path& path, const std::string& text) {
    write_file(path, {reinterpret_cast<const std::uint8_t*>(text.data()),
                      text.size()});
}

std::uint64_t splitmix64(std::uint64_t z) {
    z += 0x9E3779B97F4A7C15ull;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

struct CliState {
    std::string config_path;
    std::vector<int> roi_flag;    // x,y,w,h
    std::vector<int> grid_flag;   // rows,cols,cw,ch
    std::vector<int> hog_flag;    // sub_cell,orientations
    std::vector<int> lbp_flag;    // radius,points
    std::uint64_t seed = 0;
    double lambda = 0.0;
    int epochs = 0;
    std::string mode;
    double train_fraction = 0.0;
    int threads = 0;

    // Option handles, used to tell "flag given" from "default value".
    CLI::Option* seed_opt = nullptr;
    CLI::Option* lambda_opt = nullptr;
    CLI::Option* epochs_opt = nullptr;
    CLI::Option* train_fraction_opt = nullptr;
    CLI::Option* threads_opt = nullptr;

    RunConfig resolve() const {
        RunConfig cfg;
        if (!config_path.empty()) {
            const auto bytes = read_file(config_path);
            cfg = parse_run_config(std::string(bytes.begin(), bytes.end()));
        }
        if (!roi_flag.empty()) {
            cfg.roi = Roi{roi_flag[0], roi_flag[1], roi_flag[2], roi_flag[3]};
        }
        if (!grid_flag.empty()) {
            cfg.grid = GridSpec{grid_flag[0], grid_flag[1], grid_flag[2],
                                grid_flag[3]};
        }
        if (!hog_flag.empty()) cfg.hog = HogParams{hog_flag[0], hog_flag[1]};
        if (!lbp_flag.empty()) cfg.lbp = LbpParams{lbp_flag[0], lbp_flag[1]};
        if (seed_opt->count() > 0) cfg.train.seed = seed;
        if (lambda_opt->count() > 0) cfg.train.lambda = lambda;
        if (epochs_opt->count() > 0) cfg.train.epochs = epochs;
        if (!mode.empty()) {
            if (mode == "stochastic") cfg.train.mode = TrainMode::Stochastic;
            else if (mode == "full-batch") cfg.train.mode = TrainMode::FullBatch;
            else throw ValidationError("--mode must be 'stochastic' or 'full-batch'");
        }
        if (train_fraction_opt->count() > 0) cfg.train_fraction = train_fraction;
        if (threads_opt->count() > 0) cfg.threads = threads;
        // Re-validate through the emitter path so flag overrides obey the
        // same invariants as file keys.
        return parse_run_config(emit_run_config(cfg));
    }
};

std::string pick_path(const std::string& arg, const std::string& config_value,
                      const char* what) {
    if (!arg.empty()) return arg;
    if (!config_value.empty()) return config_value;
    throw ValidationError(std::string("missing ") + what +
                          " (give it as an argument or config key)");
}

Roi roi_or_full_frame(const RunConfig& cfg, const Image& frame) {
    if (cfg.roi) return *cfg.roi;
    return Roi{0, 0, frame.width, frame.height};
}

int machine_threads(const RunConfig& cfg) {
    return cfg.threads > 0 ? cfg.threads : omp_get_max_threads();
}

std::string format_metrics(const Metrics& m) {
    char buf[256];
    std::snprintf(buf, sizeof buf,
                  "tp %llu tn %llu fp %llu fn %llu\n"
                  "accuracy %.6f precision %.6f%s recall %.6f%s f1 %.6f%s",
                  static_cast<unsigned long long>(m.tp),
                  static_cast<unsigned long long>(m.tn),
                  static_cast<unsigned long long>(m.fp),
                  static_cast<unsigned long long>(m.fn),
                  m.accuracy,
                  m.precision, m.degenerate_precision ? " (degenerate)" : "",
                  m.recall, m.degenerate_recall ? " (degenerate)" : "",
                  m.f1, m.degenerate_f1 ? " (degenerate)" : "");
    return buf;
}

// Frames live in a directory as NetPBM files; lexicographic name order is
// frame order and the stem is the frame id.
std::vector<std::pair<std::string, Image>> load_frames_dir(const fs::path& dir) {
    if (!fs::is_directory(dir)) {
        throw IoError("frames dir " + dir.string() + " is not a directory");
    }
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(dir)) {
        if (!entry.is_regular_file()) continue;
        const std::string ext = entry.path().extension().string();
        if (ext == ".pgm" || ext == ".ppm" || ext == ".pnm") {
            files.push_back(entry.path());
        }
    }
    std::sort(files.begin(), files.end(),
              [](const fs::path& a, const fs::path& b) {
                  return a.filename().string() < b.filename().string();
              });
    std::vector<std::pair<std::string, Image>> frames;
    frames.reserve(files.size());
    for (const auto& path : files) {
        frames.emplace_back(path.stem().string(), load_netpbm(path));
    }
    return frames;
}

void cmd_extract(const CliState& state, const std::string& frames_arg,
                 const std::string& manifest_arg, const std::string& out_arg) {
    const RunConfig cfg = state.resolve();
    const auto frames_dir = pick_path(frames_arg, cfg.frames_dir, "frames dir");
    const auto manifest_path = pick_path(manifest_arg, cfg.manifest, "manifest path");
    const auto out_path = pick_path(out_arg, cfg.dataset, "output dataset path");

    const auto frames = load_frames_dir(frames_dir);
    const auto manifest_bytes = read_file(manifest_path);
    const auto labels =
        parse_manifest(std::string(manifest_bytes.begin(), manifest_bytes.end()));
    if (labels.empty()) {
        throw ValidationError("manifest has no label rows; refusing to write an "
                              "empty dataset");
    }
    if (frames.empty()) {
        throw ValidationError("no NetPBM frames found in " + frames_dir);
    }

    Roi roi = cfg.roi ? *cfg.roi
                      : Roi{0, 0, frames[0].second.width, frames[0].second.height};
    const Dataset ds = build_dataset(frames, roi, cfg.grid, labels, cfg.hog,
                                     cfg.lbp, machine_threads(cfg));
    write_file(out_path, save_dataset(ds));

    const auto traffic = std::count(ds.labels.begin(), ds.labels.end(), 1);
    std::printf("rows %zu traffic %zu road %zu\n", ds.features.rows,
                static_cast<std::size_t>(traffic),
                ds.features.rows - static_cast<std::size_t>(traffic));
}

void cmd_train(const CliState& state, const std::string& dataset_arg,
               const std::string& out_arg) {
    const RunConfig cfg = state.resolve();
    const auto dataset_path = pick_path(dataset_arg, cfg.dataset, "dataset path");
    const auto out_path = pick_path(out_arg, cfg.model, "output model path");

    const Dataset ds = load_dataset(read_file(dataset_path));
    auto [train_ds, test_ds] = split_dataset(ds, cfg.train_fraction, cfg.train.seed);
    const LinearSvmModel model = train(train_ds.features, train_ds.labels, cfg.train);
    write_file(out_path, save_model(model));

    const Metrics m = evaluate(model, test_ds.features, test_ds.labels);
    std::printf("train_rows %zu test_rows %zu\n%s\n", train_ds.features.rows,
                test_ds.features.rows, format_metrics(m).c_str());
}

void cmd_estimate(const CliState& state, const std::string& model_arg,
                  const std::string& frame_arg, const std::string& out_arg) {
    const RunConfig cfg = state.resolve();
    const auto model_path = pick_path(model_arg, cfg.model, "model path");
    const auto frame_path = pick_path(frame_arg, cfg.frame, "frame path");
    const auto out_path = pick_path(out_arg, cfg.out, "output report path");

    const LinearSvmModel model = load_model(read_file(model_path));
    const Image frame = load_netpbm(frame_path);
    const DensityReport report = estimate_density(
        frame, roi_or_full_frame(cfg, frame), cfg.grid, model, cfg.hog, cfg.lbp,
        fs::path(frame_path).stem().string(), machine_threads(cfg));
    write_text(out_path, report_to_json(report));
    std::printf("%d/%d %.6f\n", report.traffic_cells, report.total_cells,
                report.density);
}

void cmd_annotate(const CliState& state, const std::string& model_arg,
                  const std::string& frame_arg, const std::string& out_arg) {
    const RunConfig cfg = state.resolve();
    const auto model_path = pick_path(model_arg, cfg.model, "model path");
    const auto frame_path = pick_path(frame_arg, cfg.frame, "frame path");
    const auto out_path = pick_path(out_arg, cfg.out, "output image path");

    const LinearSvmModel model = load_model(read_file(model_path));
    const Image frame = load_netpbm(frame_path);
    const Roi roi = roi_or_full_frame(cfg, frame);
    const DensityReport report =
        estimate_density(frame, roi, cfg.grid, model, cfg.hog, cfg.lbp,
                         fs::path(frame_path).stem().string(), machine_threads(cfg));
    save_netpbm(out_path, annotate(frame, roi, cfg.grid, report));
    std::printf("%d/%d %.6f\n", report.traffic_cells, report.total_cells,
                report.density);
}

void cmd_synth(const CliState& state, const std::string& out_arg, int n_frames,
               int vehicles, const std::string& vehicle_cells_arg) {
    const RunConfig cfg = state.resolve();
    const auto out_dir = pick_path(out_arg, cfg.out, "output dir");
    if (n_frames < 1) throw ValidationError("synth: --frames must be >= 1");
    const int total_cells = cfg.grid.rows * cfg.grid.cols;
    if (vehicles < 0 || vehicles > total_cells) {
        throw ValidationError("synth: --vehicles must be in [0, rows*cols]");
    }

    std::vector<std::pair<int, int>> fixed_cells;
    if (!vehicle_cells_arg.empty()) {
        std::istringstream in(vehicle_cells_arg);
        std::string pair_str;
        while (std::getline(in, pair_str, ';')) {
            const std::size_t comma = pair_str.find(',');
            if (comma == std::string::npos) {
                throw ValidationError("synth: --vehicle-cells wants 'r,c;r,c;...'");
            }
            try {
                fixed_cells.emplace_back(std::stoi(pair_str.substr(0, comma)),
                                         std::stoi(pair_str.substr(comma + 1)));
            } catch (const std::exception&) {
                throw ValidationError("synth: bad cell '" + pair_str + "'");
            }
        }
    }

    std::error_code ec;
    fs::create_directories(out_dir, ec);
    if (ec) throw IoError("cannot create " + out_dir + ": " + ec.message());

    std::vector<CellLabel> manifest;
    for (int f = 0; f < n_frames; ++f) {
        const std::uint64_t frame_seed =
            splitmix64(cfg.train.seed ^ splitmix64(static_cast<std::uint64_t>(f) + 1));

        SyntheticSceneSpec spec;
        spec.rows = cfg.grid.rows;
        spec.cols = cfg.grid.cols;
        spec.cell_width = cfg.grid.cell_width;
        spec.cell_height = cfg.grid.cell_height;
        spec.noise_seed = splitmix64(frame_seed);
        if (!fixed_cells.empty()) {
            spec.vehicle_cells = fixed_cells;
        } else if (vehicles > 0) {
            std::vector<int> cells(total_cells);
            std::iota(cells.begin(), cells.end(), 0);
            std::mt19937_64 rng(frame_seed);
            for (int i = 0; i < vehicles; ++i) {
                const int j = i + static_cast<int>(rng() % (total_cells - i));
                std::swap(cells[i], cells[j]);
                spec.vehicle_cells.emplace_back(cells[i] / cfg.grid.cols,
                                                cells[i] % cfg.grid.cols);
            }
        }

        char name[32];
        std::snprintf(name, sizeof name, "frame_%04d", f);
        auto [image, labels] = generate_synthetic_frame(spec, name);
        save_netpbm(fs::path(out_dir) / (std::string(name) + ".pgm"), image);
        manifest.insert(manifest.end(), labels.begin(), labels.end());
    }
    write_text(fs::path(out_dir) / "manifest.csv", format_manifest(manifest));
    std::printf("frames %d cells_per_frame %d manifest_rows %zu\n", n_frames,
                total_cells, manifest.size());
}

void cmd_bench(const CliState& state, const std::string& model_arg,
               const std::string& frame_arg, int iterations) {
    const RunConfig cfg = state.resolve();
    const auto model_path = pick_path(model_arg, cfg.model, "model path");
    const auto frame_path = pick_path(frame_arg, cfg.frame, "frame path");

    const LinearSvmModel model = load_model(read_file(model_path));
    const Image frame = load_netpbm(frame_path);
    const Roi roi = roi_or_full_frame(cfg, frame);

    const BenchResult single = bench_estimate(frame, roi, cfg.grid, model, cfg.hog,
                                              cfg.lbp, iterations, 1);
    const BenchResult parallel = bench_estimate(frame, roi, cfg.grid, model, cfg.hog,
                                                cfg.lbp, iterations,
                                                machine_threads(cfg));
    std::printf("single threads 1 iterations %d median_ms %.3f min_ms %.3f\n",
                single.iterations, single.median_ms, single.min_ms);
    std::printf("parallel threads %d iterations %d median_ms %.3f min_ms %.3f\n",
                parallel.threads, parallel.iterations, parallel.median_ms,
                parallel.min_ms);
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"grid-cell traffic density estimation"};
    app.require_subcommand(1);

    CliState state;
    app.add_option("--config", state.config_path, "JSON config file");
    app.add_option("--roi", state.roi_flag, "ROI as x,y,w,h")
        ->delimiter(',')->expected(4);
    app.add_option("--grid", state.grid_flag, "grid as rows,cols,cell_w,cell_h")
        ->delimiter(',')->expected(4);
    app.add_option("--hog", state.hog_flag, "HOG as sub_cell,orientations")
        ->delimiter(',')->expected(2);
    app.add_option("--lbp", state.lbp_flag, "LBP as radius,points")
        ->delimiter(',')->expected(2);
    state.seed_opt = app.add_option("--seed", state.seed, "RNG seed");
    state.lambda_opt =
        app.add_option("--lambda", state.lambda, "SVM regularization weight");
    state.epochs_opt = app.add_option("--epochs", state.epochs, "training epochs");
    app.add_option("--mode", state.mode, "training mode: stochastic | full-batch");
    state.train_fraction_opt = app.add_option("--train-fraction",
                                              state.train_fraction,
                                              "train split fraction");
    state.threads_opt =
        app.add_option("--threads", state.threads, "worker threads (0 = all cores)");

    std::string arg_a, arg_b, arg_c;
    int synth_frames = 1;
    int synth_vehicles = 0;
    std::string synth_cells;
    int bench_iterations = 20;

    auto* extract = app.add_subcommand("extract", "build a dataset from labeled frames");
    extract->fallthrough();
    extract->add_option("frames_dir", arg_a, "directory of NetPBM frames");
    extract->add_option("manifest", arg_b, "label manifest CSV");
    extract->add_option("out", arg_c, "output dataset file");
    extract->callback([&] { cmd_extract(state, arg_a, arg_b, arg_c); });

    auto* train_cmd = app.add_subcommand("train", "train and evaluate a model");
    train_cmd->fallthrough();
    train_cmd->add_option("dataset", arg_a, "input dataset file");
    train_cmd->add_option("model", arg_b, "output model file");
    train_cmd->callback([&] { cmd_train(state, arg_a, arg_b); });

    auto* estimate = app.add_subcommand("estimate", "per-frame density report");
    estimate->fallthrough();
    estimate->add_option("model", arg_a, "model file");
    estimate->add_option("frame", arg_b, "NetPBM frame");
    estimate->add_option("out", arg_c, "output report JSON");
    estimate->callback([&] { cmd_estimate(state, arg_a, arg_b, arg_c); });

    auto* annotate_cmd = app.add_subcommand("annotate", "write a colored overlay image");
    annotate_cmd->fallthrough();
    annotate_cmd->add_option("model", arg_a, "model file");
    annotate_cmd->add_option("frame", arg_b, "NetPBM frame");
    annotate_cmd->add_option("out", arg_c, "output P6 image");
    annotate_cmd->callback([&] { cmd_annotate(state, arg_a, arg_b, arg_c); });

    auto* synth = app.add_subcommand("synth", "generate synthetic frames + manifest");
    synth->fallthrough();
    synth->add_option("out", arg_a, "output directory");
    synth->add_option("--frames", synth_frames, "number of frames");
    synth->add_option("--vehicles", synth_vehicles, "vehicle cells per frame");
    synth->add_option("--vehicle-cells", synth_cells, "explicit cells 'r,c;r,c;...'");
    synth->callback([&] {
        cmd_synth(state, arg_a, synth_frames, synth_vehicles, synth_cells);
    });

    auto* bench = app.add_subcommand("bench", "time the estimate path");
    bench->fallthrough();
    bench->add_option("model", arg_a, "model file");
    bench->add_option("frame", arg_b, "NetPBM frame");
    bench->add_option("--iterations", bench_iterations, "timing iterations");
    bench->callback([&] { cmd_bench(state, arg_a, arg_b, bench_iterations); });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);
        app.exit(e);
        return 3;
    } catch (const DimensionError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 4;
    } catch (const IoError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const ValidationError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 3;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 0;
}
