// Acceptance suite: runs every release criterion and prints one PASS/FAIL
// line per criterion. Exit code is the number of failed criteria.

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numeric>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include <json.hpp>

#include "gridsight/bench.hpp"
#include "gridsight/pipeline.hpp"
#include "gridsight/reference.hpp"
#include "cli_runner.hpp"
#include "support.hpp"

using namespace gridsight;
using namespace testsupport;

namespace {

struct CheckFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

void require(bool ok, const std::string& what) {
    if (!ok) throw CheckFailure(what);
}

std::uint64_t splitmix64(std::uint64_t z) {
    z += 0x9E3779B97F4A7C15ull;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
    require(a.size() == b.size(), "vector sizes differ");
    double worst = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        worst = std::max(worst, std::abs(a[i] - b[i]));
    }
    return worst;
}

LinearSvmModel constant_model(std::size_t dim, double bias) {
    LinearSvmModel m;
    m.weights.assign(dim, 0.0);
    m.bias = bias;
    m.feature_mean.assign(dim, 0.0);
    m.feature_scale.assign(dim, 1.0);
    return m;
}

// Independent objective evaluator for criterion 4 (kept apart from the
// trainer's internal bookkeeping).
double objective_oracle(const LinearSvmModel& model, double lambda,
                        const FeatureMatrix& features,
                        const std::vector<int>& labels) {
    double ww = 0.0;
    for (double w : model.weights) ww += w * w;
    double hinge = 0.0;
    for (std::size_t i = 0; i < features.rows; ++i) {
        const auto row = features.row(i);
        double z = model.bias;
        for (std::size_t j = 0; j < features.cols; ++j) {
            z += model.weights[j] *
                 ((row[j] - model.feature_mean[j]) / model.feature_scale[j]);
        }
        hinge += std::max(0.0, 1.0 - labels[i] * z);
    }
    return 0.5 * lambda * ww + hinge / static_cast<double>(features.rows);
}

// ---- shared synthetic study: 200 frames, 9x8 grid, 36 vehicles per frame --

const GridSpec kGrid{};          // 9x8 cells of 44x44 -> 352x396 frames
const HogParams kHog{};
const LbpParams kLbp{};

SyntheticSceneSpec scene_with_vehicles(int k, std::uint64_t seed) {
    SyntheticSceneSpec spec;
    spec.rows = kGrid.rows;
    spec.cols = kGrid.cols;
    spec.cell_width = kGrid.cell_width;
    spec.cell_height = kGrid.cell_height;
    spec.noise_seed = splitmix64(seed);

    const int total = spec.rows * spec.cols;
    std::vector<int> cells(total);
    std::iota(cells.begin(), cells.end(), 0);
    std::mt19937_64 rng(seed);
    for (int i = 0; i < k; ++i) {
        const int j = i + static_cast<int>(rng() % (total - i));
        std::swap(cells[i], cells[j]);
        spec.vehicle_cells.emplace_back(cells[i] / spec.cols, cells[i] % spec.cols);
    }
    return spec;
}

struct SyntheticStudy {
    Dataset dataset;
    LinearSvmModel model;
    Metrics held_out;
};

const SyntheticStudy& synthetic_study() {
    static std::optional<SyntheticStudy> study;
    static std::string error;
    if (!study && error.empty()) {
        try {
            std::vector<std::pair<std::string, Image>> frames;
            std::vector<CellLabel> labels;
            for (int f = 0; f < 200; ++f) {
                char name[32];
                std::snprintf(name, sizeof name, "frame_%04d", f);
                const auto spec =
                    scene_with_vehicles(36, splitmix64(0xC0FFEEull + f));
                auto [image, frame_labels] = generate_synthetic_frame(spec, name);
                frames.emplace_back(name, std::move(image));
                labels.insert(labels.end(), frame_labels.begin(), frame_labels.end());
            }
            SyntheticStudy s;
            const Roi roi{0, 0, frames[0].second.width, frames[0].second.height};
            s.dataset = build_dataset(frames, roi, kGrid, labels, kHog, kLbp);

            auto [train_ds, test_ds] = split_dataset(s.dataset, 0.8, 20250809);
            TrainConfig cfg;         // stochastic, lambda 1e-4, 50 epochs
            cfg.seed = 7;
            s.model = train(train_ds.features, train_ds.labels, cfg);
            s.held_out = evaluate(s.model, test_ds.features, test_ds.labels);
            study = std::move(s);
        } catch (const std::exception& e) {
            error = e.what();
        }
    }
    if (!study) throw CheckFailure("synthetic study setup failed: " + error);
    return *study;
}

// --------------------------------- criteria --------------------------------

void criterion_dimensional_fidelity() {
    const Image cell = random_gray(44, 44, 1);
    require(compute_hog(cell, kHog).size() == 1568,
            "HOG length != 1568 on a 44x44 cell");
    require(compute_lbp(cell, kLbp).size() == 26, "LBP length != 26");
    require(extract_features(cell, kHog, kLbp).size() == 1594,
            "feature length != 1594");
    require(hog_length(44, 44, kHog) == 1568, "hog_length != 1568");
    require(lbp_length(kLbp) == 26, "lbp_length != 26");
}

void criterion_oracle_equivalence() {
    double worst_hog = 0.0;
    double worst_lbp = 0.0;
    for (std::uint64_t seed = 1; seed <= 50; ++seed) {
        const Image cell = random_gray(44, 44, seed);
        worst_hog = std::max(worst_hog,
                             max_abs_diff(compute_hog(cell, kHog),
                                          reference::compute_hog(cell, kHog)));
        worst_lbp = std::max(worst_lbp,
                             max_abs_diff(compute_lbp(cell, kLbp),
                                          reference::compute_lbp(cell, kLbp)));
    }
    require(worst_hog <= 1e-9,
            "HOG deviates from the reference by " + std::to_string(worst_hog));
    require(worst_lbp <= 1e-9,
            "LBP deviates from the reference by " + std::to_string(worst_lbp));
}

void criterion_descriptor_invariants() {
    for (std::uint64_t seed = 60; seed < 65; ++seed) {
        const Image base = random_gray(44, 44, seed, 0, 195);
        const Image moved = shifted(base, 17 + static_cast<int>(seed % 40));
        require(compute_hog(base, kHog) == compute_hog(moved, kHog),
                "HOG not bit-exact under an intensity shift");
        require(compute_lbp(base, kLbp) == compute_lbp(moved, kLbp),
                "LBP not bit-exact under an intensity shift");
    }

    for (std::uint64_t seed = 70; seed < 80; ++seed) {
        const auto lbp = compute_lbp(random_gray(44, 44, seed), kLbp);
        double sum = 0.0;
        for (double v : lbp) {
            require(v >= 0.0, "negative LBP bin");
            sum += v;
        }
        require(std::abs(sum - 1.0) <= 1e-9, "LBP histogram does not sum to 1");
    }

    for (std::uint64_t seed = 80; seed < 85; ++seed) {
        const Image cell = random_gray(44, 44, seed);
        require(max_abs_diff(compute_lbp(cell, kLbp),
                             compute_lbp(rot90(cell), kLbp)) <= 1e-9,
                "LBP not 90-degree rotation invariant");
    }
    const Image probe = random_gray(44, 44, 85);
    require(max_abs_diff(reference::compute_lbp(probe, kLbp),
                         reference::compute_lbp(rot90(probe), kLbp)) <= 1e-9,
            "reference LBP not rotation invariant");

    Image flat(44, 44, 1);
    std::fill(flat.pixels.begin(), flat.pixels.end(), std::uint8_t{131});
    const auto hog = compute_hog(flat, kHog);
    require(std::all_of(hog.begin(), hog.end(), [](double v) { return v == 0.0; }),
            "constant-cell HOG is not exactly zero");
    const auto lbp = compute_lbp(flat, kLbp);
    for (std::size_t i = 0; i < lbp.size(); ++i) {
        require(lbp[i] == (i == 24 ? 1.0 : 0.0),
                "constant-cell LBP mass is not all in bin 24");
    }
}

void criterion_svm_optimization() {
    std::mt19937_64 rng(404);
    auto unit = [&] { return static_cast<double>(rng() % 2001) / 1000.0 - 1.0; };
    for (int trial = 0; trial < 3; ++trial) {
        FeatureMatrix features;
        features.rows = 60;
        features.cols = 8;
        features.values.resize(features.rows * features.cols);
        for (auto& v : features.values) v = unit();
        std::vector<int> labels(features.rows);
        for (std::size_t i = 0; i < labels.size(); ++i) {
            labels[i] = i % 2 == 0 ? 1 : -1;
        }

        TrainConfig cfg;
        cfg.mode = TrainMode::FullBatch;
        cfg.epochs = 40;
        cfg.lambda = 0.02;
        const auto model = train(features, labels, cfg);

        auto zero = model;
        std::fill(zero.weights.begin(), zero.weights.end(), 0.0);
        zero.bias = 0.0;
        const double j_initial = objective_oracle(zero, cfg.lambda, features, labels);
        const double j_final = objective_oracle(model, cfg.lambda, features, labels);
        require(j_final <= j_initial + 1e-12,
                "full-batch J(final)=" + std::to_string(j_final) + " > J(initial)=" +
                    std::to_string(j_initial));
    }

    // Seeded determinism: byte-identical model files.
    FeatureMatrix features;
    features.rows = 200;
    features.cols = 50;
    features.values.resize(features.rows * features.cols);
    for (auto& v : features.values) v = unit();
    std::vector<int> labels(features.rows);
    for (std::size_t i = 0; i < labels.size(); ++i) labels[i] = i % 2 == 0 ? 1 : -1;
    TrainConfig cfg;
    cfg.epochs = 15;
    cfg.seed = 99;
    const auto bytes_a = save_model(train(features, labels, cfg));
    const auto bytes_b = save_model(train(features, labels, cfg));
    require(bytes_a == bytes_b, "same-seed training is not byte-identical");

    // Serialization round trip.
    LinearSvmModel model;
    for (int i = 0; i < 1594; ++i) {
        model.weights.push_back(unit() * 3.0);
        model.feature_mean.push_back(unit());
        model.feature_scale.push_back(std::abs(unit()) + 0.5);
    }
    model.bias = unit();
    const auto back = load_model(save_model(model));
    require(back == model, "model serialization round trip is not bit-exact");
}

void criterion_synthetic_end_to_end() {
    const SyntheticStudy& study = synthetic_study();
    require(study.dataset.features.rows == 14400,
            "expected 14400 cells, got " +
                std::to_string(study.dataset.features.rows));
    require(study.dataset.features.cols == 1594, "expected 1594-dim features");
    const Metrics& m = study.held_out;
    std::printf("       held-out: accuracy %.4f precision %.4f recall %.4f f1 %.4f "
                "(%llu of %llu cells wrong)\n",
                m.accuracy, m.precision, m.recall, m.f1,
                static_cast<unsigned long long>(m.fp + m.fn),
                static_cast<unsigned long long>(m.tp + m.tn + m.fp + m.fn));
    require(m.accuracy >= 0.95,
            "held-out accuracy " + std::to_string(m.accuracy) + " < 0.95");
    require(m.f1 >= 0.93, "held-out F1 " + std::to_string(m.f1) + " < 0.93");
}

void criterion_density_correctness() {
    const auto& model = synthetic_study().model;
    const Roi roi{0, 0, kGrid.cols * kGrid.cell_width, kGrid.rows * kGrid.cell_height};
    const auto positive = constant_model(1594, 1.0);
    const auto negative = constant_model(1594, -1.0);

    const int plan[] = {0, 5, 10, 36, 72};
    int frame_no = 0;
    for (int k : plan) {
        for (int rep = 0; rep < 4; ++rep, ++frame_no) {
            const auto spec =
                scene_with_vehicles(k, splitmix64(0xDE51 + 131 * frame_no));
            const auto [frame, labels] = generate_synthetic_frame(spec, "d");
            const auto report =
                estimate_density(frame, roi, kGrid, model, kHog, kLbp, "d");
            require(std::abs(report.traffic_cells - k) <= 1,
                    "k=" + std::to_string(k) + ": trained model reported " +
                        std::to_string(report.traffic_cells));
            if (k == 0) {
                const auto sanity =
                    estimate_density(frame, roi, kGrid, negative, kHog, kLbp, "d");
                require(sanity.traffic_cells == 0,
                        "constant-negative sanity model must report 0");
            }
            if (k == 72) {
                const auto sanity =
                    estimate_density(frame, roi, kGrid, positive, kHog, kLbp, "d");
                require(sanity.traffic_cells == 72,
                        "constant-positive sanity model must report 72");
            }
        }
    }
}

void criterion_metric_formulas() {
    {
        LinearSvmModel model = constant_model(1, 0.0);
        model.weights[0] = 1.0;
        FeatureMatrix f;
        f.rows = 2;
        f.cols = 1;
        f.values = {1.0, -1.0};
        const Metrics m = evaluate(model, f, {1, -1});
        require(m.tp == 1 && m.tn == 1 && m.fp == 0 && m.fn == 0,
                "perfect-classifier counts wrong");
        require(m.accuracy == 1.0 && m.precision == 1.0 && m.recall == 1.0 &&
                    m.f1 == 1.0,
                "perfect-classifier metrics wrong");
    }
    {
        LinearSvmModel model = constant_model(1, 0.0);
        model.weights[0] = 1.0;
        FeatureMatrix f;
        std::vector<int> labels;
        auto add = [&](double x, int y, int count) {
            for (int i = 0; i < count; ++i) {
                f.values.push_back(x);
                labels.push_back(y);
            }
        };
        add(+1.0, +1, 8);
        add(-1.0, +1, 2);
        add(+1.0, -1, 2);
        add(-1.0, -1, 8);
        f.rows = labels.size();
        f.cols = 1;
        const Metrics m = evaluate(model, f, labels);
        require(m.tp == 8 && m.fp == 2 && m.fn == 2 && m.tn == 8,
                "symmetric confusion counts wrong");
        require(m.accuracy == 16.0 / 20.0, "accuracy != 0.8");
        require(m.precision == 8.0 / 10.0 && m.recall == 8.0 / 10.0,
                "precision/recall != 0.8");
        require(m.f1 == 2.0 * m.precision * m.recall / (m.precision + m.recall),
                "f1 does not match its definition");
    }
    {
        const auto model = constant_model(1, -1.0);
        FeatureMatrix f;
        f.rows = 2;
        f.cols = 1;
        f.values = {0.0, 0.0};
        const Metrics m = evaluate(model, f, {1, -1});
        require(m.tp == 0 && m.fp == 0, "all-negative counts wrong");
        require(m.precision == 0.0 && m.degenerate_precision,
                "degenerate precision flag not set");
        require(m.recall == 0.0 && !m.degenerate_recall,
                "recall should be a plain 0, not degenerate");
        require(m.f1 == 0.0 && m.degenerate_f1, "degenerate f1 flag not set");
    }
}

void criterion_performance() {
    const auto& model = synthetic_study().model;
    const auto spec = scene_with_vehicles(18, 0xBEEF);
    const auto [frame, labels] = generate_synthetic_frame(spec, "bench");
    require(frame.width == 352 && frame.height == 396,
            "bench frame is not 352x396");
    const Roi roi{0, 0, frame.width, frame.height};

    const BenchResult single =
        bench_estimate(frame, roi, kGrid, model, kHog, kLbp, 20, 1);
    const int parallel_threads = std::max(4, omp_get_max_threads());
    const BenchResult parallel =
        bench_estimate(frame, roi, kGrid, model, kHog, kLbp, 20, parallel_threads);

    std::printf("       bench: single median %.2f ms (min %.2f), %d threads median "
                "%.2f ms (min %.2f)\n",
                single.median_ms, single.min_ms, parallel.threads,
                parallel.median_ms, parallel.min_ms);
    require(single.median_ms <= single.min_ms * 10.0,
            "timer sanity: median exceeds 10x min");
    require(single.median_ms <= 100.0,
            "single-thread median " + std::to_string(single.median_ms) +
                " ms > 100 ms");
    require(parallel.median_ms < single.median_ms,
            "parallel median " + std::to_string(parallel.median_ms) +
                " ms not strictly faster than single-thread " +
                std::to_string(single.median_ms) + " ms");
}

void criterion_format_stability() {
    // NetPBM.
    const Image rgb = random_rgb(33, 21, 5);
    require(decode_netpbm(encode_netpbm(rgb)) == rgb, "P6 round trip failed");
    const Image gray = random_gray(17, 29, 6);
    require(decode_netpbm(encode_netpbm(gray)) == gray, "P5 round trip failed");
    auto fault_of = [](std::vector<std::uint8_t> bytes) {
        try {
            decode_netpbm(bytes);
        } catch (const ParseError& e) {
            return e.fault();
        }
        throw CheckFailure("expected a ParseError");
    };
    const std::string bad_magic = "P7 1 1 255 x";
    require(fault_of({bad_magic.begin(), bad_magic.end()}) == ParseFault::BadHeader,
            "bad magic fault");
    const std::string bad_maxval = "P5 1 1 1000 x";
    require(fault_of({bad_maxval.begin(), bad_maxval.end()}) == ParseFault::BadMaxval,
            "bad maxval fault");
    auto truncated = encode_netpbm(gray);
    truncated.pop_back();
    require(fault_of(truncated) == ParseFault::Truncated, "truncation fault");

    // GSVM.
    auto model = constant_model(17, 0.25);
    model.weights[3] = -1.5;
    auto model_bytes = save_model(model);
    require(load_model(model_bytes) == model, "GSVM round trip failed");
    auto model_fault = [](std::vector<std::uint8_t> bytes) {
        try {
            load_model(bytes);
        } catch (const ParseError& e) {
            return e.fault();
        }
        throw CheckFailure("expected a ParseError");
    };
    auto wrong = model_bytes;
    wrong[0] = 'X';
    require(model_fault(wrong) == ParseFault::BadMagic, "GSVM magic fault");
    wrong = model_bytes;
    wrong[4] = 42;
    require(model_fault(wrong) == ParseFault::BadVersion, "GSVM version fault");
    wrong = model_bytes;
    wrong.pop_back();
    require(model_fault(wrong) == ParseFault::LengthMismatch, "GSVM length fault");

    // GSDS: reuse a small slice of the synthetic dataset.
    const auto& study = synthetic_study();
    Dataset small;
    small.features.rows = 3;
    small.features.cols = study.dataset.features.cols;
    small.features.values.assign(
        study.dataset.features.values.begin(),
        study.dataset.features.values.begin() + 3 * study.dataset.features.cols);
    small.labels = {study.dataset.labels[0], study.dataset.labels[1],
                    study.dataset.labels[2]};
    small.provenance = {study.dataset.provenance[0], study.dataset.provenance[1],
                        study.dataset.provenance[2]};
    const auto ds_bytes = save_dataset(small);
    const Dataset back = load_dataset(ds_bytes);
    require(back.features.values == small.features.values &&
                back.labels == small.labels && back.provenance == small.provenance,
            "GSDS round trip failed");
    auto ds_fault = [](std::vector<std::uint8_t> bytes) {
        try {
            load_dataset(bytes);
        } catch (const ParseError& e) {
            return e.fault();
        }
        throw CheckFailure("expected a ParseError");
    };
    auto ds_wrong = ds_bytes;
    ds_wrong[0] = 'X';
    require(ds_fault(ds_wrong) == ParseFault::BadMagic, "GSDS magic fault");
    ds_wrong = ds_bytes;
    ds_wrong.resize(ds_bytes.size() - 3);
    require(ds_fault(ds_wrong) == ParseFault::LengthMismatch, "GSDS length fault");

    // Manifest CSV.
    const std::vector<CellLabel> labels{{"f1", 0, 1, CellClass::Traffic},
                                        {"f2", 8, 7, CellClass::Road}};
    require(parse_manifest(format_manifest(labels)) == labels,
            "manifest round trip failed");
    try {
        parse_manifest("frame_id,row,col,label\nf,0,0,banana\n");
        throw CheckFailure("bad manifest label accepted");
    } catch (const ValidationError&) {
    }

    // Report JSON.
    DensityReport report;
    report.frame_id = "f9";
    report.rows = 1;
    report.cols = 2;
    report.grid = {CellClass::Traffic, CellClass::Road};
    report.traffic_cells = 1;
    report.total_cells = 2;
    report.density = 0.5;
    const auto doc = nlohmann::json::parse(report_to_json(report));
    require(doc["frame_id"] == "f9" && doc["rows"] == 1 && doc["cols"] == 2 &&
                doc["grid"][0][0] == 1 && doc["grid"][0][1] == 0 &&
                doc["traffic_cells"] == 1 && doc["total_cells"] == 2 &&
                doc["density"].get<double>() == 0.5,
            "report JSON shape mismatch");

    // CLI exit codes.
    const TempDir dir("acceptance_cli");
    auto qq = [](const std::filesystem::path& p) { return "'" + p.string() + "'"; };
    const auto frames = dir.path() / "frames";
    auto r = run_cli("synth " + qq(frames) + " --grid 3,3,20,20 --seed 3 --frames 1");
    require(r.exit_code == 0, "synth should exit 0, got " +
                                   std::to_string(r.exit_code));

    r = run_cli("estimate " + qq(dir.path() / "no.gsvm") + " " +
                qq(frames / "frame_0000.pgm") + " " + qq(dir.path() / "r.json") +
                " --grid 3,3,20,20");
    require(r.exit_code == 2, "missing model should exit 2, got " +
                                   std::to_string(r.exit_code));

    spit(dir.path() / "ghost.csv", "frame_id,row,col,label\nnope,0,0,road\n");
    r = run_cli("extract " + qq(frames) + " " + qq(dir.path() / "ghost.csv") + " " +
                qq(dir.path() / "o.gsds") + " --grid 3,3,20,20");
    require(r.exit_code == 3 && r.contains("nope"),
            "ghost-frame manifest should exit 3 naming the frame, got " +
                std::to_string(r.exit_code));

    const auto cm = constant_model(
        feature_length(20, 20, HogParams{}, LbpParams{}), 1.0);
    const auto cm_bytes = save_model(cm);
    spit(dir.path() / "m.gsvm", std::string(cm_bytes.begin(), cm_bytes.end()));
    r = run_cli("estimate " + qq(dir.path() / "m.gsvm") + " " +
                qq(frames / "frame_0000.pgm") + " " + qq(dir.path() / "r.json") +
                " --grid 3,3,20,20 --hog 4,8");
    require(r.exit_code == 4, "dimension mismatch should exit 4, got " +
                                   std::to_string(r.exit_code));

    r = run_cli("estimate " + qq(dir.path() / "m.gsvm") + " " +
                qq(frames / "frame_0000.pgm") + " " + qq(dir.path() / "r.json") +
                " --grid 3,3,20,20");
    require(r.exit_code == 0, "healthy estimate should exit 0, got " +
                                   std::to_string(r.exit_code));
}

} // namespace

int main() {
    struct Criterion {
        int id;
        const char* title;
        std::function<void()> body;
    };
    const std::vector<Criterion> criteria{
        {1, "dimensional fidelity (1568 + 26 = 1594)", criterion_dimensional_fidelity},
        {2, "oracle equivalence within 1e-9 on 50 random cells",
         criterion_oracle_equivalence},
        {3, "descriptor invariants (shift, sum, rotation, closed forms)",
         criterion_descriptor_invariants},
        {4, "SVM optimization, determinism and serialization",
         criterion_svm_optimization},
        {5, "synthetic end-to-end: accuracy >= 0.95, F1 >= 0.93",
         criterion_synthetic_end_to_end},
        {6, "density within +/-1 of planted vehicle count",
         criterion_density_correctness},
        {7, "metric formulas match hand-computed confusion arithmetic",
         criterion_metric_formulas},
        {8, "estimate path <= 100 ms median, parallel strictly faster",
         criterion_performance},
        {9, "format stability and distinct error/exit codes",
         criterion_format_stability},
    };

    int failures = 0;
    for (const auto& c : criteria) {
        try {
            c.body();
            std::printf("[PASS] criterion %d: %s\n", c.id, c.title);
        } catch (const std::exception& e) {
            ++failures;
            std::printf("[FAIL] criterion %d: %s: %s\n", c.id, c.title, e.what());
        }
        std::fflush(stdout);
    }
    if (failures == 0) {
        std::printf("all %zu acceptance criteria passed\n", criteria.size());
    } else {
        std::printf("%d acceptance criteria FAILED\n", failures);
    }
    return failures;
}
