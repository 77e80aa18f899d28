#include "gridsight/svm.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <numeric>
#include <random>
#include <string>

#include "gridsight/detail/wire.hpp"

namespace gridsight {

using detail::get_f64;
using detail::get_u32;
using detail::get_u64;
using detail::put_f64;
using detail::put_u32;
using detail::put_u64;

namespace {

constexpr char kModelMagic[4] = {'G', 'S', 'V', 'M'};
constexpr std::uint32_t kModelVersion = 1;

void validate_training_input(const FeatureMatrix& features,
                             const std::vector<int>& labels) {
    if (features.rows != labels.size()) {
        throw DimensionError("train: " + std::to_string(features.rows) +
                             " feature rows vs " + std::to_string(labels.size()) +
                             " labels");
    }
    if (features.rows < 2) {
        throw ValidationError("train: need at least 2 samples");
    }
    if (features.cols == 0) {
        throw ValidationError("train: zero-dimensional features");
    }
    bool pos = false, neg = false;
    for (int y : labels) {
        if (y == 1) pos = true;
        else if (y == -1) neg = true;
        else throw ValidationError("train: labels must be +1 or -1");
    }
    if (!pos || !neg) {
        throw ValidationError("train: both classes must be present");
    }
}

double objective(const std::vector<double>& w, double b, double lambda,
                 const FeatureMatrix& xs, const std::vector<int>& labels) {
    double ww = 0.0;
    for (double v : w) ww += v * v;
    double hinge = 0.0;
    for (std::size_t i = 0; i < xs.rows; ++i) {
        const auto row = xs.row(i);
        double z = b;
        for (std::size_t j = 0; j < xs.cols; ++j) z += w[j] * row[j];
        hinge += std::max(0.0, 1.0 - labels[i] * z);
    }
    return 0.5 * lambda * ww + hinge / static_cast<double>(xs.rows);
}

// Portable seeded Fisher-Yates; std::shuffle output is implementation
// defined, which would break cross-toolchain reproducibility of models.
void seeded_shuffle(std::vector<std::size_t>& order, std::mt19937_64& rng) {
    for (std::size_t i = order.size(); i > 1; --i) {
        const std::size_t j = static_cast<std::size_t>(rng() % i);
        std::swap(order[i - 1], order[j]);
    }
}

} // namespace

std::pair<std::vector<double>, std::vector<double>>
fit_standardizer(const FeatureMatrix& features) {
    if (features.rows < 2) {
        throw ValidationError("fit_standardizer: need at least 2 samples");
    }
    const std::size_t n = features.rows;
    const std::size_t d = features.cols;
    std::vector<double> mean(d, 0.0), scale(d, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        const auto row = features.row(i);
        for (std::size_t j = 0; j < d; ++j) mean[j] += row[j];
    }
    for (std::size_t j = 0; j < d; ++j) mean[j] /= static_cast<double>(n);
    for (std::size_t i = 0; i < n; ++i) {
        const auto row = features.row(i);
        for (std::size_t j = 0; j < d; ++j) {
            const double dev = row[j] - mean[j];
            scale[j] += dev * dev;
        }
    }
    for (std::size_t j = 0; j < d; ++j) {
        const double sd = std::sqrt(scale[j] / static_cast<double>(n));
        scale[j] = sd < 1e-12 ? 1.0 : sd;
    }
    return {std::move(mean), std::move(scale)};
}

LinearSvmModel train(const FeatureMatrix& features, const std::vector<int>& labels,
                     const TrainConfig& config) {
    validate_training_input(features, labels);
    if (config.lambda <= 0.0) throw ValidationError("train: lambda must be > 0");
    if (config.epochs < 1) throw ValidationError("train: epochs must be >= 1");

    auto [mean, scale] = fit_standardizer(features);
    const std::size_t n = features.rows;
    const std::size_t d = features.cols;

    FeatureMatrix xs;
    xs.rows = n;
    xs.cols = d;
    xs.values.resize(n * d);
    for (std::size_t i = 0; i < n; ++i) {
        const auto src = features.row(i);
        auto dst = xs.row(i);
        for (std::size_t j = 0; j < d; ++j) dst[j] = (src[j] - mean[j]) / scale[j];
    }

    const double lambda = config.lambda;
    std::vector<double> w(d, 0.0);
    double b = 0.0;

    if (config.mode == TrainMode::Stochastic) {
        std::mt19937_64 rng(config.seed);
        std::vector<std::size_t> order(n);
        std::iota(order.begin(), order.end(), std::size_t{0});

        // Returning the raw final iterate leaves 1/(lambda*t) noise in the
        // model; averaging the second half of the trajectory removes it.
        const std::uint64_t total_steps =
            static_cast<std::uint64_t>(config.epochs) * n;
        const std::uint64_t tail_start = total_steps / 2 + 1;
        std::vector<double> w_sum(d, 0.0);
        double b_sum = 0.0;
        std::uint64_t averaged = 0;

        std::uint64_t t = 0;
        for (int epoch = 0; epoch < config.epochs; ++epoch) {
            seeded_shuffle(order, rng);
            for (std::size_t i : order) {
                ++t;
                const double eta = 1.0 / (lambda * static_cast<double>(t));
                const auto row = xs.row(i);
                double z = b;
                for (std::size_t j = 0; j < d; ++j) z += w[j] * row[j];
                const double decay = 1.0 - eta * lambda;
                if (labels[i] * z < 1.0) {
                    const double step = eta * labels[i];
                    for (std::size_t j = 0; j < d; ++j) {
                        w[j] = decay * w[j] + step * row[j];
                    }
                    // The unregularized intercept gets a lambda-free 1/t
                    // step; 1/(lambda*t) would start at 1/lambda and the
                    // overshoot has no decay to wash it out.
                    b += labels[i] / static_cast<double>(t);
                } else {
                    for (std::size_t j = 0; j < d; ++j) w[j] *= decay;
                }
                if (t >= tail_start) {
                    for (std::size_t j = 0; j < d; ++j) w_sum[j] += w[j];
                    b_sum += b;
                    ++averaged;
                }
            }
        }
        const double inv = 1.0 / static_cast<double>(averaged);
        for (std::size_t j = 0; j < d; ++j) w[j] = w_sum[j] * inv;
        b = b_sum * inv;
    } else {
        // Deterministic subgradient descent on the full objective. The
        // 1/(lambda*t) schedule is not monotone, so keep the best iterate
        // seen (the initial point included).
        std::vector<double> best_w = w;
        double best_b = b;
        double best_j = objective(w, b, lambda, xs, labels);
        std::vector<double> grad_dir(d);
        for (int t = 1; t <= config.epochs; ++t) {
            std::fill(grad_dir.begin(), grad_dir.end(), 0.0);
            double sum_y = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                const auto row = xs.row(i);
                double z = b;
                for (std::size_t j = 0; j < d; ++j) z += w[j] * row[j];
                if (labels[i] * z < 1.0) {
                    for (std::size_t j = 0; j < d; ++j) {
                        grad_dir[j] += labels[i] * row[j];
                    }
                    sum_y += labels[i];
                }
            }
            const double eta = 1.0 / (lambda * static_cast<double>(t));
            const double decay = 1.0 - eta * lambda;
            const double step = eta / static_cast<double>(n);
            for (std::size_t j = 0; j < d; ++j) {
                w[j] = decay * w[j] + step * grad_dir[j];
            }
            // Same lambda-free 1/t intercept schedule as the stochastic mode.
            b += sum_y / (static_cast<double>(t) * static_cast<double>(n));
            const double j_now = objective(w, b, lambda, xs, labels);
            if (j_now < best_j) {
                best_j = j_now;
                best_w = w;
                best_b = b;
            }
        }
        w = std::move(best_w);
        b = best_b;
    }

    LinearSvmModel model;
    model.weights = std::move(w);
    model.bias = b;
    model.feature_mean = std::move(mean);
    model.feature_scale = std::move(scale);
    return model;
}

Prediction predict(const LinearSvmModel& model, std::span<const double> feature) {
    const std::size_t d = model.weights.size();
    if (feature.size() != d) {
        throw DimensionError("predict: feature dimension " +
                             std::to_string(feature.size()) + " vs model " +
                             std::to_string(d));
    }
    double z = model.bias;
    for (std::size_t j = 0; j < d; ++j) {
        z += model.weights[j] *
             ((feature[j] - model.feature_mean[j]) / model.feature_scale[j]);
    }
    return {z >= 0.0 ? 1 : -1, z};
}

Metrics metrics_from_counts(std::uint64_t tp, std::uint64_t tn, std::uint64_t fp,
                            std::uint64_t fn) {
    const std::uint64_t total = tp + tn + fp + fn;
    if (total == 0) throw ValidationError("metrics: no examples");
    Metrics m;
    m.tp = tp;
    m.tn = tn;
    m.fp = fp;
    m.fn = fn;
    m.accuracy = static_cast<double>(tp + tn) / static_cast<double>(total);
    if (tp + fp > 0) {
        m.precision = static_cast<double>(tp) / static_cast<double>(tp + fp);
    } else {
        m.degenerate_precision = true;
    }
    if (tp + fn > 0) {
        m.recall = static_cast<double>(tp) / static_cast<double>(tp + fn);
    } else {
        m.degenerate_recall = true;
    }
    if (m.precision + m.recall > 0.0) {
        m.f1 = 2.0 * m.precision * m.recall / (m.precision + m.recall);
    } else {
        m.degenerate_f1 = true;
    }
    return m;
}

Metrics evaluate(const LinearSvmModel& model, const FeatureMatrix& features,
                 const std::vector<int>& labels) {
    if (features.rows == 0) throw ValidationError("evaluate: empty test set");
    if (features.rows != labels.size()) {
        throw DimensionError("evaluate: feature rows vs label count mismatch");
    }
    std::uint64_t tp = 0, tn = 0, fp = 0, fn = 0;
    for (std::size_t i = 0; i < features.rows; ++i) {
        const int predicted = predict(model, features.row(i)).label;
        if (labels[i] == 1) {
            predicted == 1 ? ++tp : ++fn;
        } else {
            predicted == -1 ? ++tn : ++fp;
        }
    }
    return metrics_from_counts(tp, tn, fp, fn);
}

std::vector<std::uint8_t> save_model(const LinearSvmModel& model) {
    const std::size_t d = model.weights.size();
    if (model.feature_mean.size() != d || model.feature_scale.size() != d) {
        throw DimensionError("save_model: inconsistent model vectors");
    }
    std::vector<std::uint8_t> out;
    out.reserve(16 + 8 * (3 * d + 1));
    out.insert(out.end(), kModelMagic, kModelMagic + 4);
    put_u32(out, kModelVersion);
    put_u64(out, d);
    for (double v : model.weights) put_f64(out, v);
    put_f64(out, model.bias);
    for (double v : model.feature_mean) put_f64(out, v);
    for (double v : model.feature_scale) put_f64(out, v);
    return out;
}

LinearSvmModel load_model(std::span<const std::uint8_t> bytes) {
    if (bytes.size() < 4 || std::memcmp(bytes.data(), kModelMagic, 4) != 0) {
        throw ParseError(ParseFault::BadMagic, "model: bad magic");
    }
    std::size_t pos = 4;
    if (bytes.size() < pos + 4) {
        throw ParseError(ParseFault::LengthMismatch, "model: header truncated");
    }
    const std::uint32_t version = get_u32(bytes, pos);
    if (version != kModelVersion) {
        throw ParseError(ParseFault::BadVersion,
                         "model: unsupported format version " +
                         std::to_string(version));
    }
    if (bytes.size() < pos + 8) {
        throw ParseError(ParseFault::LengthMismatch, "model: header truncated");
    }
    const std::uint64_t d = get_u64(bytes, pos);
    const std::uint64_t expected = pos + 8 * (3 * d + 1);
    if (bytes.size() != expected) {
        throw ParseError(ParseFault::LengthMismatch,
                         "model: have " + std::to_string(bytes.size()) +
                         " bytes, expected " + std::to_string(expected));
    }
    LinearSvmModel model;
    model.weights.resize(d);
    for (auto& v : model.weights) v = get_f64(bytes, pos);
    model.bias = get_f64(bytes, pos);
    model.feature_mean.resize(d);
    for (auto& v : model.feature_mean) v = get_f64(bytes, pos);
    model.feature_scale.resize(d);
    for (auto& v : model.feature_scale) v = get_f64(bytes, pos);
    for (double s : model.feature_scale) {
        if (!(s >= 1e-12)) {
            throw ValidationError("model: feature_scale entry below 1e-12");
        }
    }
    return model;
}

} // namespace gridsight
