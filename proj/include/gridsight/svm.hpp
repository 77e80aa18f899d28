#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "gridsight/error.hpp"

namespace gridsight {

/// Dense row-major matrix of feature vectors.
struct FeatureMatrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> values;

    std::span<const double> row(std::size_t i) const {
        return {values.data() + i * cols, cols};
    }
    std::span<double> row(std::size_t i) {
        return {values.data() + i * cols, cols};
    }
};

/// Linear SVM with built-in per-dimension standardization.
/// Label convention: +1 = traffic, -1 = road.
struct LinearSvmModel {
    std::vector<double> weights;
    double bias = 0.0;
    std::vector<double> feature_mean;
    std::vector<double> feature_scale;

    std::size_t dimension() const { return weights.size(); }
    bool operator==(const LinearSvmModel&) const = default;
};

enum class TrainMode { Stochastic, FullBatch };

struct TrainConfig {
    double lambda = 1e-4;
    int epochs = 50;
    std::uint64_t seed = 0;
    TrainMode mode = TrainMode::Stochastic;

    bool operator==(const TrainConfig&) const = default;
};

/// Confusion counts and derived scores, traffic (+1) as the positive class.
/// Undefined ratios report 0 with the matching degenerate flag set.
struct Metrics {
    std::uint64_t tp = 0, tn = 0, fp = 0, fn = 0;
    double accuracy = 0.0;
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
    bool degenerate_precision = false;
    bool degenerate_recall = false;
    bool degenerate_f1 = false;
};

struct Prediction {
    int label = 0;          // +1 or -1; ties at z == 0 predict +1
    double decision_value = 0.0;
};

/// Per-dimension mean and population standard deviation. Dimensions with
/// std below 1e-12 get scale 1 (constant feature, standardizes to 0).
/// Throws ValidationError on fewer than 2 samples.
std::pair<std::vector<double>, std::vector<double>>
fit_standardizer(const FeatureMatrix& features);

/// Trains by regularized hinge-loss subgradient descent on standardized
/// features, step 1/(lambda*t), bias unregularized. Stochastic mode runs
/// Pegasos-style per-sample updates with a seeded per-epoch shuffle and
/// returns the average of the second half of the iterates; full-batch mode
/// takes one deterministic subgradient step per epoch and returns the
/// iterate with the lowest objective. Bit-deterministic for identical
/// inputs and seed.
LinearSvmModel train(const FeatureMatrix& features, const std::vector<int>& labels,
                     const TrainConfig& config);

/// z = w . standardize(x) + b. Throws DimensionError on size mismatch.
Prediction predict(const LinearSvmModel& model, std::span<const double> feature);

Metrics evaluate(const LinearSvmModel& model, const FeatureMatrix& features,
                 const std::vector<int>& labels);

/// Fills the derived scores (and degenerate flags) from raw counts.
Metrics metrics_from_counts(std::uint64_t tp, std::uint64_t tn,
                            std::uint64_t fp, std::uint64_t fn);

/// "GSVM" format: magic, format-version u32, dimension u64, then weights,
/// bias, mean, scale as little-endian IEEE-754 doubles. Round trips
/// bit-exactly. load throws ParseError (BadMagic / BadVersion /
/// LengthMismatch).
std::vector<std::uint8_t> save_model(const LinearSvmModel& model);
LinearSvmModel load_model(std::span<const std::uint8_t> bytes);

} // namespace gridsight
