// Copyright (C) 2026 The repcount Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "repcount/keypoint_io.hpp"

namespace repcount {

// Fully connected network: ReLU on hidden layers, softmax on the output.
// weights[l] is row-major (layer_dims[l + 1] x layer_dims[l]).
struct MlpModel {
    std::vector<std::size_t> layer_dims;
    std::vector<std::vector<double>> weights;
    std::vector<std::vector<double>> biases;
    std::vector<std::string> class_names;

    std::size_t layer_count() const { return weights.size(); }
    std::size_t input_size() const { return layer_dims.front(); }
    std::size_t output_size() const { return layer_dims.back(); }
    std::size_t parameter_count() const;

    // Zero-initialised parameters with the given shape.
    static MlpModel zeros(std::vector<std::size_t> dims, std::vector<std::string> class_names);

    // Throws ShapeError on inconsistent shapes or non-finite parameters.
    void validate() const;

    friend bool operator==(const MlpModel&, const MlpModel&) = default;
};

// Same shape as the model parameters.
struct Gradients {
    std::vector<std::vector<double>> weights;
    std::vector<std::vector<double>> biases;

    static Gradients like(const MlpModel& model);
};

struct LabeledSample {
    std::vector<double> features;
    std::size_t label = 0;
};
using Dataset = std::vector<LabeledSample>;

LabeledSample make_sample(const FeatureVector& features, std::size_t label);

// Softmax probabilities. Throws ShapeError when the input length differs
// from layer_dims[0].
std::vector<double> forward(const MlpModel& model, std::span<const double> input);
std::vector<double> forward(const MlpModel& model, const FeatureVector& input);

// Numerically stable softmax of a logit vector.
std::vector<double> softmax(std::span<const double> logits);

// Mean cross-entropy over `indices` (all samples when empty); accumulates the
// gradient of that mean into `grad` when given (grad is overwritten).
double loss_and_gradient(const MlpModel& model, const Dataset& data,
                         std::span<const std::size_t> indices, Gradients* grad);

double dataset_loss(const MlpModel& model, const Dataset& data);
double dataset_accuracy(const MlpModel& model, const Dataset& data);
std::size_t predict(const MlpModel& model, std::span<const double> input);

// confusion[truth][predicted]; F1 is 0 for a class with no true or predicted samples.
struct ClassificationReport {
    std::vector<std::vector<std::size_t>> confusion;
    std::vector<double> precision, recall, f1;
    double accuracy = 0.0;
};
ClassificationReport evaluate(const MlpModel& model, const Dataset& data);

struct Hyperparams {
    std::vector<std::size_t> hidden{64, 64};
    int epochs = 50;
    std::size_t batch_size = 32;
    double learning_rate = 0.01;
    double momentum = 0.9;
    std::uint64_t seed = 42;
};

struct EpochStats {
    int epoch = 0;
    double loss = 0.0;
    double accuracy = 0.0;
    double learning_rate = 0.0;
};

struct TrainingResult {
    MlpModel model;
    std::vector<EpochStats> curve;  // entry 0 is the untrained model
};

// Mini-batch SGD with momentum on the mean cross-entropy. An epoch that raises
// the full-dataset loss is undone and the learning rate halved, so the curve
// never increases. Throws TrainingError on an empty dataset, fewer than two
// classes present, or labels outside class_names.
TrainingResult train(const Dataset& data, std::vector<std::string> class_names,
                     const Hyperparams& params);

void write_training_curve(std::ostream& out, const std::vector<EpochStats>& curve);

// --- reject option --------------------------------------------------------

struct ClassInterval {
    double mean = 0.0;
    double ci_low = 0.0;
    double ci_high = 1.0;
    std::size_t count = 0;

    friend bool operator==(const ClassInterval&, const ClassInterval&) = default;
};

struct RejectThresholds {
    std::vector<ClassInterval> per_class;

    friend bool operator==(const RejectThresholds&, const RejectThresholds&) = default;
};

enum class RejectMode { kOneSided, kTwoSided, kOff };

std::optional<RejectMode> parse_reject_mode(std::string_view text);
std::string_view to_string(RejectMode mode);

// z for a two-sided 90% normal interval.
inline constexpr double kZ90 = 1.645;

// mean +- 1.645 * (population sd / sqrt(n)), clamped to [0, 1].
ClassInterval interval_from_probabilities(std::span<const double> probabilities);

// For every class, the interval of its softmax probability over the held-out
// samples predicted as that class. Throws CalibrationError naming a class that
// is missing from the held-out labels or never predicted.
RejectThresholds calibrate_reject(const MlpModel& model, const Dataset& heldout);

// Per-frame label: a class index, or one of the markers below.
using Label = int;
inline constexpr Label kUnknownLabel = -1;
inline constexpr Label kWarmupLabel = -2;

// Accepts the argmax class when its probability is >= ci_low (and, two-sided,
// <= ci_high); otherwise kUnknownLabel.
Label decide_with_reject(std::span<const double> probabilities, const RejectThresholds& thresholds,
                         RejectMode mode = RejectMode::kOneSided);
Label classify_with_reject(const MlpModel& model, const RejectThresholds& thresholds,
                           const FeatureVector& features, RejectMode mode = RejectMode::kOneSided);

// Majority vote over the last 10 per-frame labels; kWarmupLabel until 10 have
// been seen. Ties go to the most recent of the tied labels.
class LabelWindow {
public:
    static constexpr std::size_t kCapacity = 10;

    void push(Label label);
    Label current() const;
    std::size_t seen() const { return seen_; }

private:
    std::array<Label, kCapacity> ring_{};
    std::size_t next_ = 0;
    std::size_t seen_ = 0;
};

std::string label_name(const MlpModel& model, Label label);

// --- model file -----------------------------------------------------------

inline constexpr int kModelFormatVersion = 1;

struct ModelBundle {
    MlpModel model;
    std::optional<RejectThresholds> thresholds;

    friend bool operator==(const ModelBundle&, const ModelBundle&) = default;
};

std::string serialize_model(const ModelBundle& bundle);
// Throws ModelFormatError on anything unreadable or inconsistent.
ModelBundle deserialize_model(std::string_view text);
void save_model(const std::filesystem::path& path, const ModelBundle& bundle);
ModelBundle load_model(const std::filesystem::path& path);

}  // namespace repcount
