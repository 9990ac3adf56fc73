// Copyright (C) 2026 The repcount Authors
// SPDX-License-Identifier: Apache-2.0

#include "repcount/exercise_recognizer.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>
#include <ostream>
#include <random>
#include <set>
#include <sstream>

#include <json.hpp>

#include "repcount/errors.hpp"

namespace repcount {

std::size_t MlpModel::parameter_count() const {
    std::size_t n = 0;
    for (std::size_t l = 0; l < weights.size(); ++l) n += weights[l].size() + biases[l].size();
    return n;
}

MlpModel MlpModel::zeros(std::vector<std::size_t> dims, std::vector<std::string> class_names) {
    MlpModel m;
    m.layer_dims = std::move(dims);
    m.class_names = std::move(class_names);
    for (std::size_t l = 0; l + 1 < m.layer_dims.size(); ++l) {
        m.weights.emplace_back(m.layer_dims[l] * m.layer_dims[l + 1], 0.0);
        m.biases.emplace_back(m.layer_dims[l + 1], 0.0);
    }
    return m;
}

void MlpModel::validate() const {
    if (layer_dims.size() < 2) throw ShapeError("model needs at least an input and an output layer");
    if (std::find(layer_dims.begin(), layer_dims.end(), 0u) != layer_dims.end()) {
        throw ShapeError("layer sizes must be positive");
    }
    if (weights.size() != layer_dims.size() - 1 || biases.size() != weights.size()) {
        throw ShapeError("parameter count does not match layer_dims");
    }
    for (std::size_t l = 0; l < weights.size(); ++l) {
        if (weights[l].size() != layer_dims[l] * layer_dims[l + 1] ||
            biases[l].size() != layer_dims[l + 1]) {
            throw ShapeError("layer " + std::to_string(l) + " shape does not chain");
        }
        const auto finite = [](double v) { return std::isfinite(v); };
        if (!std::all_of(weights[l].begin(), weights[l].end(), finite) ||
            !std::all_of(biases[l].begin(), biases[l].end(), finite)) {
            throw ShapeError("non-finite parameter in layer " + std::to_string(l));
        }
    }
    if (class_names.size() != layer_dims.back()) {
        throw ShapeError("class_names size does not match the output layer");
    }
}

Gradients Gradients::like(const MlpModel& model) {
    Gradients g;
    for (std::size_t l = 0; l < model.weights.size(); ++l) {
        g.weights.emplace_back(model.weights[l].size(), 0.0);
        g.biases.emplace_back(model.biases[l].size(), 0.0);
    }
    return g;
}

LabeledSample make_sample(const FeatureVector& features, std::size_t label) {
    return {std::vector<double>(features.values.begin(), features.values.end()), label};
}

std::vector<double> softmax(std::span<const double> logits) {
    std::vector<double> p(logits.begin(), logits.end());
    if (p.empty()) return p;
    const double top = *std::max_element(p.begin(), p.end());
    double sum = 0.0;
    for (double& v : p) {
        v = std::exp(v - top);
        sum += v;
    }
    for (double& v : p) v /= sum;
    return p;
}

namespace {

// Activation buffers for one forward/backward pass.
struct Workspace {
    std::vector<std::vector<double>> act;    // act[0] = input, act[l + 1] = layer l output
    std::vector<std::vector<double>> delta;  // delta[l] = dLoss/dz for layer l

    explicit Workspace(const MlpModel& m) {
        act.resize(m.layer_dims.size());
        delta.resize(m.weights.size());
        for (std::size_t l = 0; l < m.layer_dims.size(); ++l) act[l].resize(m.layer_dims[l]);
        for (std::size_t l = 0; l < m.weights.size(); ++l) delta[l].resize(m.layer_dims[l + 1]);
    }
};

void check_input(const MlpModel& model, std::size_t n) {
    if (n != model.input_size()) {
        throw ShapeError("feature length " + std::to_string(n) + " does not match model input " +
                         std::to_string(model.input_size()));
    }
}

// Leaves raw logits in ws.act.back().
void forward_pass(const MlpModel& m, std::span<const double> input, Workspace& ws) {
    std::copy(input.begin(), input.end(), ws.act[0].begin());
    const std::size_t layers = m.weights.size();
    for (std::size_t l = 0; l < layers; ++l) {
        const std::size_t in = m.layer_dims[l];
        const std::size_t out = m.layer_dims[l + 1];
        const double* w = m.weights[l].data();
        const double* a = ws.act[l].data();
        double* z = ws.act[l + 1].data();
        for (std::size_t o = 0; o < out; ++o) {
            double s = m.biases[l][o];
            const double* row = w + o * in;
            for (std::size_t i = 0; i < in; ++i) s += row[i] * a[i];
            z[o] = (l + 1 < layers) ? std::max(0.0, s) : s;
        }
    }
}

double log_sum_exp(std::span<const double> z) {
    const double top = *std::max_element(z.begin(), z.end());
    double sum = 0.0;
    for (double v : z) sum += std::exp(v - top);
    return top + std::log(sum);
}

std::size_t argmax(std::span<const double> v) {
    return static_cast<std::size_t>(std::max_element(v.begin(), v.end()) - v.begin());
}

void check_dataset(const MlpModel& m, const Dataset& data) {
    for (const LabeledSample& s : data) {
        check_input(m, s.features.size());
        if (s.label >= m.output_size()) throw ShapeError("label outside the model's classes");
    }
}

}  // namespace

std::vector<double> forward(const MlpModel& model, std::span<const double> input) {
    check_input(model, input.size());
    Workspace ws(model);
    forward_pass(model, input, ws);
    return softmax(ws.act.back());
}

std::vector<double> forward(const MlpModel& model, const FeatureVector& input) {
    return forward(model, std::span<const double>(input.values));
}

std::size_t predict(const MlpModel& model, std::span<const double> input) {
    check_input(model, input.size());
    Workspace ws(model);
    forward_pass(model, input, ws);
    return argmax(ws.act.back());
}

double loss_and_gradient(const MlpModel& m, const Dataset& data,
                         std::span<const std::size_t> indices, Gradients* grad) {
    std::vector<std::size_t> all;
    if (indices.empty()) {
        all.resize(data.size());
        std::iota(all.begin(), all.end(), 0);
        indices = all;
    }
    if (indices.empty()) return 0.0;
    if (grad) {
        *grad = Gradients::like(m);
    }
    Workspace ws(m);
    const std::size_t layers = m.weights.size();
    const double scale = 1.0 / static_cast<double>(indices.size());
    double total = 0.0;
    for (std::size_t idx : indices) {
        const LabeledSample& s = data[idx];
        check_input(m, s.features.size());
        forward_pass(m, s.features, ws);
        std::vector<double>& logits = ws.act.back();
        const double lse = log_sum_exp(logits);
        total += lse - logits[s.label];
        if (!grad) continue;

        std::vector<double>& d_out = ws.delta[layers - 1];
        for (std::size_t c = 0; c < logits.size(); ++c) {
            d_out[c] = std::exp(logits[c] - lse) - (c == s.label ? 1.0 : 0.0);
        }
        for (std::size_t l = layers; l-- > 0;) {
            const std::size_t in = m.layer_dims[l];
            const std::size_t out = m.layer_dims[l + 1];
            const std::vector<double>& d = ws.delta[l];
            const double* a = ws.act[l].data();
            double* gw = grad->weights[l].data();
            for (std::size_t o = 0; o < out; ++o) {
                const double g = d[o] * scale;
                grad->biases[l][o] += g;
                double* row = gw + o * in;
                for (std::size_t i = 0; i < in; ++i) row[i] += g * a[i];
            }
            if (l == 0) break;
            std::vector<double>& prev = ws.delta[l - 1];
            std::fill(prev.begin(), prev.end(), 0.0);
            const double* w = m.weights[l].data();
            for (std::size_t o = 0; o < out; ++o) {
                const double* row = w + o * in;
                for (std::size_t i = 0; i < in; ++i) prev[i] += row[i] * d[o];
            }
            for (std::size_t i = 0; i < in; ++i) {
                if (a[i] <= 0.0) prev[i] = 0.0;  // ReLU gate
            }
        }
    }
    return total * scale;
}

double dataset_loss(const MlpModel& model, const Dataset& data) {
    return loss_and_gradient(model, data, {}, nullptr);
}

double dataset_accuracy(const MlpModel& model, const Dataset& data) {
    if (data.empty()) return 0.0;
    Workspace ws(model);
    std::size_t hits = 0;
    for (const LabeledSample& s : data) {
        check_input(model, s.features.size());
        forward_pass(model, s.features, ws);
        hits += argmax(ws.act.back()) == s.label;
    }
    return static_cast<double>(hits) / static_cast<double>(data.size());
}

ClassificationReport evaluate(const MlpModel& model, const Dataset& data) {
    const std::size_t k = model.output_size();
    ClassificationReport r;
    r.confusion.assign(k, std::vector<std::size_t>(k, 0));
    Workspace ws(model);
    std::size_t hits = 0;
    for (const LabeledSample& s : data) {
        check_input(model, s.features.size());
        if (s.label >= k) throw ShapeError("label outside the model's classes");
        forward_pass(model, s.features, ws);
        const std::size_t p = argmax(ws.act.back());
        ++r.confusion[s.label][p];
        hits += p == s.label;
    }
    r.accuracy = data.empty() ? 0.0 : static_cast<double>(hits) / static_cast<double>(data.size());
    for (std::size_t c = 0; c < k; ++c) {
        std::size_t predicted = 0, actual = 0;
        for (std::size_t o = 0; o < k; ++o) {
            predicted += r.confusion[o][c];
            actual += r.confusion[c][o];
        }
        const double tp = static_cast<double>(r.confusion[c][c]);
        const double prec = predicted ? tp / static_cast<double>(predicted) : 0.0;
        const double rec = actual ? tp / static_cast<double>(actual) : 0.0;
        r.precision.push_back(prec);
        r.recall.push_back(rec);
        r.f1.push_back(prec + rec > 0.0 ? 2.0 * prec * rec / (prec + rec) : 0.0);
    }
    return r;
}

TrainingResult train(const Dataset& data, std::vector<std::string> class_names,
                     const Hyperparams& params) {
    if (data.empty()) throw TrainingError("training dataset is empty");
    if (class_names.size() < 2) throw TrainingError("need at least two class names");
    std::set<std::size_t> present;
    for (const LabeledSample& s : data) {
        if (s.label >= class_names.size()) throw TrainingError("label outside class_names");
        present.insert(s.label);
    }
    if (present.size() < 2) throw TrainingError("training dataset contains a single class");
    if (params.epochs < 0 || params.batch_size == 0 || !(params.learning_rate > 0.0)) {
        throw TrainingError("invalid hyperparameters");
    }

    std::vector<std::size_t> dims;
    dims.push_back(data.front().features.size());
    dims.insert(dims.end(), params.hidden.begin(), params.hidden.end());
    dims.push_back(class_names.size());
    MlpModel model = MlpModel::zeros(dims, std::move(class_names));
    check_dataset(model, data);

    std::mt19937_64 rng(params.seed);
    for (std::size_t l = 0; l < model.weights.size(); ++l) {
        std::normal_distribution<double> init(0.0, std::sqrt(2.0 / static_cast<double>(dims[l])));
        for (double& w : model.weights[l]) w = init(rng);
    }

    TrainingResult result;
    double lr = params.learning_rate;
    double loss = dataset_loss(model, data);
    result.curve.push_back({0, loss, dataset_accuracy(model, data), lr});

    Gradients velocity = Gradients::like(model);
    Gradients grad = Gradients::like(model);
    std::vector<std::size_t> order(data.size());
    std::iota(order.begin(), order.end(), 0);

    for (int epoch = 1; epoch <= params.epochs; ++epoch) {
        const MlpModel before = model;
        std::shuffle(order.begin(), order.end(), rng);
        for (std::size_t start = 0; start < order.size(); start += params.batch_size) {
            const std::size_t n = std::min(params.batch_size, order.size() - start);
            loss_and_gradient(model, data, std::span(order).subspan(start, n), &grad);
            for (std::size_t l = 0; l < model.weights.size(); ++l) {
                for (std::size_t k = 0; k < model.weights[l].size(); ++k) {
                    double& v = velocity.weights[l][k];
                    v = params.momentum * v - lr * grad.weights[l][k];
                    model.weights[l][k] += v;
                }
                for (std::size_t k = 0; k < model.biases[l].size(); ++k) {
                    double& v = velocity.biases[l][k];
                    v = params.momentum * v - lr * grad.biases[l][k];
                    model.biases[l][k] += v;
                }
            }
        }
        const double epoch_loss = dataset_loss(model, data);
        if (!(epoch_loss <= loss)) {
            model = before;
            velocity = Gradients::like(model);
            lr *= 0.5;
        } else {
            loss = epoch_loss;
        }
        result.curve.push_back({epoch, loss, dataset_accuracy(model, data), lr});
    }
    result.model = std::move(model);
    return result;
}

void write_training_curve(std::ostream& out, const std::vector<EpochStats>& curve) {
    out << "epoch,loss,accuracy\n";
    std::array<char, 64> buf{};
    auto num = [&](double v) {
        auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
        return std::string(buf.data(), ptr);
    };
    for (const EpochStats& e : curve) out << e.epoch << ',' << num(e.loss) << ',' << num(e.accuracy) << '\n';
}

// --- reject option ----------------------------------------------------------

std::optional<RejectMode> parse_reject_mode(std::string_view text) {
    if (text == "one-sided") return RejectMode::kOneSided;
    if (text == "two-sided") return RejectMode::kTwoSided;
    if (text == "off") return RejectMode::kOff;
    return std::nullopt;
}

std::string_view to_string(RejectMode mode) {
    switch (mode) {
        case RejectMode::kOneSided: return "one-sided";
        case RejectMode::kTwoSided: return "two-sided";
        case RejectMode::kOff: return "off";
    }
    return "?";
}

ClassInterval interval_from_probabilities(std::span<const double> p) {
    ClassInterval ci;
    ci.count = p.size();
    if (p.empty()) return ci;
    const double n = static_cast<double>(p.size());
    ci.mean = std::accumulate(p.begin(), p.end(), 0.0) / n;
    double ss = 0.0;
    for (double v : p) ss += (v - ci.mean) * (v - ci.mean);
    const double half = kZ90 * std::sqrt(ss / n) / std::sqrt(n);
    ci.ci_low = std::clamp(ci.mean - half, 0.0, 1.0);
    ci.ci_high = std::clamp(ci.mean + half, 0.0, 1.0);
    return ci;
}

RejectThresholds calibrate_reject(const MlpModel& model, const Dataset& heldout) {
    check_dataset(model, heldout);
    const std::size_t k = model.output_size();
    std::vector<std::vector<double>> by_class(k);
    std::vector<bool> labelled(k, false);
    for (const LabeledSample& s : heldout) {
        labelled[s.label] = true;
        const std::vector<double> p = forward(model, s.features);
        const std::size_t c = argmax(p);
        by_class[c].push_back(p[c]);
    }
    RejectThresholds t;
    for (std::size_t c = 0; c < k; ++c) {
        if (!labelled[c]) {
            throw CalibrationError("held-out data has no samples of class '" + model.class_names[c] + "'");
        }
        if (by_class[c].empty()) {
            throw CalibrationError("no held-out sample was predicted as class '" + model.class_names[c] + "'");
        }
        t.per_class.push_back(interval_from_probabilities(by_class[c]));
    }
    return t;
}

Label decide_with_reject(std::span<const double> p, const RejectThresholds& t, RejectMode mode) {
    const std::size_t c = argmax(p);
    if (mode == RejectMode::kOff) return static_cast<Label>(c);
    if (c >= t.per_class.size()) return kUnknownLabel;
    const ClassInterval& ci = t.per_class[c];
    if (p[c] < ci.ci_low) return kUnknownLabel;
    if (mode == RejectMode::kTwoSided && p[c] > ci.ci_high) return kUnknownLabel;
    return static_cast<Label>(c);
}

Label classify_with_reject(const MlpModel& model, const RejectThresholds& thresholds,
                           const FeatureVector& features, RejectMode mode) {
    return decide_with_reject(forward(model, features), thresholds, mode);
}

void LabelWindow::push(Label label) {
    ring_[next_] = label;
    next_ = (next_ + 1) % kCapacity;
    ++seen_;
}

Label LabelWindow::current() const {
    if (seen_ < kCapacity) return kWarmupLabel;
    // Walk newest to oldest so the first label reaching the best count is the
    // most recent among the tied ones.
    Label best = kUnknownLabel;
    std::size_t best_count = 0;
    for (std::size_t back = 0; back < kCapacity; ++back) {
        const Label l = ring_[(next_ + kCapacity - 1 - back) % kCapacity];
        const auto n = static_cast<std::size_t>(std::count(ring_.begin(), ring_.end(), l));
        if (n > best_count) {
            best = l;
            best_count = n;
        }
    }
    return best;
}

std::string label_name(const MlpModel& model, Label label) {
    if (label == kWarmupLabel) return "Warmup";
    if (label < 0 || static_cast<std::size_t>(label) >= model.class_names.size()) return "Unknown";
    return model.class_names[static_cast<std::size_t>(label)];
}

// --- model file -------------------------------------------------------------

std::string serialize_model(const ModelBundle& bundle) {
    bundle.model.validate();
    nlohmann::ordered_json doc;
    doc["format"] = "repcount-mlp";
    doc["format_version"] = kModelFormatVersion;
    doc["layer_dims"] = bundle.model.layer_dims;
    doc["class_names"] = bundle.model.class_names;
    doc["hidden_activation"] = "relu";
    doc["output_activation"] = "softmax";
    auto layers = nlohmann::ordered_json::array();
    for (std::size_t l = 0; l < bundle.model.weights.size(); ++l) {
        nlohmann::ordered_json layer;
        layer["rows"] = bundle.model.layer_dims[l + 1];
        layer["cols"] = bundle.model.layer_dims[l];
        layer["weights"] = bundle.model.weights[l];
        layer["biases"] = bundle.model.biases[l];
        layers.push_back(std::move(layer));
    }
    doc["layers"] = std::move(layers);
    if (bundle.thresholds) {
        auto t = nlohmann::ordered_json::array();
        for (const ClassInterval& ci : bundle.thresholds->per_class) {
            t.push_back({{"mean", ci.mean}, {"ci_low", ci.ci_low}, {"ci_high", ci.ci_high}, {"count", ci.count}});
        }
        doc["reject_thresholds"] = std::move(t);
    } else {
        doc["reject_thresholds"] = nullptr;
    }
    return doc.dump(1) + "\n";
}

ModelBundle deserialize_model(std::string_view text) {
    ModelBundle bundle;
    try {
        const nlohmann::json doc = nlohmann::json::parse(text.begin(), text.end());
        if (doc.at("format").get<std::string>() != "repcount-mlp") {
            throw ModelFormatError("not a repcount model file");
        }
        const int version = doc.at("format_version").get<int>();
        if (version != kModelFormatVersion) {
            throw ModelFormatError("unsupported model format_version " + std::to_string(version));
        }
        MlpModel& m = bundle.model;
        m.layer_dims = doc.at("layer_dims").get<std::vector<std::size_t>>();
        m.class_names = doc.at("class_names").get<std::vector<std::string>>();
        for (const auto& layer : doc.at("layers")) {
            m.weights.push_back(layer.at("weights").get<std::vector<double>>());
            m.biases.push_back(layer.at("biases").get<std::vector<double>>());
        }
        m.validate();
        const auto& t = doc.at("reject_thresholds");
        if (!t.is_null()) {
            RejectThresholds th;
            for (const auto& ci : t) {
                ClassInterval c{ci.at("mean").get<double>(), ci.at("ci_low").get<double>(),
                                ci.at("ci_high").get<double>(), ci.at("count").get<std::size_t>()};
                if (!(0.0 <= c.ci_low && c.ci_low <= c.ci_high && c.ci_high <= 1.0)) {
                    throw ModelFormatError("reject interval outside 0 <= low <= high <= 1");
                }
                th.per_class.push_back(c);
            }
            if (th.per_class.size() != m.output_size()) {
                throw ModelFormatError("reject thresholds do not cover every class");
            }
            bundle.thresholds = std::move(th);
        }
    } catch (const nlohmann::json::exception& e) {
        throw ModelFormatError(std::string("malformed model file: ") + e.what());
    } catch (const ShapeError& e) {
        throw ModelFormatError(std::string("inconsistent model: ") + e.what());
    }
    return bundle;
}

void save_model(const std::filesystem::path& path, const ModelBundle& bundle) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << serialize_model(bundle);
}

ModelBundle load_model(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ModelFormatError("cannot open model file " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return deserialize_model(buf.str());
}

}  // namespace repcount
