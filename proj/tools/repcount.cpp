// Copyright (C) 2026 The repcount Authors
// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <atomic>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <numeric>
#include <optional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "repcount/bench.hpp"
#include "repcount/errors.hpp"
#include "repcount/exercise_recognizer.hpp"
#include "repcount/keypoint_io.hpp"
#include "repcount/kinematics.hpp"
#include "repcount/session.hpp"
#include "repcount/session_report.hpp"
#include "repcount/signal_conditioner.hpp"
#include "repcount/synthetic.hpp"

namespace fs = std::filesystem;
using namespace repcount;

namespace {

enum ExitCode : int {
    kOk = 0,
    kFailure = 1,
    kBadInput = 2,
    kBadModel = 3,
    kBadConfig = 4,
    kDegenerateData = 5,
};

struct Failure : std::runtime_error {
    Failure(int code, const std::string& what) : std::runtime_error(what), code(code) {}
    int code;
};

struct CommonOptions {
    std::string model;
    std::string profiles;
    double fps = 30.0;
    std::string out_text, out_json, out_csv;
    std::uint64_t seed = 42;
    int iterations = 3;
    std::optional<double> tolerance;
    std::string reject = "one-sided";
    std::string gap_fill = "extrapolate";
    double band = 5.0;
    int dwell = 3;
};

void add_pipeline_flags(CLI::App* cmd, CommonOptions& o) {
    cmd->add_option("--profiles", o.profiles, "Exercise profile file (INI); built-in profiles when omitted");
    cmd->add_option("--fps", o.fps, "Frame rate used for timestamps")->capture_default_str();
    cmd->add_option("--iterations", o.iterations, "Outlier normalization sweeps")->capture_default_str();
    cmd->add_option("--tolerance", o.tolerance, "Override the ROM tolerance of every profile (degrees)");
    cmd->add_option("--reject", o.reject, "Reject option")
        ->check(CLI::IsMember({"one-sided", "two-sided", "off"}))
        ->capture_default_str();
    cmd->add_option("--gap-fill", o.gap_fill, "Gap prediction rule")
        ->check(CLI::IsMember({"extrapolate", "absolute", "reversed"}))
        ->capture_default_str();
    cmd->add_option("--band", o.band, "Midpoint hysteresis band (degrees)")->capture_default_str();
    cmd->add_option("--dwell", o.dwell, "Samples beyond the band needed to confirm a crossing")
        ->capture_default_str();
}

std::shared_ptr<const ProfileRegistry> load_registry(const CommonOptions& o) {
    ProfileRegistry reg;
    if (o.profiles.empty()) {
        reg = builtin_profiles();
    } else {
        try {
            reg = load_profiles(o.profiles);
        } catch (const ConfigError&) {
            throw;
        } catch (const std::exception& e) {
            throw ConfigError(e.what());
        }
    }
    if (o.tolerance) {
        std::vector<ExerciseProfile> ps = reg.profiles();
        for (ExerciseProfile& p : ps) p.tolerance = *o.tolerance;
        reg = ProfileRegistry(std::move(ps));
    }
    return std::make_shared<const ProfileRegistry>(std::move(reg));
}

std::shared_ptr<const ModelBundle> load_bundle(const std::string& path) {
    if (path.empty()) throw ConfigError("--model is required");
    return std::make_shared<const ModelBundle>(load_model(path));
}

PipelineConfig pipeline_config(const CommonOptions& o) {
    PipelineConfig c;
    if (!(o.fps > 0.0)) throw ConfigError("--fps must be positive");
    c.fps = o.fps;
    c.outlier_iterations = o.iterations;
    c.reject_mode = *parse_reject_mode(o.reject);
    c.gap_mode = *parse_gap_fill_mode(o.gap_fill);
    c.counter.debounce_band = o.band;
    c.counter.dwell_samples = o.dwell;
    if (!(o.band >= 0.0) || o.dwell < 1) throw ConfigError("--band must be >= 0 and --dwell >= 1");
    return c;
}

std::vector<SkeletonFrame> load_input(const std::string& path, double fps) {
    try {
        if (path == "-") return read_ndjson(std::cin, fps);
        if (!fs::exists(path)) throw std::runtime_error("no such file: " + path);
        return load_frames(path, fps);
    } catch (const std::exception& e) {
        throw Failure(kBadInput, path + ": " + e.what());
    }
}

void write_file(const fs::path& path, const std::string& content) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    out << content;
    if (!out) throw std::runtime_error("cannot write " + path.string());
}

std::vector<std::string> split_list(const std::string& text) {
    std::vector<std::string> items;
    std::stringstream in(text);
    std::string item;
    while (std::getline(in, item, ',')) {
        if (!item.empty()) items.push_back(item);
    }
    return items;
}

// --- analyze ---------------------------------------------------------------

struct AnalyzeOptions {
    CommonOptions common;
    std::vector<std::string> inputs;
    std::string trace_dir;
    unsigned jobs = 0;
    bool live = false;
    bool embed_traces = false;
};

struct AnalyzeResult {
    int code = kOk;
    std::string error;
    SessionSummary summary;
    std::map<std::uint64_t, std::vector<ConditionedSample>> traces;
};

AnalyzeResult analyze_one(const std::string& input, const AnalyzeOptions& o,
                          const std::shared_ptr<const ModelBundle>& model,
                          const std::shared_ptr<const ProfileRegistry>& profiles, const PipelineConfig& cfg) {
    AnalyzeResult r;
    try {
        SessionPipeline pipe(model, profiles, cfg);
        auto handle = [&](const SkeletonFrame& f) {
            for (const RepEvent& e : pipe.process(f)) {
                if (!o.live) continue;
                std::cerr << "person " << e.person_id << ": "
                          << (e.verdict == Verdict::kCorrect ? "- Correct! - " : "One Attempt! - ")
                          << format_timestamp(e.timestamp) << std::endl;
            }
        };
        if (input == "-") {
            try {
                for_each_ndjson_frame(std::cin, cfg.fps, [&](SkeletonFrame&& f) { handle(f); });
            } catch (const std::exception& e) {
                throw Failure(kBadInput, std::string("stdin: ") + e.what());
            }
        } else {
            for (const SkeletonFrame& f : load_input(input, cfg.fps)) handle(f);
        }
        r.summary = pipe.finish();
        r.traces = pipe.traces();
        if (o.embed_traces) {
            for (PersonSummary& p : r.summary.persons) {
                const auto it = r.traces.find(p.person_id);
                if (it == r.traces.end()) continue;
                std::ostringstream csv;
                write_trace_csv(csv, it->second);
                p.trace_csv = csv.str();
            }
        }
    } catch (const Failure& e) {
        r.code = e.code;
        r.error = e.what();
    } catch (const std::exception& e) {
        r.code = kFailure;
        r.error = input + ": " + e.what();
    }
    return r;
}

std::string stem_of(const std::string& input) {
    return input == "-" ? std::string("stdin") : fs::path(input).stem().string();
}

int cmd_analyze(const AnalyzeOptions& o) {
    const auto model = load_bundle(o.common.model);
    const auto profiles = load_registry(o.common);
    PipelineConfig cfg = pipeline_config(o.common);
    cfg.keep_traces = !o.trace_dir.empty() || o.embed_traces;
    SessionPipeline probe(model, profiles, cfg);  // surfaces model/profile mismatches before any input is read

    const bool many = o.inputs.size() > 1;
    if (many) {
        if (std::count(o.inputs.begin(), o.inputs.end(), "-") > 0) {
            throw ConfigError("stdin cannot be combined with other inputs");
        }
        std::set<std::string> stems;
        for (const std::string& in : o.inputs) {
            if (!stems.insert(stem_of(in)).second) {
                throw ConfigError("inputs share the file name '" + stem_of(in) + "'; outputs would collide");
            }
        }
    }

    std::vector<AnalyzeResult> results(o.inputs.size());
    const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
    const unsigned workers =
        std::min<unsigned>(o.jobs ? o.jobs : hw, static_cast<unsigned>(o.inputs.size()));
    std::atomic<std::size_t> next{0};
    auto work = [&] {
        for (std::size_t i = next++; i < o.inputs.size(); i = next++) {
            results[i] = analyze_one(o.inputs[i], o, model, profiles, cfg);
        }
    };
    if (workers <= 1) {
        work();
    } else {
        std::vector<std::jthread> pool;
        for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
    }

    int code = kOk;
    for (std::size_t i = 0; i < results.size(); ++i) {
        const AnalyzeResult& r = results[i];
        if (r.code != kOk) {
            std::cerr << "error: " << r.error << "\n";
            if (code == kOk) code = r.code;
            continue;
        }
        const std::string stem = stem_of(o.inputs[i]);
        auto target = [&](const std::string& flag, const char* ext) {
            return many ? fs::path(flag) / (stem + ext) : fs::path(flag);
        };
        const std::string text = render_text(r.summary);
        if (o.common.out_text.empty() && o.common.out_json.empty() && o.common.out_csv.empty()) {
            if (many) std::cout << "==> " << o.inputs[i] << " <==\n";
            std::cout << text;
        }
        if (!o.common.out_text.empty()) write_file(target(o.common.out_text, ".txt"), text);
        if (!o.common.out_json.empty()) write_file(target(o.common.out_json, ".json"), render_json(r.summary));
        if (!o.common.out_csv.empty()) write_file(target(o.common.out_csv, ".csv"), render_events_csv(r.summary));
        for (const auto& [id, trace] : r.traces) {
            std::ostringstream csv;
            write_trace_csv(csv, trace);
            write_file(fs::path(o.trace_dir) / (stem + ".person" + std::to_string(id) + ".csv"), csv.str());
        }
    }
    return code;
}

// --- training data ---------------------------------------------------------

struct DataOptions {
    std::string data;
    std::string labels;
    std::size_t synthetic_per_class = 0;
    std::uint64_t corpus_seed = 7;
    std::string classes = "push-up,pull-up,squat";
};

void add_data_flags(CLI::App* cmd, DataOptions& d) {
    cmd->add_option("--data", d.data, "Keypoint frames (NDJSON, session CSV or frame directory)");
    cmd->add_option("--labels", d.labels, "Label CSV with header frame,person,label");
    cmd->add_option("--synthetic-per-class", d.synthetic_per_class,
                    "Generate this many synthetic frames per class instead of reading --data");
    cmd->add_option("--corpus-seed", d.corpus_seed, "Seed of the synthetic corpus")->capture_default_str();
    cmd->add_option("--classes", d.classes, "Comma-separated class names")->capture_default_str();
}

std::map<std::pair<std::uint64_t, std::size_t>, std::string> read_labels(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Failure(kBadInput, "cannot open labels " + path);
    std::string line;
    if (!std::getline(in, line) || line.substr(0, 18) != "frame,person,label") {
        throw Failure(kBadInput, path + ": header must be frame,person,label");
    }
    std::map<std::pair<std::uint64_t, std::size_t>, std::string> labels;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto fields = split_list(line);
        try {
            if (fields.size() != 3) throw std::invalid_argument("expected 3 fields");
            labels[{std::stoull(fields[0]), std::stoull(fields[1])}] = fields[2];
        } catch (const std::exception&) {
            throw Failure(kBadInput, path + ": malformed line " + std::to_string(line_no));
        }
    }
    return labels;
}

Dataset load_dataset(const DataOptions& d, const std::vector<std::string>& classes, const ProfileRegistry& profiles,
                     double fps) {
    if (d.synthetic_per_class > 0) {
        synth::CorpusOptions co;
        co.per_class = d.synthetic_per_class;
        co.seed = d.corpus_seed;
        return synth::to_dataset(synth::generate_corpus(classes, profiles, co));
    }
    if (d.data.empty() || d.labels.empty()) {
        throw ConfigError("give --data and --labels, or --synthetic-per-class");
    }
    const auto frames = load_input(d.data, fps);
    const auto labels = read_labels(d.labels);
    Dataset out;
    for (const SkeletonFrame& f : frames) {
        for (std::size_t s = 0; s < f.skeletons.size(); ++s) {
            const auto it = labels.find({f.frame_index, s});
            if (it == labels.end()) continue;
            const auto c = std::find(classes.begin(), classes.end(), it->second);
            if (c == classes.end()) throw TrainingError("label '" + it->second + "' is not one of --classes");
            if (auto features = normalize_skeleton(f.skeletons[s])) {
                out.push_back(make_sample(*features, static_cast<std::size_t>(c - classes.begin())));
            }
        }
    }
    return out;
}

void print_report(std::ostream& out, const char* title, const ClassificationReport& r,
                  const std::vector<std::string>& classes) {
    out << title << " accuracy: " << r.accuracy << "\n";
    for (std::size_t c = 0; c < classes.size(); ++c) {
        out << "  " << classes[c] << ": precision " << r.precision[c] << " recall " << r.recall[c] << " F1 "
            << r.f1[c] << "\n";
    }
}

void print_thresholds(std::ostream& out, const RejectThresholds& t, const std::vector<std::string>& classes) {
    for (std::size_t c = 0; c < classes.size(); ++c) {
        const ClassInterval& ci = t.per_class[c];
        out << "  " << classes[c] << ": mean " << ci.mean << " interval [" << ci.ci_low << ", " << ci.ci_high
            << "] n=" << ci.count << "\n";
    }
}

// --- train / calibrate -----------------------------------------------------

struct TrainOptions {
    CommonOptions common;
    DataOptions data;
    std::string out;
    std::string curve;
    double holdout = 0.2;
    bool calibrate = true;
    Hyperparams hyper;
    std::string hidden = "64,64";
};

int cmd_train(TrainOptions& o) {
    const auto profiles = load_registry(o.common);
    const std::vector<std::string> classes = split_list(o.data.classes);
    for (const std::string& c : classes) {
        if (!profiles->find(c)) throw ConfigError("class '" + c + "' has no exercise profile");
    }
    if (!(o.holdout >= 0.0 && o.holdout < 1.0)) throw ConfigError("--holdout must be in [0, 1)");
    o.hyper.hidden.clear();
    for (const std::string& h : split_list(o.hidden)) {
        try {
            o.hyper.hidden.push_back(std::stoul(h));
        } catch (const std::exception&) {
            throw ConfigError("--hidden must list layer widths");
        }
    }
    o.hyper.seed = o.common.seed;

    const Dataset all = load_dataset(o.data, classes, *profiles, o.common.fps);
    std::vector<std::size_t> order(all.size());
    std::iota(order.begin(), order.end(), 0);
    std::shuffle(order.begin(), order.end(), std::mt19937_64(o.common.seed ^ 0x5EEDu));
    const auto held_n = static_cast<std::size_t>(o.holdout * static_cast<double>(all.size()));
    Dataset train_set, held;
    for (std::size_t i = 0; i < order.size(); ++i) (i < held_n ? held : train_set).push_back(all[order[i]]);

    const TrainingResult result = train(train_set, classes, o.hyper);
    std::cout << "training samples: " << train_set.size() << ", held-out: " << held.size() << "\n";
    std::cout << "epochs: " << result.curve.size() - 1 << ", final loss " << result.curve.back().loss << "\n";
    print_report(std::cout, "training", evaluate(result.model, train_set), classes);
    if (!held.empty()) print_report(std::cout, "held-out", evaluate(result.model, held), classes);

    ModelBundle bundle{result.model, std::nullopt};
    if (o.calibrate) {
        bundle.thresholds = calibrate_reject(result.model, held.empty() ? train_set : held);
        std::cout << "reject thresholds:\n";
        print_thresholds(std::cout, *bundle.thresholds, classes);
    }
    if (!o.out.empty()) save_model(o.out, bundle);
    if (!o.curve.empty()) {
        std::ostringstream csv;
        write_training_curve(csv, result.curve);
        write_file(o.curve, csv.str());
    }
    return kOk;
}

struct CalibrateOptions {
    CommonOptions common;
    DataOptions data;
    std::string out;
};

int cmd_calibrate(CalibrateOptions& o) {
    ModelBundle bundle = *load_bundle(o.common.model);
    const auto profiles = load_registry(o.common);
    const std::vector<std::string>& classes = bundle.model.class_names;
    o.data.classes.clear();
    for (const std::string& c : classes) o.data.classes += c + ",";
    const Dataset held = load_dataset(o.data, classes, *profiles, o.common.fps);
    bundle.thresholds = calibrate_reject(bundle.model, held);
    print_report(std::cout, "calibration set", evaluate(bundle.model, held), classes);
    std::cout << "reject thresholds:\n";
    print_thresholds(std::cout, *bundle.thresholds, classes);
    save_model(o.out.empty() ? o.common.model : o.out, bundle);
    return kOk;
}

// --- simulate --------------------------------------------------------------

struct SimulateOptions {
    std::string spec;
    std::string out;
    std::string truth;
    std::string labels;
    std::size_t corpus_per_class = 0;
    std::string classes = "push-up,pull-up,squat";
    std::string profiles;
    std::uint64_t seed = 1;
    double fps = 30.0;
    synth::PersonSpec person;
    int persons = 1;
};

template <typename T>
void read_field(const nlohmann::json& j, const char* key, T& field) {
    if (j.contains(key)) field = j.at(key).get<T>();
}

synth::SyntheticSessionSpec parse_spec(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Failure(kBadInput, "cannot open spec " + path);
    try {
        const nlohmann::json j = nlohmann::json::parse(in);
        synth::SyntheticSessionSpec s;
        read_field(j, "fps", s.fps);
        read_field(j, "seed", s.seed);
        read_field(j, "pixels_per_meter", s.pixels_per_meter);
        read_field(j, "lead_in_frames", s.lead_in_frames);
        read_field(j, "tail_frames", s.tail_frames);
        for (const nlohmann::json& pj : j.at("persons")) {
            synth::PersonSpec p;
            read_field(pj, "exercise", p.exercise);
            read_field(pj, "full_cycles", p.full_cycles);
            read_field(pj, "partial_cycles", p.partial_cycles);
            read_field(pj, "period_frames", p.period_frames);
            read_field(pj, "noise_sigma", p.noise_sigma);
            read_field(pj, "gap_rate", p.gap_rate);
            read_field(pj, "position_jitter", p.position_jitter);
            read_field(pj, "camera_yaw_deg", p.camera_yaw_deg);
            read_field(pj, "offset_x", p.offset_x);
            read_field(pj, "offset_y", p.offset_y);
            s.persons.push_back(p);
        }
        return s;
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(path + ": " + e.what());
    }
}

std::string truth_json(const synth::SyntheticSession& s) {
    nlohmann::ordered_json doc;
    doc["persons"] = nlohmann::ordered_json::array();
    for (const synth::PersonTruth& t : s.truth) {
        nlohmann::ordered_json p;
        p["exercise"] = t.exercise;
        p["total"] = t.total;
        p["correct"] = t.correct;
        p["incorrect"] = t.incorrect;
        p["reps"] = nlohmann::ordered_json::array();
        for (const synth::TruthRep& r : t.reps) p["reps"].push_back({{"frame", r.frame}, {"full", r.full}});
        doc["persons"].push_back(p);
    }
    doc["frames"] = s.frames.size();
    return doc.dump(2) + "\n";
}

void write_frames(const std::string& path, const std::vector<SkeletonFrame>& frames) {
    std::ostringstream out;
    if (fs::path(path).extension() == ".csv") {
        write_session_csv(out, frames);
    } else {
        write_ndjson(out, frames);
    }
    if (path.empty() || path == "-") {
        std::cout << out.str();
    } else {
        write_file(path, out.str());
    }
}

int cmd_simulate(const SimulateOptions& o) {
    CommonOptions c;
    c.profiles = o.profiles;
    const auto profiles = load_registry(c);
    if (o.corpus_per_class > 0) {
        synth::CorpusOptions co;
        co.per_class = o.corpus_per_class;
        co.seed = o.seed;
        const std::vector<std::string> classes = split_list(o.classes);
        const auto corpus = synth::generate_corpus(classes, *profiles, co);
        std::vector<SkeletonFrame> frames;
        std::string labels = "frame,person,label\n";
        for (std::size_t i = 0; i < corpus.size(); ++i) {
            frames.push_back({i, {corpus[i].skeleton}, o.fps});
            labels += std::to_string(i) + ",0," + classes[corpus[i].label] + "\n";
        }
        write_frames(o.out, frames);
        if (!o.labels.empty()) write_file(o.labels, labels);
        return kOk;
    }
    synth::SyntheticSessionSpec spec;
    if (!o.spec.empty()) {
        spec = parse_spec(o.spec);
    } else {
        spec.seed = o.seed;
        spec.fps = o.fps;
        if (o.persons < 1) throw ConfigError("--persons must be >= 1");
        for (int i = 0; i < o.persons; ++i) {
            synth::PersonSpec p = o.person;
            p.offset_x += (i - 0.5 * (o.persons - 1)) * 400.0;
            spec.persons.push_back(p);
        }
    }
    const synth::SyntheticSession s = synth::generate_session(spec, *profiles);
    write_frames(o.out, s.frames);
    if (!o.truth.empty()) write_file(o.truth, truth_json(s));
    return kOk;
}

// --- bench -----------------------------------------------------------------

struct BenchOptions {
    CommonOptions common;
    std::string input;
    int repetitions = 5;
    std::size_t frames = 10000;
    int persons = 1;
};

int cmd_bench(const BenchOptions& o) {
    if (o.repetitions < 1) throw ConfigError("--repetitions must be >= 1");
    const auto model = load_bundle(o.common.model);
    const auto profiles = load_registry(o.common);
    const PipelineConfig cfg = pipeline_config(o.common);
    std::vector<SkeletonFrame> frames;
    if (!o.input.empty()) {
        frames = load_input(o.input, cfg.fps);
    } else {
        if (o.persons < 1 || o.frames < 100) throw ConfigError("--persons must be >= 1 and --frames >= 100");
        synth::SyntheticSessionSpec spec;
        spec.seed = o.common.seed;
        spec.fps = cfg.fps;
        spec.lead_in_frames = 20;
        spec.tail_frames = 40;  // padding; trimmed to --frames below
        for (int i = 0; i < o.persons; ++i) {
            synth::PersonSpec p;
            p.exercise = model->model.class_names[static_cast<std::size_t>(i) % model->model.class_names.size()];
            p.full_cycles = static_cast<int>((o.frames - 40) / 40);
            p.noise_sigma = 2.0;
            p.gap_rate = 0.02;
            p.offset_x = (i - 0.5 * (o.persons - 1)) * 400.0;
            spec.persons.push_back(p);
        }
        frames = synth::generate_session(spec, *profiles).frames;
        if (frames.size() > o.frames) frames.resize(o.frames);
    }
    const BenchResult r = run_bench(frames, model, profiles, cfg, o.repetitions);
    std::cout << render_bench_text(r);
    if (!o.common.out_json.empty()) write_file(o.common.out_json, render_bench_json(r));
    if (!o.common.out_text.empty()) write_file(o.common.out_text, render_bench_text(r));
    return kOk;
}

template <typename F>
int guarded(F&& body) {
    try {
        return body();
    } catch (const Failure& e) {
        std::cerr << "error: " << e.what() << "\n";
        return e.code;
    } catch (const ModelFormatError& e) {
        std::cerr << "error: bad model: " << e.what() << "\n";
        return kBadModel;
    } catch (const ConfigError& e) {
        std::cerr << "error: invalid configuration: " << e.what() << "\n";
        return kBadConfig;
    } catch (const TrainingError& e) {
        std::cerr << "error: degenerate dataset: " << e.what() << "\n";
        return kDegenerateData;
    } catch (const CalibrationError& e) {
        std::cerr << "error: degenerate dataset: " << e.what() << "\n";
        return kDegenerateData;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kFailure;
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"repcount: exercise repetition counting from BODY_25 keypoints"};
    app.require_subcommand(1);

    AnalyzeOptions an;
    auto* analyze = app.add_subcommand("analyze", "Count repetitions in keypoint sessions");
    analyze->add_option("inputs", an.inputs, "Session files, frame directories, or - for NDJSON on stdin")
        ->required();
    analyze->add_option("--model", an.common.model, "Trained model file")->required();
    add_pipeline_flags(analyze, an.common);
    analyze->add_option("--out-text", an.common.out_text, "Text report (directory with several inputs)");
    analyze->add_option("--out-json", an.common.out_json, "JSON report (directory with several inputs)");
    analyze->add_option("--out-csv", an.common.out_csv, "Event CSV (directory with several inputs)");
    analyze->add_option("--trace-dir", an.trace_dir, "Write conditioned angle traces here");
    analyze->add_option("--jobs", an.jobs, "Parallel workers (default: hardware threads)");
    analyze->add_flag("--live", an.live, "Print events to stderr as they complete");
    analyze->add_flag("--embed-traces", an.embed_traces, "Include conditioned angle traces in the JSON report");

    TrainOptions tr;
    auto* train_cmd = app.add_subcommand("train", "Train the exercise recognizer");
    add_data_flags(train_cmd, tr.data);
    train_cmd->add_option("--profiles", tr.common.profiles, "Exercise profile file (INI)");
    train_cmd->add_option("--out,--model", tr.out, "Where to write the model")->required();
    train_cmd->add_option("--curve", tr.curve, "Training curve CSV");
    train_cmd->add_option("--holdout", tr.holdout, "Held-out fraction for evaluation and calibration")
        ->capture_default_str();
    train_cmd->add_flag("--calibrate,!--no-calibrate", tr.calibrate, "Skip reject-option calibration");
    train_cmd->add_option("--seed", tr.common.seed, "Initialisation and shuffling seed")->capture_default_str();
    train_cmd->add_option("--epochs", tr.hyper.epochs)->capture_default_str();
    train_cmd->add_option("--batch", tr.hyper.batch_size)->capture_default_str();
    train_cmd->add_option("--lr", tr.hyper.learning_rate)->capture_default_str();
    train_cmd->add_option("--momentum", tr.hyper.momentum)->capture_default_str();
    train_cmd->add_option("--hidden", tr.hidden, "Hidden layer widths")->capture_default_str();

    CalibrateOptions ca;
    auto* calibrate = app.add_subcommand("calibrate", "Fit reject-option thresholds for a trained model");
    calibrate->add_option("--model", ca.common.model, "Trained model file")->required();
    calibrate->add_option("--profiles", ca.common.profiles, "Exercise profile file (INI)");
    calibrate->add_option("--out", ca.out, "Output model (default: overwrite --model)");
    add_data_flags(calibrate, ca.data);

    SimulateOptions si;
    auto* simulate = app.add_subcommand("simulate", "Generate synthetic sessions or labelled corpora");
    simulate->add_option("--spec", si.spec, "Session spec (JSON)");
    simulate->add_option("--out", si.out, "Frames output (.csv for session CSV, NDJSON otherwise; - for stdout)");
    simulate->add_option("--truth", si.truth, "Ground-truth JSON");
    simulate->add_option("--labels", si.labels, "Label CSV for --corpus-per-class");
    simulate->add_option("--corpus-per-class", si.corpus_per_class, "Generate a labelled corpus instead");
    simulate->add_option("--classes", si.classes)->capture_default_str();
    simulate->add_option("--profiles", si.profiles, "Exercise profile file (INI)");
    simulate->add_option("--seed", si.seed)->capture_default_str();
    simulate->add_option("--fps", si.fps)->capture_default_str();
    simulate->add_option("--exercise", si.person.exercise)->capture_default_str();
    simulate->add_option("--full", si.person.full_cycles, "Full range-of-motion cycles")->capture_default_str();
    simulate->add_option("--partial", si.person.partial_cycles, "Mid-only cycles")->capture_default_str();
    simulate->add_option("--period", si.person.period_frames, "Frames per cycle")->capture_default_str();
    simulate->add_option("--noise", si.person.noise_sigma, "Angle noise sigma (degrees)")->capture_default_str();
    simulate->add_option("--gaps", si.person.gap_rate, "Per-frame gap probability")->capture_default_str();
    simulate->add_option("--jitter", si.person.position_jitter, "Joint position noise (pixels)");
    simulate->add_option("--yaw", si.person.camera_yaw_deg, "Camera yaw (degrees)");
    simulate->add_option("--persons", si.persons, "People side by side")->capture_default_str();

    BenchOptions be;
    auto* bench = app.add_subcommand("bench", "Measure post-pose pipeline throughput");
    bench->add_option("input", be.input, "Session to replay (default: synthetic)");
    bench->add_option("--model", be.common.model, "Trained model file")->required();
    add_pipeline_flags(bench, be.common);
    bench->add_option("--repetitions", be.repetitions, "Timed runs; the median is reported")
        ->capture_default_str();
    bench->add_option("--frames", be.frames, "Synthetic session length")->capture_default_str();
    bench->add_option("--persons", be.persons, "People in the synthetic session")->capture_default_str();
    bench->add_option("--seed", be.common.seed)->capture_default_str();
    bench->add_option("--out-json", be.common.out_json, "Write the result as JSON");
    bench->add_option("--out-text", be.common.out_text, "Write the text result");

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kBadConfig;
    }

    if (*analyze) return guarded([&] { return cmd_analyze(an); });
    if (*train_cmd) return guarded([&] { return cmd_train(tr); });
    if (*calibrate) return guarded([&] { return cmd_calibrate(ca); });
    if (*simulate) return guarded([&] { return cmd_simulate(si); });
    if (*bench) return guarded([&] { return cmd_bench(be); });
    return kFailure;
}
