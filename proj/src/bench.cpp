// Copyright (C) 2026 The repcount Authors
// SPDX-License-Identifier: Apache-2.0

#include "repcount/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>

#include "json.hpp"
#include "repcount/errors.hpp"

namespace repcount {

double median(std::vector<double> values) {
    if (values.empty()) throw std::invalid_argument("median of an empty set");
    std::sort(values.begin(), values.end());
    const std::size_t n = values.size();
    return n % 2 ? values[n / 2] : 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

BenchResult run_bench(const std::vector<SkeletonFrame>& frames, std::shared_ptr<const ModelBundle> model,
                      std::shared_ptr<const ProfileRegistry> profiles, PipelineConfig config, int repetitions) {
    if (repetitions < 1) throw ConfigError("bench needs at least one repetition");
    if (frames.empty()) throw ConfigError("bench needs at least one frame");
    BenchResult r;
    r.frames = frames.size();
    for (const SkeletonFrame& f : frames) r.skeletons += f.skeletons.size();

    config.keep_traces = false;
    config.measure_stages = false;
    for (int i = 0; i < repetitions; ++i) {
        const auto start = std::chrono::steady_clock::now();
        const SessionSummary s = analyze_frames(frames, model, profiles, config);
        const std::chrono::duration<double> took = std::chrono::steady_clock::now() - start;
        if (s.frame_count != frames.size()) throw std::logic_error("bench run lost frames");
        r.run_fps.push_back(static_cast<double>(frames.size()) / std::max(took.count(), 1e-9));
    }
    r.median_fps = median(r.run_fps);

    config.measure_stages = true;
    SessionPipeline pipe(model, profiles, config);
    for (const SkeletonFrame& f : frames) pipe.process(f);
    pipe.finish();
    r.stages = pipe.timings();
    return r;
}

namespace {

struct Stage {
    const char* name;
    std::chrono::nanoseconds time;
};

std::vector<Stage> stages_of(const StageTimings& t) {
    return {{"tracking", t.tracking},
            {"recognition", t.recognition},
            {"angles", t.angles},
            {"conditioning", t.conditioning},
            {"counting", t.counting}};
}

}  // namespace

std::string render_bench_text(const BenchResult& r) {
    std::string out;
    char line[160];
    std::snprintf(line, sizeof line, "frames: %zu (%zu skeletons)\n", r.frames, r.skeletons);
    out += line;
    out += "runs (frames/s):";
    for (double f : r.run_fps) {
        std::snprintf(line, sizeof line, " %.0f", f);
        out += line;
    }
    std::snprintf(line, sizeof line, "\nmedian: %.0f frames/s\n", r.median_fps);
    out += line;
    const auto stages = stages_of(r.stages);
    double total = 0.0;
    for (const Stage& s : stages) total += static_cast<double>(s.time.count());
    out += "stage breakdown (instrumented run):\n";
    for (const Stage& s : stages) {
        const double ns = static_cast<double>(s.time.count());
        std::snprintf(line, sizeof line, "  %-13s %10.1f ns/frame  %5.1f%%\n", s.name,
                      ns / static_cast<double>(r.frames), total > 0.0 ? 100.0 * ns / total : 0.0);
        out += line;
    }
    return out;
}

std::string render_bench_json(const BenchResult& r) {
    nlohmann::ordered_json doc;
    doc["frames"] = r.frames;
    doc["skeletons"] = r.skeletons;
    doc["run_fps"] = r.run_fps;
    doc["median_fps"] = r.median_fps;
    nlohmann::ordered_json stages;
    for (const Stage& s : stages_of(r.stages)) {
        stages[s.name] = static_cast<double>(s.time.count()) / static_cast<double>(r.frames);
    }
    doc["stage_ns_per_frame"] = stages;
    return doc.dump(2) + "\n";
}

}  // namespace repcount
