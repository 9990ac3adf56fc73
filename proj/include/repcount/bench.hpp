// Copyright (C) 2026 The repcount Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <memory>
#include <string>
#include <vector>

#include "repcount/session.hpp"

namespace repcount {

struct BenchResult {
    std::size_t frames = 0;
    std::size_t skeletons = 0;     // summed over all frames
    std::vector<double> run_fps;   // one entry per timed repetition
    double median_fps = 0.0;
    StageTimings stages;           // from one extra instrumented run
};

// Times the post-pose pipeline on already parsed frames. Throws ConfigError
// when repetitions < 1 or there are no frames.
BenchResult run_bench(const std::vector<SkeletonFrame>& frames, std::shared_ptr<const ModelBundle> model,
                      std::shared_ptr<const ProfileRegistry> profiles, PipelineConfig config, int repetitions);

// Middle value; the mean of the two middle values for an even count.
double median(std::vector<double> values);

std::string render_bench_text(const BenchResult& r);
std::string render_bench_json(const BenchResult& r);

}  // namespace repcount
