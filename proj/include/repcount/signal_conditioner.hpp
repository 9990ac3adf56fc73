// Copyright (C) 2026 The repcount Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string_view>
#include <vector>

#include "repcount/kinematics.hpp"

namespace repcount {

// How a gap at frame f is predicted from the two preceding filled values.
enum class GapFillMode {
    kExtrapolate,  // 2*a[f-1] - a[f-2], clamped to [0, 180]
    kAbsolute,     // |2*a[f-1] - a[f-2]|, capped at 180
    kReversed,     // |2*a[f-2] - a[f-1]|, capped at 180
};

std::optional<GapFillMode> parse_gap_fill_mode(std::string_view text);
std::string_view to_string(GapFillMode mode);

struct AngleTrace {
    std::vector<AngleSample> samples;
    // False when fewer than two valid samples exist; such traces pass through untouched.
    bool usable = true;
};

double predict_gap(double prev1, double prev2, GapFillMode mode);

// One application of the outlier rule to `value` given its neighbours:
// replaced by the neighbour mean when it sits above `midpoint` but below that
// mean, or below `midpoint` but above it.
double pull_outlier(double left, double value, double right, double midpoint);

// Leading gaps take the first valid value; later gaps are predicted from the
// two preceding filled values (one predecessor: carried forward).
// Throws SequencingError if frames are not strictly increasing.
AngleTrace fill_gaps(const AngleTrace& trace, GapFillMode mode = GapFillMode::kExtrapolate);

// `iterations` in-place left-to-right sweeps of pull_outlier over interior
// samples. Throws std::invalid_argument if the trace still has gaps.
AngleTrace normalize_outliers(const AngleTrace& trace, double midpoint, int iterations);

struct ConditionerConfig {
    double midpoint = 90.0;
    int iterations = 3;
    GapFillMode mode = GapFillMode::kExtrapolate;
};

AngleTrace condition_trace(const AngleTrace& trace, const ConditionerConfig& config);

struct ConditionedSample {
    std::uint64_t frame = 0;
    std::optional<double> raw;
    double filled = 0.0;
    double conditioned = 0.0;
};

// Online version of fill_gaps + normalize_outliers with one frame of latency:
// a sample is released once its right neighbour is known. Released values are
// final, so repeating the outlier rule on a sample is idempotent and the output
// equals the batch pipeline with a single sweep.
class StreamingConditioner {
public:
    explicit StreamingConditioner(ConditionerConfig config);

    // Returns the samples that became final (usually zero or one; leading gaps
    // are held until the first valid angle arrives).
    std::vector<ConditionedSample> push(const AngleSample& sample);
    // Releases the held sample at end of stream.
    std::vector<ConditionedSample> finish();

    const ConditionerConfig& config() const { return config_; }

private:
    void accept_filled(std::uint64_t frame, std::optional<double> raw, double filled,
                       std::vector<ConditionedSample>& out);

    ConditionerConfig config_;
    std::vector<AngleSample> leading_;
    std::optional<double> prev1_, prev2_;
    std::optional<ConditionedSample> pending_;
    std::optional<double> last_conditioned_;
    std::optional<std::uint64_t> last_frame_;
};

// CSV `frame,raw_angle,filled,conditioned`; gaps leave raw_angle empty.
void write_trace_csv(std::ostream& out, const std::vector<ConditionedSample>& samples);

}  // namespace repcount
