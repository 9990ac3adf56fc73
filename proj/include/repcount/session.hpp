// Copyright (C) 2026 The repcount Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <chrono>
#include <cstdint>
#include <deque>
#include <map>
#include <memory>
#include <optional>
#include <vector>

#include "repcount/exercise_recognizer.hpp"
#include "repcount/kinematics.hpp"
#include "repcount/person_tracker.hpp"
#include "repcount/rep_counter.hpp"
#include "repcount/session_report.hpp"
#include "repcount/signal_conditioner.hpp"

namespace repcount {

struct PipelineConfig {
    double fps = 30.0;
    TrackerConfig tracker;
    CounterConfig counter;
    int outlier_iterations = 3;
    GapFillMode gap_mode = GapFillMode::kExtrapolate;
    RejectMode reject_mode = RejectMode::kOneSided;
    bool keep_traces = false;
    bool measure_stages = false;
};

// Wall-clock time spent per stage (only populated with measure_stages).
struct StageTimings {
    std::chrono::nanoseconds tracking{0};
    std::chrono::nanoseconds recognition{0};
    std::chrono::nanoseconds angles{0};
    std::chrono::nanoseconds conditioning{0};
    std::chrono::nanoseconds counting{0};
};

// Per-session pipeline: track -> recognize -> angle -> condition -> count.
// Sequential; one instance per input stream. The model and profiles are
// shared read-only.
class SessionPipeline {
public:
    // Throws ConfigError when a model class has no matching profile, or
    // ModelFormatError when the reject option is on without thresholds.
    SessionPipeline(std::shared_ptr<const ModelBundle> model, std::shared_ptr<const ProfileRegistry> profiles,
                    PipelineConfig config);

    // Events completed while processing this frame (conditioning delays them
    // by one frame).
    std::vector<RepEvent> process(const SkeletonFrame& frame);

    // Flushes open sets and returns the finalized summary. Further calls to
    // process() are invalid.
    SessionSummary finish();

    // Conditioned angle trace per person id (with keep_traces).
    const std::map<std::uint64_t, std::vector<ConditionedSample>>& traces() const { return traces_; }
    const StageTimings& timings() const { return timings_; }
    std::uint64_t frames_processed() const { return frames_; }

private:
    struct ActiveSet {
        Label label;
        const ExerciseProfile* profile;
        StreamingConditioner conditioner;
        RepCounter counter;
        SetSummary summary;
    };
    struct PersonState {
        std::uint64_t id = 0;
        LabelWindow window;
        Label windowed = kWarmupLabel;
        std::optional<ActiveSet> set;
        // Frames seen while no set was open (warm-up or Unknown), replayed into
        // the next set so it starts where the label window starts.
        std::deque<std::pair<std::uint64_t, RawSkeleton>> unlabeled;
        std::vector<SetSummary> sets;
        std::vector<RepEvent> events;
        std::optional<std::uint64_t> retired_at;
    };

    void step_person(PersonState& person, const RawSkeleton& skeleton, std::uint64_t frame,
                     std::vector<RepEvent>& out);
    void count_frame(PersonState& person, const RawSkeleton& skeleton, std::uint64_t frame,
                     std::vector<RepEvent>& out);
    void feed(PersonState& person, const std::vector<ConditionedSample>& samples, std::vector<RepEvent>& out);
    void close_set(PersonState& person, std::vector<RepEvent>& out);

    std::shared_ptr<const ModelBundle> model_;
    std::shared_ptr<const ProfileRegistry> profiles_;
    std::vector<const ExerciseProfile*> class_profiles_;
    PipelineConfig config_;
    PersonTracker tracker_;
    std::map<std::uint64_t, PersonState> persons_;
    std::map<std::uint64_t, std::vector<ConditionedSample>> traces_;
    StageTimings timings_;
    std::uint64_t frames_ = 0;
    bool finished_ = false;
};

// Convenience: run a whole frame sequence through a fresh pipeline.
SessionSummary analyze_frames(const std::vector<SkeletonFrame>& frames, std::shared_ptr<const ModelBundle> model,
                              std::shared_ptr<const ProfileRegistry> profiles, const PipelineConfig& config);

}  // namespace repcount
