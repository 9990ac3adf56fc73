// Copyright (C) 2026 The repcount Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <optional>
#include <string_view>

#include "repcount/kinematics.hpp"

namespace repcount {

enum class Verdict { kCorrect, kIncorrect };

std::string_view to_string(Verdict v);

struct RepEvent {
    std::uint64_t person_id = 0;
    std::uint64_t frame = 0;
    double timestamp = 0.0;  // seconds from session start
    Verdict verdict = Verdict::kIncorrect;

    friend bool operator==(const RepEvent&, const RepEvent&) = default;
};

struct RepCounts {
    std::uint64_t total = 0;
    std::uint64_t correct = 0;
    std::uint64_t incorrect = 0;

    friend bool operator==(const RepCounts&, const RepCounts&) = default;
};

struct CounterConfig {
    // A mid-line crossing needs the angle at least this far past the midpoint ...
    double debounce_band = 5.0;
    // ... for this many consecutive samples.
    int dwell_samples = 3;
};

enum class Phase { kUnstarted, kAboveMid, kBelowMid };

// Range-of-motion state machine for one person and one exercise set. A rep is
// registered on every crossing of the midpoint in the profile's completing
// direction (push: upward, pull: downward). It is correct when the cycle that
// just closed went down to rom_low + tolerance and up to rom_high - tolerance.
class RepCounter {
public:
    RepCounter(const ExerciseProfile& profile, std::uint64_t person_id, double fps,
               CounterConfig config = {});

    // The event is returned once the dwell confirms the crossing, but carries
    // the frame where the angle crossed the midpoint. Throws
    // std::invalid_argument on a gap sample.
    std::optional<RepEvent> step(const AngleSample& sample);
    RepCounts finalize();

    const RepCounts& counts() const { return counts_; }
    Phase phase() const { return phase_; }
    bool finalized() const { return finalized_; }
    double cycle_min() const { return cycle_min_; }
    double cycle_max() const { return cycle_max_; }

private:
    double low_, high_, mid_, tolerance_;
    MotionType motion_;
    std::uint64_t person_id_;
    double fps_;
    CounterConfig config_;

    Phase phase_ = Phase::kUnstarted;
    Phase candidate_ = Phase::kUnstarted;
    int candidate_run_ = 0;
    bool cycle_open_ = false;
    std::optional<bool> last_above_;
    std::uint64_t crossing_frame_ = 0;
    double cycle_min_ = 0.0, cycle_max_ = 0.0;
    RepCounts counts_;
    bool finalized_ = false;
};

}  // namespace repcount
