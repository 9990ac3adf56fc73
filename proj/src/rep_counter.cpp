// Copyright (C) 2026 The repcount Authors
// SPDX-License-Identifier: Apache-2.0

#include "repcount/rep_counter.hpp"

#include <algorithm>
#include <stdexcept>

namespace repcount {

std::string_view to_string(Verdict v) { return v == Verdict::kCorrect ? "correct" : "incorrect"; }

RepCounter::RepCounter(const ExerciseProfile& profile, std::uint64_t person_id, double fps,
                       CounterConfig config)
    : low_(profile.rom_low),
      high_(profile.rom_high),
      mid_(profile.midpoint()),
      tolerance_(profile.tolerance),
      motion_(profile.motion),
      person_id_(person_id),
      fps_(fps),
      config_(config) {
    if (!(fps > 0.0)) throw std::invalid_argument("fps must be positive");
    if (config.dwell_samples < 1 || !(config.debounce_band >= 0.0)) {
        throw std::invalid_argument("invalid counter configuration");
    }
}

std::optional<RepEvent> RepCounter::step(const AngleSample& sample) {
    if (sample.gap()) throw std::invalid_argument("rep counter received a gap sample");
    if (finalized_) throw std::logic_error("rep counter already finalized");
    const double angle = *sample.angle;
    const bool above = angle > mid_;
    if (!last_above_ || *last_above_ != above) crossing_frame_ = sample.frame;
    last_above_ = above;

    if (!cycle_open_) {
        cycle_min_ = cycle_max_ = angle;
        cycle_open_ = true;
    } else {
        cycle_min_ = std::min(cycle_min_, angle);
        cycle_max_ = std::max(cycle_max_, angle);
    }

    Phase side = Phase::kUnstarted;
    if (angle >= mid_ + config_.debounce_band) {
        side = Phase::kAboveMid;
    } else if (angle <= mid_ - config_.debounce_band) {
        side = Phase::kBelowMid;
    }
    if (side == Phase::kUnstarted || side == phase_) {
        if (side == phase_) candidate_run_ = 0;
        return std::nullopt;
    }
    if (side == candidate_) {
        ++candidate_run_;
    } else {
        candidate_ = side;
        candidate_run_ = 1;
    }
    if (candidate_run_ < config_.dwell_samples) return std::nullopt;

    const Phase previous = phase_;
    phase_ = side;
    candidate_ = Phase::kUnstarted;
    candidate_run_ = 0;

    const Phase completing = motion_ == MotionType::kPush ? Phase::kAboveMid : Phase::kBelowMid;
    if (previous == Phase::kUnstarted || side != completing) return std::nullopt;

    const bool correct = cycle_min_ <= low_ + tolerance_ && cycle_max_ >= high_ - tolerance_;
    RepEvent event{person_id_, crossing_frame_, static_cast<double>(crossing_frame_) / fps_,
                   correct ? Verdict::kCorrect : Verdict::kIncorrect};
    ++counts_.total;
    ++(correct ? counts_.correct : counts_.incorrect);
    cycle_min_ = cycle_max_ = angle;
    return event;
}

RepCounts RepCounter::finalize() {
    finalized_ = true;
    return counts_;
}

}  // namespace repcount
