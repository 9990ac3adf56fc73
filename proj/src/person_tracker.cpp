// Copyright (C) 2026 The repcount Authors
// SPDX-License-Identifier: Apache-2.0

#include "repcount/person_tracker.hpp"

#include <algorithm>
#include <cmath>
#include <tuple>

#include "repcount/errors.hpp"

namespace repcount {

std::optional<double> skeleton_distance(const RawSkeleton& a, const RawSkeleton& b) {
    double sum = 0.0;
    std::size_t shared = 0;
    for (std::size_t j = 0; j < body25::kJointCount; ++j) {
        if (!a[j].detected() || !b[j].detected()) continue;
        sum += std::hypot(a[j].x - b[j].x, a[j].y - b[j].y, a[j].z - b[j].z);
        ++shared;
    }
    if (shared == 0) return std::nullopt;
    return sum / static_cast<double>(shared);
}

PersonTracker::PersonTracker(TrackerConfig config) : config_(config) {}

std::optional<double> PersonTracker::frame_gate(const SkeletonFrame& frame) {
    if (config_.max_match_distance) return config_.max_match_distance;
    std::vector<double> torsos;
    for (const RawSkeleton& s : frame.skeletons) {
        if (auto t = torso_length(s); t && *t > kTorsoEpsilon) torsos.push_back(*t);
    }
    if (!torsos.empty()) {
        std::sort(torsos.begin(), torsos.end());
        const std::size_t n = torsos.size();
        last_median_torso_ = n % 2 ? torsos[n / 2] : 0.5 * (torsos[n / 2 - 1] + torsos[n / 2]);
    }
    if (!last_median_torso_) return std::nullopt;
    return config_.gate_torso_factor * *last_median_torso_;
}

Assignment PersonTracker::match_frame(const SkeletonFrame& frame) {
    if (last_frame_ && frame.frame_index <= *last_frame_) {
        throw SequencingError("frame " + std::to_string(frame.frame_index) +
                              " does not follow frame " + std::to_string(*last_frame_));
    }
    last_frame_ = frame.frame_index;
    gate_ = frame_gate(frame);

    // (distance, person id, skeleton index); ties resolve by lower id then index.
    std::vector<std::tuple<double, std::uint64_t, std::size_t, std::size_t>> candidates;
    for (std::size_t p = 0; p < active_.size(); ++p) {
        for (std::size_t s = 0; s < frame.skeletons.size(); ++s) {
            const auto d = skeleton_distance(active_[p].last_skeleton, frame.skeletons[s]);
            if (!d || (gate_ && *d > *gate_)) continue;
            candidates.emplace_back(*d, active_[p].id, s, p);
        }
    }
    std::sort(candidates.begin(), candidates.end());

    Assignment out;
    out.ids_by_skeleton.assign(frame.skeletons.size(), 0);
    std::vector<bool> person_taken(active_.size(), false);
    std::vector<bool> skeleton_taken(frame.skeletons.size(), false);
    for (const auto& [d, id, s, p] : candidates) {
        if (person_taken[p] || skeleton_taken[s]) continue;
        person_taken[p] = skeleton_taken[s] = true;
        out.pairs.emplace_back(id, s);
        out.ids_by_skeleton[s] = id;
    }

    for (std::size_t p = 0; p < active_.size(); ++p) {
        TrackedPerson& person = active_[p];
        if (person_taken[p]) continue;
        person.frames_missing = frame.frame_index - person.last_seen_frame;
    }
    for (const auto& [id, s] : out.pairs) {
        auto it = std::find_if(active_.begin(), active_.end(), [id = id](const TrackedPerson& t) { return t.id == id; });
        it->last_skeleton = frame.skeletons[s];
        it->last_seen_frame = frame.frame_index;
        it->frames_missing = 0;
        ++it->frames_seen;
    }
    for (std::size_t s = 0; s < frame.skeletons.size(); ++s) {
        if (skeleton_taken[s]) continue;
        TrackedPerson fresh;
        fresh.id = next_id_++;
        fresh.last_skeleton = frame.skeletons[s];
        fresh.first_seen_frame = fresh.last_seen_frame = frame.frame_index;
        fresh.frames_seen = 1;
        active_.push_back(fresh);
        out.new_ids.push_back(s);
        out.ids_by_skeleton[s] = fresh.id;
    }
    // Ids are handed out sequentially, so history_[id - 1] is that person.
    for (const TrackedPerson& t : active_) {
        if (t.id > history_.size()) history_.resize(t.id);
        history_[t.id - 1] = t;
    }
    std::erase_if(active_, [&](const TrackedPerson& t) {
        if (t.frames_missing <= config_.retention_window) return false;
        out.retired.push_back(t.id);
        return true;
    });
    return out;
}

}  // namespace repcount
