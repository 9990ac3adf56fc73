// Copyright (C) 2026 The repcount Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "repcount/keypoint_io.hpp"

namespace repcount {

// Mean Euclidean distance over joints detected in both skeletons, on raw
// coordinates. nullopt when the skeletons share no detected joint.
std::optional<double> skeleton_distance(const RawSkeleton& a, const RawSkeleton& b);

struct TrackedPerson {
    std::uint64_t id = 0;
    RawSkeleton last_skeleton;
    std::uint64_t first_seen_frame = 0;
    std::uint64_t last_seen_frame = 0;
    std::uint64_t frames_missing = 0;
    std::uint64_t frames_seen = 0;
};

struct Assignment {
    std::vector<std::pair<std::uint64_t, std::size_t>> pairs;  // (person id, skeleton index)
    std::vector<std::size_t> new_ids;    // skeleton indices that received a fresh id
    std::vector<std::uint64_t> retired;  // person ids dropped this frame

    // Person id for every skeleton of the frame, in skeleton order.
    std::vector<std::uint64_t> ids_by_skeleton;
};

struct TrackerConfig {
    // Fixed gate; when unset the gate is gate_torso_factor x median torso length in the frame.
    std::optional<double> max_match_distance;
    double gate_torso_factor = 0.5;
    std::uint64_t retention_window = 30;
};

// Re-identification by greedy smallest-distance-first matching between active
// persons and the skeletons of each new frame.
class PersonTracker {
public:
    explicit PersonTracker(TrackerConfig config = {});

    // Throws SequencingError if frame_index does not increase.
    Assignment match_frame(const SkeletonFrame& frame);

    const std::vector<TrackedPerson>& active() const { return active_; }
    // Every person ever tracked, including retired ones, in id order.
    const std::vector<TrackedPerson>& history() const { return history_; }
    std::optional<double> last_gate() const { return gate_; }

private:
    std::optional<double> frame_gate(const SkeletonFrame& frame);

    TrackerConfig config_;
    std::vector<TrackedPerson> active_;
    std::vector<TrackedPerson> history_;
    std::uint64_t next_id_ = 1;
    std::optional<std::uint64_t> last_frame_;
    std::optional<double> last_median_torso_;
    std::optional<double> gate_;
};

}  // namespace repcount
