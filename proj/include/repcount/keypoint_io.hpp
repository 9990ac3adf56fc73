// Copyright (C) 2026 The repcount Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "repcount/body25.hpp"

namespace repcount {

struct Keypoint {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;  // 0 for 2D sources
    double confidence = 0.0;

    // Undetected keypoints (confidence 0) carry no usable coordinates.
    bool detected() const noexcept { return confidence > 0.0; }

    friend bool operator==(const Keypoint&, const Keypoint&) = default;
};

struct RawSkeleton {
    std::array<Keypoint, body25::kJointCount> keypoints{};

    Keypoint& operator[](std::size_t joint) { return keypoints[joint]; }
    const Keypoint& operator[](std::size_t joint) const { return keypoints[joint]; }

    friend bool operator==(const RawSkeleton&, const RawSkeleton&) = default;
};

struct SkeletonFrame {
    std::uint64_t frame_index = 0;
    std::vector<RawSkeleton> skeletons;
    double source_fps = 30.0;

    friend bool operator==(const SkeletonFrame&, const SkeletonFrame&) = default;
};

inline constexpr std::size_t kFeatureSize = 2 * body25::kJointCount;

// Translation- and scale-normalized (x, y) per joint, joint-major.
struct FeatureVector {
    std::array<double, kFeatureSize> values{};

    friend bool operator==(const FeatureVector&, const FeatureVector&) = default;
};

// Skeletons whose neck-to-mid-hip length falls below this are degenerate.
inline constexpr double kTorsoEpsilon = 1e-6;

// Parses one per-frame pose document ("people" array with pose_keypoints_2d
// or pose_keypoints_3d). Throws ParseError / SchemaError.
SkeletonFrame parse_frame(std::string_view bytes, std::uint64_t frame_index,
                          double source_fps = 30.0);

// Inverse of parse_frame. Emits pose_keypoints_3d when any keypoint has a
// non-zero z, pose_keypoints_2d otherwise.
std::string serialize_frame(const SkeletonFrame& frame);

// Newline-delimited frame documents; frame_index is the ordinal of the
// non-blank line. The callback form processes frames as they arrive.
void for_each_ndjson_frame(std::istream& in, double source_fps,
                           const std::function<void(SkeletonFrame&&)>& on_frame);
std::vector<SkeletonFrame> read_ndjson(std::istream& in, double source_fps);
void write_ndjson(std::ostream& out, const std::vector<SkeletonFrame>& frames);

// One .json document per frame, ordered by file name.
std::vector<SkeletonFrame> read_frame_directory(const std::filesystem::path& dir,
                                                double source_fps);

// Session CSV: header `frame,person,joint,x,y,z,confidence`, one row per
// detected joint. `person` is the detection slot within the frame.
std::vector<SkeletonFrame> read_session_csv(std::istream& in, double source_fps);
void write_session_csv(std::ostream& out, const std::vector<SkeletonFrame>& frames);

// Loads any supported input by extension: directory, .csv, otherwise NDJSON.
std::vector<SkeletonFrame> load_frames(const std::filesystem::path& path, double source_fps);

std::optional<double> torso_length(const RawSkeleton& skeleton);

// Mid-hip origin, unit neck-to-mid-hip scale, undetected joints at (0, 0),
// z dropped. nullopt when neck or mid-hip is missing or the torso is degenerate.
std::optional<FeatureVector> normalize_skeleton(const RawSkeleton& skeleton);

}  // namespace repcount
