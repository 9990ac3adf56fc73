// Copyright (C) 2026 The repcount Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "repcount/exercise_recognizer.hpp"
#include "repcount/keypoint_io.hpp"
#include "repcount/kinematics.hpp"

namespace repcount::synth {

// Motion families the generator can animate. sit-up is deliberately outside
// the recognizer's classes and is used to exercise the reject option.
inline constexpr std::string_view kSitUp = "sit-up";

struct PersonSpec {
    std::string exercise = "push-up";
    int full_cycles = 10;     // reach both ROM bounds (+5 degrees margin)
    int partial_cycles = 0;   // stay within midpoint +- 10 degrees
    int period_frames = 40;   // frames per cycle, >= 20
    double noise_sigma = 0.0; // Gaussian noise on the driven joint angle, degrees
    double gap_rate = 0.0;    // per-frame probability that the driven vertex joints drop out
    double position_jitter = 0.0;  // Gaussian noise on every joint, pixels
    double camera_yaw_deg = 0.0;   // 0 = side view
    double offset_x = 0.0;         // pixels, added to the image centre
    double offset_y = 0.0;
};

struct SyntheticSessionSpec {
    std::vector<PersonSpec> persons;
    double fps = 30.0;
    double pixels_per_meter = 250.0;
    int lead_in_frames = 20;  // rest pose held before the first cycle
    int tail_frames = 15;     // rest pose held after the last cycle
    std::uint64_t seed = 1;

    // Throws ConfigError on invalid fields.
    void validate(const ProfileRegistry& profiles) const;
};

struct TruthRep {
    std::uint64_t frame = 0;  // frame at which the noise-free angle completes the crossing
    bool full = false;
};

struct PersonTruth {
    std::string exercise;
    std::uint64_t total = 0;
    std::uint64_t correct = 0;
    std::uint64_t incorrect = 0;
    std::vector<TruthRep> reps;
};

struct SyntheticSession {
    std::vector<SkeletonFrame> frames;
    std::vector<PersonTruth> truth;  // in PersonSpec order
};

// Deterministic for a given spec (including seed).
SyntheticSession generate_session(const SyntheticSessionSpec& spec, const ProfileRegistry& profiles);

// Noise-free driven-angle trajectory for one person and its rep boundaries.
struct AngleTrack {
    std::vector<double> angles;
    std::vector<TruthRep> reps;
};
AngleTrack build_angle_track(const ExerciseProfile& profile, const PersonSpec& person, int lead_in,
                             int tail, std::uint64_t seed);

// Single skeleton of `exercise` with its driven angle set to angle_deg, seen
// from camera_yaw_deg. Driven angle: elbow (push-up, pull-up), knee (squat),
// torso elevation above the floor (sit-up).
RawSkeleton pose_skeleton(std::string_view exercise, double angle_deg, double camera_yaw_deg,
                          double pixels_per_meter, double offset_x, double offset_y);

// Randomised labelled frames for recognizer training/evaluation: per class,
// `per_class` frames with the driven angle uniform over the profile range
// (+- 5 degrees), random camera yaw, scale, jitter and occasional dropouts.
struct CorpusOptions {
    std::size_t per_class = 2000;
    std::uint64_t seed = 7;
    double max_yaw_deg = 40.0;
    bool vary_body = true;      // random segment lengths and posture
    double jitter_pixels = 1.5;
    double dropout_rate = 0.02;
};
struct LabeledFrame {
    RawSkeleton skeleton;
    std::size_t label = 0;
};
std::vector<LabeledFrame> generate_corpus(const std::vector<std::string>& class_names,
                                          const ProfileRegistry& profiles, const CorpusOptions& options);
// Out-of-class sit-up frames, same randomisation.
std::vector<RawSkeleton> generate_unknown_frames(std::size_t count, const CorpusOptions& options);

// Features for every frame that survives normalization.
Dataset to_dataset(const std::vector<LabeledFrame>& frames);

}  // namespace repcount::synth
