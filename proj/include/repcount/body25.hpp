// Copyright (C) 2026 The repcount Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>

namespace repcount::body25 {

inline constexpr std::size_t kJointCount = 25;

// BODY_25 joint layout. See docs/body25.md for the full table.
enum Joint : std::size_t {
    kNose = 0,
    kNeck = 1,
    kRShoulder = 2,
    kRElbow = 3,
    kRWrist = 4,
    kLShoulder = 5,
    kLElbow = 6,
    kLWrist = 7,
    kMidHip = 8,
    kRHip = 9,
    kRKnee = 10,
    kRAnkle = 11,
    kLHip = 12,
    kLKnee = 13,
    kLAnkle = 14,
    kREye = 15,
    kLEye = 16,
    kREar = 17,
    kLEar = 18,
    kLBigToe = 19,
    kLSmallToe = 20,
    kLHeel = 21,
    kRBigToe = 22,
    kRSmallToe = 23,
    kRHeel = 24,
};

// Left/right counterpart of a joint; midline joints map to themselves.
constexpr std::size_t mirror(std::size_t joint) {
    switch (joint) {
        case kRShoulder: return kLShoulder;
        case kRElbow: return kLElbow;
        case kRWrist: return kLWrist;
        case kLShoulder: return kRShoulder;
        case kLElbow: return kRElbow;
        case kLWrist: return kRWrist;
        case kRHip: return kLHip;
        case kRKnee: return kLKnee;
        case kRAnkle: return kLAnkle;
        case kLHip: return kRHip;
        case kLKnee: return kRKnee;
        case kLAnkle: return kRAnkle;
        case kREye: return kLEye;
        case kLEye: return kREye;
        case kREar: return kLEar;
        case kLEar: return kREar;
        case kLBigToe: return kRBigToe;
        case kLSmallToe: return kRSmallToe;
        case kLHeel: return kRHeel;
        case kRBigToe: return kLBigToe;
        case kRSmallToe: return kLSmallToe;
        case kRHeel: return kLHeel;
        default: return joint;
    }
}

const char* joint_name(std::size_t joint);

}  // namespace repcount::body25
