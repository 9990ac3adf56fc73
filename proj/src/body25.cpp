// Copyright (C) 2026 The repcount Authors
// SPDX-License-Identifier: Apache-2.0

#include "repcount/body25.hpp"

#include <array>

namespace repcount::body25 {

const char* joint_name(std::size_t joint) {
    static constexpr std::array<const char*, kJointCount> kNames = {
        "Nose",   "Neck",   "RShoulder", "RElbow",    "RWrist",  "LShoulder", "LElbow",
        "LWrist", "MidHip", "RHip",      "RKnee",     "RAnkle",  "LHip",      "LKnee",
        "LAnkle", "REye",   "LEye",      "REar",      "LEar",    "LBigToe",   "LSmallToe",
        "LHeel",  "RBigToe", "RSmallToe", "RHeel"};
    return joint < kJointCount ? kNames[joint] : "?";
}

}  // namespace repcount::body25
