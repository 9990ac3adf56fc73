// Copyright (C) 2026 The repcount Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <random>

#include "repcount/keypoint_io.hpp"

namespace repcount::testing {

// Every joint detected at a random position in [lo, hi]^2 (z = 0).
inline RawSkeleton random_skeleton(std::mt19937_64& rng, double lo = 0.0, double hi = 500.0,
                                   bool with_z = false) {
    std::uniform_real_distribution<double> pos(lo, hi);
    std::uniform_real_distribution<double> conf(0.1, 1.0);
    RawSkeleton s;
    for (Keypoint& k : s.keypoints) {
        k.x = pos(rng);
        k.y = pos(rng);
        k.z = with_z ? pos(rng) : 0.0;
        k.confidence = conf(rng);
    }
    return s;
}

inline RawSkeleton translated(RawSkeleton s, double dx, double dy, double dz = 0.0) {
    for (Keypoint& k : s.keypoints) {
        k.x += dx;
        k.y += dy;
        k.z += dz;
    }
    return s;
}

}  // namespace repcount::testing
