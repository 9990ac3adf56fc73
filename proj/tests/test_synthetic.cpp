// Copyright (C) 2026 The repcount Authors
// SPDX-License-Identifier: Apache-2.0

#include <cmath>
#include <sstream>

#include "doctest.h"
#include "repcount/errors.hpp"
#include "repcount/person_tracker.hpp"
#include "repcount/synthetic.hpp"

using namespace repcount;

namespace {

std::string ndjson(const std::vector<SkeletonFrame>& frames) {
    std::ostringstream out;
    write_ndjson(out, frames);
    return out.str();
}

synth::SyntheticSessionSpec noisy_spec(std::uint64_t seed) {
    synth::SyntheticSessionSpec spec;
    spec.seed = seed;
    synth::PersonSpec p;
    p.exercise = "pull-up";
    p.full_cycles = 4;
    p.partial_cycles = 3;
    p.noise_sigma = 5.0;
    p.gap_rate = 0.05;
    p.position_jitter = 1.0;
    spec.persons = {p};
    return spec;
}

}  // namespace

TEST_CASE("the driven angle is reproduced by the pose") {
    const ProfileRegistry reg = builtin_profiles();
    for (const char* ex : {"push-up", "pull-up", "squat"}) {
        const ExerciseProfile& profile = *reg.find(ex);
        for (double angle = 5.0; angle <= 175.0; angle += 7.5) {
            for (double yaw : {0.0, 25.0, -40.0, 180.0}) {
                const RawSkeleton s = synth::pose_skeleton(ex, angle, yaw, 250.0, 30.0, -20.0);
                const AngleSample a = angle_for(profile, s);
                REQUIRE(a.angle);
                CHECK(std::abs(*a.angle - angle) < 1e-6);
            }
        }
    }
    CHECK_THROWS_AS(synth::pose_skeleton("burpee", 90.0, 0.0, 250.0, 0.0, 0.0), ConfigError);
}

TEST_CASE("poses normalize to a usable feature vector") {
    for (const char* ex : {"push-up", "pull-up", "squat", "sit-up"}) {
        for (double angle : {20.0, 90.0, 160.0}) {
            CHECK(normalize_skeleton(synth::pose_skeleton(ex, angle, 10.0, 250.0, 0.0, 0.0)));
        }
    }
}

TEST_CASE("angle track truth follows the cycle plan") {
    const ProfileRegistry reg = builtin_profiles();
    for (const char* ex : {"push-up", "pull-up"}) {
        const ExerciseProfile& profile = *reg.find(ex);
        synth::PersonSpec p;
        p.exercise = ex;
        p.full_cycles = 5;
        p.partial_cycles = 4;
        p.period_frames = 24;
        const auto track = synth::build_angle_track(profile, p, 20, 15, 3);
        REQUIRE(track.reps.size() == 9);
        int full = 0;
        for (const auto& r : track.reps) full += r.full;
        CHECK(full == 5);
        const double mid = profile.midpoint();
        for (std::size_t i = 0; i < track.reps.size(); ++i) {
            const std::size_t f = track.reps[i].frame;
            // The truth frame sits on the midpoint, heading towards the rest side.
            CHECK(track.angles[f] == doctest::Approx(mid).epsilon(1e-9));
            const double next = track.angles[f + 1];
            CHECK((profile.motion == MotionType::kPush ? next > mid : next < mid));
            if (i > 0) CHECK(f > track.reps[i - 1].frame);
        }
        // Full cycles reach past both bounds; partial ones stay near the midpoint.
        std::size_t start = 0;
        for (const auto& r : track.reps) {
            double lo = 180.0, hi = 0.0;
            for (std::size_t f = start; f <= r.frame; ++f) {
                lo = std::min(lo, track.angles[f]);
                hi = std::max(hi, track.angles[f]);
            }
            if (r.full) {
                CHECK(lo <= profile.rom_low);
                CHECK(hi >= profile.rom_high);
            } else {
                CHECK(lo >= mid - 10.0 - 1e-9);
            }
            start = r.frame;
        }
        CHECK(track.angles.front() == track.angles[19]);
    }
}

TEST_CASE("generation is deterministic per seed") {
    const ProfileRegistry reg = builtin_profiles();
    const auto a = synth::generate_session(noisy_spec(21), reg);
    const auto b = synth::generate_session(noisy_spec(21), reg);
    const auto c = synth::generate_session(noisy_spec(22), reg);
    CHECK(ndjson(a.frames) == ndjson(b.frames));
    CHECK(ndjson(a.frames) != ndjson(c.frames));
    REQUIRE(a.truth.size() == 1);
    CHECK(a.truth[0].total == 7);
    CHECK(a.truth[0].correct == 4);
    CHECK(a.truth[0].incorrect == 3);

    synth::CorpusOptions o;
    o.per_class = 50;
    const std::vector<std::string> classes{"push-up", "squat"};
    const auto x = synth::generate_corpus(classes, reg, o);
    const auto y = synth::generate_corpus(classes, reg, o);
    REQUIRE(x.size() == y.size());
    CHECK(x.size() == 100);
    for (std::size_t i = 0; i < x.size(); ++i) {
        CHECK(x[i].skeleton == y[i].skeleton);
        CHECK(x[i].label == y[i].label);
    }
    CHECK(synth::generate_unknown_frames(30, o) == synth::generate_unknown_frames(30, o));
}

TEST_CASE("gaps drop the driven vertex on both sides") {
    const ProfileRegistry reg = builtin_profiles();
    auto spec = noisy_spec(5);
    spec.persons[0].gap_rate = 0.3;
    const auto s = synth::generate_session(spec, reg);
    std::size_t gaps = 0;
    for (const SkeletonFrame& f : s.frames) {
        const RawSkeleton& sk = f.skeletons.at(0);
        const bool r = sk[body25::kRElbow].detected();
        const bool l = sk[body25::kLElbow].detected();
        CHECK(r == l);
        gaps += !r;
        CHECK(sk[body25::kNeck].detected());
    }
    CHECK(gaps > s.frames.size() / 5);
    CHECK(gaps < s.frames.size() / 2);
}

TEST_CASE("separated people keep two stable tracks") {
    const ProfileRegistry reg = builtin_profiles();
    synth::SyntheticSessionSpec spec;
    synth::PersonSpec a;
    a.exercise = "squat";
    a.offset_x = -300;
    a.position_jitter = 2.0;
    synth::PersonSpec b = a;
    b.exercise = "push-up";
    b.offset_x = 300;
    b.full_cycles = 6;
    spec.persons = {a, b};
    const auto s = synth::generate_session(spec, reg);
    PersonTracker tracker;
    for (const SkeletonFrame& f : s.frames) {
        REQUIRE(f.skeletons.size() == 2);
        const Assignment as = tracker.match_frame(f);
        CHECK(as.ids_by_skeleton == std::vector<std::uint64_t>{1, 2});
    }
}

TEST_CASE("invalid specs are rejected") {
    const ProfileRegistry reg = builtin_profiles();
    auto check_bad = [&](auto mutate) {
        synth::SyntheticSessionSpec spec = noisy_spec(1);
        mutate(spec);
        CHECK_THROWS_AS(spec.validate(reg), ConfigError);
        CHECK_THROWS_AS(synth::generate_session(spec, reg), ConfigError);
    };
    check_bad([](auto& s) { s.persons.clear(); });
    check_bad([](auto& s) { s.fps = 0.0; });
    check_bad([](auto& s) { s.persons[0].exercise = "burpee"; });
    check_bad([](auto& s) { s.persons[0].full_cycles = -1; });
    check_bad([](auto& s) {
        s.persons[0].full_cycles = 0;
        s.persons[0].partial_cycles = 0;
    });
    check_bad([](auto& s) { s.persons[0].period_frames = 19; });
    check_bad([](auto& s) { s.persons[0].noise_sigma = -1.0; });
    check_bad([](auto& s) { s.persons[0].gap_rate = 1.0; });
    CHECK_NOTHROW(noisy_spec(1).validate(reg));
}
