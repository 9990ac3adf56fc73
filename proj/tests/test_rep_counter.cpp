// Copyright (C) 2026 The repcount Authors
// SPDX-License-Identifier: Apache-2.0

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "doctest.h"
#include "repcount/kinematics.hpp"
#include "repcount/rep_counter.hpp"

using namespace repcount;

namespace {

const ExerciseProfile kPush{"push-up", {2, 3, 4}, 75.0, 160.0, MotionType::kPush, 5.0};
const ExerciseProfile kPull{"pull-up", {2, 3, 4}, 60.0, 160.0, MotionType::kPull, 5.0};

struct Run {
    std::vector<RepEvent> events;
    RepCounts counts;
};

Run run(const ExerciseProfile& p, const std::vector<double>& trace, double fps = 30.0) {
    RepCounter c(p, 1, fps);
    Run r;
    for (std::size_t f = 0; f < trace.size(); ++f) {
        if (auto e = c.step({f, trace[f]})) r.events.push_back(*e);
        CHECK(c.counts().total == c.counts().correct + c.counts().incorrect);
    }
    r.counts = c.finalize();
    return r;
}

// Linear ramps through the given knots, `steps` samples per segment.
std::vector<double> ramps(const std::vector<double>& knots, int steps) {
    std::vector<double> out;
    for (std::size_t k = 0; k + 1 < knots.size(); ++k) {
        for (int s = 0; s < steps; ++s) out.push_back(knots[k] + (knots[k + 1] - knots[k]) * s / steps);
    }
    out.push_back(knots.back());
    return out;
}

std::vector<double> sinusoid(double mid, double amp, int cycles, int period, double phase = 0.0) {
    std::vector<double> out;
    for (int f = 0; f <= cycles * period; ++f) {
        out.push_back(mid + amp * std::cos(2.0 * std::numbers::pi * f / period + phase));
    }
    return out;
}

}  // namespace

TEST_CASE("ten full cycles are ten correct reps") {
    const double amp = 0.5 * (kPush.rom_high - kPush.rom_low) + 5.0;
    const Run r = run(kPush, sinusoid(kPush.midpoint(), amp, 10, 40));
    CHECK(r.counts == RepCounts{10, 10, 0});
    REQUIRE(r.events.size() == 10);
    for (const auto& e : r.events) CHECK(e.verdict == Verdict::kCorrect);

    const double pull_amp = 0.5 * (kPull.rom_high - kPull.rom_low) + 5.0;
    const Run p = run(kPull, sinusoid(kPull.midpoint(), pull_amp, 10, 40, std::numbers::pi));
    CHECK(p.counts == RepCounts{10, 10, 0});
}

TEST_CASE("mid-only oscillation gives incorrect reps") {
    const Run r = run(kPush, sinusoid(kPush.midpoint(), 10.0, 5, 30));
    CHECK(r.counts == RepCounts{5, 0, 5});
    for (const auto& e : r.events) CHECK(e.verdict == Verdict::kIncorrect);
}

TEST_CASE("flat trace and empty session") {
    CHECK(run(kPush, std::vector<double>(300, kPush.midpoint() + 1.0)).counts == RepCounts{});
    RepCounter c(kPush, 1, 30.0);
    CHECK(c.finalize() == RepCounts{0, 0, 0});
    CHECK(c.phase() == Phase::kUnstarted);
}

TEST_CASE("first cycle correct, second falls short of the far bound") {
    // A (top) -> C (past the low bound) -> E (top again), then E -> G (short of the low bound) -> top.
    const Run r = run(kPush, ramps({165.0, 70.0, 165.0, 100.0, 165.0}, 20));
    REQUIRE(r.events.size() == 2);
    CHECK(r.events[0].verdict == Verdict::kCorrect);
    CHECK(r.events[1].verdict == Verdict::kIncorrect);
    CHECK(r.counts == RepCounts{2, 1, 1});
}

TEST_CASE("tolerance applies to both bounds") {
    // Reaches exactly L + tau and U - tau.
    CHECK(run(kPush, ramps({155.0, 80.0, 155.0}, 20)).counts == RepCounts{1, 1, 0});
    CHECK(run(kPush, ramps({155.0, 80.5, 155.0}, 20)).counts == RepCounts{1, 0, 1});
    CHECK(run(kPush, ramps({154.5, 80.0, 154.5}, 20)).counts == RepCounts{1, 0, 1});
}

TEST_CASE("push completes upward, pull completes downward") {
    const auto down_up = ramps({165.0, 70.0, 165.0}, 20);
    const Run push = run(kPush, down_up);
    REQUIRE(push.events.size() == 1);
    CHECK(push.events[0].frame > 20);  // on the way back up

    // Pull-up starts hanging (low), pulls up, comes back down.
    const Run pull = run(kPull, ramps({55.0, 165.0, 55.0}, 20));
    REQUIRE(pull.events.size() == 1);
    CHECK(pull.events[0].frame > 20);
    CHECK(pull.events[0].verdict == Verdict::kCorrect);
    // Going only one way never completes a rep.
    CHECK(run(kPull, ramps({55.0, 165.0}, 20)).counts.total == 0);
}

TEST_CASE("events carry the mid-crossing frame and timestamp") {
    // 165 -> 70 -> 165 in steps of 5: the first sample above 117.5 on the
    // way back up is frame 29.
    std::vector<double> t;
    for (int f = 0; f <= 19; ++f) t.push_back(165.0 - 5.0 * f);
    for (int f = 1; f <= 19; ++f) t.push_back(70.0 + 5.0 * f);
    CHECK(t[28] == 115.0);
    CHECK(t[29] == 120.0);
    const Run r = run(kPush, t, 10.0);
    REQUIRE(r.events.size() == 1);
    CHECK(r.events[0].frame == 29);
    CHECK(r.events[0].timestamp == doctest::Approx(2.9));
    CHECK(r.events[0].person_id == 1);
}

TEST_CASE("hysteresis suppresses chatter at the midpoint") {
    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> eps(-0.45, 0.45);
    std::vector<double> hover;
    for (int i = 0; i < 500; ++i) hover.push_back(kPush.midpoint() + eps(rng));
    CHECK(run(kPush, hover).counts.total == 0);

    // Full excursions with chattering crossings on every pass through the midpoint.
    std::vector<double> t;
    const double m = kPush.midpoint();
    for (int cycle = 0; cycle < 6; ++cycle) {
        for (double v : ramps({165.0, m + 0.4}, 10)) t.push_back(v);
        for (int k = 0; k < 8; ++k) t.push_back(m + (k % 2 ? 0.4 : -0.4));
        for (double v : ramps({m - 0.4, 70.0, m - 0.4}, 10)) t.push_back(v);
        for (int k = 0; k < 8; ++k) t.push_back(m + (k % 2 ? -0.4 : 0.4));
    }
    for (double v : ramps({m + 0.4, 165.0}, 10)) t.push_back(v);
    CHECK(run(kPush, t).counts == RepCounts{6, 6, 0});

    // Single-sample spikes across the band do not count either.
    std::vector<double> spikes(200, 150.0);
    for (std::size_t i = 20; i < spikes.size(); i += 20) spikes[i] = 70.0;
    CHECK(run(kPush, spikes).counts.total == 0);
}

TEST_CASE("oracle: random clean knot sequences") {
    std::mt19937_64 rng(99);
    for (int trial = 0; trial < 300; ++trial) {
        const ExerciseProfile& p = trial % 2 ? kPull : kPush;
        const double m = p.midpoint();
        // Knots sit well past the band and steps are small, so every crossing
        // is confirmed before the next knot is reached.
        std::uniform_real_distribution<double> hi(m + 20.0, 180.0);
        std::uniform_real_distribution<double> lo(0.0, m - 20.0);
        std::uniform_real_distribution<double> step(1.0, 4.0);
        const int cycles = 1 + trial % 12;
        // Rest side first: high for push, low for pull.
        std::vector<double> rest_knots, far_knots;
        std::vector<double> knots;
        for (int c = 0; c <= cycles; ++c) {
            const double r = p.motion == MotionType::kPush ? hi(rng) : lo(rng);
            rest_knots.push_back(r);
            knots.push_back(r);
            if (c == cycles) break;
            const double f = p.motion == MotionType::kPush ? lo(rng) : hi(rng);
            far_knots.push_back(f);
            knots.push_back(f);
        }
        std::vector<double> t;
        for (std::size_t k = 0; k + 1 < knots.size(); ++k) {
            const int n = static_cast<int>(std::ceil(std::abs(knots[k + 1] - knots[k]) / step(rng)));
            for (int s = 0; s < n; ++s) t.push_back(knots[k] + (knots[k + 1] - knots[k]) * s / n);
        }
        for (int h = 0; h < 3; ++h) t.push_back(knots.back());

        RepCounts expect;
        for (int c = 0; c < cycles; ++c) {
            const double mn = std::min(rest_knots[c], far_knots[c]);
            const double mx = std::max(rest_knots[c], far_knots[c]);
            const bool ok = mn <= p.rom_low + p.tolerance && mx >= p.rom_high - p.tolerance;
            ++expect.total;
            ++(ok ? expect.correct : expect.incorrect);
        }
        const Run r = run(p, t);
        INFO("trial " << trial << ": got " << r.counts.total << "/" << r.counts.correct << ", want "
                      << expect.total << "/" << expect.correct);
        CHECK(r.counts == expect);
        const Run again = run(p, t);
        CHECK(again.events == r.events);
        for (std::size_t i = 1; i < r.events.size(); ++i) CHECK(r.events[i].frame > r.events[i - 1].frame);
    }
}

TEST_CASE("random traces keep the count invariants") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> a(0.0, 180.0);
    for (int trial = 0; trial < 100; ++trial) {
        RepCounter c(trial % 2 ? kPull : kPush, 3, 30.0);
        RepCounts prev;
        for (std::uint64_t f = 0; f < 400; ++f) {
            c.step({f, a(rng)});
            const RepCounts now = c.counts();
            CHECK(now.total == now.correct + now.incorrect);
            CHECK(now.total >= prev.total);
            CHECK(now.correct >= prev.correct);
            CHECK(now.incorrect >= prev.incorrect);
            CHECK(c.cycle_min() <= c.cycle_max());
            prev = now;
        }
    }
}

TEST_CASE("contract violations") {
    RepCounter c(kPush, 1, 30.0);
    CHECK_THROWS_AS(c.step({0, std::nullopt}), std::invalid_argument);
    c.finalize();
    CHECK_THROWS_AS(c.step({1, 100.0}), std::logic_error);
    CHECK_THROWS_AS(RepCounter(kPush, 1, 0.0), std::invalid_argument);
    CHECK(to_string(Verdict::kCorrect) == "correct");
    CHECK(to_string(Verdict::kIncorrect) == "incorrect");
}
