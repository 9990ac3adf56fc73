// Copyright (C) 2026 The repcount Authors
// SPDX-License-Identifier: Apache-2.0

#include <fstream>
#include <random>
#include <sstream>

#include "doctest.h"
#include "json.hpp"
#include "repcount/errors.hpp"
#include "repcount/session_report.hpp"

using namespace repcount;

namespace {

std::string golden(const std::string& name) {
    std::ifstream in(std::string(REPCOUNT_SOURCE_DIR) + "/tests/golden/" + name, std::ios::binary);
    REQUIRE(in);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

RepEvent event(std::uint64_t person, std::uint64_t frame, double fps, Verdict v) {
    return {person, frame, static_cast<double>(frame) / fps, v};
}

SessionSummary random_session(std::mt19937_64& rng) {
    SessionSummary s;
    s.fps = (rng() % 2) ? 30.0 : 24.0;
    s.frame_count = 100 + rng() % 5000;
    s.profiles_used = {"push-up", "pull-up", "squat"};
    const int persons = static_cast<int>(rng() % 4);
    std::uint64_t id = 0;
    for (int p = 0; p < persons; ++p) {
        PersonSummary ps;
        ps.person_id = (id += 1 + rng() % 3);
        ps.predicted_exercise = s.profiles_used[rng() % 3];
        std::uint64_t frame = rng() % 50;
        const int reps = static_cast<int>(rng() % 30);
        for (int r = 0; r < reps; ++r) {
            frame += 1 + rng() % 90;
            const Verdict v = rng() % 3 ? Verdict::kCorrect : Verdict::kIncorrect;
            ps.events.push_back(event(ps.person_id, frame, s.fps, v));
            ++ps.counts.total;
            ++(v == Verdict::kCorrect ? ps.counts.correct : ps.counts.incorrect);
        }
        ps.sets.push_back({ps.predicted_exercise, 10, frame + 5, ps.counts});
        ps.track = {3, frame + 7, frame, rng() % 2 ? std::optional<std::uint64_t>(frame + 40) : std::nullopt};
        if (rng() % 2) ps.trace_csv = "traces/person_" + std::to_string(ps.person_id) + ".csv";
        s.persons.push_back(ps);
    }
    return s;
}

}  // namespace

TEST_CASE("timestamp examples") {
    CHECK(format_timestamp(19.0) == "00:19 sec");
    CHECK(format_timestamp(0.0) == "00:00 sec");
    CHECK(format_timestamp(3661.0) == "61:01 sec");
    CHECK(format_timestamp(59.999) == "00:59 sec");
    CHECK(format_timestamp(6000.0) == "100:00 sec");
    CHECK_THROWS_AS(format_timestamp(-1.0), std::invalid_argument);
    CHECK_THROWS_AS(format_timestamp(std::nan("")), std::invalid_argument);
}

TEST_CASE("golden text reports") {
    SessionSummary one;
    PersonSummary p;
    p.person_id = 1;
    p.predicted_exercise = "push-up";
    p.events = {event(1, 570, 30.0, Verdict::kCorrect)};
    p.counts = {1, 1, 0};
    one.persons = {p};
    CHECK(render_text(one) == golden("one_correct_rep.txt"));

    SessionSummary two;
    two.fps = 24.0;
    PersonSummary a;
    a.person_id = 1;
    a.predicted_exercise = "squat";
    a.events = {event(1, 60, 24.0, Verdict::kIncorrect), event(1, 130, 24.0, Verdict::kCorrect),
                event(1, 1464, 24.0, Verdict::kIncorrect)};
    a.counts = {3, 1, 2};
    PersonSummary b;
    b.person_id = 3;
    two.persons = {a, b};
    CHECK(render_text(two) == golden("two_persons.txt"));

    CHECK(render_text(SessionSummary{}) == golden("empty_session.txt"));
    CHECK(render_text(one).find("Total Reps:  1\n") != std::string::npos);
}

TEST_CASE("json round trip and text agreement") {
    std::mt19937_64 rng(17);
    for (int trial = 0; trial < 50; ++trial) {
        const SessionSummary s = random_session(rng);
        const std::string json = render_json(s);
        const SessionSummary back = parse_json_report(json);
        CHECK(back == s);
        CHECK(render_json(back) == json);

        // Counts and timestamps in the JSON equal what the text shows.
        const auto doc = nlohmann::json::parse(json);
        CHECK(doc["schema"] == std::string(kReportSchemaId));
        const std::string text = render_text(s);
        for (const auto& jp : doc["persons"]) {
            const std::string block = "Person " + std::to_string(jp["person_id"].get<std::uint64_t>()) +
                                      "\nPredicted Exercise: " + jp["predicted_exercise"].get<std::string>() +
                                      "\nTotal Reps:  " + std::to_string(jp["counts"]["total"].get<int>()) +
                                      "\nCorrect Reps:  " + std::to_string(jp["counts"]["correct"].get<int>()) +
                                      "\nIncorrect Reps:  " + std::to_string(jp["counts"]["incorrect"].get<int>()) + "\n";
            CHECK(text.find(block) != std::string::npos);
            for (const auto& e : jp["events"]) {
                const std::string prefix = e["verdict"] == "correct" ? "- Correct! - " : "One Attempt! - ";
                CHECK(text.find(prefix + e["timestamp"].get<std::string>() + "\n") != std::string::npos);
                CHECK(format_timestamp(e["time_s"].get<double>()) == e["timestamp"].get<std::string>());
            }
        }
    }
}

TEST_CASE("json report rejects foreign documents") {
    CHECK_THROWS_AS(parse_json_report("{}"), SchemaError);
    CHECK_THROWS_AS(parse_json_report(R"({"schema":"other/1","session":{},"persons":[]})"), SchemaError);
    CHECK_THROWS_AS(parse_json_report("[1,2"), SchemaError);
}

TEST_CASE("events csv") {
    SessionSummary s;
    PersonSummary p;
    p.person_id = 2;
    p.events = {event(2, 45, 30.0, Verdict::kCorrect), event(2, 90, 30.0, Verdict::kIncorrect)};
    s.persons = {p};
    CHECK(render_events_csv(s) == "person,frame,time_s,verdict\n2,45,1.5,correct\n2,90,3,incorrect\n");
}
