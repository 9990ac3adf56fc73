// Copyright (C) 2026 The repcount Authors
// SPDX-License-Identifier: Apache-2.0

#include "repcount/session_report.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <stdexcept>

#include <json.hpp>

#include "repcount/errors.hpp"

namespace repcount {

using ojson = nlohmann::ordered_json;

std::string format_timestamp(double seconds) {
    if (!(seconds >= 0.0) || !std::isfinite(seconds)) {
        throw std::invalid_argument("timestamp must be a non-negative number of seconds");
    }
    const auto whole = static_cast<std::uint64_t>(std::floor(seconds));
    char buf[48];
    std::snprintf(buf, sizeof buf, "%02llu:%02llu sec", static_cast<unsigned long long>(whole / 60),
                  static_cast<unsigned long long>(whole % 60));
    return buf;
}

std::string render_text(const SessionSummary& session) {
    std::string out;
    auto counts_block = [&](const RepCounts& c) {
        out += "Total Reps:  " + std::to_string(c.total) + "\n";
        out += "Correct Reps:  " + std::to_string(c.correct) + "\n";
        out += "Incorrect Reps:  " + std::to_string(c.incorrect) + "\n";
    };
    if (session.persons.empty()) {
        counts_block({});
        return out;
    }
    for (const PersonSummary& p : session.persons) {
        for (const RepEvent& e : p.events) {
            out += e.verdict == Verdict::kCorrect ? "- Correct! - " : "One Attempt! - ";
            out += format_timestamp(e.timestamp);
            out += '\n';
        }
        out += '\n';
        out += "Person " + std::to_string(p.person_id) + "\n";
        out += "Predicted Exercise: " + p.predicted_exercise + "\n";
        counts_block(p.counts);
        out += '\n';
    }
    return out;
}

namespace {

ojson counts_json(const RepCounts& c) {
    return {{"total", c.total}, {"correct", c.correct}, {"incorrect", c.incorrect}};
}

RepCounts counts_from(const nlohmann::json& j) {
    return {j.at("total").get<std::uint64_t>(), j.at("correct").get<std::uint64_t>(),
            j.at("incorrect").get<std::uint64_t>()};
}

}  // namespace

std::string render_json(const SessionSummary& session) {
    ojson doc;
    doc["schema"] = kReportSchemaId;
    doc["session"] = {{"fps", session.fps},
                      {"frame_count", session.frame_count},
                      {"profiles_used", session.profiles_used}};
    auto persons = ojson::array();
    for (const PersonSummary& p : session.persons) {
        ojson jp;
        jp["person_id"] = p.person_id;
        jp["predicted_exercise"] = p.predicted_exercise;
        jp["counts"] = counts_json(p.counts);
        auto events = ojson::array();
        for (const RepEvent& e : p.events) {
            events.push_back({{"frame", e.frame},
                              {"time_s", e.timestamp},
                              {"timestamp", format_timestamp(e.timestamp)},
                              {"verdict", to_string(e.verdict)}});
        }
        jp["events"] = std::move(events);
        auto sets = ojson::array();
        for (const SetSummary& s : p.sets) {
            sets.push_back({{"exercise", s.exercise},
                            {"start_frame", s.start_frame},
                            {"end_frame", s.end_frame},
                            {"counts", counts_json(s.counts)}});
        }
        jp["sets"] = std::move(sets);
        jp["track"] = {{"first_seen_frame", p.track.first_seen_frame},
                       {"last_seen_frame", p.track.last_seen_frame},
                       {"frames_seen", p.track.frames_seen},
                       {"retired_at_frame", p.track.retired_at_frame ? ojson(*p.track.retired_at_frame) : ojson(nullptr)}};
        jp["trace_csv"] = p.trace_csv ? ojson(*p.trace_csv) : ojson(nullptr);
        persons.push_back(std::move(jp));
    }
    doc["persons"] = std::move(persons);
    return doc.dump(2) + "\n";
}

SessionSummary parse_json_report(std::string_view text) {
    SessionSummary s;
    try {
        const auto doc = nlohmann::json::parse(text.begin(), text.end());
        if (doc.at("schema").get<std::string>() != kReportSchemaId) {
            throw SchemaError("unsupported report schema");
        }
        const auto& meta = doc.at("session");
        s.fps = meta.at("fps").get<double>();
        s.frame_count = meta.at("frame_count").get<std::uint64_t>();
        s.profiles_used = meta.at("profiles_used").get<std::vector<std::string>>();
        for (const auto& jp : doc.at("persons")) {
            PersonSummary p;
            p.person_id = jp.at("person_id").get<std::uint64_t>();
            p.predicted_exercise = jp.at("predicted_exercise").get<std::string>();
            p.counts = counts_from(jp.at("counts"));
            for (const auto& je : jp.at("events")) {
                RepEvent e;
                e.person_id = p.person_id;
                e.frame = je.at("frame").get<std::uint64_t>();
                e.timestamp = je.at("time_s").get<double>();
                const auto verdict = je.at("verdict").get<std::string>();
                if (verdict != "correct" && verdict != "incorrect") throw SchemaError("bad verdict");
                e.verdict = verdict == "correct" ? Verdict::kCorrect : Verdict::kIncorrect;
                p.events.push_back(e);
            }
            for (const auto& js : jp.at("sets")) {
                p.sets.push_back({js.at("exercise").get<std::string>(), js.at("start_frame").get<std::uint64_t>(),
                                  js.at("end_frame").get<std::uint64_t>(), counts_from(js.at("counts"))});
            }
            const auto& jt = jp.at("track");
            p.track.first_seen_frame = jt.at("first_seen_frame").get<std::uint64_t>();
            p.track.last_seen_frame = jt.at("last_seen_frame").get<std::uint64_t>();
            p.track.frames_seen = jt.at("frames_seen").get<std::uint64_t>();
            if (!jt.at("retired_at_frame").is_null()) {
                p.track.retired_at_frame = jt.at("retired_at_frame").get<std::uint64_t>();
            }
            if (!jp.at("trace_csv").is_null()) p.trace_csv = jp.at("trace_csv").get<std::string>();
            s.persons.push_back(std::move(p));
        }
    } catch (const nlohmann::json::exception& e) {
        throw SchemaError(std::string("malformed session report: ") + e.what());
    }
    return s;
}

std::string render_events_csv(const SessionSummary& session) {
    std::string out = "person,frame,time_s,verdict\n";
    char buf[64];
    for (const PersonSummary& p : session.persons) {
        for (const RepEvent& e : p.events) {
            auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, e.timestamp);
            out += std::to_string(p.person_id) + "," + std::to_string(e.frame) + "," +
                   std::string(buf, ptr) + "," + std::string(to_string(e.verdict)) + "\n";
        }
    }
    return out;
}

}  // namespace repcount
