// Copyright (C) 2026 The repcount Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "repcount/rep_counter.hpp"

namespace repcount {

inline constexpr std::string_view kReportSchemaId = "repcount.session-report/1";

// One contiguous stretch of a single exercise for one person.
struct SetSummary {
    std::string exercise;
    std::uint64_t start_frame = 0;
    std::uint64_t end_frame = 0;
    RepCounts counts;

    friend bool operator==(const SetSummary&, const SetSummary&) = default;
};

struct TrackHistory {
    std::uint64_t first_seen_frame = 0;
    std::uint64_t last_seen_frame = 0;
    std::uint64_t frames_seen = 0;
    std::optional<std::uint64_t> retired_at_frame;

    friend bool operator==(const TrackHistory&, const TrackHistory&) = default;
};

struct PersonSummary {
    std::uint64_t person_id = 0;
    std::string predicted_exercise = "Unknown";
    RepCounts counts;  // summed over all sets
    std::vector<RepEvent> events;
    std::vector<SetSummary> sets;
    TrackHistory track;
    std::optional<std::string> trace_csv;

    friend bool operator==(const PersonSummary&, const PersonSummary&) = default;
};

struct SessionSummary {
    double fps = 30.0;
    std::uint64_t frame_count = 0;
    std::vector<std::string> profiles_used;
    std::vector<PersonSummary> persons;  // ascending person_id

    friend bool operator==(const SessionSummary&, const SessionSummary&) = default;
};

// "MM:SS sec", whole seconds truncated, minutes not rolled into hours.
// Throws std::invalid_argument for negative or non-finite input.
std::string format_timestamp(double seconds);

std::string render_text(const SessionSummary& session);

std::string render_json(const SessionSummary& session);
// Throws SchemaError on documents that do not follow the report layout.
SessionSummary parse_json_report(std::string_view text);

// CSV `person,frame,time_s,verdict`.
std::string render_events_csv(const SessionSummary& session);

}  // namespace repcount
