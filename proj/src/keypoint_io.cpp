// Copyright (C) 2026 The repcount Authors
// SPDX-License-Identifier: Apache-2.0

#include "repcount/keypoint_io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "repcount/errors.hpp"

namespace repcount {

using nlohmann::json;

namespace {

RawSkeleton skeleton_from_array(const json& values, std::size_t stride) {
    if (!values.is_array()) {
        throw SchemaError("keypoint field is not an array");
    }
    if (values.size() % stride != 0) {
        throw SchemaError("keypoint array length " + std::to_string(values.size()) +
                          " is not a multiple of " + std::to_string(stride));
    }
    if (values.size() / stride != body25::kJointCount) {
        throw SchemaError("expected 25 BODY_25 joints, got " +
                          std::to_string(values.size() / stride));
    }
    RawSkeleton skeleton;
    for (std::size_t j = 0; j < body25::kJointCount; ++j) {
        auto at = [&](std::size_t k) -> double {
            const json& v = values[j * stride + k];
            if (!v.is_number()) throw SchemaError("non-numeric keypoint value");
            return v.get<double>();
        };
        Keypoint& kp = skeleton[j];
        kp.x = at(0);
        kp.y = at(1);
        kp.z = stride == 4 ? at(2) : 0.0;
        kp.confidence = at(stride - 1);
        if (!(kp.confidence >= 0.0 && kp.confidence <= 1.0)) {
            throw SchemaError("confidence outside [0, 1] at joint " + std::to_string(j));
        }
        if (kp.detected() &&
            !(std::isfinite(kp.x) && std::isfinite(kp.y) && std::isfinite(kp.z))) {
            throw SchemaError("non-finite coordinate at detected joint " + std::to_string(j));
        }
        if (!kp.detected()) kp = Keypoint{};
    }
    return skeleton;
}

template <typename T>
T parse_number(std::string_view field, std::size_t line, std::size_t offset) {
    T value{};
    auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
    if (ec != std::errc{} || ptr != field.data() + field.size()) {
        throw ParseError("invalid number '" + std::string(field) + "' on line " +
                             std::to_string(line),
                         offset);
    }
    return value;
}

}  // namespace

SkeletonFrame parse_frame(std::string_view bytes, std::uint64_t frame_index, double source_fps) {
    json doc;
    try {
        doc = json::parse(bytes.begin(), bytes.end());
    } catch (const json::parse_error& e) {
        throw ParseError("malformed keypoint document", e.byte);
    }
    if (!doc.is_object() || !doc.contains("people") || !doc["people"].is_array()) {
        throw SchemaError("keypoint document needs a top-level \"people\" array");
    }
    SkeletonFrame frame;
    frame.frame_index = frame_index;
    frame.source_fps = source_fps;
    for (const json& person : doc["people"]) {
        if (person.contains("pose_keypoints_3d") && !person["pose_keypoints_3d"].empty()) {
            frame.skeletons.push_back(skeleton_from_array(person["pose_keypoints_3d"], 4));
        } else if (person.contains("pose_keypoints_2d")) {
            frame.skeletons.push_back(skeleton_from_array(person["pose_keypoints_2d"], 3));
        } else {
            throw SchemaError("person entry without pose_keypoints_2d/3d");
        }
    }
    return frame;
}

std::string serialize_frame(const SkeletonFrame& frame) {
    json people = json::array();
    for (const RawSkeleton& s : frame.skeletons) {
        const bool three_d = std::any_of(s.keypoints.begin(), s.keypoints.end(),
                                         [](const Keypoint& k) { return k.z != 0.0; });
        json values = json::array();
        for (const Keypoint& k : s.keypoints) {
            values.push_back(k.x);
            values.push_back(k.y);
            if (three_d) values.push_back(k.z);
            values.push_back(k.confidence);
        }
        json person;
        person[three_d ? "pose_keypoints_3d" : "pose_keypoints_2d"] = std::move(values);
        people.push_back(std::move(person));
    }
    json doc;
    doc["version"] = 1.3;
    doc["people"] = std::move(people);
    return doc.dump();
}

void for_each_ndjson_frame(std::istream& in, double source_fps,
                           const std::function<void(SkeletonFrame&&)>& on_frame) {
    std::string line;
    std::uint64_t index = 0;
    while (std::getline(in, line)) {
        if (std::all_of(line.begin(), line.end(), [](unsigned char c) { return std::isspace(c); })) {
            continue;
        }
        on_frame(parse_frame(line, index++, source_fps));
    }
}

std::vector<SkeletonFrame> read_ndjson(std::istream& in, double source_fps) {
    std::vector<SkeletonFrame> frames;
    for_each_ndjson_frame(in, source_fps,
                          [&](SkeletonFrame&& f) { frames.push_back(std::move(f)); });
    return frames;
}

void write_ndjson(std::ostream& out, const std::vector<SkeletonFrame>& frames) {
    for (const SkeletonFrame& f : frames) out << serialize_frame(f) << '\n';
}

std::vector<SkeletonFrame> read_frame_directory(const std::filesystem::path& dir,
                                                double source_fps) {
    std::vector<std::filesystem::path> files;
    for (const auto& entry : std::filesystem::directory_iterator(dir)) {
        if (entry.is_regular_file() && entry.path().extension() == ".json") {
            files.push_back(entry.path());
        }
    }
    std::sort(files.begin(), files.end());
    std::vector<SkeletonFrame> frames;
    frames.reserve(files.size());
    for (std::size_t i = 0; i < files.size(); ++i) {
        std::ifstream in(files[i], std::ios::binary);
        if (!in) throw std::runtime_error("cannot open " + files[i].string());
        std::ostringstream buf;
        buf << in.rdbuf();
        frames.push_back(parse_frame(buf.str(), i, source_fps));
    }
    return frames;
}

std::vector<SkeletonFrame> read_session_csv(std::istream& in, double source_fps) {
    std::string line;
    std::size_t line_no = 0;
    std::size_t offset = 0;
    if (!std::getline(in, line)) return {};
    ++line_no;
    std::size_t next_offset = line.size() + 1;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != "frame,person,joint,x,y,z,confidence") {
        throw SchemaError("session CSV header must be frame,person,joint,x,y,z,confidence");
    }
    std::map<std::uint64_t, std::map<std::size_t, RawSkeleton>> grouped;
    while (std::getline(in, line)) {
        ++line_no;
        offset = next_offset;
        next_offset += line.size() + 1;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::array<std::string_view, 7> fields;
        std::string_view rest(line);
        for (std::size_t i = 0; i < fields.size(); ++i) {
            const auto comma = rest.find(',');
            if ((comma == std::string_view::npos) != (i + 1 == fields.size())) {
                throw SchemaError("session CSV line " + std::to_string(line_no) +
                                  " does not have 7 fields");
            }
            fields[i] = rest.substr(0, comma);
            if (comma != std::string_view::npos) rest.remove_prefix(comma + 1);
        }
        auto pos = [&](std::size_t i) {
            return offset + static_cast<std::size_t>(fields[i].data() - line.data());
        };
        const auto frame = parse_number<std::uint64_t>(fields[0], line_no, pos(0));
        const auto person = parse_number<std::size_t>(fields[1], line_no, pos(1));
        const auto joint = parse_number<std::size_t>(fields[2], line_no, pos(2));
        if (joint >= body25::kJointCount) {
            throw SchemaError("joint index out of range on line " + std::to_string(line_no));
        }
        Keypoint kp;
        kp.x = parse_number<double>(fields[3], line_no, pos(3));
        kp.y = parse_number<double>(fields[4], line_no, pos(4));
        kp.z = parse_number<double>(fields[5], line_no, pos(5));
        kp.confidence = parse_number<double>(fields[6], line_no, pos(6));
        if (!(kp.confidence >= 0.0 && kp.confidence <= 1.0)) {
            throw SchemaError("confidence outside [0, 1] on line " + std::to_string(line_no));
        }
        if (!kp.detected()) kp = Keypoint{};
        grouped[frame][person][joint] = kp;
    }
    std::vector<SkeletonFrame> frames;
    frames.reserve(grouped.size());
    for (auto& [index, people] : grouped) {
        SkeletonFrame f;
        f.frame_index = index;
        f.source_fps = source_fps;
        for (auto& [slot, skeleton] : people) f.skeletons.push_back(skeleton);
        frames.push_back(std::move(f));
    }
    return frames;
}

void write_session_csv(std::ostream& out, const std::vector<SkeletonFrame>& frames) {
    out << "frame,person,joint,x,y,z,confidence\n";
    std::array<char, 64> buf{};
    auto num = [&](double v) {
        auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
        return std::string_view(buf.data(), static_cast<std::size_t>(ptr - buf.data()));
    };
    for (const SkeletonFrame& f : frames) {
        for (std::size_t p = 0; p < f.skeletons.size(); ++p) {
            for (std::size_t j = 0; j < body25::kJointCount; ++j) {
                const Keypoint& k = f.skeletons[p][j];
                if (!k.detected()) continue;
                out << f.frame_index << ',' << p << ',' << j;
                for (double v : {k.x, k.y, k.z, k.confidence}) out << ',' << num(v);
                out << '\n';
            }
        }
    }
}

std::vector<SkeletonFrame> load_frames(const std::filesystem::path& path, double source_fps) {
    if (std::filesystem::is_directory(path)) return read_frame_directory(path, source_fps);
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    if (path.extension() == ".csv") return read_session_csv(in, source_fps);
    return read_ndjson(in, source_fps);
}

std::optional<double> torso_length(const RawSkeleton& s) {
    const Keypoint& neck = s[body25::kNeck];
    const Keypoint& hip = s[body25::kMidHip];
    if (!neck.detected() || !hip.detected()) return std::nullopt;
    return std::hypot(neck.x - hip.x, neck.y - hip.y, neck.z - hip.z);
}

std::optional<FeatureVector> normalize_skeleton(const RawSkeleton& s) {
    const Keypoint& neck = s[body25::kNeck];
    const Keypoint& hip = s[body25::kMidHip];
    if (!neck.detected() || !hip.detected()) return std::nullopt;
    const double scale = std::hypot(neck.x - hip.x, neck.y - hip.y);
    if (!(scale >= kTorsoEpsilon)) return std::nullopt;
    FeatureVector out;
    for (std::size_t j = 0; j < body25::kJointCount; ++j) {
        const Keypoint& k = s[j];
        if (!k.detected()) continue;
        out.values[2 * j] = (k.x - hip.x) / scale;
        out.values[2 * j + 1] = (k.y - hip.y) / scale;
    }
    return out;
}

}  // namespace repcount
