// Copyright (C) 2026 The repcount Authors
// SPDX-License-Identifier: Apache-2.0

#include "repcount/kinematics.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <numbers>
#include <ostream>
#include <set>

#include "repcount/errors.hpp"

namespace repcount {

double dot(Vec3 a, Vec3 b) { return a.x * b.x + a.y * b.y + a.z * b.z; }

double norm(Vec3 a) { return std::hypot(a.x, a.y, a.z); }

Vec3 cross(Vec3 a, Vec3 b) {
    return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}

Vec3 position(const Keypoint& k) { return {k.x, k.y, k.z}; }

double joint_angle(Vec3 a, Vec3 b, Vec3 c) {
    const Vec3 ba = a - b;
    const Vec3 bc = c - b;
    const double nba = norm(ba);
    const double nbc = norm(bc);
    if (!(nba > kLimbEpsilon) || !(nbc > kLimbEpsilon)) {
        throw DegenerateGeometry("zero-length limb vector");
    }
    const double cosine = std::clamp(dot(ba, bc) / (nba * nbc), -1.0, 1.0);
    return std::acos(cosine) * 180.0 / std::numbers::pi;
}

std::string_view to_string(MotionType m) { return m == MotionType::kPush ? "push" : "pull"; }

std::array<std::size_t, 3> ExerciseProfile::mirrored_joints() const {
    return {body25::mirror(joints[0]), body25::mirror(joints[1]), body25::mirror(joints[2])};
}

void ExerciseProfile::validate() const {
    if (name.empty()) throw ConfigError("profile without a name");
    if (!(rom_low >= 0.0 && rom_low < rom_high && rom_high <= 180.0)) {
        throw ConfigError("profile '" + name + "': need 0 <= rom_low < rom_high <= 180");
    }
    for (std::size_t j : joints) {
        if (j >= body25::kJointCount) {
            throw ConfigError("profile '" + name + "': joint index out of range");
        }
    }
    if (joints[0] == joints[1] || joints[1] == joints[2] || joints[0] == joints[2]) {
        throw ConfigError("profile '" + name + "': joints must be distinct");
    }
    if (!(tolerance >= 0.0 && std::isfinite(tolerance))) {
        throw ConfigError("profile '" + name + "': tolerance must be a non-negative number");
    }
}

namespace {

bool complete(const RawSkeleton& s, const std::array<std::size_t, 3>& t) {
    return s[t[0]].detected() && s[t[1]].detected() && s[t[2]].detected();
}

double mean_confidence(const RawSkeleton& s, const std::array<std::size_t, 3>& t) {
    return (s[t[0]].confidence + s[t[1]].confidence + s[t[2]].confidence) / 3.0;
}

}  // namespace

AngleSample angle_for(const ExerciseProfile& profile, const RawSkeleton& skeleton,
                      std::uint64_t frame) {
    AngleSample sample{frame, std::nullopt};
    const auto primary = profile.joints;
    const auto mirrored = profile.mirrored_joints();
    const bool has_primary = complete(skeleton, primary);
    const bool has_mirror = mirrored != primary && complete(skeleton, mirrored);

    const std::array<std::size_t, 3>* side = nullptr;
    if (has_primary && has_mirror) {
        side = mean_confidence(skeleton, mirrored) > mean_confidence(skeleton, primary) ? &mirrored
                                                                                        : &primary;
    } else if (has_primary) {
        side = &primary;
    } else if (has_mirror) {
        side = &mirrored;
    } else {
        return sample;
    }
    try {
        sample.angle = joint_angle(position(skeleton[(*side)[0]]), position(skeleton[(*side)[1]]),
                                   position(skeleton[(*side)[2]]));
    } catch (const DegenerateGeometry&) {
        sample.angle.reset();
    }
    return sample;
}

ProfileRegistry::ProfileRegistry(std::vector<ExerciseProfile> profiles)
    : profiles_(std::move(profiles)) {
    std::set<std::string> seen;
    for (const ExerciseProfile& p : profiles_) {
        p.validate();
        if (!seen.insert(p.name).second) throw ConfigError("duplicate profile '" + p.name + "'");
    }
}

const ExerciseProfile* ProfileRegistry::find(std::string_view name) const {
    for (const ExerciseProfile& p : profiles_) {
        if (p.name == name) return &p;
    }
    return nullptr;
}

ProfileRegistry builtin_profiles() {
    using namespace body25;
    return ProfileRegistry({
        {"push-up", {kRShoulder, kRElbow, kRWrist}, 75.0, 160.0, MotionType::kPush, 5.0},
        {"pull-up", {kRShoulder, kRElbow, kRWrist}, 60.0, 160.0, MotionType::kPull, 5.0},
        {"squat", {kRHip, kRKnee, kRAnkle}, 80.0, 170.0, MotionType::kPush, 5.0},
    });
}

namespace {

std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

double to_double(const std::string& v, std::size_t line) {
    double out{};
    auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc{} || ptr != v.data() + v.size()) {
        throw ConfigError("line " + std::to_string(line) + ": '" + v + "' is not a number");
    }
    return out;
}

}  // namespace

ProfileRegistry parse_profiles(std::istream& in) {
    std::vector<ExerciseProfile> profiles;
    std::vector<std::set<std::string>> keys;
    std::string raw;
    std::size_t line = 0;
    while (std::getline(in, raw)) {
        ++line;
        std::string text = trim(raw.substr(0, raw.find('#')));
        if (text.empty()) continue;
        if (text.front() == '[') {
            if (text.back() != ']') throw ConfigError("line " + std::to_string(line) + ": bad section");
            profiles.push_back({});
            profiles.back().name = trim(std::string_view(text).substr(1, text.size() - 2));
            keys.emplace_back();
            continue;
        }
        const auto eq = text.find('=');
        if (eq == std::string::npos || profiles.empty()) {
            throw ConfigError("line " + std::to_string(line) + ": expected key = value in a section");
        }
        const std::string key = trim(std::string_view(text).substr(0, eq));
        const std::string value = trim(std::string_view(text).substr(eq + 1));
        ExerciseProfile& p = profiles.back();
        if (key == "joints") {
            std::string list = value;
            std::replace(list.begin(), list.end(), ',', ' ');
            std::vector<double> idx;
            std::size_t start = 0;
            while (start < list.size()) {
                const auto b = list.find_first_not_of(' ', start);
                if (b == std::string::npos) break;
                const auto e = std::min(list.find(' ', b), list.size());
                idx.push_back(to_double(list.substr(b, e - b), line));
                start = e;
            }
            if (idx.size() != 3) throw ConfigError("line " + std::to_string(line) + ": joints needs 3 indices");
            for (std::size_t i = 0; i < 3; ++i) {
                if (idx[i] < 0 || idx[i] != std::floor(idx[i])) {
                    throw ConfigError("line " + std::to_string(line) + ": joint indices must be integers");
                }
                p.joints[i] = static_cast<std::size_t>(idx[i]);
            }
        } else if (key == "rom_low") {
            p.rom_low = to_double(value, line);
        } else if (key == "rom_high") {
            p.rom_high = to_double(value, line);
        } else if (key == "tolerance") {
            p.tolerance = to_double(value, line);
        } else if (key == "motion") {
            if (value == "push") {
                p.motion = MotionType::kPush;
            } else if (value == "pull") {
                p.motion = MotionType::kPull;
            } else {
                throw ConfigError("line " + std::to_string(line) + ": motion must be push or pull");
            }
        } else {
            throw ConfigError("line " + std::to_string(line) + ": unknown key '" + key + "'");
        }
        keys.back().insert(key);
    }
    for (std::size_t i = 0; i < profiles.size(); ++i) {
        for (const char* required : {"joints", "rom_low", "rom_high", "motion"}) {
            if (!keys[i].count(required)) {
                throw ConfigError("profile '" + profiles[i].name + "' is missing '" + required + "'");
            }
        }
    }
    return ProfileRegistry(std::move(profiles));
}

ProfileRegistry load_profiles(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open profile file " + path.string());
    return parse_profiles(in);
}

void write_profiles(std::ostream& out, const ProfileRegistry& registry) {
    auto num = [](double v) {
        std::array<char, 32> buf{};
        auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
        return std::string(buf.data(), ptr);
    };
    for (const ExerciseProfile& p : registry.profiles()) {
        out << '[' << p.name << "]\n"
            << "joints = " << p.joints[0] << ", " << p.joints[1] << ", " << p.joints[2] << '\n'
            << "rom_low = " << num(p.rom_low) << '\n'
            << "rom_high = " << num(p.rom_high) << '\n'
            << "motion = " << to_string(p.motion) << '\n'
            << "tolerance = " << num(p.tolerance) << "\n\n";
    }
}

}  // namespace repcount
