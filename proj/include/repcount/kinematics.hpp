// Copyright (C) 2026 The repcount Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "repcount/keypoint_io.hpp"

namespace repcount {

struct Vec3 {
    double x = 0.0, y = 0.0, z = 0.0;

    friend Vec3 operator+(Vec3 a, Vec3 b) { return {a.x + b.x, a.y + b.y, a.z + b.z}; }
    friend Vec3 operator-(Vec3 a, Vec3 b) { return {a.x - b.x, a.y - b.y, a.z - b.z}; }
    friend Vec3 operator*(double s, Vec3 a) { return {s * a.x, s * a.y, s * a.z}; }
    friend bool operator==(const Vec3&, const Vec3&) = default;
};

double dot(Vec3 a, Vec3 b);
double norm(Vec3 a);
Vec3 cross(Vec3 a, Vec3 b);
Vec3 position(const Keypoint& k);

// Minimum limb-vector length accepted by joint_angle.
inline constexpr double kLimbEpsilon = 1e-9;

// Angle ABC at vertex b in degrees, within [0, 180]. Throws DegenerateGeometry
// when either limb vector is shorter than kLimbEpsilon.
double joint_angle(Vec3 a, Vec3 b, Vec3 c);

enum class MotionType { kPush, kPull };

std::string_view to_string(MotionType m);

struct ExerciseProfile {
    std::string name;
    std::array<std::size_t, 3> joints{};  // primary (right) side; joints[1] is the vertex
    double rom_low = 0.0;                 // degrees
    double rom_high = 180.0;              // degrees
    MotionType motion = MotionType::kPush;
    double tolerance = 5.0;               // degrees, applied to both ROM bounds

    double midpoint() const { return 0.5 * (rom_low + rom_high); }
    std::array<std::size_t, 3> mirrored_joints() const;

    // Throws ConfigError on violated invariants.
    void validate() const;
};

struct AngleSample {
    std::uint64_t frame = 0;
    std::optional<double> angle;  // nullopt marks a gap

    bool gap() const { return !angle.has_value(); }
    friend bool operator==(const AngleSample&, const AngleSample&) = default;
};

// Angle of the profile's joint triple on the primary side, or on the mirrored
// side when the primary side is incomplete. With both sides complete the side
// with the higher mean confidence wins (ties keep the primary side).
AngleSample angle_for(const ExerciseProfile& profile, const RawSkeleton& skeleton,
                      std::uint64_t frame = 0);

class ProfileRegistry {
public:
    ProfileRegistry() = default;
    explicit ProfileRegistry(std::vector<ExerciseProfile> profiles);

    const ExerciseProfile* find(std::string_view name) const;
    const std::vector<ExerciseProfile>& profiles() const { return profiles_; }

private:
    std::vector<ExerciseProfile> profiles_;
};

// push-up, pull-up and squat with default ranges of motion.
ProfileRegistry builtin_profiles();

// INI-style profile file, one [name] section per exercise with keys
// joints, rom_low, rom_high, motion and optional tolerance.
ProfileRegistry parse_profiles(std::istream& in);
ProfileRegistry load_profiles(const std::filesystem::path& path);
void write_profiles(std::ostream& out, const ProfileRegistry& registry);

}  // namespace repcount
