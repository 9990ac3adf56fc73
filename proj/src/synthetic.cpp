// Copyright (C) 2026 The repcount Authors
// SPDX-License-Identifier: Apache-2.0

#include "repcount/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "repcount/errors.hpp"

namespace repcount::synth {

namespace {

using namespace body25;

constexpr double kDeg = std::numbers::pi / 180.0;

constexpr double kImageCx = 640.0;
constexpr double kImageCy = 360.0;

Vec3 unit(Vec3 v) {
    const double n = norm(v);
    return n > 0.0 ? (1.0 / n) * v : v;
}

// Distance between the ends of a two-segment limb bent to angle_deg.
double reach(double a, double b, double angle_deg) {
    return std::sqrt(a * a + b * b - 2.0 * a * b * std::cos(angle_deg * kDeg));
}

// Middle joint of a two-segment chain from root to end, bent towards hint.
Vec3 middle_joint(Vec3 root, Vec3 end, double a, double b, Vec3 hint) {
    const Vec3 axis = end - root;
    const double d = std::clamp(norm(axis), std::abs(a - b) + 1e-9, a + b - 1e-9);
    const Vec3 e = unit(axis);
    const double along = (a * a - b * b + d * d) / (2.0 * d);
    const double height = std::sqrt(std::max(0.0, a * a - along * along));
    const Vec3 side = unit(hint - dot(hint, e) * e);
    return root + along * e + height * side;
}

// Segment lengths in meters plus two free posture knobs in [-1, 1] whose
// meaning depends on the exercise (arm carriage, grip, leg tuck, sag).
struct Shape {
    double torso = 0.52;
    double shoulder_half = 0.18;
    double hip_half = 0.10;
    double upper_arm = 0.30;
    double forearm = 0.27;
    double thigh = 0.44;
    double shin = 0.42;
    double posture_a = 0.0;
    double posture_b = 0.0;
};

Shape random_shape(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> scale(0.9, 1.1);
    std::uniform_real_distribution<double> knob(-1.0, 1.0);
    Shape s;
    const double overall = scale(rng);
    s.torso *= overall * scale(rng);
    s.shoulder_half *= overall * scale(rng);
    s.hip_half *= overall * scale(rng);
    const double arm = overall * scale(rng);
    s.upper_arm *= arm;
    s.forearm *= arm;
    const double leg = overall * scale(rng);
    s.thigh *= leg;
    s.shin *= leg;
    s.posture_a = knob(rng);
    s.posture_b = knob(rng);
    return s;
}

struct Body {
    std::array<Vec3, kJointCount> joint{};
};

// u: mid-hip -> neck, f: chest normal; the person's right is cross(f, u).
void place_head(Body& body, Vec3 neck, Vec3 u, Vec3 f) {
    const Vec3 r = cross(f, u);
    const Vec3 nose = neck + 0.20 * u + 0.09 * f;
    body.joint[kNose] = nose;
    body.joint[kREye] = nose + 0.035 * u + 0.03 * r - 0.02 * f;
    body.joint[kLEye] = nose + 0.035 * u - 0.03 * r - 0.02 * f;
    body.joint[kREar] = nose + 0.02 * u + 0.07 * r - 0.09 * f;
    body.joint[kLEar] = nose + 0.02 * u - 0.07 * r - 0.09 * f;
}

void place_foot(Body& body, bool right, Vec3 ankle, Vec3 toe_dir, Vec3 r) {
    const double s = right ? 1.0 : -1.0;
    const Vec3 t = unit(toe_dir);
    body.joint[right ? kRHeel : kLHeel] = ankle - 0.06 * t;
    body.joint[right ? kRBigToe : kLBigToe] = ankle + 0.18 * t - 0.02 * s * r;
    body.joint[right ? kRSmallToe : kLSmallToe] = ankle + 0.15 * t + 0.04 * s * r;
}

void place_trunk(Body& body, const Shape& sh, Vec3 mid_hip, Vec3 u, Vec3 f) {
    const Vec3 r = cross(f, u);
    body.joint[kMidHip] = mid_hip;
    body.joint[kRHip] = mid_hip + sh.hip_half * r;
    body.joint[kLHip] = mid_hip - sh.hip_half * r;
    const Vec3 neck = mid_hip + sh.torso * u;
    body.joint[kNeck] = neck;
    body.joint[kRShoulder] = neck + sh.shoulder_half * r;
    body.joint[kLShoulder] = neck - sh.shoulder_half * r;
    place_head(body, neck, u, f);
}

// posture_a: arm elevation, posture_b: stance width.
Body squat_body(double knee, const Shape& sh) {
    Body b;
    const Vec3 r{0, 0, 1};
    const double lean = 0.2 * (180.0 - knee) * kDeg;
    const double d = reach(sh.thigh, sh.shin, knee);
    const double stance = sh.hip_half * (1.0 + 0.4 * sh.posture_b);
    for (bool right : {true, false}) {
        const double s = right ? 1.0 : -1.0;
        const Vec3 ankle{0.0, 0.08, s * stance};
        const Vec3 hip = ankle + d * Vec3{-std::sin(lean), std::cos(lean), 0.0};
        b.joint[right ? kRAnkle : kLAnkle] = ankle;
        b.joint[right ? kRKnee : kLKnee] = middle_joint(hip, ankle, sh.thigh, sh.shin, {1, 0, 0.3 * s});
        place_foot(b, right, ankle, {1, -0.3, 0.2 * s}, r);
    }
    const Vec3 ankle_mid = 0.5 * (b.joint[kRAnkle] + b.joint[kLAnkle]);
    const Vec3 mid_hip = ankle_mid + d * Vec3{-std::sin(lean), std::cos(lean), 0.0};
    const double torso_lean = 0.5 * (180.0 - knee) * kDeg;
    const Vec3 u{std::sin(torso_lean), std::cos(torso_lean), 0};
    const Vec3 f{std::cos(torso_lean), -std::sin(torso_lean), 0};
    const Vec3 knee_r = b.joint[kRKnee];
    const Vec3 knee_l = b.joint[kLKnee];
    place_trunk(b, sh, mid_hip, u, f);
    b.joint[kRKnee] = middle_joint(b.joint[kRHip], b.joint[kRAnkle], sh.thigh, sh.shin, knee_r - b.joint[kRHip]);
    b.joint[kLKnee] = middle_joint(b.joint[kLHip], b.joint[kLAnkle], sh.thigh, sh.shin, knee_l - b.joint[kLHip]);
    const double elevation = 25.0 * sh.posture_a * kDeg;
    const Vec3 forward{std::cos(elevation), std::sin(elevation), 0};
    for (bool right : {true, false}) {
        const Vec3 shoulder = b.joint[right ? kRShoulder : kLShoulder];
        const Vec3 wrist = shoulder + reach(sh.upper_arm, sh.forearm, 165.0) * forward;
        b.joint[right ? kRWrist : kLWrist] = wrist;
        b.joint[right ? kRElbow : kLElbow] =
            middle_joint(shoulder, wrist, sh.upper_arm, sh.forearm, {0, -1, 0});
    }
    return b;
}

// posture_a: hand placement along the body, posture_b: hip sag or pike.
Body push_up_body(double elbow, const Shape& sh) {
    Body b;
    const double d = reach(sh.upper_arm, sh.forearm, elbow);
    // Very bent elbows bring the shoulder close to the hand; shrink the offset so it stays reachable.
    const double room = 0.5 * std::sqrt(std::max(0.0, d * d - 0.02 * 0.02));
    const double hand_offset = std::clamp(0.08 * sh.posture_a, -room, room);
    const double lift = 0.03 + std::sqrt(std::max(1e-6, d * d - hand_offset * hand_offset - 0.02 * 0.02));
    const double xw = 1.35;
    const Vec3 neck{xw - hand_offset, lift, 0};
    const double body_len = sh.torso + sh.thigh + sh.shin;
    const Vec3 feet{neck.x - std::sqrt(body_len * body_len - (lift - 0.1) * (lift - 0.1)), 0.1, 0};
    const Vec3 line = unit(neck - feet);
    const Vec3 down{line.y, -line.x, 0};
    // Bend at the hips: the torso and legs tilt by +-sag around the straight line.
    const double sag = 6.0 * sh.posture_b * kDeg;
    const Vec3 u = std::cos(sag) * line - std::sin(sag) * down;
    const Vec3 f{u.y, -u.x, 0};
    const Vec3 r = cross(f, u);
    place_trunk(b, sh, neck - sh.torso * u, u, f);
    const Vec3 leg = unit(std::cos(sag) * line + std::sin(sag) * down);
    for (bool right : {true, false}) {
        const double s = right ? 1.0 : -1.0;
        const Vec3 hip = b.joint[right ? kRHip : kLHip];
        const Vec3 knee = hip - sh.thigh * leg;
        const Vec3 ankle = knee - sh.shin * leg;
        b.joint[right ? kRKnee : kLKnee] = knee;
        b.joint[right ? kRAnkle : kLAnkle] = ankle;
        place_foot(b, right, ankle, {0.3, -1, 0}, r);
        const Vec3 shoulder = b.joint[right ? kRShoulder : kLShoulder];
        const Vec3 wrist{xw, 0.03, s * (sh.shoulder_half + 0.02)};
        b.joint[right ? kRWrist : kLWrist] = wrist;
        b.joint[right ? kRElbow : kLElbow] =
            middle_joint(shoulder, wrist, sh.upper_arm, sh.forearm, {-1, 0, 0.6 * s});
    }
    return b;
}

// posture_a: grip width, posture_b: knee tuck.
Body pull_up_body(double elbow, const Shape& sh) {
    Body b;
    const double bar = 2.3;
    const double d = reach(sh.upper_arm, sh.forearm, elbow);
    const double lateral = std::min(0.12 + 0.06 * sh.posture_a, 0.9 * d);
    const double grip = sh.shoulder_half + lateral;
    const double drop = std::sqrt(std::max(1e-6, d * d - lateral * lateral));
    const Vec3 neck{0, bar - drop, 0};
    const Vec3 u{0, 1, 0};
    const Vec3 f{1, 0, 0};
    const Vec3 r = cross(f, u);
    place_trunk(b, sh, neck - sh.torso * u, u, f);
    const double hip_flex = (10.0 + 10.0 * sh.posture_b) * kDeg;
    const double knee_flex = (40.0 + 30.0 * sh.posture_b) * kDeg;
    for (bool right : {true, false}) {
        const double s = right ? 1.0 : -1.0;
        const Vec3 hip = b.joint[right ? kRHip : kLHip];
        const Vec3 knee = hip + sh.thigh * Vec3{std::sin(hip_flex), -std::cos(hip_flex), 0};
        const double shin_dir = hip_flex - knee_flex;
        const Vec3 ankle = knee + sh.shin * Vec3{std::sin(shin_dir), -std::cos(shin_dir), 0};
        b.joint[right ? kRKnee : kLKnee] = knee;
        b.joint[right ? kRAnkle : kLAnkle] = ankle;
        place_foot(b, right, ankle, {0.3, -1, 0}, r);
        const Vec3 shoulder = b.joint[right ? kRShoulder : kLShoulder];
        const Vec3 wrist{0, bar, s * grip};
        b.joint[right ? kRWrist : kLWrist] = wrist;
        b.joint[right ? kRElbow : kLElbow] =
            middle_joint(shoulder, wrist, sh.upper_arm, sh.forearm, {0.25, -0.2, s});
    }
    return b;
}

// posture_a: heel distance, posture_b: hand height behind the head.
Body sit_up_body(double elevation, const Shape& sh) {
    Body b;
    const double e = elevation * kDeg;
    const Vec3 u{-std::cos(e), std::sin(e), 0};
    const Vec3 f{std::sin(e), std::cos(e), 0};
    const Vec3 r = cross(f, u);
    place_trunk(b, sh, {0, 0.1, 0}, u, f);
    const Vec3 neck = b.joint[kNeck];
    const double heel = (0.7 + 0.05 * sh.posture_a) * (sh.thigh + sh.shin) / 0.86;
    for (bool right : {true, false}) {
        const double s = right ? 1.0 : -1.0;
        const Vec3 hip = b.joint[right ? kRHip : kLHip];
        const Vec3 ankle{heel, 0.08, s * sh.hip_half};
        b.joint[right ? kRAnkle : kLAnkle] = ankle;
        b.joint[right ? kRKnee : kLKnee] = middle_joint(hip, ankle, sh.thigh, sh.shin, {0, 1, 0});
        place_foot(b, right, ankle, {1, 0, 0}, r);
        const Vec3 shoulder = b.joint[right ? kRShoulder : kLShoulder];
        const Vec3 wrist = neck + (0.16 + 0.04 * sh.posture_b) * u - 0.06 * f + 0.06 * s * r;
        b.joint[right ? kRWrist : kLWrist] = wrist;
        b.joint[right ? kRElbow : kLElbow] =
            middle_joint(shoulder, wrist, sh.upper_arm, sh.forearm, s * r + 0.5 * u);
    }
    return b;
}

Body body_for(std::string_view exercise, double angle, const Shape& shape = {}) {
    if (exercise == "push-up") return push_up_body(angle, shape);
    if (exercise == "pull-up") return pull_up_body(angle, shape);
    if (exercise == "squat") return squat_body(angle, shape);
    if (exercise == kSitUp) return sit_up_body(angle, shape);
    throw ConfigError("the generator cannot animate '" + std::string(exercise) + "'");
}

// World (meters, y up) to image pixels; z keeps depth in pixel units.
RawSkeleton project(const Body& body, double yaw_deg, double ppm, double ox, double oy) {
    const double c = std::cos(yaw_deg * kDeg);
    const double s = std::sin(yaw_deg * kDeg);
    RawSkeleton out;
    for (std::size_t j = 0; j < kJointCount; ++j) {
        const Vec3 w = body.joint[j];
        const double x = (w.x - 0.6) * c - w.z * s;
        const double z = (w.x - 0.6) * s + w.z * c;
        out[j] = Keypoint{kImageCx + ox + ppm * x, kImageCy + oy + ppm * (1.0 - w.y), ppm * z, 0.9};
    }
    return out;
}

ExerciseProfile sit_up_profile() {
    return {std::string(kSitUp), {kMidHip, kRHip, kRKnee}, 10.0, 50.0, MotionType::kPull, 5.0};
}

const ExerciseProfile& profile_for(const ProfileRegistry& profiles, std::string_view exercise,
                                   const ExerciseProfile& sit_up) {
    if (exercise == kSitUp) return sit_up;
    const ExerciseProfile* p = profiles.find(exercise);
    if (!p) throw ConfigError("no profile for synthetic exercise '" + std::string(exercise) + "'");
    return *p;
}

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
    std::uint64_t z = seed + 0x9E3779B97F4A7C15ull * (stream + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

}  // namespace

void SyntheticSessionSpec::validate(const ProfileRegistry& profiles) const {
    if (!(fps > 0.0)) throw ConfigError("fps must be positive");
    if (!(pixels_per_meter > 0.0)) throw ConfigError("pixels_per_meter must be positive");
    if (lead_in_frames < 0 || tail_frames < 0) throw ConfigError("lead-in/tail frames must be >= 0");
    if (persons.empty()) throw ConfigError("a session needs at least one person");
    const ExerciseProfile sit_up = sit_up_profile();
    for (const PersonSpec& p : persons) {
        profile_for(profiles, p.exercise, sit_up);
        if (p.exercise != kSitUp) body_for(p.exercise, 90.0);
        if (p.full_cycles < 0 || p.partial_cycles < 0) throw ConfigError("cycle counts must be >= 0");
        if (p.full_cycles + p.partial_cycles == 0) throw ConfigError("a person needs at least one cycle");
        if (p.period_frames < 20) throw ConfigError("period_frames must be >= 20");
        if (!(p.noise_sigma >= 0.0) || !(p.position_jitter >= 0.0)) throw ConfigError("noise must be >= 0");
        if (!(p.gap_rate >= 0.0 && p.gap_rate < 1.0)) throw ConfigError("gap_rate must be in [0, 1)");
    }
}

AngleTrack build_angle_track(const ExerciseProfile& profile, const PersonSpec& person, int lead_in,
                             int tail, std::uint64_t seed) {
    const double mid = profile.midpoint();
    const double full_amp = 0.5 * (profile.rom_high - profile.rom_low) + 5.0;
    const double partial_amp = 10.0;
    // The rest pose sits on the side the completing crossing heads towards.
    const double rest = profile.motion == MotionType::kPush ? 1.0 : -1.0;

    std::vector<bool> cycles(static_cast<std::size_t>(person.full_cycles), true);
    cycles.insert(cycles.end(), static_cast<std::size_t>(person.partial_cycles), false);
    std::mt19937_64 rng(mix_seed(seed, 0xC0FFEE));
    std::shuffle(cycles.begin(), cycles.end(), rng);

    const int rest_half = person.period_frames / 2;
    const int far_half = person.period_frames - rest_half;
    const int quarter = std::max(1, rest_half / 2);
    const double pi = std::numbers::pi;

    AngleTrack track;
    auto& a = track.angles;
    const double first_amp = cycles.front() ? full_amp : partial_amp;
    a.insert(a.end(), static_cast<std::size_t>(lead_in), mid + rest * first_amp);
    for (int t = 0; t < quarter; ++t) a.push_back(mid + rest * first_amp * std::cos(0.5 * pi * t / quarter));
    for (std::size_t c = 0; c < cycles.size(); ++c) {
        const double amp = cycles[c] ? full_amp : partial_amp;
        if (c > 0) {
            for (int t = 0; t < rest_half; ++t) a.push_back(mid + rest * amp * std::sin(pi * t / rest_half));
        }
        for (int t = 0; t < far_half; ++t) a.push_back(mid - rest * amp * std::sin(pi * t / far_half));
        track.reps.push_back({static_cast<std::uint64_t>(a.size()), static_cast<bool>(cycles[c])});
    }
    const double last_amp = cycles.back() ? full_amp : partial_amp;
    for (int t = 0; t < quarter; ++t) a.push_back(mid + rest * last_amp * std::sin(0.5 * pi * t / quarter));
    a.insert(a.end(), static_cast<std::size_t>(tail), mid + rest * last_amp);
    return track;
}

RawSkeleton pose_skeleton(std::string_view exercise, double angle_deg, double camera_yaw_deg,
                          double pixels_per_meter, double offset_x, double offset_y) {
    return project(body_for(exercise, angle_deg), camera_yaw_deg, pixels_per_meter, offset_x, offset_y);
}

SyntheticSession generate_session(const SyntheticSessionSpec& spec, const ProfileRegistry& profiles) {
    spec.validate(profiles);
    const ExerciseProfile sit_up = sit_up_profile();

    struct Track {
        AngleTrack angles;
        const ExerciseProfile* profile;
        std::mt19937_64 rng;
    };
    std::vector<Track> tracks;
    std::size_t total_frames = 0;
    SyntheticSession session;
    for (std::size_t i = 0; i < spec.persons.size(); ++i) {
        const PersonSpec& p = spec.persons[i];
        const ExerciseProfile& profile = profile_for(profiles, p.exercise, sit_up);
        Track t{build_angle_track(profile, p, spec.lead_in_frames, spec.tail_frames, mix_seed(spec.seed, i)),
                &profile, std::mt19937_64(mix_seed(spec.seed, 1000 + i))};
        total_frames = std::max(total_frames, t.angles.angles.size());
        PersonTruth truth;
        truth.exercise = p.exercise;
        truth.reps = t.angles.reps;
        truth.correct = static_cast<std::uint64_t>(p.full_cycles);
        truth.incorrect = static_cast<std::uint64_t>(p.partial_cycles);
        truth.total = truth.correct + truth.incorrect;
        session.truth.push_back(std::move(truth));
        tracks.push_back(std::move(t));
    }

    session.frames.reserve(total_frames);
    for (std::size_t f = 0; f < total_frames; ++f) {
        SkeletonFrame frame;
        frame.frame_index = f;
        frame.source_fps = spec.fps;
        for (std::size_t i = 0; i < tracks.size(); ++i) {
            const PersonSpec& p = spec.persons[i];
            Track& t = tracks[i];
            const auto& angles = t.angles.angles;
            double angle = angles[std::min(f, angles.size() - 1)];
            std::normal_distribution<double> angle_noise(0.0, p.noise_sigma);
            std::normal_distribution<double> jitter(0.0, p.position_jitter);
            std::uniform_real_distribution<double> confidence(0.55, 0.95);
            std::bernoulli_distribution gap(p.gap_rate);
            if (p.noise_sigma > 0.0) angle += angle_noise(t.rng);
            angle = std::clamp(angle, 2.0, 178.0);
            RawSkeleton s = pose_skeleton(p.exercise, angle, p.camera_yaw_deg, spec.pixels_per_meter,
                                          p.offset_x, p.offset_y);
            for (Keypoint& k : s.keypoints) {
                if (p.position_jitter > 0.0) {
                    k.x += jitter(t.rng);
                    k.y += jitter(t.rng);
                    k.z += jitter(t.rng);
                }
                k.confidence = confidence(t.rng);
            }
            if (p.gap_rate > 0.0 && gap(t.rng)) {
                const std::size_t vertex = t.profile->joints[1];
                s[vertex] = Keypoint{};
                s[body25::mirror(vertex)] = Keypoint{};
            }
            frame.skeletons.push_back(s);
        }
        session.frames.push_back(std::move(frame));
    }
    return session;
}

namespace {

RawSkeleton random_view(std::string_view exercise, double angle, const CorpusOptions& o, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> yaw(-o.max_yaw_deg, o.max_yaw_deg);
    std::bernoulli_distribution flip(0.5);
    std::uniform_real_distribution<double> ppm(150.0, 350.0);
    std::uniform_real_distribution<double> offset(-200.0, 200.0);
    std::normal_distribution<double> jitter(0.0, o.jitter_pixels);
    std::uniform_real_distribution<double> confidence(0.5, 0.95);
    std::bernoulli_distribution drop(o.dropout_rate);
    const double view = yaw(rng) + (flip(rng) ? 180.0 : 0.0);
    const double scale = ppm(rng);
    const double ox = offset(rng);
    const double oy = offset(rng);
    const Shape shape = o.vary_body ? random_shape(rng) : Shape{};
    RawSkeleton s = project(body_for(exercise, angle, shape), view, scale, ox, oy);
    for (std::size_t j = 0; j < kJointCount; ++j) {
        Keypoint& k = s[j];
        k.x += jitter(rng);
        k.y += jitter(rng);
        k.z += jitter(rng);
        k.confidence = confidence(rng);
        if (j != kNeck && j != kMidHip && drop(rng)) k = Keypoint{};
    }
    return s;
}

}  // namespace

std::vector<LabeledFrame> generate_corpus(const std::vector<std::string>& class_names,
                                          const ProfileRegistry& profiles, const CorpusOptions& options) {
    std::mt19937_64 rng(mix_seed(options.seed, 77));
    std::vector<LabeledFrame> out;
    out.reserve(class_names.size() * options.per_class);
    for (std::size_t c = 0; c < class_names.size(); ++c) {
        const ExerciseProfile* p = profiles.find(class_names[c]);
        if (!p) throw ConfigError("no profile for class '" + class_names[c] + "'");
        body_for(class_names[c], 90.0);
        std::uniform_real_distribution<double> angle(p->rom_low - 5.0, p->rom_high + 5.0);
        for (std::size_t i = 0; i < options.per_class; ++i) {
            out.push_back({random_view(class_names[c], angle(rng), options, rng), c});
        }
    }
    return out;
}

std::vector<RawSkeleton> generate_unknown_frames(std::size_t count, const CorpusOptions& options) {
    std::mt19937_64 rng(mix_seed(options.seed, 99));
    const ExerciseProfile p = sit_up_profile();
    std::uniform_real_distribution<double> angle(p.rom_low - 5.0, p.rom_high + 5.0);
    std::vector<RawSkeleton> out;
    out.reserve(count);
    for (std::size_t i = 0; i < count; ++i) out.push_back(random_view(kSitUp, angle(rng), options, rng));
    return out;
}

Dataset to_dataset(const std::vector<LabeledFrame>& frames) {
    Dataset data;
    data.reserve(frames.size());
    for (const LabeledFrame& f : frames) {
        if (auto features = normalize_skeleton(f.skeleton)) data.push_back(make_sample(*features, f.label));
    }
    return data;
}

}  // namespace repcount::synth
