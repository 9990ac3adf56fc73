// Copyright (C) 2026 The repcount Authors
// SPDX-License-Identifier: Apache-2.0

#include "repcount/session.hpp"

#include <algorithm>
#include <stdexcept>

#include "repcount/errors.hpp"

namespace repcount {

namespace {

class StageClock {
public:
    StageClock(bool enabled, std::chrono::nanoseconds& sink) : enabled_(enabled), sink_(sink) {
        if (enabled_) start_ = std::chrono::steady_clock::now();
    }
    ~StageClock() {
        if (enabled_) sink_ += std::chrono::steady_clock::now() - start_;
    }
    StageClock(const StageClock&) = delete;
    StageClock& operator=(const StageClock&) = delete;

private:
    bool enabled_;
    std::chrono::nanoseconds& sink_;
    std::chrono::steady_clock::time_point start_{};
};

}  // namespace

SessionPipeline::SessionPipeline(std::shared_ptr<const ModelBundle> model,
                                 std::shared_ptr<const ProfileRegistry> profiles, PipelineConfig config)
    : model_(std::move(model)), profiles_(std::move(profiles)), config_(config), tracker_(config.tracker) {
    if (!model_ || !profiles_) throw std::invalid_argument("pipeline needs a model and profiles");
    if (!(config_.fps > 0.0)) throw ConfigError("fps must be positive");
    if (config_.outlier_iterations < 0) throw ConfigError("outlier iterations must be >= 0");
    if (config_.reject_mode != RejectMode::kOff && !model_->thresholds) {
        throw ModelFormatError("model has no reject thresholds; calibrate it or use --reject off");
    }
    for (const std::string& name : model_->model.class_names) {
        const ExerciseProfile* p = profiles_->find(name);
        if (!p) throw ConfigError("no exercise profile for model class '" + name + "'");
        class_profiles_.push_back(p);
    }
}

std::vector<RepEvent> SessionPipeline::process(const SkeletonFrame& frame) {
    if (finished_) throw std::logic_error("session already finished");
    std::vector<RepEvent> out;
    Assignment assignment;
    {
        StageClock clock(config_.measure_stages, timings_.tracking);
        assignment = tracker_.match_frame(frame);
    }
    ++frames_;
    for (std::size_t s = 0; s < frame.skeletons.size(); ++s) {
        const std::uint64_t id = assignment.ids_by_skeleton[s];
        PersonState& person = persons_[id];
        person.id = id;
        step_person(person, frame.skeletons[s], frame.frame_index, out);
    }
    for (std::uint64_t id : assignment.retired) {
        PersonState& person = persons_[id];
        person.retired_at = frame.frame_index;
        close_set(person, out);
    }
    return out;
}

void SessionPipeline::step_person(PersonState& person, const RawSkeleton& skeleton, std::uint64_t frame,
                                  std::vector<RepEvent>& out) {
    {
        StageClock clock(config_.measure_stages, timings_.recognition);
        if (auto features = normalize_skeleton(skeleton)) {
            const std::vector<double> p = forward(model_->model, *features);
            const RejectThresholds empty;
            person.window.push(decide_with_reject(p, model_->thresholds ? *model_->thresholds : empty,
                                                  config_.reject_mode));
            person.windowed = person.window.current();
        }
    }
    const Label label = person.windowed;
    if (label < 0) {  // Unknown or warm-up: pause counting
        person.unlabeled.emplace_back(frame, skeleton);
        if (person.unlabeled.size() > LabelWindow::kCapacity) person.unlabeled.pop_front();
        return;
    }

    if (person.set && person.set->label != label) close_set(person, out);
    if (!person.set) {
        const ExerciseProfile* profile = class_profiles_[static_cast<std::size_t>(label)];
        ConditionerConfig cc{profile->midpoint(), config_.outlier_iterations, config_.gap_mode};
        const std::uint64_t start = person.unlabeled.empty() ? frame : person.unlabeled.front().first;
        person.set.emplace(ActiveSet{label, profile, StreamingConditioner(cc),
                                     RepCounter(*profile, person.id, config_.fps, config_.counter),
                                     SetSummary{profile->name, start, frame, {}}});
        for (const auto& [f, s] : person.unlabeled) count_frame(person, s, f, out);
    }
    person.unlabeled.clear();
    count_frame(person, skeleton, frame, out);
}

void SessionPipeline::count_frame(PersonState& person, const RawSkeleton& skeleton, std::uint64_t frame,
                                  std::vector<RepEvent>& out) {
    AngleSample sample;
    {
        StageClock clock(config_.measure_stages, timings_.angles);
        sample = angle_for(*person.set->profile, skeleton, frame);
    }
    std::vector<ConditionedSample> ready;
    {
        StageClock clock(config_.measure_stages, timings_.conditioning);
        ready = person.set->conditioner.push(sample);
    }
    person.set->summary.end_frame = frame;
    feed(person, ready, out);
}

void SessionPipeline::feed(PersonState& person, const std::vector<ConditionedSample>& samples,
                           std::vector<RepEvent>& out) {
    StageClock clock(config_.measure_stages, timings_.counting);
    for (const ConditionedSample& s : samples) {
        if (config_.keep_traces) traces_[person.id].push_back(s);
        if (auto event = person.set->counter.step({s.frame, s.conditioned})) {
            person.events.push_back(*event);
            out.push_back(*event);
        }
    }
}

void SessionPipeline::close_set(PersonState& person, std::vector<RepEvent>& out) {
    if (!person.set) return;
    feed(person, person.set->conditioner.finish(), out);
    person.set->summary.counts = person.set->counter.finalize();
    person.sets.push_back(person.set->summary);
    person.set.reset();
}

SessionSummary SessionPipeline::finish() {
    if (finished_) throw std::logic_error("session already finished");
    std::vector<RepEvent> sink;
    for (auto& [id, person] : persons_) close_set(person, sink);
    finished_ = true;

    SessionSummary summary;
    summary.fps = config_.fps;
    summary.frame_count = frames_;
    for (const ExerciseProfile* p : class_profiles_) summary.profiles_used.push_back(p->name);

    const auto& history = tracker_.history();
    for (auto& [id, person] : persons_) {
        PersonSummary ps;
        ps.person_id = id;
        ps.events = person.events;
        ps.sets = person.sets;
        for (const SetSummary& s : person.sets) {
            ps.counts.total += s.counts.total;
            ps.counts.correct += s.counts.correct;
            ps.counts.incorrect += s.counts.incorrect;
        }
        const SetSummary* dominant = nullptr;
        for (const SetSummary& s : person.sets) {
            if (!dominant || s.counts.total > dominant->counts.total) dominant = &s;
        }
        ps.predicted_exercise = dominant ? dominant->exercise : label_name(model_->model, kUnknownLabel);
        if (id >= 1 && id <= history.size()) {
            const TrackedPerson& t = history[id - 1];
            ps.track = {t.first_seen_frame, t.last_seen_frame, t.frames_seen, person.retired_at};
        }
        summary.persons.push_back(std::move(ps));
    }
    return summary;
}

SessionSummary analyze_frames(const std::vector<SkeletonFrame>& frames, std::shared_ptr<const ModelBundle> model,
                              std::shared_ptr<const ProfileRegistry> profiles, const PipelineConfig& config) {
    SessionPipeline pipeline(std::move(model), std::move(profiles), config);
    for (const SkeletonFrame& f : frames) pipeline.process(f);
    return pipeline.finish();
}

}  // namespace repcount
