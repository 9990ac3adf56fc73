// Copyright (C) 2026 The repcount Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <memory>
#include <string>
#include <vector>

#include "repcount/exercise_recognizer.hpp"
#include "repcount/kinematics.hpp"
#include "repcount/synthetic.hpp"

namespace repcount::testing {

inline const std::vector<std::string>& exercise_classes() {
    static const std::vector<std::string> names{"push-up", "pull-up", "squat"};
    return names;
}

// A small recognizer trained and calibrated on synthetic frames; built once
// per test binary.
inline std::shared_ptr<const ModelBundle> small_model() {
    static const std::shared_ptr<const ModelBundle> bundle = [] {
        const ProfileRegistry profiles = builtin_profiles();
        synth::CorpusOptions o;
        o.per_class = 600;
        o.seed = 11;
        const Dataset train_set = synth::to_dataset(synth::generate_corpus(exercise_classes(), profiles, o));
        o.per_class = 200;
        o.seed = 12;
        const Dataset calib = synth::to_dataset(synth::generate_corpus(exercise_classes(), profiles, o));
        Hyperparams h;
        h.hidden = {32, 32};
        h.epochs = 25;
        TrainingResult r = train(train_set, exercise_classes(), h);
        RejectThresholds t = calibrate_reject(r.model, calib);
        return std::make_shared<const ModelBundle>(ModelBundle{std::move(r.model), std::move(t)});
    }();
    return bundle;
}

inline std::shared_ptr<const ProfileRegistry> shared_profiles() {
    static const auto reg = std::make_shared<const ProfileRegistry>(builtin_profiles());
    return reg;
}

}  // namespace repcount::testing
