// Copyright (C) 2026 The repcount Authors
// SPDX-License-Identifier: Apache-2.0

#include "repcount/signal_conditioner.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <ostream>
#include <stdexcept>

#include "repcount/errors.hpp"

namespace repcount {

std::optional<GapFillMode> parse_gap_fill_mode(std::string_view text) {
    if (text == "extrapolate") return GapFillMode::kExtrapolate;
    if (text == "absolute") return GapFillMode::kAbsolute;
    if (text == "reversed") return GapFillMode::kReversed;
    return std::nullopt;
}

std::string_view to_string(GapFillMode mode) {
    switch (mode) {
        case GapFillMode::kExtrapolate: return "extrapolate";
        case GapFillMode::kAbsolute: return "absolute";
        case GapFillMode::kReversed: return "reversed";
    }
    return "?";
}

double predict_gap(double prev1, double prev2, GapFillMode mode) {
    switch (mode) {
        case GapFillMode::kExtrapolate: return std::clamp(2.0 * prev1 - prev2, 0.0, 180.0);
        case GapFillMode::kAbsolute: return std::min(std::abs(2.0 * prev1 - prev2), 180.0);
        case GapFillMode::kReversed: return std::min(std::abs(2.0 * prev2 - prev1), 180.0);
    }
    return prev1;
}

double pull_outlier(double left, double value, double right, double midpoint) {
    const double mean = 0.5 * (left + right);
    if ((value > midpoint && value < mean) || (value < midpoint && value > mean)) return mean;
    return value;
}

namespace {

void check_order(const AngleTrace& trace) {
    for (std::size_t i = 1; i < trace.samples.size(); ++i) {
        if (trace.samples[i].frame <= trace.samples[i - 1].frame) {
            throw SequencingError("angle trace frames must be strictly increasing");
        }
    }
}

}  // namespace

AngleTrace fill_gaps(const AngleTrace& trace, GapFillMode mode) {
    check_order(trace);
    AngleTrace out = trace;
    const auto valid = std::count_if(trace.samples.begin(), trace.samples.end(),
                                     [](const AngleSample& s) { return !s.gap(); });
    if (valid < 2) {
        out.usable = false;
        return out;
    }
    auto& s = out.samples;
    const auto first = std::find_if(s.begin(), s.end(), [](const AngleSample& a) { return !a.gap(); });
    for (auto it = s.begin(); it != first; ++it) it->angle = first->angle;
    for (std::size_t f = 0; f < s.size(); ++f) {
        if (!s[f].gap()) continue;
        // f >= 1 here: leading gaps are already back-filled.
        s[f].angle = f >= 2 ? predict_gap(*s[f - 1].angle, *s[f - 2].angle, mode) : *s[f - 1].angle;
    }
    out.usable = true;
    return out;
}

AngleTrace normalize_outliers(const AngleTrace& trace, double midpoint, int iterations) {
    if (!trace.usable) return trace;
    for (const AngleSample& s : trace.samples) {
        if (s.gap()) throw std::invalid_argument("normalize_outliers needs a gap-free trace");
    }
    AngleTrace out = trace;
    auto& s = out.samples;
    for (int it = 0; it < iterations; ++it) {
        for (std::size_t f = 1; f + 1 < s.size(); ++f) {
            s[f].angle = pull_outlier(*s[f - 1].angle, *s[f].angle, *s[f + 1].angle, midpoint);
        }
    }
    return out;
}

AngleTrace condition_trace(const AngleTrace& trace, const ConditionerConfig& config) {
    return normalize_outliers(fill_gaps(trace, config.mode), config.midpoint, config.iterations);
}

StreamingConditioner::StreamingConditioner(ConditionerConfig config) : config_(config) {}

std::vector<ConditionedSample> StreamingConditioner::push(const AngleSample& sample) {
    if (last_frame_ && sample.frame <= *last_frame_) {
        throw SequencingError("angle samples must arrive in increasing frame order");
    }
    last_frame_ = sample.frame;
    std::vector<ConditionedSample> out;
    if (!prev1_) {
        if (sample.gap()) {
            leading_.push_back(sample);
            return out;
        }
        for (const AngleSample& lead : leading_) accept_filled(lead.frame, std::nullopt, *sample.angle, out);
        leading_.clear();
        accept_filled(sample.frame, sample.angle, *sample.angle, out);
        return out;
    }
    double filled = 0.0;
    if (!sample.gap()) {
        filled = *sample.angle;
    } else if (prev2_) {
        filled = predict_gap(*prev1_, *prev2_, config_.mode);
    } else {
        filled = *prev1_;
    }
    accept_filled(sample.frame, sample.angle, filled, out);
    return out;
}

void StreamingConditioner::accept_filled(std::uint64_t frame, std::optional<double> raw,
                                         double filled, std::vector<ConditionedSample>& out) {
    prev2_ = prev1_;
    prev1_ = filled;
    if (pending_) {
        ConditionedSample ready = *pending_;
        if (last_conditioned_ && config_.iterations > 0) {
            ready.conditioned = pull_outlier(*last_conditioned_, ready.filled, filled, config_.midpoint);
        }
        last_conditioned_ = ready.conditioned;
        out.push_back(ready);
    }
    pending_ = ConditionedSample{frame, raw, filled, filled};
}

std::vector<ConditionedSample> StreamingConditioner::finish() {
    std::vector<ConditionedSample> out;
    if (pending_) {
        out.push_back(*pending_);
        last_conditioned_ = pending_->conditioned;
        pending_.reset();
    }
    leading_.clear();
    return out;
}

void write_trace_csv(std::ostream& out, const std::vector<ConditionedSample>& samples) {
    std::array<char, 64> buf{};
    auto num = [&](double v) {
        auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
        return std::string(buf.data(), ptr);
    };
    out << "frame,raw_angle,filled,conditioned\n";
    for (const ConditionedSample& s : samples) {
        out << s.frame << ',' << (s.raw ? num(*s.raw) : std::string()) << ',' << num(s.filled) << ','
            << num(s.conditioned) << '\n';
    }
}

}  // namespace repcount
