#include "sts/preprocess.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace sts {

const char* phase_name(Phase p) {
    switch (p) {
        case Phase::Sitted: return "sitted";
        case Phase::PreAcceleration: return "pre-acceleration";
        case Phase::Acceleration: return "acceleration";
        case Phase::StartRising: return "start-rising";
        case Phase::Rising: return "rising";
        case Phase::Standing: return "standing";
    }
    return "?";
}

Phase phase_from_name(const std::string& name) {
    for (Phase p : {Phase::Sitted, Phase::PreAcceleration, Phase::Acceleration,
                    Phase::StartRising, Phase::Rising, Phase::Standing}) {
        if (name == phase_name(p)) return p;
    }
    throw TraceFormatError("unknown phase label: " + name);
}

LowPassFilter::LowPassFilter(double cutoff_hz, double dt) {
    const double rc = 1.0 / (2.0 * std::numbers::pi * cutoff_hz);
    alpha_ = dt / (dt + rc);
}

double LowPassFilter::step(double x) {
    if (!primed_) {
        y_ = x;
        primed_ = true;
    } else {
        y_ += alpha_ * (x - y_);
    }
    return y_;
}

void LowPassFilter::reset() {
    primed_ = false;
    y_ = 0.0;
}

RunningMaxFilter::RunningMaxFilter(std::size_t window) : buf_(window, 0.0) {}

double RunningMaxFilter::push(double v) {
    if (count_ < buf_.size()) {
        buf_[count_++] = v;
    } else {
        buf_[head_] = v;  // overwrite the oldest slot
        head_ = (head_ + 1) % buf_.size();
    }
    double m = buf_[0];
    for (std::size_t i = 1; i < count_; ++i) m = std::max(m, buf_[i]);
    return m;
}

void RunningMaxFilter::reset() {
    head_ = 0;
    count_ = 0;
}

std::optional<CopResult> compute_cop(const SensorFrame& frame, const PreprocessConfig& cfg) {
    if (std::abs(frame.fgy) <= cfg.fy_min) return std::nullopt;  // LowVerticalForce
    const double raw = -frame.mgz / frame.fgy;
    const double margin = 0.25 * (cfg.x_toe - cfg.x_heel);
    const double lo = cfg.x_heel - margin;
    const double hi = cfg.x_toe + margin;
    CopResult r;
    r.x = std::clamp(raw, lo, hi);
    r.clamped = (raw < lo || raw > hi);
    return r;
}

Preprocessor::Preprocessor(const PreprocessConfig& cfg)
    : cfg_(cfg),
      lp_fhx_(cfg.cutoff_hz, cfg.dt),
      lp_fhy_(cfg.cutoff_hz, cfg.dt),
      lp_fgx_(cfg.cutoff_hz, cfg.dt),
      lp_fgy_(cfg.cutoff_hz, cfg.dt),
      lp_mgz_(cfg.cutoff_hz, cfg.dt),
      lp_copv_(cfg.cutoff_hz, cfg.dt) {}

PosturalFeatures Preprocessor::step(const SensorFrame& frame) {
    PosturalFeatures f;
    f.fhx = lp_fhx_.step(frame.fhx);
    f.fhy = lp_fhy_.step(frame.fhy);
    f.fgx = lp_fgx_.step(frame.fgx);
    f.fgy = lp_fgy_.step(frame.fgy);
    const double mgz = lp_mgz_.step(frame.mgz);

    if (primed_) {
        f.dfhy = (f.fhy - prev_fhy_) / cfg_.dt;
        f.dfgy = (f.fgy - prev_fgy_) / cfg_.dt;
    }
    prev_fhy_ = f.fhy;
    prev_fgy_ = f.fgy;

    SensorFrame filtered = frame;
    filtered.fgy = f.fgy;
    filtered.mgz = mgz;
    auto cop = compute_cop(filtered, cfg_);
    if (cop) {
        f.cop_x = cop->x;
        f.cop_clamped = cop->clamped;
        f.cop_valid = true;
    } else {
        f.cop_x = prev_cop_;  // hold-last while feet are unloaded
        f.cop_valid = false;
    }
    if (primed_) {
        f.cop_v = lp_copv_.step((f.cop_x - prev_cop_) / cfg_.dt);
    } else {
        lp_copv_.step(0.0);
    }
    prev_cop_ = f.cop_x;
    primed_ = true;
    return f;
}

}  // namespace sts
