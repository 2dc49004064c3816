#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "sts/types.hpp"

namespace sts {

/// Filtered force features, their time derivatives and the CoP state
/// produced by the preprocessing block each tick.
struct PosturalFeatures {
    double fhx = 0.0;
    double fhy = 0.0;
    double fgx = 0.0;
    double fgy = 0.0;
    double dfhy = 0.0;      // N/s, backward difference on the filtered signal
    double dfgy = 0.0;
    double cop_x = 0.0;     // m, held at the last valid value while feet are unloaded
    double cop_v = 0.0;     // m/s
    bool cop_valid = true;      // false -> LowVerticalForce this tick
    bool cop_clamped = false;   // raw CoP fell outside the extended support interval
};

struct PreprocessConfig {
    double dt = 0.01;          // control period, s
    double cutoff_hz = 10.0;   // first-order low-pass cutoff
    double fy_min = 20.0;      // N, below this the feet count as unloaded
    double x_heel = -0.10;     // m, foot support interval
    double x_toe = 0.20;
};

/// First-order low-pass, y += alpha * (x - y), initialized on the first sample.
class LowPassFilter {
public:
    LowPassFilter() = default;
    LowPassFilter(double cutoff_hz, double dt);

    double step(double x);
    double value() const { return y_; }
    void reset();

private:
    double alpha_ = 1.0;
    double y_ = 0.0;
    bool primed_ = false;
};

/// Max over the last `window` pushed values, current one included.
class RunningMaxFilter {
public:
    explicit RunningMaxFilter(std::size_t window = 10);

    double push(double v);
    void reset();
    std::size_t window() const { return buf_.size(); }

private:
    std::vector<double> buf_;
    std::size_t head_ = 0;
    std::size_t count_ = 0;
};

struct CopResult {
    double x = 0.0;
    bool clamped = false;
};

/// Single-plate sagittal CoP, x = -Mgz / Fgy, clamped to the support
/// interval extended by 50% of its width. Empty when |Fgy| <= fy_min.
std::optional<CopResult> compute_cop(const SensorFrame& frame, const PreprocessConfig& cfg);

/// Stateful per-loop preprocessing pipeline: force filtering, backward-difference
/// derivatives, CoP position and velocity. One instance per control loop.
class Preprocessor {
public:
    explicit Preprocessor(const PreprocessConfig& cfg = {});

    PosturalFeatures step(const SensorFrame& frame);
    const PreprocessConfig& config() const { return cfg_; }

private:
    PreprocessConfig cfg_;
    LowPassFilter lp_fhx_, lp_fhy_, lp_fgx_, lp_fgy_, lp_mgz_;
    LowPassFilter lp_copv_;
    double prev_fhy_ = 0.0;
    double prev_fgy_ = 0.0;
    double prev_cop_ = 0.0;
    bool primed_ = false;
};

}  // namespace sts
