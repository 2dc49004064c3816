#pragma once

#include <cstdint>
#include <optional>

#include "sts/fuzzy.hpp"
#include "sts/preprocess.hpp"
#include "sts/trajectory.hpp"
#include "sts/types.hpp"

namespace sts {

enum class ControlMode { Admittance, Normal, Stabilization, Return, Done };

const char* mode_name(ControlMode m);
ControlMode mode_from_name(const std::string& name);

struct GainConfig {
    double kx = 2e-5;   // m/N, admittance stiffness, horizontal
    double ky = 1e-4;   // m/N, vertical
    double b = 0.005;   // damping on the previous tick's displacement; b/dt < 1
    double ax = 3.0;    // stabilization amplification, horizontal
    double ay = 0.0;    // vertical channel is annihilated in stabilization
    double dt = 0.01;   // s, control period

    double instability_threshold = 10.0;  // |nu2| level entering Stabilization
    double hysteresis = 0.8;              // exit below threshold * hysteresis
    int n_hold = 20;                      // ticks below the exit level before resuming
    double abort_threshold = 8.0;         // nu1 regression from peak triggering Return
    double step_cap = 0.008;              // m, per-tick command displacement bound
    double preacc_trigger = 5.0;          // nu1 band edge starting the rise
    double done_band = 35.0;              // nu1 level counting as rising
    double sitted_band = 5.0;             // nu1 below this + unloaded feet = sitted regime
    double nu2_max = 20.0;                // output2 universe half-width, for normalization

    void validate() const;
};

struct HandleCommand {
    Vec2 x;                   // commanded handle Cartesian position
    ControlMode mode = ControlMode::Admittance;
    double nu1_raw = 0.0;
    double nu1_used = 0.0;
    double nu2 = 0.0;
    PosturalFeatures features;
};

/// dX = k.Fh + (b/dt) * prev_dX, componentwise, clamped to the per-tick cap.
Vec2 admittance_step(Vec2 fh, Vec2 prev_dx, const GainConfig& g);

/// X_next = Xtraj + (|nu2|/nu2_max) * admittance_step(...).
Vec2 normal_step(Vec2 fh, Vec2 prev_dx, Vec2 xtraj, double nu2, const GainConfig& g);

/// dX = A . ((|nu2|/nu2_max) * admittance_step(...)); ay = 0 kills vertical motion.
Vec2 stabilization_step(Vec2 fh, Vec2 prev_dx, double nu2, const GainConfig& g);

struct NonMonotoneTime : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// The tick-synchronous control structure: preprocessing, fuzzy supervision,
/// output-1 running max, mode state machine and the per-mode control laws.
/// Strictly single-threaded; one instance per control loop.
class SupervisorController {
public:
    SupervisorController(fuzzy::FuzzyConfig fuzzy_cfg, GainConfig gains, TrajectorySpec traj,
                         PreprocessConfig pre = {}, Vec2 initial_handle = {});

    HandleCommand step(const SensorFrame& frame);

    ControlMode mode() const { return mode_; }
    int stabilization_episodes() const { return stab_episodes_; }
    bool return_completed() const { return return_completed_; }
    Vec2 command() const { return x_; }

private:
    void enter_normal();
    void enter_return();
    Vec2 apply_cap(Vec2 x_next);

    fuzzy::InferenceEngine engine_;
    GainConfig g_;
    TrajectorySpec base_traj_;
    Preprocessor pre_;
    RunningMaxFilter nu1_filter_;

    ControlMode mode_ = ControlMode::Admittance;
    Vec2 x_;           // last commanded position
    Vec2 home_;        // position captured when the rise started
    Vec2 prev_dx_;
    TrajectoryState traj_;
    TrajectoryState return_traj_;
    double nu1_hold_ = 0.0;
    double nu1_peak_ = 0.0;
    int stab_exit_ticks_ = 0;
    int stab_episodes_ = 0;
    bool return_completed_ = false;
    std::optional<double> last_t_;
};

}  // namespace sts
