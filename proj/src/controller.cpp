#include "sts/controller.hpp"

#include <algorithm>
#include <cmath>

namespace sts {

const char* mode_name(ControlMode m) {
    switch (m) {
        case ControlMode::Admittance: return "admittance";
        case ControlMode::Normal: return "normal";
        case ControlMode::Stabilization: return "stabilization";
        case ControlMode::Return: return "return";
        case ControlMode::Done: return "done";
    }
    return "?";
}

ControlMode mode_from_name(const std::string& name) {
    for (ControlMode m : {ControlMode::Admittance, ControlMode::Normal,
                          ControlMode::Stabilization, ControlMode::Return, ControlMode::Done}) {
        if (name == mode_name(m)) return m;
    }
    throw TraceFormatError("unknown mode name: " + name);
}

void GainConfig::validate() const {
    if (!(kx > 0.0 && ky > 0.0)) throw ConfigError("gains: kx, ky must be > 0");
    if (!(dt > 0.0)) throw ConfigError("gains: dt must be > 0");
    if (b < 0.0 || b / dt >= 1.0) throw ConfigError("gains: need 0 <= b/dt < 1");
    if (!(ax >= 1.0)) throw ConfigError("gains: ax must be >= 1");
    if (ay != 0.0) throw ConfigError("gains: ay must be 0");
    if (!(instability_threshold > 0.0 && abort_threshold > 0.0 && step_cap > 0.0)) {
        throw ConfigError("gains: thresholds must be positive");
    }
    if (!(hysteresis > 0.0 && hysteresis <= 1.0)) throw ConfigError("gains: hysteresis in (0,1]");
}

Vec2 admittance_step(Vec2 fh, Vec2 prev_dx, const GainConfig& g) {
    Vec2 dx{g.kx * fh.x + (g.b / g.dt) * prev_dx.x, g.ky * fh.y + (g.b / g.dt) * prev_dx.y};
    const double n = dx.norm();
    if (n > g.step_cap) dx = dx * (g.step_cap / n);
    return dx;
}

Vec2 normal_step(Vec2 fh, Vec2 prev_dx, Vec2 xtraj, double nu2, const GainConfig& g) {
    const double w = std::min(std::abs(nu2) / g.nu2_max, 1.0);
    return xtraj + w * admittance_step(fh, prev_dx, g);
}

Vec2 stabilization_step(Vec2 fh, Vec2 prev_dx, double nu2, const GainConfig& g) {
    const double w = std::min(std::abs(nu2) / g.nu2_max, 1.0);
    const Vec2 dx = w * admittance_step(fh, prev_dx, g);
    return {g.ax * dx.x, g.ay * dx.y};
}

SupervisorController::SupervisorController(fuzzy::FuzzyConfig fuzzy_cfg, GainConfig gains,
                                           TrajectorySpec traj, PreprocessConfig pre,
                                           Vec2 initial_handle)
    : engine_(std::move(fuzzy_cfg)),
      g_(gains),
      base_traj_(traj),
      pre_(pre),
      nu1_filter_(10),
      x_(initial_handle) {
    g_.validate();
    base_traj_.validate();
}

void SupervisorController::enter_normal() {
    // Re-anchor the path at the position the patient chose in Admittance so
    // the command is continuous at the transition.
    TrajectorySpec spec = base_traj_;
    const Vec2 delta = base_traj_.pf - base_traj_.pi;
    spec.pi = x_;
    spec.pf = x_ + delta;
    traj_ = TrajectoryState(spec);
    home_ = x_;
    mode_ = ControlMode::Normal;
}

void SupervisorController::enter_return() {
    const double t_rev = std::max(traj_.elapsed(), 0.2);
    return_traj_ = TrajectoryState(reverse_trajectory(traj_, home_, t_rev));
    mode_ = ControlMode::Return;
}

Vec2 SupervisorController::apply_cap(Vec2 x_next) {
    const Vec2 jump = x_next - x_;
    const double n = jump.norm();
    if (n > g_.step_cap) return x_ + jump * (g_.step_cap / n);
    return x_next;
}

HandleCommand SupervisorController::step(const SensorFrame& frame) {
    if (last_t_ && frame.t <= *last_t_) {
        throw NonMonotoneTime("frame timestamps must be strictly increasing");
    }
    last_t_ = frame.t;

    const PosturalFeatures feats = pre_.step(frame);
    const fuzzy::FuzzyOutputs out = engine_.infer(feats);

    const double nu1_raw = out.nu1_active ? out.nu1 : nu1_hold_;  // hold-last on ZeroActivation
    nu1_hold_ = nu1_raw;
    double nu2 = out.nu2_active ? out.nu2 : 0.0;

    // Sitted regime: CoP information is meaningless while the feet are
    // unloaded, so the stability output is ignored.
    const bool sitted_gate = !feats.cop_valid && nu1_raw < g_.sitted_band;
    if (sitted_gate) nu2 = 0.0;

    const double nu1_used = nu1_filter_.push(nu1_raw);
    const Vec2 fh{feats.fhx, feats.fhy};

    switch (mode_) {
        case ControlMode::Admittance: {
            const Vec2 dx = admittance_step(fh, prev_dx_, g_);
            prev_dx_ = dx;
            x_ = apply_cap(x_ + dx);
            if (nu1_used >= g_.preacc_trigger) {
                enter_normal();
                nu1_peak_ = nu1_used;
            }
            break;
        }
        case ControlMode::Normal: {
            traj_.advance(g_.dt);
            const Vec2 adm = admittance_step(fh, prev_dx_, g_);
            const double w = std::min(std::abs(nu2) / g_.nu2_max, 1.0);
            const Vec2 dx = w * adm;
            prev_dx_ = dx;
            x_ = apply_cap(traj_.point() + dx);
            nu1_peak_ = std::max(nu1_peak_, nu1_used);

            if (!sitted_gate && std::abs(nu2) >= g_.instability_threshold) {
                mode_ = ControlMode::Stabilization;
                ++stab_episodes_;
                stab_exit_ticks_ = 0;
            } else if (nu1_peak_ - nu1_used > g_.abort_threshold) {
                enter_return();
            } else if (traj_.complete() && nu1_used >= g_.done_band) {
                mode_ = ControlMode::Done;
            }
            break;
        }
        case ControlMode::Stabilization: {
            const Vec2 dx = stabilization_step(fh, prev_dx_, nu2, g_);
            prev_dx_ = dx;
            x_.x += dx.x;  // y frozen; trajectory elapsed frozen as well
            traj_.stabilization_update(dx.x);
            if (std::abs(nu2) < g_.instability_threshold * g_.hysteresis) {
                if (++stab_exit_ticks_ >= g_.n_hold) mode_ = ControlMode::Normal;
            } else {
                stab_exit_ticks_ = 0;
            }
            break;
        }
        case ControlMode::Return: {
            return_traj_.advance(g_.dt);
            x_ = apply_cap(return_traj_.point());
            prev_dx_ = {};
            if (return_traj_.complete()) {
                x_ = return_traj_.point();  // exactly home
                mode_ = ControlMode::Admittance;
                nu1_filter_.reset();
                nu1_peak_ = 0.0;
                return_completed_ = true;
            }
            break;
        }
        case ControlMode::Done:
            // Hold position.
            break;
    }

    HandleCommand cmd;
    cmd.x = x_;
    cmd.mode = mode_;
    cmd.nu1_raw = nu1_raw;
    cmd.nu1_used = nu1_used;
    cmd.nu2 = nu2;
    cmd.features = feats;
    return cmd;
}

}  // namespace sts
