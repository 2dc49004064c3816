#pragma once

#include <cstdint>
#include <functional>
#include <random>
#include <string>

#include "sts/types.hpp"

namespace sts {

struct BodyParams {
    double mass = 70.0;              // kg
    double seated_fraction = 0.25;   // share of body weight on the feet while sitted
    double x_heel = -0.10;           // m, foot support interval
    double x_toe = 0.20;
    double sitted_duration = 1.0;    // s, before the movement starts
    double preacc_duration = 1.0;
    double acc_duration = 0.5;
    double start_rising_duration = 0.5;
    double rising_duration = 1.5;
    double standing_duration = 1.5;  // trailing standing hold
    double handle_gain = 60.0;       // N of handle load per unit progress error
    double fhy_peak = 70.0;          // N, nominal assist-pull bell peak
    double dt = 0.01;                // s

    void validate() const;
};

enum class ScenarioKind { Nominal, PerturbForward, PerturbBackward, Abort, Noisy };

const char* scenario_name(ScenarioKind k);
ScenarioKind scenario_from_name(const std::string& name);

struct Scenario {
    ScenarioKind kind = ScenarioKind::Nominal;
    double onset = 2.6;          // s, perturbation / abort onset
    double magnitude = 1.0;      // scales the CoP excursion and handle reaction
    double noise_sigma = 0.3;    // N, force noise std-dev
    std::uint64_t seed = 1;
};

/// Phase-structured synthetic sit-to-stand force generator. Fully
/// deterministic given (params, scenario, seed, command stream); couples to
/// the commanded handle position through the vertical handle load.
class HumanSim {
public:
    HumanSim(const BodyParams& params, const Scenario& scenario, Vec2 handle_pi, Vec2 handle_pf);

    /// Produce the next frame, given the handle command applied this tick.
    SensorFrame tick(Vec2 handle_cmd);

    Phase current_phase() const { return phase_; }
    bool finished() const { return t_ >= total_duration_; }
    double total_duration() const { return total_duration_; }

    /// CoP band beyond which the generator considers the posture unstable.
    double instability_margin() const { return 0.03; }

private:
    double phase_clock_progress(double tau) const;  // seat-unload fraction w(tau)
    double body_progress(double tau) const;         // vertical rise progress
    double bell(double tau) const;
    Phase current_phase_at(double tau) const;

    BodyParams p_;
    Scenario sc_;
    Vec2 pi_, pf_;
    std::mt19937_64 rng_;
    std::normal_distribution<double> gauss_{0.0, 1.0};
    double t_ = 0.0;
    double tau_ = 0.0;  // internal phase clock; freezes during a perturbation
    double total_duration_ = 0.0;
    double pause_duration_ = 0.0;
    bool aborting_ = false;
    double abort_tau_ = 0.0;     // phase-clock value when the abort began
    double abort_elapsed_ = 0.0;
    Phase phase_ = Phase::Sitted;
};

/// Open-loop generation: the handle follows its own minimum-jerk path over
/// the rise window, as in a human-assisted recording.
LabeledTrace generate(const BodyParams& params, const Scenario& scenario, Vec2 handle_pi,
                      Vec2 handle_pf);

/// Closed-loop generation with an explicit command stream.
LabeledTrace generate(const BodyParams& params, const Scenario& scenario, Vec2 handle_pi,
                      Vec2 handle_pf, const std::function<Vec2(double t)>& handle_cmd);

}  // namespace sts
