#include "sts/human_sim.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace sts {

namespace {

constexpr double kGravity = 9.81;
constexpr double kPauseDuration = 1.2;   // s, perturbation episode length
constexpr double kAbortDuration = 0.8;   // s, sit-back reversal
constexpr double kAbortTail = 2.0;       // s, settled sitting after an abort

double smoothstep(double u) {
    u = std::clamp(u, 0.0, 1.0);
    return u * u * (3.0 - 2.0 * u);
}

// Piecewise-smooth keyframe interpolation; keys must be time-sorted.
double keyframes(double t, const std::vector<std::pair<double, double>>& keys) {
    if (t <= keys.front().first) return keys.front().second;
    if (t >= keys.back().first) return keys.back().second;
    for (std::size_t i = 1; i < keys.size(); ++i) {
        if (t <= keys[i].first) {
            const double u = (t - keys[i - 1].first) / (keys[i].first - keys[i - 1].first);
            return keys[i - 1].second + (keys[i].second - keys[i - 1].second) * smoothstep(u);
        }
    }
    return keys.back().second;
}

}  // namespace

void BodyParams::validate() const {
    if (!(mass > 0.0)) throw ConfigError("body: mass must be > 0");
    if (seated_fraction < 0.0 || seated_fraction > 1.0) {
        throw ConfigError("body: seated_fraction in [0,1]");
    }
    if (!(x_toe > x_heel)) throw ConfigError("body: empty foot support interval");
    for (double d : {sitted_duration, preacc_duration, acc_duration, start_rising_duration,
                     rising_duration, dt}) {
        if (!(d > 0.0)) throw ConfigError("body: durations must be > 0");
    }
}

const char* scenario_name(ScenarioKind k) {
    switch (k) {
        case ScenarioKind::Nominal: return "nominal";
        case ScenarioKind::PerturbForward: return "perturb_forward";
        case ScenarioKind::PerturbBackward: return "perturb_backward";
        case ScenarioKind::Abort: return "abort";
        case ScenarioKind::Noisy: return "noisy";
    }
    return "?";
}

ScenarioKind scenario_from_name(const std::string& name) {
    for (ScenarioKind k : {ScenarioKind::Nominal, ScenarioKind::PerturbForward,
                           ScenarioKind::PerturbBackward, ScenarioKind::Abort,
                           ScenarioKind::Noisy}) {
        if (name == scenario_name(k)) return k;
    }
    throw ConfigError("unknown scenario kind: " + name);
}

HumanSim::HumanSim(const BodyParams& params, const Scenario& scenario, Vec2 handle_pi,
                   Vec2 handle_pf)
    : p_(params), sc_(scenario), pi_(handle_pi), pf_(handle_pf), rng_(scenario.seed) {
    p_.validate();
    const double phases = p_.sitted_duration + p_.preacc_duration + p_.acc_duration +
                          p_.start_rising_duration + p_.rising_duration + p_.standing_duration;
    switch (sc_.kind) {
        case ScenarioKind::PerturbForward:
        case ScenarioKind::PerturbBackward:
            pause_duration_ = kPauseDuration;
            total_duration_ = phases + kPauseDuration;
            break;
        case ScenarioKind::Abort:
            total_duration_ = sc_.onset + kAbortDuration + kAbortTail;
            break;
        default:
            total_duration_ = phases;
            break;
    }
}

double HumanSim::phase_clock_progress(double tau) const {
    const double c0 = p_.sitted_duration;
    const double c1 = c0 + p_.preacc_duration;
    const double c2 = c1 + p_.acc_duration;
    const double c3 = c2 + p_.start_rising_duration;
    const double c4 = c3 + p_.rising_duration;
    // Seat-unload fraction targets at the phase boundaries.
    if (tau <= c0) return 0.0;
    if (tau <= c1) return 0.12 * smoothstep((tau - c0) / (c1 - c0));
    if (tau <= c2) return 0.12 + 0.43 * smoothstep((tau - c1) / (c2 - c1));
    if (tau <= c3) return 0.55 + 0.30 * smoothstep((tau - c2) / (c3 - c2));
    if (tau <= c4) return 0.85 + 0.15 * smoothstep((tau - c3) / (c4 - c3));
    return 1.0;
}

double HumanSim::body_progress(double tau) const {
    const double c1 = p_.sitted_duration + p_.preacc_duration;
    const double c2 = c1 + p_.acc_duration;
    const double c3 = c2 + p_.start_rising_duration;
    const double c4 = c3 + p_.rising_duration;
    if (tau <= c1) return 0.0;
    if (tau <= c2) return 0.25 * smoothstep((tau - c1) / (c2 - c1));
    if (tau <= c3) return 0.25 + 0.25 * smoothstep((tau - c2) / (c3 - c2));
    if (tau <= c4) return 0.50 + 0.50 * smoothstep((tau - c3) / (c4 - c3));
    return 1.0;
}

double HumanSim::bell(double tau) const {
    const double c0 = p_.sitted_duration;
    const double c4 = c0 + p_.preacc_duration + p_.acc_duration + p_.start_rising_duration +
                      p_.rising_duration;
    if (tau <= c0 || tau >= c4) return 0.0;
    const double u = (tau - c0) / (c4 - c0);
    const double s = std::sin(std::numbers::pi * u);
    return p_.fhy_peak * s * s;
}

SensorFrame HumanSim::tick(Vec2 handle_cmd) {
    const double t = t_;
    const bool perturb = sc_.kind == ScenarioKind::PerturbForward ||
                         sc_.kind == ScenarioKind::PerturbBackward;
    const bool in_pause = perturb && t >= sc_.onset && t < sc_.onset + pause_duration_;

    if (sc_.kind == ScenarioKind::Abort && t >= sc_.onset && !aborting_) {
        aborting_ = true;
        abort_tau_ = tau_;
    }

    // Effective phase-clock position feeding the force profiles.
    double tau_eff = tau_;
    if (aborting_) {
        const double tau_ref = 0.5 * p_.sitted_duration;  // back to mid-sitted
        const double r = smoothstep(abort_elapsed_ / kAbortDuration);
        tau_eff = abort_tau_ + r * (tau_ref - abort_tau_);
    }

    const double mg = p_.mass * kGravity;
    const double w = phase_clock_progress(tau_eff);
    const double s_body = body_progress(tau_eff);

    const double denom = pf_.y - pi_.y;
    const double s_handle =
        std::abs(denom) > 1e-9 ? std::clamp((handle_cmd.y - pi_.y) / denom, 0.0, 1.0) : 0.0;

    double fhy = bell(tau_eff) + p_.handle_gain * (s_body - s_handle);
    double fhx = 2.0 * w;  // slight forward pull as the trunk comes over the feet
    double cop = -0.02 + 0.06 * w;

    if (perturb && t >= sc_.onset) {
        const double dir = sc_.kind == ScenarioKind::PerturbForward ? 1.0 : -1.0;
        const double ts = t - sc_.onset;
        // CoP excursion toward the support boundary in the fall direction,
        // then the compensatory load shift the opposite way.
        const double e = keyframes(ts, {{0.0, 0.0},
                                        {0.15, 1.0},
                                        {0.45, 1.0},
                                        {0.80, -0.35},
                                        {1.15, 0.0}});
        cop += dir * 0.18 * sc_.magnitude * e;
        // Gripping reaction on the handles, opposing the fall.
        const double grip = keyframes(ts, {{0.0, 0.0}, {0.10, 1.0}, {0.60, 1.0}, {0.95, 0.0}});
        fhx += -dir * 40.0 * sc_.magnitude * grip;
    }

    fhy = std::max(0.0, fhy);
    const double seated = p_.seated_fraction * mg;
    double fgy = seated + w * ((mg - fhy) - seated);

    const double sigma =
        sc_.kind == ScenarioKind::Noisy ? std::max(sc_.noise_sigma, 4.0) : sc_.noise_sigma;
    const double n_fhx = gauss_(rng_) * sigma;
    const double n_fhy = gauss_(rng_) * sigma;
    const double n_fgx = gauss_(rng_) * sigma;
    const double n_fgy = gauss_(rng_) * sigma;

    SensorFrame frame;
    frame.t = t;
    frame.fhx = fhx + n_fhx;
    frame.fhy = std::max(0.0, fhy + n_fhy);
    frame.fgx = 0.15 * fhx + n_fgx;
    frame.fgy = std::max(0.0, fgy + n_fgy);
    frame.mgz = -cop * frame.fgy;
    frame.hx = handle_cmd.x;
    frame.hy = handle_cmd.y;

    // Phase label for this sample.
    if (aborting_) {
        phase_ = abort_elapsed_ < kAbortDuration ? current_phase_at(abort_tau_) : Phase::Sitted;
    } else {
        phase_ = current_phase_at(tau_);
    }

    // Advance the clocks.
    t_ += p_.dt;
    if (aborting_) {
        abort_elapsed_ += p_.dt;
    } else if (!in_pause) {
        tau_ += p_.dt;
    }
    return frame;
}

Phase HumanSim::current_phase_at(double tau) const {
    const double c0 = p_.sitted_duration;
    const double c1 = c0 + p_.preacc_duration;
    const double c2 = c1 + p_.acc_duration;
    const double c3 = c2 + p_.start_rising_duration;
    const double c4 = c3 + p_.rising_duration;
    if (tau < c0) return Phase::Sitted;
    if (tau < c1) return Phase::PreAcceleration;
    if (tau < c2) return Phase::Acceleration;
    if (tau < c3) return Phase::StartRising;
    if (tau < c4) return Phase::Rising;
    return Phase::Standing;
}

LabeledTrace generate(const BodyParams& params, const Scenario& scenario, Vec2 handle_pi,
                      Vec2 handle_pf) {
    // Human-assisted recording: the handle is moved along its nominal
    // minimum-jerk rise, synchronized with the body's own timeline.
    const double start = params.sitted_duration + 0.5 * params.preacc_duration;
    const double rise = params.preacc_duration + params.acc_duration +
                        params.start_rising_duration + params.rising_duration;
    return generate(params, scenario, handle_pi, handle_pf, [&](double t) {
        const double tau = std::clamp(t - start, 0.0, rise);
        const double s = 10.0 * std::pow(tau / rise, 3) - 15.0 * std::pow(tau / rise, 4) +
                         6.0 * std::pow(tau / rise, 5);
        Vec2 p;
        p.x = handle_pi.x + s * (handle_pf.x - handle_pi.x);
        p.y = handle_pi.y + s * (handle_pf.y - handle_pi.y);
        return p;
    });
}

LabeledTrace generate(const BodyParams& params, const Scenario& scenario, Vec2 handle_pi,
                      Vec2 handle_pf, const std::function<Vec2(double t)>& handle_cmd) {
    HumanSim sim(params, scenario, handle_pi, handle_pf);
    LabeledTrace trace;
    trace.scenario.kind = scenario_name(scenario.kind);
    trace.scenario.seed = scenario.seed;
    while (!sim.finished()) {
        const double t = trace.frames.empty() ? 0.0 : trace.frames.back().t + params.dt;
        trace.frames.push_back(sim.tick(handle_cmd(t)));
        trace.labels.push_back(sim.current_phase());
    }
    return trace;
}

}  // namespace sts
