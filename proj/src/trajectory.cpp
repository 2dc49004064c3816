#include "sts/trajectory.hpp"

#include <algorithm>
#include <cmath>

namespace sts {

void TrajectorySpec::validate() const {
    if (!(duration > 0.0)) throw ConfigError("trajectory: duration must be > 0");
    if (!((pf - pi).norm() > 0.0)) throw ConfigError("trajectory: Pi and Pf coincide");
    if (dev < 0.0) throw ConfigError("trajectory: dev must be >= 0");
}

double minjerk_s(double t, double duration) {
    const double tau = std::clamp(t / duration, 0.0, 1.0);
    const double t3 = tau * tau * tau;
    return t3 * (10.0 + tau * (-15.0 + 6.0 * tau));
}

Vec2 path_point(const TrajectorySpec& spec, double s) {
    const Vec2 d = spec.pf - spec.pi;
    const double len = d.norm();
    if (len == 0.0) return spec.pi;
    // Left-hand normal of Pi->Pf; for an upward rise this bulges toward -x,
    // i.e. toward the user standing in front of the device.
    const Vec2 n{-d.y / len, d.x / len};
    const Vec2 ctrl = spec.pi + 0.5 * d + spec.dev * n;
    const double u = 1.0 - s;
    return u * u * spec.pi + 2.0 * u * s * ctrl + s * s * spec.pf;
}

TrajectoryState::TrajectoryState(TrajectorySpec spec) : spec_(spec) { recompute(); }

void TrajectoryState::advance(double dt) {
    if (complete_) return;
    elapsed_ = std::min(elapsed_ + dt, spec_.duration);
    if (elapsed_ >= spec_.duration) complete_ = true;
    recompute();
}

void TrajectoryState::stabilization_update(double x_shift) {
    shift_ += x_shift;
    point_.x += x_shift;
}

void TrajectoryState::recompute() {
    const double s = complete_ ? 1.0 : minjerk_s(elapsed_, spec_.duration);
    point_ = path_point(spec_, s);
    point_.x += shift_;
}

TrajectorySpec reverse_trajectory(const TrajectoryState& state, Vec2 home, double t_rev) {
    TrajectorySpec rev;
    rev.pi = state.point();
    rev.pf = home;
    rev.dev = 0.0;
    rev.duration = std::max(t_rev, 1e-6);
    return rev;
}

}  // namespace sts
