#pragma once

#include "sts/types.hpp"

namespace sts {

/// Handle path from Pi to Pf with a lateral bulge of `dev` meters toward the
/// user, followed in `duration` seconds under the minimum-jerk law.
struct TrajectorySpec {
    Vec2 pi;
    Vec2 pf;
    double dev = 0.0;       // m, maximum lateral deviation of the path
    double duration = 3.4;  // s

    void validate() const;
};

/// s(t/T) = 10 tau^3 - 15 tau^4 + 6 tau^5, the unique quintic with zero
/// boundary velocity and acceleration.
double minjerk_s(double t, double duration);

/// Quadratic Bezier through Pi and Pf with control point at the segment
/// midpoint offset by dev along the left-hand normal of Pi->Pf.
Vec2 path_point(const TrajectorySpec& spec, double s);

class TrajectoryState {
public:
    TrajectoryState() = default;
    explicit TrajectoryState(TrajectorySpec spec);

    /// Advance elapsed time; no-op once complete.
    void advance(double dt);

    /// Rigidly shift the remaining path along x while time is frozen
    /// (the caller simply stops calling advance()).
    void stabilization_update(double x_shift);

    Vec2 point() const { return point_; }
    double elapsed() const { return elapsed_; }
    double x_shift() const { return shift_; }
    bool complete() const { return complete_; }
    const TrajectorySpec& spec() const { return spec_; }

private:
    void recompute();

    TrajectorySpec spec_;
    double elapsed_ = 0.0;
    double shift_ = 0.0;
    Vec2 point_;
    bool complete_ = false;
};

/// Straight-line spec from the current commanded point back to `home`,
/// followed with the same minimum-jerk law.
TrajectorySpec reverse_trajectory(const TrajectoryState& state, Vec2 home, double t_rev);

}  // namespace sts
