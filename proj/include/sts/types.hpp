#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace sts {

struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    Vec2 operator+(const Vec2& o) const { return {x + o.x, y + o.y}; }
    Vec2 operator-(const Vec2& o) const { return {x - o.x, y - o.y}; }
    Vec2 operator*(double s) const { return {x * s, y * s}; }
    Vec2& operator+=(const Vec2& o) { x += o.x; y += o.y; return *this; }
    double norm() const { return std::hypot(x, y); }
};

inline Vec2 operator*(double s, const Vec2& v) { return v * s; }

/// One time-stamped sample of handle and ground forces plus handle pose.
/// Forces in newtons, Mgz in newton-meters, positions in meters, t in seconds.
struct SensorFrame {
    double t = 0.0;
    double fhx = 0.0;   // handle force, horizontal (forward positive)
    double fhy = 0.0;   // handle force, vertical (downward load positive)
    double fgx = 0.0;   // ground reaction, horizontal
    double fgy = 0.0;   // ground reaction, vertical
    double mgz = 0.0;   // ground moment about the plate origin
    double hx = 0.0;    // handle position
    double hy = 0.0;
};

enum class Phase {
    Sitted,
    PreAcceleration,
    Acceleration,
    StartRising,
    Rising,
    Standing,
};

const char* phase_name(Phase p);
Phase phase_from_name(const std::string& name);

struct ScenarioInfo {
    std::string kind = "nominal";
    std::uint64_t seed = 1;
};

/// A generated or recorded trace with per-sample phase labels (the "Data A" role).
struct LabeledTrace {
    std::vector<SensorFrame> frames;
    std::vector<Phase> labels;   // same length as frames, or empty for unlabeled traces
    ScenarioInfo scenario;
};

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct TraceFormatError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct InsufficientData : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace sts
