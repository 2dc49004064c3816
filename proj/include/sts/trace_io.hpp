#pragma once

#include <string>
#include <vector>

#include "sts/controller.hpp"
#include "sts/types.hpp"

namespace sts {

/// Trace CSV: `# sts-trace v1` then header
/// t,Fhx,Fhy,Fgx,Fgy,Mgz,hx,hy[,phase].
void write_trace(const std::string& path, const LabeledTrace& trace, bool with_phase = true);
LabeledTrace read_trace(const std::string& path);

/// One per-tick record of the supervisor in action (the "Data B" role).
struct LogRecord {
    SensorFrame frame;
    PosturalFeatures features;
    double nu1_raw = 0.0;
    double nu1_used = 0.0;
    double nu2 = 0.0;
    ControlMode mode = ControlMode::Admittance;
    Vec2 cmd;
};

/// Data-B CSV: `# sts-log v1` then header
/// t,Fhx,Fhy,Fgx,Fgy,Mgz,hx,hy,fFhx,fFhy,fFgx,fFgy,dFhy,dFgy,cop_x,cop_v,
/// nu1_raw,nu1_used,nu2,mode,cmd_x,cmd_y.
void write_log(const std::string& path, const std::vector<LogRecord>& records);
std::vector<LogRecord> read_log(const std::string& path);

/// Read the sensor-frame columns from either a trace CSV or a Data-B log,
/// dispatching on the version line.
LabeledTrace read_frames(const std::string& path);

}  // namespace sts
