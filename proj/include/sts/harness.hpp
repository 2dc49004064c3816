#pragma once

#include <string>
#include <vector>

#include "sts/controller.hpp"
#include "sts/human_sim.hpp"
#include "sts/trace_io.hpp"
#include "sts/types.hpp"

namespace sts {

struct RunConfig {
    GainConfig gains;
    PreprocessConfig pre;
    TrajectorySpec traj{{0.35, 0.75}, {0.45, 1.05}, 0.05, 3.4};
    BodyParams body;
    Scenario scenario;
    std::string fuzzy_config_path;
    std::string trace_path;   // nonempty -> open-loop replay of a recorded trace
    std::string output_dir = "out";
    std::string run_name;     // defaults to <scenario>_s<seed> or "replay"

    void validate() const;
    static RunConfig load(const std::string& path);  // JSON overrides over defaults
};

struct ModeEvent {
    double t = 0.0;
    ControlMode to = ControlMode::Admittance;
};

struct RunReport {
    std::vector<ModeEvent> transitions;
    double peak_fh = 0.0;     // max |Fh| over the run
    double median_fh = 0.0;   // median |Fh| over the run
    int stabilization_episodes = 0;
    std::string status;       // success | returned | incomplete
    std::string log_path;

    bool ok() const { return status == "success" || status == "returned"; }
    std::string to_json_string() const;
};

/// Execute the closed tick loop (or an open-loop replay when trace_path is
/// set), write the Data-B log plus a report JSON under output_dir.
RunReport run(const RunConfig& cfg, const fuzzy::FuzzyConfig& fuzzy_cfg);

/// Drive the supervisor over an in-memory trace; records are appended to
/// `records` when non-null. Shared by run() and the tests.
RunReport run_records(const RunConfig& cfg, const fuzzy::FuzzyConfig& fuzzy_cfg,
                      std::vector<LogRecord>* records);

/// Calibrate from a directory of labeled trace CSVs.
fuzzy::FuzzyConfig calibrate_corpus(const std::string& corpus_dir,
                                    const fuzzy::FuzzyConfig& base, const PreprocessConfig& pre);

/// Tidy per-figure CSVs from a Data-B log: nu1.csv, nu2.csv, forces.csv.
void export_plots(const std::string& log_path, const std::string& out_dir);

}  // namespace sts
