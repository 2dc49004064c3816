#include "sts/harness.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace sts {

namespace fs = std::filesystem;
using nlohmann::json;

void RunConfig::validate() const {
    gains.validate();
    traj.validate();
    body.validate();
    if (!fuzzy_config_path.empty() && !fs::exists(fuzzy_config_path)) {
        throw ConfigError("fuzzy config not found: " + fuzzy_config_path);
    }
    if (!trace_path.empty() && !fs::exists(trace_path)) {
        throw ConfigError("trace not found: " + trace_path);
    }
    if (gains.dt != pre.dt || gains.dt != body.dt) {
        throw ConfigError("control period dt must match across gains, preprocessing and body");
    }
}

RunConfig RunConfig::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open run config: " + path);
    json j;
    try {
        j = json::parse(in);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("run config parse error: ") + e.what());
    }
    RunConfig cfg;
    try {
        if (j.contains("gains")) {
            const auto& g = j["gains"];
            cfg.gains.kx = g.value("kx", cfg.gains.kx);
            cfg.gains.ky = g.value("ky", cfg.gains.ky);
            cfg.gains.b = g.value("b", cfg.gains.b);
            cfg.gains.ax = g.value("ax", cfg.gains.ax);
            cfg.gains.ay = g.value("ay", cfg.gains.ay);
            cfg.gains.dt = g.value("dt", cfg.gains.dt);
            cfg.gains.instability_threshold =
                g.value("instability_threshold", cfg.gains.instability_threshold);
            cfg.gains.hysteresis = g.value("hysteresis", cfg.gains.hysteresis);
            cfg.gains.n_hold = g.value("n_hold", cfg.gains.n_hold);
            cfg.gains.abort_threshold = g.value("abort_threshold", cfg.gains.abort_threshold);
            cfg.gains.step_cap = g.value("step_cap", cfg.gains.step_cap);
        }
        if (j.contains("preprocessing")) {
            const auto& p = j["preprocessing"];
            cfg.pre.dt = p.value("dt", cfg.pre.dt);
            cfg.pre.cutoff_hz = p.value("cutoff_hz", cfg.pre.cutoff_hz);
            cfg.pre.fy_min = p.value("fy_min", cfg.pre.fy_min);
            cfg.pre.x_heel = p.value("x_heel", cfg.pre.x_heel);
            cfg.pre.x_toe = p.value("x_toe", cfg.pre.x_toe);
        }
        if (j.contains("trajectory")) {
            const auto& t = j["trajectory"];
            if (t.contains("pi")) cfg.traj.pi = {t["pi"][0], t["pi"][1]};
            if (t.contains("pf")) cfg.traj.pf = {t["pf"][0], t["pf"][1]};
            cfg.traj.dev = t.value("dev", cfg.traj.dev);
            cfg.traj.duration = t.value("duration", cfg.traj.duration);
        }
        if (j.contains("body")) {
            const auto& b = j["body"];
            cfg.body.mass = b.value("mass", cfg.body.mass);
            cfg.body.seated_fraction = b.value("seated_fraction", cfg.body.seated_fraction);
            cfg.body.x_heel = b.value("x_heel", cfg.body.x_heel);
            cfg.body.x_toe = b.value("x_toe", cfg.body.x_toe);
            cfg.body.handle_gain = b.value("handle_gain", cfg.body.handle_gain);
            cfg.body.fhy_peak = b.value("fhy_peak", cfg.body.fhy_peak);
            cfg.body.dt = b.value("dt", cfg.body.dt);
        }
        if (j.contains("scenario")) {
            const auto& s = j["scenario"];
            cfg.scenario.kind = scenario_from_name(s.value("kind", "nominal"));
            cfg.scenario.onset = s.value("onset", cfg.scenario.onset);
            cfg.scenario.magnitude = s.value("magnitude", cfg.scenario.magnitude);
            cfg.scenario.noise_sigma = s.value("noise_sigma", cfg.scenario.noise_sigma);
            cfg.scenario.seed = s.value("seed", cfg.scenario.seed);
        }
        cfg.fuzzy_config_path = j.value("fuzzy_config", "");
        cfg.trace_path = j.value("trace", "");
        cfg.output_dir = j.value("output_dir", cfg.output_dir);
        cfg.run_name = j.value("run_name", "");
    } catch (const json::exception& e) {
        throw ConfigError(std::string("run config schema error: ") + e.what());
    }
    return cfg;
}

std::string RunReport::to_json_string() const {
    json j;
    j["status"] = status;
    j["peak_fh"] = peak_fh;
    j["median_fh"] = median_fh;
    j["stabilization_episodes"] = stabilization_episodes;
    j["log"] = log_path;
    j["transitions"] = json::array();
    for (const auto& e : transitions) {
        j["transitions"].push_back({{"t", e.t}, {"to", mode_name(e.to)}});
    }
    return j.dump(2) + "\n";
}

RunReport run_records(const RunConfig& cfg, const fuzzy::FuzzyConfig& fuzzy_cfg,
                      std::vector<LogRecord>* records) {
    cfg.validate();
    SupervisorController ctl(fuzzy_cfg, cfg.gains, cfg.traj, cfg.pre, cfg.traj.pi);

    RunReport report;
    std::vector<double> fh_norms;
    ControlMode last_mode = ControlMode::Admittance;

    auto process = [&](const SensorFrame& frame) {
        const HandleCommand hc = ctl.step(frame);
        if (hc.mode != last_mode) {
            report.transitions.push_back({frame.t, hc.mode});
            last_mode = hc.mode;
        }
        fh_norms.push_back(std::hypot(frame.fhx, frame.fhy));
        if (records) {
            LogRecord r;
            r.frame = frame;
            r.features = hc.features;
            r.nu1_raw = hc.nu1_raw;
            r.nu1_used = hc.nu1_used;
            r.nu2 = hc.nu2;
            r.mode = hc.mode;
            r.cmd = hc.x;
            records->push_back(r);
        }
    };

    if (!cfg.trace_path.empty()) {
        const LabeledTrace trace = read_frames(cfg.trace_path);
        for (const auto& frame : trace.frames) process(frame);
    } else {
        HumanSim sim(cfg.body, cfg.scenario, cfg.traj.pi, cfg.traj.pf);
        Vec2 cmd = cfg.traj.pi;
        while (!sim.finished()) {
            const SensorFrame frame = sim.tick(cmd);
            process(frame);
            cmd = ctl.command();
            // The episode is over once the device is back home after an abort.
            if (ctl.return_completed()) break;
        }
    }

    if (!fh_norms.empty()) {
        report.peak_fh = *std::max_element(fh_norms.begin(), fh_norms.end());
        std::vector<double> sorted = fh_norms;
        std::sort(sorted.begin(), sorted.end());
        report.median_fh = sorted[sorted.size() / 2];
    }
    report.stabilization_episodes = ctl.stabilization_episodes();
    if (ctl.mode() == ControlMode::Done) {
        report.status = "success";
    } else if (ctl.return_completed()) {
        report.status = "returned";
    } else {
        report.status = "incomplete";
    }
    return report;
}

RunReport run(const RunConfig& cfg, const fuzzy::FuzzyConfig& fuzzy_cfg) {
    std::vector<LogRecord> records;
    RunReport report = run_records(cfg, fuzzy_cfg, &records);

    std::string name = cfg.run_name;
    if (name.empty()) {
        name = cfg.trace_path.empty() ? scenario_name(cfg.scenario.kind) + std::string("_s") +
                                            std::to_string(cfg.scenario.seed)
                                      : "replay";
    }
    fs::create_directories(cfg.output_dir);
    report.log_path = (fs::path(cfg.output_dir) / (name + "_log.csv")).string();
    write_log(report.log_path, records);
    std::ofstream rep(fs::path(cfg.output_dir) / (name + "_report.json"));
    rep << report.to_json_string();
    return report;
}

fuzzy::FuzzyConfig calibrate_corpus(const std::string& corpus_dir,
                                    const fuzzy::FuzzyConfig& base, const PreprocessConfig& pre) {
    if (!fs::is_directory(corpus_dir)) throw ConfigError("not a directory: " + corpus_dir);
    std::vector<std::string> paths;
    for (const auto& entry : fs::directory_iterator(corpus_dir)) {
        if (entry.path().extension() == ".csv") paths.push_back(entry.path().string());
    }
    std::sort(paths.begin(), paths.end());
    std::vector<LabeledTrace> traces;
    for (const auto& p : paths) {
        LabeledTrace t = read_trace(p);
        if (t.labels.empty()) throw InsufficientData("unlabeled trace in corpus: " + p);
        traces.push_back(std::move(t));
    }
    if (traces.empty()) throw InsufficientData("no .csv traces in " + corpus_dir);
    return fuzzy::calibrate(traces, base, pre);
}

void export_plots(const std::string& log_path, const std::string& out_dir) {
    const std::vector<LogRecord> records = read_log(log_path);
    fs::create_directories(out_dir);
    auto open = [&](const char* name, const char* header) {
        std::ofstream out(fs::path(out_dir) / name);
        if (!out) throw TraceFormatError(std::string("cannot write plot file ") + name);
        out << header << "\n";
        return out;
    };
    std::ofstream nu1 = open("nu1.csv", "t,nu1_raw,nu1_used");
    std::ofstream nu2 = open("nu2.csv", "t,nu2");
    std::ofstream forces = open("forces.csv", "t,Fhx,Fhy,Fgx,Fgy");
    char buf[256];
    for (const auto& r : records) {
        std::snprintf(buf, sizeof(buf), "%.10g,%.10g,%.10g\n", r.frame.t, r.nu1_raw, r.nu1_used);
        nu1 << buf;
        std::snprintf(buf, sizeof(buf), "%.10g,%.10g\n", r.frame.t, r.nu2);
        nu2 << buf;
        std::snprintf(buf, sizeof(buf), "%.10g,%.10g,%.10g,%.10g,%.10g\n", r.frame.t, r.frame.fhx,
                      r.frame.fhy, r.frame.fgx, r.frame.fgy);
        forces << buf;
    }
}

}  // namespace sts
