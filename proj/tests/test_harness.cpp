#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "sts/harness.hpp"

using namespace sts;
namespace fs = std::filesystem;

namespace {

const char* kDefaultConfig = STS_DATA_DIR "/default_supervisor.json";

fs::path fresh_dir(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / ("sts_harness_" + name);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    REQUIRE(in.good());
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

int run_cli(const std::string& args) {
    const std::string cmd = std::string(STS_CLI_PATH) + " " + args + " >/dev/null 2>&1";
    const int rc = std::system(cmd.c_str());
    REQUIRE(rc != -1);
    return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

RunConfig base_config(const fs::path& out) {
    RunConfig cfg;
    cfg.fuzzy_config_path = kDefaultConfig;
    cfg.output_dir = out.string();
    return cfg;
}

}  // namespace

TEST_CASE("nominal closed-loop run succeeds and writes its artifacts") {
    const fs::path dir = fresh_dir("nominal");
    RunConfig cfg = base_config(dir);
    const auto fz = fuzzy::FuzzyConfig::load(kDefaultConfig);
    const RunReport report = run(cfg, fz);
    CHECK(report.status == "success");
    CHECK(report.ok());
    CHECK(report.stabilization_episodes == 0);
    CHECK(fs::exists(report.log_path));
    CHECK(fs::exists(dir / "nominal_s1_report.json"));

    const std::vector<LogRecord> records = read_log(report.log_path);
    CHECK(records.size() > 400);
    CHECK(records.back().mode == ControlMode::Done);
    // Report statistics are recomputable from the log.
    double peak = 0.0;
    for (const auto& r : records) peak = std::max(peak, std::hypot(r.frame.fhx, r.frame.fhy));
    CHECK(peak == doctest::Approx(report.peak_fh).epsilon(1e-12));
}

TEST_CASE("identical configs give byte-identical logs") {
    const fs::path a = fresh_dir("det_a");
    const fs::path b = fresh_dir("det_b");
    const auto fz = fuzzy::FuzzyConfig::load(kDefaultConfig);
    RunConfig cfg = base_config(a);
    cfg.scenario.kind = ScenarioKind::Noisy;
    cfg.scenario.seed = 11;
    const RunReport ra = run(cfg, fz);
    cfg.output_dir = b.string();
    const RunReport rb = run(cfg, fz);
    CHECK(slurp(ra.log_path) == slurp(rb.log_path));
}

TEST_CASE("open-loop replay of a recorded log reproduces the supervisor outputs") {
    const fs::path dir = fresh_dir("replay");
    const auto fz = fuzzy::FuzzyConfig::load(kDefaultConfig);
    RunConfig cfg = base_config(dir);
    std::vector<LogRecord> live;
    run_records(cfg, fz, &live);
    const fs::path log = dir / "live_log.csv";
    write_log(log.string(), live);

    RunConfig replay_cfg = base_config(dir);
    replay_cfg.trace_path = log.string();
    std::vector<LogRecord> replayed;
    run_records(replay_cfg, fz, &replayed);

    REQUIRE(replayed.size() == live.size());
    for (std::size_t i = 0; i < live.size(); ++i) {
        REQUIRE(replayed[i].nu1_raw == live[i].nu1_raw);
        REQUIRE(replayed[i].nu1_used == live[i].nu1_used);
        REQUIRE(replayed[i].nu2 == live[i].nu2);
        REQUIRE(replayed[i].mode == live[i].mode);
        REQUIRE(replayed[i].cmd.x == live[i].cmd.x);
        REQUIRE(replayed[i].cmd.y == live[i].cmd.y);
    }
}

TEST_CASE("run config JSON overrides defaults and validates") {
    const fs::path dir = fresh_dir("config");
    const fs::path path = dir / "run.json";
    {
        std::ofstream out(path);
        out << R"({"scenario": {"kind": "abort", "seed": 3},
                   "gains": {"kx": 3e-5},
                   "trajectory": {"dev": 0.02},
                   "output_dir": ")"
            << dir.string() << R"("})";
    }
    const RunConfig cfg = RunConfig::load(path.string());
    CHECK(cfg.scenario.kind == ScenarioKind::Abort);
    CHECK(cfg.scenario.seed == 3);
    CHECK(cfg.gains.kx == 3e-5);
    CHECK(cfg.traj.dev == 0.02);
    CHECK(cfg.gains.ky == GainConfig{}.ky);  // untouched default

    std::ofstream(path) << "{ not json";
    CHECK_THROWS_AS(RunConfig::load(path.string()), ConfigError);

    RunConfig bad;
    bad.gains.dt = 0.02;  // disagrees with preprocessing and body dt
    CHECK_THROWS_AS(bad.validate(), ConfigError);
}

TEST_CASE("trace files reject malformed content") {
    const fs::path dir = fresh_dir("badtrace");
    const fs::path path = dir / "bad.csv";
    std::ofstream(path) << "not a trace\n";
    CHECK_THROWS_AS(read_trace(path.string()), TraceFormatError);

    std::ofstream(path) << "# sts-trace v1\nt,Fhx,Fhy,Fgx,Fgy,Mgz,hx,hy\n0,0,0,0\n";
    CHECK_THROWS_AS(read_trace(path.string()), TraceFormatError);

    std::ofstream(path) << "# sts-trace v1\nt,Fhx,Fhy,Fgx,Fgy,Mgz,hx,hy\n"
                           "0,0,0,0,0,0,0,0\n0,0,0,0,0,0,0,0\n";
    CHECK_THROWS_AS(read_trace(path.string()), TraceFormatError);  // non-monotone t

    std::ofstream(path) << "# sts-trace v1\nt,Fhx,Fhy,Fgx,Fgy,Mgz,hx,hy\n0,0,zero,0,0,0,0,0\n";
    CHECK_THROWS_AS(read_trace(path.string()), TraceFormatError);
}

TEST_CASE("trace write/read round trip preserves frames and labels") {
    const fs::path dir = fresh_dir("roundtrip");
    BodyParams body;
    Scenario sc;
    sc.seed = 21;
    const LabeledTrace trace = generate(body, sc, {0.35, 0.75}, {0.45, 1.05});
    const fs::path path = dir / "trace.csv";
    write_trace(path.string(), trace);
    const LabeledTrace back = read_trace(path.string());
    REQUIRE(back.frames.size() == trace.frames.size());
    REQUIRE(back.labels == trace.labels);
    for (std::size_t i = 0; i < trace.frames.size(); ++i) {
        REQUIRE(back.frames[i].t == trace.frames[i].t);
        REQUIRE(back.frames[i].fhy == trace.frames[i].fhy);
        REQUIRE(back.frames[i].fgy == trace.frames[i].fgy);
        REQUIRE(back.frames[i].mgz == trace.frames[i].mgz);
    }
}

TEST_CASE("calibrate_corpus fits from a directory and round-trips phase labels") {
    const fs::path dir = fresh_dir("corpus");
    BodyParams body;
    for (std::uint64_t seed = 1; seed <= 4; ++seed) {
        Scenario sc;
        sc.seed = seed;
        const LabeledTrace t = generate(body, sc, {0.35, 0.75}, {0.45, 1.05});
        write_trace((dir / ("trace_" + std::to_string(seed) + ".csv")).string(), t);
    }
    const auto base = fuzzy::FuzzyConfig::load(kDefaultConfig);
    const auto fitted = calibrate_corpus(dir.string(), base, PreprocessConfig{});
    CHECK(fitted.rules.size() == base.rules.size());

    CHECK_THROWS_AS(calibrate_corpus((dir / "missing").string(), base, PreprocessConfig{}),
                    ConfigError);
    const fs::path empty = fresh_dir("corpus_empty");
    CHECK_THROWS_AS(calibrate_corpus(empty.string(), base, PreprocessConfig{}), InsufficientData);
}

TEST_CASE("export_plots writes tidy per-figure files") {
    const fs::path dir = fresh_dir("plots");
    const auto fz = fuzzy::FuzzyConfig::load(kDefaultConfig);
    RunConfig cfg = base_config(dir);
    const RunReport report = run(cfg, fz);
    export_plots(report.log_path, (dir / "plots").string());

    for (const char* name : {"nu1.csv", "nu2.csv", "forces.csv"}) {
        CHECK(fs::exists(dir / "plots" / name));
    }
    std::ifstream nu1(dir / "plots" / "nu1.csv");
    std::string header;
    std::getline(nu1, header);
    CHECK(header == "t,nu1_raw,nu1_used");
    // The running max dominates the raw signal on every row.
    std::string line;
    int rows = 0;
    while (std::getline(nu1, line)) {
        const auto c1 = line.find(',');
        const auto c2 = line.find(',', c1 + 1);
        const double raw = std::stod(line.substr(c1 + 1, c2 - c1 - 1));
        const double used = std::stod(line.substr(c2 + 1));
        REQUIRE(used >= raw - 1e-12);
        ++rows;
    }
    CHECK(rows > 400);

    // An empty log still yields headers-only plot files.
    const fs::path empty_log = dir / "empty_log.csv";
    write_log(empty_log.string(), {});
    export_plots(empty_log.string(), (dir / "plots_empty").string());
    CHECK(slurp(dir / "plots_empty" / "nu2.csv") == "t,nu2\n");
}

TEST_CASE("CLI exit codes follow the documented contract") {
    const fs::path dir = fresh_dir("cli");
    CHECK(run_cli("run --scenario nominal --seed 1 --out " + (dir / "run").string()) == 0);

    const fs::path bad_trace = dir / "bad.csv";
    std::ofstream(bad_trace) << "garbage\n";
    CHECK(run_cli("replay --trace " + bad_trace.string() + " --out " + (dir / "rep").string()) ==
          3);

    const fs::path bad_cfg = dir / "bad.json";
    std::ofstream(bad_cfg) << "{ nope";
    CHECK(run_cli("run --config " + bad_cfg.string()) == 2);

    // Calibration on a corpus with no usable traces reports missing data.
    const fs::path empty = dir / "empty_corpus";
    fs::create_directories(empty);
    CHECK(run_cli("calibrate --corpus " + empty.string() + " --out-config " +
                  (dir / "cal.json").string()) == 4);
}
