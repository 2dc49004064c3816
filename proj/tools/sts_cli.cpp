#include <cstdio>
#include <exception>
#include <filesystem>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "sts/harness.hpp"

namespace {

// Exit codes: 0 ok, 1 incomplete run, 2 config error, 3 trace format error,
// 4 insufficient calibration data.
enum ExitCode { kOk = 0, kIncomplete = 1, kConfig = 2, kTrace = 3, kData = 4 };

#ifndef STS_DEFAULT_FUZZY
#define STS_DEFAULT_FUZZY "data/default_supervisor.json"
#endif

struct CommonOpts {
    std::string config_path;
    std::string fuzzy_path = STS_DEFAULT_FUZZY;
    std::string out_dir;
    std::string scenario;
    long long seed = -1;
};

sts::RunConfig make_run_config(const CommonOpts& o) {
    sts::RunConfig cfg;
    if (!o.config_path.empty()) cfg = sts::RunConfig::load(o.config_path);
    if (cfg.fuzzy_config_path.empty()) cfg.fuzzy_config_path = o.fuzzy_path;
    if (!o.out_dir.empty()) cfg.output_dir = o.out_dir;
    if (!o.scenario.empty()) cfg.scenario.kind = sts::scenario_from_name(o.scenario);
    if (o.seed >= 0) cfg.scenario.seed = static_cast<std::uint64_t>(o.seed);
    return cfg;
}

int run_one(const sts::RunConfig& cfg) {
    const auto fuzzy = sts::fuzzy::FuzzyConfig::load(cfg.fuzzy_config_path);
    const sts::RunReport report = sts::run(cfg, fuzzy);
    std::printf("%s", report.to_json_string().c_str());
    return report.ok() ? kOk : kIncomplete;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Sit-to-stand assistance supervisor harness"};
    app.require_subcommand(1);

    CommonOpts opts;
    std::string trace_path, log_path, corpus_dir, calib_out;
    int batch_seeds = 20;
    std::vector<std::string> batch_scenarios = {"nominal", "perturb_forward", "perturb_backward",
                                                "abort", "noisy"};

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", opts.config_path, "Run config JSON");
        sub->add_option("--fuzzy", opts.fuzzy_path, "Fuzzy supervisor config JSON");
        sub->add_option("--out", opts.out_dir, "Output directory");
        sub->add_option("--seed", opts.seed, "Scenario seed");
    };

    auto* cmd_run = app.add_subcommand("run", "Closed-loop run against the synthetic human");
    add_common(cmd_run);
    cmd_run->add_option("--scenario", opts.scenario,
                        "nominal|perturb_forward|perturb_backward|abort|noisy");

    auto* cmd_replay = app.add_subcommand("replay", "Open-loop replay of a recorded trace");
    add_common(cmd_replay);
    cmd_replay->add_option("--trace", trace_path, "Trace CSV to replay")->required();

    auto* cmd_cal = app.add_subcommand("calibrate", "Fit supervisor breakpoints from a corpus");
    cmd_cal->add_option("--corpus", corpus_dir, "Directory of labeled trace CSVs")->required();
    cmd_cal->add_option("--base", opts.fuzzy_path, "Base fuzzy config");
    cmd_cal->add_option("--out-config", calib_out, "Calibrated config path")->required();

    auto* cmd_plots = app.add_subcommand("export-plots", "Tidy per-figure CSVs from a run log");
    cmd_plots->add_option("--log", log_path, "Data-B log CSV")->required();
    cmd_plots->add_option("--out", opts.out_dir, "Output directory")->required();

    auto* cmd_batch = app.add_subcommand("batch", "Run scenarios x seeds");
    add_common(cmd_batch);
    cmd_batch->add_option("--scenarios", batch_scenarios, "Scenario kinds");
    cmd_batch->add_option("--seeds", batch_seeds, "Number of seeds per scenario");

    CLI11_PARSE(app, argc, argv);

    try {
        if (cmd_run->parsed()) {
            return run_one(make_run_config(opts));
        }
        if (cmd_replay->parsed()) {
            sts::RunConfig cfg = make_run_config(opts);
            cfg.trace_path = trace_path;
            return run_one(cfg);
        }
        if (cmd_cal->parsed()) {
            const auto base = sts::fuzzy::FuzzyConfig::load(opts.fuzzy_path);
            const auto fitted = sts::calibrate_corpus(corpus_dir, base, sts::PreprocessConfig{});
            fitted.save(calib_out);
            for (const auto& var : fitted.inputs) {
                std::printf("%-6s", var.name.c_str());
                for (const auto& term : var.terms) {
                    std::printf("  %s[", term.label.c_str());
                    for (std::size_t i = 0; i < term.points.size(); ++i) {
                        std::printf("%s%.4g", i ? " " : "", term.points[i]);
                    }
                    std::printf("]");
                }
                std::printf("\n");
            }
            std::printf("wrote %s\n", calib_out.c_str());
            return kOk;
        }
        if (cmd_plots->parsed()) {
            sts::export_plots(log_path, opts.out_dir);
            return kOk;
        }
        if (cmd_batch->parsed()) {
            const auto fuzzy = sts::fuzzy::FuzzyConfig::load(opts.fuzzy_path);
            int failures = 0;
            for (const auto& name : batch_scenarios) {
                for (int s = 0; s < batch_seeds; ++s) {
                    sts::RunConfig cfg = make_run_config(opts);
                    cfg.scenario.kind = sts::scenario_from_name(name);
                    cfg.scenario.seed = static_cast<std::uint64_t>(s + 1);
                    const sts::RunReport report = sts::run(cfg, fuzzy);
                    std::printf("%s seed=%d status=%s peak_fh=%.1f stab=%d\n", name.c_str(), s + 1,
                                report.status.c_str(), report.peak_fh,
                                report.stabilization_episodes);
                    if (!report.ok()) ++failures;
                }
            }
            return failures == 0 ? kOk : kIncomplete;
        }
    } catch (const sts::InsufficientData& e) {
        std::fprintf(stderr, "error: insufficient-data: %s\n", e.what());
        return kData;
    } catch (const sts::TraceFormatError& e) {
        std::fprintf(stderr, "error: trace-format: %s\n", e.what());
        return kTrace;
    } catch (const sts::ConfigError& e) {
        std::fprintf(stderr, "error: config: %s\n", e.what());
        return kConfig;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kConfig;
    }
    return kOk;
}
