#include <algorithm>
#include <array>
#include <cmath>
#include <map>

#include "sts/fuzzy.hpp"

namespace sts::fuzzy {

namespace {

constexpr std::array<Phase, 5> kSupervisorPhases = {
    Phase::Sitted, Phase::PreAcceleration, Phase::Acceleration, Phase::StartRising,
    Phase::Rising};

// Nearest-rank percentile with linear interpolation; input gets sorted.
double percentile(std::vector<double>& v, double p) {
    std::sort(v.begin(), v.end());
    const double idx = p * static_cast<double>(v.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(idx));
    const auto hi = static_cast<std::size_t>(std::ceil(idx));
    const double frac = idx - static_cast<double>(lo);
    return v[lo] + frac * (v[hi] - v[lo]);
}

struct PhaseStats {
    double p25 = 0.0, p50 = 0.0, p90 = 0.0;
};

// Five terms, one per phase population sorted by median. Labels are reused
// from the base variable in universe order, so the lowest-median phase lands
// on the first (EL-most) label. Adjacent terms cross-fade over the zone from
// the lower phase's 90th percentile to the upper phase's 25th percentile —
// the stretch where the two populations genuinely overlap.
std::vector<MembershipFunction> fit_five_terms(const LinguisticVariable& base,
                                               std::vector<PhaseStats> stats) {
    std::sort(stats.begin(), stats.end(),
              [](const PhaseStats& a, const PhaseStats& b) { return a.p50 < b.p50; });
    const double eps = 1e-9 * (base.hi - base.lo);
    // Cross-fade zone k sits between phase k-1 and phase k.
    std::vector<double> zone_lo(5), zone_hi(5);
    for (std::size_t k = 1; k < 5; ++k) {
        zone_lo[k] = stats[k - 1].p90;
        if (k > 1) zone_lo[k] = std::max(zone_lo[k], zone_hi[k - 1] + eps);
        zone_hi[k] = std::max({stats[k].p25, zone_lo[k] + eps});
    }
    std::vector<MembershipFunction> terms;
    terms.push_back(MembershipFunction::left_shoulder(base.terms[0].label, zone_lo[1],
                                                      zone_hi[1]));
    for (std::size_t k = 1; k < 4; ++k) {
        terms.push_back(MembershipFunction::trapezoidal(base.terms[k].label, zone_lo[k],
                                                        zone_hi[k], zone_lo[k + 1],
                                                        zone_hi[k + 1]));
    }
    terms.push_back(MembershipFunction::right_shoulder(base.terms[4].label, zone_lo[4],
                                                       zone_hi[4]));
    return terms;
}

// Three terms from whole-corpus percentiles.
std::vector<MembershipFunction> fit_three_terms(const LinguisticVariable& base,
                                                std::vector<double> all) {
    const double eps = 1e-9 * (base.hi - base.lo);
    auto q = [&](double p) { return percentile(all, p); };
    const double q10 = q(0.10), q20 = q(0.20), q30 = q(0.30), q40 = q(0.40);
    const double q60 = q(0.60), q70 = q(0.70), q80 = q(0.80), q90 = q(0.90);
    std::vector<MembershipFunction> terms;
    terms.push_back(MembershipFunction::left_shoulder(base.terms[0].label, q10,
                                                      std::max(q30, q10 + eps)));
    terms.push_back(MembershipFunction::trapezoidal(
        base.terms[1].label, std::min(q20, q30), std::max(q30, q40),
        std::max({q30, q40, q60}), std::max({q30, q40, q60, q80})));
    terms.push_back(MembershipFunction::right_shoulder(base.terms[2].label,
                                                       std::min(q70, q90 - eps), q90));
    return terms;
}

}  // namespace

FuzzyConfig calibrate(const std::vector<LabeledTrace>& traces, const FuzzyConfig& base,
                      const PreprocessConfig& pre) {
    base.validate();
    if (traces.empty()) throw InsufficientData("calibrate: no traces");

    // Phase-conditioned feature populations, one per input variable.
    std::map<std::string, std::map<Phase, std::vector<double>>> pop;
    for (const auto& trace : traces) {
        if (trace.labels.size() != trace.frames.size()) {
            throw InsufficientData("calibrate: trace without per-sample labels");
        }
        Preprocessor pp(pre);
        for (std::size_t i = 0; i < trace.frames.size(); ++i) {
            const PosturalFeatures f = pp.step(trace.frames[i]);
            Phase phase = trace.labels[i];
            if (phase == Phase::Standing) continue;  // not a supervisor phase
            for (const auto& var : base.inputs) {
                pop[var.name][phase].push_back(feature_value(f, var.name));
            }
        }
    }

    for (Phase p : kSupervisorPhases) {
        const auto& anyvar = base.inputs.front().name;
        const auto it = pop[anyvar].find(p);
        const std::size_t n = it == pop[anyvar].end() ? 0 : it->second.size();
        if (n < 10) {
            throw InsufficientData(std::string("calibrate: phase '") + phase_name(p) +
                                   "' has only " + std::to_string(n) + " samples");
        }
    }

    FuzzyConfig out = base;
    for (auto& var : out.inputs) {
        auto& by_phase = pop[var.name];
        if (var.terms.size() == 5) {
            std::vector<PhaseStats> stats;
            for (Phase p : kSupervisorPhases) {
                auto& v = by_phase[p];
                PhaseStats s;
                s.p25 = percentile(v, 0.25);
                s.p50 = percentile(v, 0.50);
                s.p90 = percentile(v, 0.90);
                stats.push_back(s);
            }
            var.terms = fit_five_terms(var, std::move(stats));
        } else if (var.terms.size() == 3) {
            std::vector<double> all;
            for (auto& [p, v] : by_phase) all.insert(all.end(), v.begin(), v.end());
            var.terms = fit_three_terms(var, std::move(all));
        } else {
            throw ConfigError("calibrate: variable '" + var.name +
                              "' must have 3 or 5 terms, has " +
                              std::to_string(var.terms.size()));
        }
    }
    out.validate();
    return out;
}

}  // namespace sts::fuzzy
