#include "sts/fuzzy.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace sts::fuzzy {

namespace {

double ramp_up(double x, double a, double b) {
    if (x >= b) return 1.0;
    if (x <= a) return 0.0;
    return (x - a) / (b - a);
}

double ramp_down(double x, double a, double b) {
    if (x <= a) return 1.0;
    if (x >= b) return 0.0;
    return (b - x) / (b - a);
}

}  // namespace

const char* shape_name(Shape s) {
    switch (s) {
        case Shape::Triangular: return "triangular";
        case Shape::Trapezoidal: return "trapezoidal";
        case Shape::LeftShoulder: return "left_shoulder";
        case Shape::RightShoulder: return "right_shoulder";
    }
    return "?";
}

Shape shape_from_name(const std::string& name) {
    for (Shape s : {Shape::Triangular, Shape::Trapezoidal, Shape::LeftShoulder,
                    Shape::RightShoulder}) {
        if (name == shape_name(s)) return s;
    }
    throw ConfigError("unknown membership shape: " + name);
}

double MembershipFunction::grade(double x) const {
    const auto& p = points;
    switch (shape) {
        case Shape::Triangular:
            return std::min(ramp_up(x, p[0], p[1]), ramp_down(x, p[1], p[2]));
        case Shape::Trapezoidal:
            return std::min(ramp_up(x, p[0], p[1]), ramp_down(x, p[2], p[3]));
        case Shape::LeftShoulder:
            return ramp_down(x, p[0], p[1]);
        case Shape::RightShoulder:
            return ramp_up(x, p[0], p[1]);
    }
    return 0.0;
}

double MembershipFunction::core_low() const {
    switch (shape) {
        case Shape::Triangular: return points[1];
        case Shape::Trapezoidal: return points[1];
        case Shape::LeftShoulder: return -HUGE_VAL;
        case Shape::RightShoulder: return points[1];
    }
    return 0.0;
}

double MembershipFunction::core_high() const {
    switch (shape) {
        case Shape::Triangular: return points[1];
        case Shape::Trapezoidal: return points[2];
        case Shape::LeftShoulder: return points[0];
        case Shape::RightShoulder: return HUGE_VAL;
    }
    return 0.0;
}

void MembershipFunction::validate() const {
    std::size_t expected = 0;
    switch (shape) {
        case Shape::Triangular: expected = 3; break;
        case Shape::Trapezoidal: expected = 4; break;
        case Shape::LeftShoulder:
        case Shape::RightShoulder: expected = 2; break;
    }
    if (points.size() != expected) {
        throw ConfigError("term '" + label + "': expected " + std::to_string(expected) +
                          " breakpoints, got " + std::to_string(points.size()));
    }
    for (std::size_t i = 1; i < points.size(); ++i) {
        if (points[i] < points[i - 1]) {
            throw ConfigError("term '" + label + "': breakpoints must be nondecreasing");
        }
    }
}

MembershipFunction MembershipFunction::triangular(std::string label, double a, double b, double c) {
    return {Shape::Triangular, {a, b, c}, std::move(label)};
}
MembershipFunction MembershipFunction::trapezoidal(std::string label, double a, double b, double c,
                                                   double d) {
    return {Shape::Trapezoidal, {a, b, c, d}, std::move(label)};
}
MembershipFunction MembershipFunction::left_shoulder(std::string label, double a, double b) {
    return {Shape::LeftShoulder, {a, b}, std::move(label)};
}
MembershipFunction MembershipFunction::right_shoulder(std::string label, double a, double b) {
    return {Shape::RightShoulder, {a, b}, std::move(label)};
}

const MembershipFunction* LinguisticVariable::find(std::string_view label) const {
    for (const auto& t : terms) {
        if (t.label == label) return &t;
    }
    return nullptr;
}

void LinguisticVariable::validate() const {
    if (!(hi > lo)) throw ConfigError("variable '" + name + "': empty universe");
    if (terms.empty()) throw ConfigError("variable '" + name + "': no terms");
    for (const auto& t : terms) t.validate();
    // Full coverage, sampled.
    const int n = 512;
    for (int i = 0; i <= n; ++i) {
        const double x = lo + (hi - lo) * i / n;
        double best = 0.0;
        for (const auto& t : terms) best = std::max(best, t.grade(x));
        if (best <= 0.0) {
            throw ConfigError("variable '" + name + "': coverage gap near " + std::to_string(x));
        }
    }
}

const LinguisticVariable* FuzzyConfig::input(std::string_view name) const {
    for (const auto& v : inputs) {
        if (v.name == name) return &v;
    }
    return nullptr;
}

const LinguisticVariable* FuzzyConfig::output(std::string_view name) const {
    for (const auto& v : outputs) {
        if (v.name == name) return &v;
    }
    return nullptr;
}

void FuzzyConfig::validate() const {
    if (outputs.size() != 2) throw ConfigError("config must declare exactly two outputs");
    if (rules.empty()) throw ConfigError("rule base is empty");
    if (centroid_resolution < 100) throw ConfigError("centroid_resolution too small");
    if (defuzzification != "centroid") {
        throw ConfigError("unknown defuzzification method: " + defuzzification);
    }
    for (const auto& v : inputs) v.validate();
    for (const auto& v : outputs) v.validate();
    for (const auto& r : rules) {
        if (r.weight <= 0.0 || r.weight > 1.0) throw ConfigError("rule weight out of (0,1]");
        if (r.antecedents.empty()) throw ConfigError("rule with no antecedents");
        for (const auto& a : r.antecedents) {
            const auto* v = input(a.variable);
            if (!v) throw ConfigError("rule references unknown input: " + a.variable);
            if (!v->find(a.term)) {
                throw ConfigError("rule references unknown term " + a.variable + "=" + a.term);
            }
        }
        const auto* ov = output(r.consequent.variable);
        if (!ov) throw ConfigError("rule references unknown output: " + r.consequent.variable);
        if (!ov->find(r.consequent.term)) {
            throw ConfigError("rule references unknown output term " + r.consequent.term);
        }
    }
}

double feature_value(const PosturalFeatures& f, std::string_view variable) {
    if (variable == "fhx") return f.fhx;
    if (variable == "fhy") return f.fhy;
    if (variable == "fgx") return f.fgx;
    if (variable == "fgy") return f.fgy;
    if (variable == "dfhy") return f.dfhy;
    if (variable == "dfgy") return f.dfgy;
    if (variable == "cop_x") return f.cop_x;
    if (variable == "cop_v") return f.cop_v;
    throw ConfigError("unknown feature variable: " + std::string(variable));
}

InferenceEngine::InferenceEngine(FuzzyConfig cfg) : cfg_(std::move(cfg)) {
    cfg_.validate();
    for (std::size_t o = 0; o < 2; ++o) {
        const auto& out = cfg_.outputs[o];
        auto& plan = plans_[o];
        const int n = cfg_.centroid_resolution;
        const double w = (out.hi - out.lo) / n;
        plan.bin_centers.resize(n);
        for (int i = 0; i < n; ++i) plan.bin_centers[i] = out.lo + (i + 0.5) * w;
        plan.term_grades.resize(out.terms.size());
        for (std::size_t t = 0; t < out.terms.size(); ++t) {
            plan.term_grades[t].resize(n);
            for (int i = 0; i < n; ++i) {
                plan.term_grades[t][i] = out.terms[t].grade(plan.bin_centers[i]);
            }
        }
        for (std::size_t r = 0; r < cfg_.rules.size(); ++r) {
            if (cfg_.rules[r].consequent.variable != out.name) continue;
            const auto* term = out.find(cfg_.rules[r].consequent.term);
            plan.rules.emplace_back(r, static_cast<std::size_t>(term - out.terms.data()));
        }
    }
}

FuzzyOutputs InferenceEngine::infer(const PosturalFeatures& f) const {
    // Rule activations: AND = min over antecedent grades, scaled by weight.
    std::vector<double> activation(cfg_.rules.size(), 0.0);
    for (std::size_t r = 0; r < cfg_.rules.size(); ++r) {
        const auto& rule = cfg_.rules[r];
        double act = 1.0;
        for (const auto& a : rule.antecedents) {
            const auto* var = cfg_.input(a.variable);
            const double x = feature_value(f, a.variable);
            act = std::min(act, var->find(a.term)->grade(x));
            if (act == 0.0) break;
        }
        activation[r] = act * rule.weight;
    }

    FuzzyOutputs out;
    for (std::size_t o = 0; o < 2; ++o) {
        const auto& plan = plans_[o];
        std::vector<double> term_act(plan.term_grades.size(), 0.0);
        bool any = false;
        for (const auto& [r, t] : plan.rules) {
            term_act[t] = std::max(term_act[t], activation[r]);
            if (activation[r] > 0.0) any = true;
        }
        double value = 0.0;
        bool active = false;
        if (any) {
            double num = 0.0, den = 0.0;
            const std::size_t n = plan.bin_centers.size();
            for (std::size_t i = 0; i < n; ++i) {
                double mu = 0.0;
                for (std::size_t t = 0; t < term_act.size(); ++t) {
                    if (term_act[t] == 0.0) continue;
                    mu = std::max(mu, std::min(term_act[t], plan.term_grades[t][i]));
                }
                num += plan.bin_centers[i] * mu;
                den += mu;
            }
            if (den > 0.0) {
                value = num / den;
                active = true;
            }
        }
        if (o == 0) {
            out.nu1 = value;
            out.nu1_active = active;
        } else {
            out.nu2 = value;
            out.nu2_active = active;
        }
    }
    return out;
}

FuzzyOutputs infer(const FuzzyConfig& cfg, const PosturalFeatures& f) {
    return InferenceEngine(cfg).infer(f);
}

Phase phase_from_nu1(double nu1) {
    if (nu1 < 5.0) return Phase::Sitted;
    if (nu1 < 15.0) return Phase::PreAcceleration;
    if (nu1 < 25.0) return Phase::Acceleration;
    if (nu1 < 35.0) return Phase::StartRising;
    return Phase::Rising;
}

// --- serialization -----------------------------------------------------------

using nlohmann::json;

namespace {

json term_to_json(const MembershipFunction& t) {
    return {{"label", t.label}, {"shape", shape_name(t.shape)}, {"points", t.points}};
}

MembershipFunction term_from_json(const json& j) {
    MembershipFunction t;
    t.label = j.at("label").get<std::string>();
    t.shape = shape_from_name(j.at("shape").get<std::string>());
    t.points = j.at("points").get<std::vector<double>>();
    return t;
}

json var_to_json(const LinguisticVariable& v) {
    json terms = json::array();
    for (const auto& t : v.terms) terms.push_back(term_to_json(t));
    return {{"name", v.name}, {"unit", v.unit}, {"range", {v.lo, v.hi}}, {"terms", terms}};
}

LinguisticVariable var_from_json(const json& j) {
    LinguisticVariable v;
    v.name = j.at("name").get<std::string>();
    v.unit = j.value("unit", "");
    v.lo = j.at("range").at(0).get<double>();
    v.hi = j.at("range").at(1).get<double>();
    for (const auto& t : j.at("terms")) v.terms.push_back(term_from_json(t));
    return v;
}

}  // namespace

std::string FuzzyConfig::to_json_string() const {
    json j;
    j["schema_version"] = schema_version;
    j["defuzzification"] = defuzzification;
    j["centroid_resolution"] = centroid_resolution;
    j["inputs"] = json::array();
    for (const auto& v : inputs) j["inputs"].push_back(var_to_json(v));
    j["outputs"] = json::array();
    for (const auto& v : outputs) j["outputs"].push_back(var_to_json(v));
    j["rules"] = json::array();
    for (const auto& r : rules) {
        json jif = json::object();
        for (const auto& a : r.antecedents) jif[a.variable] = a.term;
        j["rules"].push_back(
            {{"if", jif}, {"then", {{r.consequent.variable, r.consequent.term}}}, {"weight", r.weight}});
    }
    return j.dump(2) + "\n";
}

FuzzyConfig FuzzyConfig::from_json_string(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("fuzzy config parse error: ") + e.what());
    }
    try {
        FuzzyConfig cfg;
        cfg.schema_version = j.at("schema_version").get<int>();
        if (cfg.schema_version != 1) {
            throw ConfigError("unsupported schema_version " + std::to_string(cfg.schema_version));
        }
        cfg.defuzzification = j.value("defuzzification", "centroid");
        cfg.centroid_resolution = j.value("centroid_resolution", 10000);
        for (const auto& v : j.at("inputs")) cfg.inputs.push_back(var_from_json(v));
        for (const auto& v : j.at("outputs")) cfg.outputs.push_back(var_from_json(v));
        for (const auto& r : j.at("rules")) {
            FuzzyRule rule;
            for (const auto& [var, term] : r.at("if").items()) {
                rule.antecedents.push_back({var, term.get<std::string>()});
            }
            const auto& then = r.at("then");
            rule.consequent.variable = then.items().begin().key();
            rule.consequent.term = then.items().begin().value().get<std::string>();
            rule.weight = r.value("weight", 1.0);
            cfg.rules.push_back(std::move(rule));
        }
        cfg.validate();
        return cfg;
    } catch (const json::exception& e) {
        throw ConfigError(std::string("fuzzy config schema error: ") + e.what());
    }
}

FuzzyConfig FuzzyConfig::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open fuzzy config: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return from_json_string(ss.str());
}

void FuzzyConfig::save(const std::string& path) const {
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot write fuzzy config: " + path);
    out << to_json_string();
}

}  // namespace sts::fuzzy
