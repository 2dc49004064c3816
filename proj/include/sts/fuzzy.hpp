#pragma once

#include <array>
#include <string>
#include <string_view>
#include <vector>

#include "sts/preprocess.hpp"
#include "sts/types.hpp"

namespace sts::fuzzy {

enum class Shape { Triangular, Trapezoidal, LeftShoulder, RightShoulder };

const char* shape_name(Shape s);
Shape shape_from_name(const std::string& name);

/// Piecewise-linear membership function. Breakpoint counts per shape:
/// triangular 3, trapezoidal 4, shoulders 2. Shoulders saturate at 1
/// beyond their outermost breakpoint.
struct MembershipFunction {
    Shape shape = Shape::Triangular;
    std::vector<double> points;
    std::string label;

    double grade(double x) const;
    double core_low() const;
    double core_high() const;
    void validate() const;

    static MembershipFunction triangular(std::string label, double a, double b, double c);
    static MembershipFunction trapezoidal(std::string label, double a, double b, double c, double d);
    static MembershipFunction left_shoulder(std::string label, double a, double b);
    static MembershipFunction right_shoulder(std::string label, double a, double b);
};

struct LinguisticVariable {
    std::string name;
    std::string unit;
    double lo = 0.0;
    double hi = 1.0;
    std::vector<MembershipFunction> terms;

    const MembershipFunction* find(std::string_view label) const;
    void validate() const;
};

struct RuleClause {
    std::string variable;
    std::string term;
};

/// Antecedents are combined with AND (min); activation is scaled by weight.
struct FuzzyRule {
    std::vector<RuleClause> antecedents;
    RuleClause consequent;
    double weight = 1.0;
};

struct FuzzyConfig {
    int schema_version = 1;
    std::string defuzzification = "centroid";
    int centroid_resolution = 10000;
    std::vector<LinguisticVariable> inputs;
    std::vector<LinguisticVariable> outputs;  // [0] = phase, [1] = stability
    std::vector<FuzzyRule> rules;

    const LinguisticVariable* input(std::string_view name) const;
    const LinguisticVariable* output(std::string_view name) const;
    void validate() const;

    static FuzzyConfig load(const std::string& path);
    void save(const std::string& path) const;
    std::string to_json_string() const;
    static FuzzyConfig from_json_string(const std::string& text);
};

/// The supervisor's two crisp outputs. An inactive flag means no rule fired
/// for that output (ZeroActivation); the caller substitutes the neutral
/// value (hold-last for nu1, zero for nu2).
struct FuzzyOutputs {
    double nu1 = 0.0;
    double nu2 = 0.0;
    bool nu1_active = false;
    bool nu2_active = false;
};

double feature_value(const PosturalFeatures& f, std::string_view variable);

/// Mamdani min/max inference with centroid defuzzification over a fixed
/// discretization of each output universe. Term grades at the bin midpoints
/// are precomputed once per config.
class InferenceEngine {
public:
    explicit InferenceEngine(FuzzyConfig cfg);

    FuzzyOutputs infer(const PosturalFeatures& f) const;
    const FuzzyConfig& config() const { return cfg_; }

private:
    struct OutputPlan {
        std::vector<std::vector<double>> term_grades;  // [term][bin]
        std::vector<double> bin_centers;
        // rule index -> term index, for rules targeting this output
        std::vector<std::pair<std::size_t, std::size_t>> rules;  // (rule, term)
    };

    FuzzyConfig cfg_;
    std::array<OutputPlan, 2> plans_;
};

/// One-shot convenience wrapper around InferenceEngine.
FuzzyOutputs infer(const FuzzyConfig& cfg, const PosturalFeatures& f);

/// Decode a phase score into the nearest phase band.
Phase phase_from_nu1(double nu1);

/// Refit the input-variable breakpoints of `base` from phase-conditioned
/// percentiles of the given labeled traces. Rule base and output variables
/// are kept as shipped. Throws InsufficientData if any supervisor phase has
/// fewer than 10 samples across the corpus.
FuzzyConfig calibrate(const std::vector<LabeledTrace>& traces, const FuzzyConfig& base,
                      const PreprocessConfig& pre = {});

}  // namespace sts::fuzzy
