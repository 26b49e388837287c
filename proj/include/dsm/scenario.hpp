#pragma once

#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "dsm/decision.hpp"
#include "dsm/discounting.hpp"
#include "dsm/qualitative.hpp"

namespace dsm {

// A mass entry in a scenario file: a plain number, a [lo,hi] pair, or a
// label token "L<k>" (the latter only when the scenario declares a label set).
using MassValue = std::variant<double, Interval, int>;

enum class MassKind { Precise, IntervalValued, Labelled };

struct ScenarioFrameDecl {
    std::string name;
    std::vector<std::string> atoms;      // plain frame
    std::vector<std::string> factors;    // product frame (names of declared frames)
    std::vector<std::string> atom_names; // optional relabeling of product atoms
};

struct ScenarioSource {
    std::string name;
    std::string frame; // declared frame the masses live on
    std::vector<std::pair<std::string, MassValue>> masses; // subset expr -> value
    std::optional<double> alpha; // reliability factor
    std::optional<double> beta;  // importance factor
};

struct ScenarioPipeline {
    enum class Discount { None, Reliability, Importance };
    std::string name;
    std::vector<std::string> sources;
    FusionRule rule = FusionRule::PCR6;
    Discount discount = Discount::None;
};

struct ScenarioHypothesis {
    std::string name;
    std::string set; // subset expression on the main frame
};

struct ScenarioComparison {
    std::vector<std::string> pipelines;
    std::string key; // hypothesis name driving the preference
};

// Expected-values block driving `fuse tables`.
struct ExpectedTables {
    double tolerance = 1e-4;

    struct Pipeline {
        std::map<std::string, double> fused;
        std::map<std::string, Interval> fused_interval;
        std::map<std::string, double> fused_refined; // refined label index per subset
        std::map<std::string, int> fused_crude;      // crude label per subset
        std::optional<bool> crude_normalized;
        std::map<std::string, double> dsmp; // per atom
        std::map<std::string, double> betp;
        std::map<std::string, Interval> dsmp_interval; // clamped values
        std::map<std::string, double> dsmp_refined;
        std::map<std::string, int> dsmp_crude;
        std::optional<double> prenormal_total;
        // discounted input masses: source name -> subset expr -> value
        std::map<std::string, std::map<std::string, double>> discounted;
        // hypothesis name -> expected [bel, pl] (clamped range for intervals)
        std::map<std::string, std::pair<double, double>> hypotheses;
        // hypothesis name -> criterion name -> accept|reject|undecidable
        std::map<std::string, std::map<std::string, std::string>> decisions;
        std::map<std::string, double> tolerances; // per-table override
    };
    std::map<std::string, Pipeline> pipelines;
    std::optional<std::string> preferred; // expected comparison winner
};

struct Scenario {
    std::string name;
    std::vector<ScenarioFrameDecl> frames;
    std::optional<std::string> main_frame; // defaults to the unique top-level frame
    double epsilon = kDefaultEpsilon;
    std::optional<int> label_set; // interior label count
    std::vector<ScenarioSource> sources;
    std::vector<ScenarioPipeline> pipelines;
    std::vector<ScenarioHypothesis> hypotheses;
    std::optional<ScenarioComparison> comparison;
    std::optional<ExpectedTables> expected;
};

// Scenario with frames built and every reference resolved.
struct CompiledScenario {
    Scenario scenario;
    std::map<std::string, FramePtr> frames;
    FramePtr main_frame;

    struct Source {
        std::string name;
        FramePtr frame;
        MassKind kind = MassKind::Precise;
        std::optional<MassFunction> precise;
        std::optional<IntervalMassFunction> interval;
        LabelMassMap labels;
        double alpha = 1.0;
        double beta = 1.0;
    };
    std::map<std::string, Source> sources;
    std::vector<DecisionHypothesis> hypotheses;

    const Source& source(const std::string& name) const;
    Subset parse_subset(const std::string& expr) const; // on the main frame
};

// Parse + validate a scenario document. Syntax errors carry line/column;
// semantic errors name the offending element.
Scenario parse_scenario_text(const std::string& text, const std::string& origin = "<string>");
Scenario parse_scenario(const std::string& path);

// Build frames, resolve subsets, validate every source's normalization.
CompiledScenario compile(const Scenario& s);

// Canonical JSON serialization; parse(serialize(parse(f))) is a fixed point.
std::string serialize_scenario(const Scenario& s);

// Subset expression helper: "a+b+c" or the reserved token "It".
Subset parse_subset_expr(const FramePtr& frame, const std::string& expr);

} // namespace dsm
