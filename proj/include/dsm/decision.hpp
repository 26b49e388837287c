#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "dsm/intervals.hpp"
#include "dsm/mass.hpp"
#include "dsm/transforms.hpp"

namespace dsm {

// Named decision-support hypothesis (e.g. the prudent "evacuate" set).
struct DecisionHypothesis {
    std::string name;
    Subset set;
    std::string polarity = "accept"; // what accepting the hypothesis means

    DecisionHypothesis(std::string name_, Subset set_, std::string polarity_ = "accept");
};

enum class DecisionOutcome { Accept, Reject, Undecidable };

const char* to_string(DecisionOutcome o);

// Bel/Pl/Delta of a hypothesis and its complement, the transform
// probabilities, and the verdict under each criterion:
//   max-Bel:  bel(H) vs bel(~H)
//   max-Pl:   pl(H) vs pl(~H)
//   max-DSmP: dsmp(H) vs 0.5
// Ties (and the vacuous [0,1] range) are Undecidable.
struct HypothesisEvaluation {
    std::string name;
    double bel = 0.0, pl = 0.0, delta = 0.0;
    double bel_complement = 0.0, pl_complement = 0.0;
    double dsmp = 0.0, betp = 0.0;
    DecisionOutcome by_bel = DecisionOutcome::Undecidable;
    DecisionOutcome by_pl = DecisionOutcome::Undecidable;
    DecisionOutcome by_dsmp = DecisionOutcome::Undecidable;
};

std::vector<HypothesisEvaluation> evaluate(const MassFunction& m,
                                           std::span<const DecisionHypothesis> hypotheses,
                                           double eps = kDefaultEpsilon);

// Interval counterpart. The probability range of H is [bel.lo, pl.hi]
// clamped to [0,1]; max-Bel/max-Pl compare range ends against the
// complement's (no dominance means Undecidable), max-DSmP requires the whole
// dsmp range on one side of 0.5.
struct IntervalHypothesisEvaluation {
    std::string name;
    Interval bel, pl;       // unclamped
    Interval range;         // clamped [bel.lo, pl.hi]
    Interval range_complement;
    Interval dsmp;          // clamped singleton sum
    DecisionOutcome by_bel = DecisionOutcome::Undecidable;
    DecisionOutcome by_pl = DecisionOutcome::Undecidable;
    DecisionOutcome by_dsmp = DecisionOutcome::Undecidable;
};

std::vector<IntervalHypothesisEvaluation> evaluate(const IntervalMassFunction& m,
                                                   std::span<const DecisionHypothesis> hypotheses,
                                                   double eps = kDefaultEpsilon);

// Precision/informativeness comparison of fused subsystems (the Q2 logic).
struct SubsystemComparison {
    struct Entry {
        std::string name;
        std::vector<double> delta_by_hypothesis; // same order as `hypotheses`
        double dsmp_entropy = 0.0;
    };
    std::vector<std::string> hypotheses;
    std::vector<Entry> entries;
    std::string key_hypothesis;   // comparison key (the prudent set by default)
    std::string preferred;        // smallest delta on the key, entropy tie-break
    bool tie = false;             // identical on both criteria
    bool criterion_conflict = false; // delta winner is not the entropy winner
};

SubsystemComparison compare_subsystems(
    const std::vector<std::pair<std::string, MassFunction>>& subsystems,
    std::span<const DecisionHypothesis> hypotheses, const std::string& key_hypothesis,
    double eps = kDefaultEpsilon);

} // namespace dsm
