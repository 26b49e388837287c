#include "dsm/decision.hpp"

#include <algorithm>
#include <cmath>

namespace dsm {

namespace {

constexpr double kTieTolerance = 1e-9;

DecisionOutcome compare(double a, double b) {
    if (std::abs(a - b) <= kTieTolerance)
        return DecisionOutcome::Undecidable;
    return a > b ? DecisionOutcome::Accept : DecisionOutcome::Reject;
}

} // namespace

DecisionHypothesis::DecisionHypothesis(std::string name_, Subset set_, std::string polarity_)
    : name(std::move(name_)), set(std::move(set_)), polarity(std::move(polarity_)) {
    if (set.is_empty() || set.is_ignorance())
        throw MassError("decision hypothesis must be a proper non-empty subset");
}

const char* to_string(DecisionOutcome o) {
    switch (o) {
    case DecisionOutcome::Accept: return "accept";
    case DecisionOutcome::Reject: return "reject";
    case DecisionOutcome::Undecidable: return "undecidable";
    }
    return "?";
}

std::vector<HypothesisEvaluation> evaluate(const MassFunction& m,
                                           std::span<const DecisionHypothesis> hypotheses,
                                           double eps) {
    const auto d = dsmp(m, eps);
    const auto b = betp(m);
    std::vector<HypothesisEvaluation> out;
    out.reserve(hypotheses.size());
    for (const auto& h : hypotheses) {
        m.check_frame(h.set);
        HypothesisEvaluation e;
        e.name = h.name;
        const auto bi = delta(m, h.set);
        const auto bic = delta(m, h.set.complement());
        e.bel = bi.bel;
        e.pl = bi.pl;
        e.delta = bi.delta;
        e.bel_complement = bic.bel;
        e.pl_complement = bic.pl;
        e.dsmp = d.probability_of(h.set);
        e.betp = b.probability_of(h.set);
        e.by_bel = compare(e.bel, e.bel_complement);
        e.by_pl = compare(e.pl, e.pl_complement);
        e.by_dsmp = compare(e.dsmp, 0.5);
        out.push_back(std::move(e));
    }
    return out;
}

std::vector<IntervalHypothesisEvaluation> evaluate(const IntervalMassFunction& m,
                                                   std::span<const DecisionHypothesis> hypotheses,
                                                   double eps) {
    const auto d = interval_dsmp(m, eps);
    std::vector<IntervalHypothesisEvaluation> out;
    out.reserve(hypotheses.size());
    for (const auto& h : hypotheses) {
        m.check_frame(h.set);
        IntervalHypothesisEvaluation e;
        e.name = h.name;
        auto [bv, pv] = interval_bel_pl(m, h.set);
        e.bel = bv;
        e.pl = pv;
        e.range = clamp_unit(Interval{bv.lo, pv.hi});
        e.range_complement = {1.0 - e.range.hi, 1.0 - e.range.lo};
        Interval dh = {0.0, 0.0};
        for (std::size_t i = 0; i < d.size(); ++i)
            if (h.set.contains_atom(i))
                dh = iadd(dh, d[i]);
        e.dsmp = clamp_unit(dh);
        // lower bound of H's range against lower bound of the complement's
        e.by_bel = compare(e.range.lo, e.range_complement.lo);
        e.by_pl = compare(e.range.hi, e.range_complement.hi);
        if (e.dsmp.lo > 0.5 + kTieTolerance)
            e.by_dsmp = DecisionOutcome::Accept;
        else if (e.dsmp.hi < 0.5 - kTieTolerance)
            e.by_dsmp = DecisionOutcome::Reject;
        else
            e.by_dsmp = DecisionOutcome::Undecidable;
        out.push_back(std::move(e));
    }
    return out;
}

SubsystemComparison compare_subsystems(
    const std::vector<std::pair<std::string, MassFunction>>& subsystems,
    std::span<const DecisionHypothesis> hypotheses, const std::string& key_hypothesis,
    double eps) {
    if (subsystems.size() < 2)
        throw MassError("subsystem comparison needs at least two fused results");
    std::size_t key = hypotheses.size();
    for (std::size_t i = 0; i < hypotheses.size(); ++i)
        if (hypotheses[i].name == key_hypothesis)
            key = i;
    if (key == hypotheses.size())
        throw MassError("unknown key hypothesis '" + key_hypothesis + "'");

    SubsystemComparison cmp;
    cmp.key_hypothesis = key_hypothesis;
    for (const auto& h : hypotheses)
        cmp.hypotheses.push_back(h.name);
    for (const auto& [name, m] : subsystems) {
        SubsystemComparison::Entry e;
        e.name = name;
        for (const auto& h : hypotheses)
            e.delta_by_hypothesis.push_back(delta(m, h.set).delta);
        e.dsmp_entropy = entropy(dsmp(m, eps));
        cmp.entries.push_back(std::move(e));
    }

    // Order-independent preference: smallest delta on the key hypothesis,
    // entropy tie-break, then name for a deterministic report.
    const auto better = [&](const SubsystemComparison::Entry& a,
                            const SubsystemComparison::Entry& b) {
        if (std::abs(a.delta_by_hypothesis[key] - b.delta_by_hypothesis[key]) > kTieTolerance)
            return a.delta_by_hypothesis[key] < b.delta_by_hypothesis[key];
        if (std::abs(a.dsmp_entropy - b.dsmp_entropy) > kTieTolerance)
            return a.dsmp_entropy < b.dsmp_entropy;
        return a.name < b.name;
    };
    const auto& winner = *std::min_element(cmp.entries.begin(), cmp.entries.end(), better);
    cmp.preferred = winner.name;

    const auto& entropy_winner = *std::min_element(
        cmp.entries.begin(), cmp.entries.end(),
        [](const auto& a, const auto& b) { return a.dsmp_entropy < b.dsmp_entropy; });
    cmp.criterion_conflict =
        entropy_winner.dsmp_entropy < winner.dsmp_entropy - kTieTolerance;
    cmp.tie = std::all_of(cmp.entries.begin(), cmp.entries.end(), [&](const auto& e) {
        return std::abs(e.delta_by_hypothesis[key] - winner.delta_by_hypothesis[key]) <=
                   kTieTolerance &&
               std::abs(e.dsmp_entropy - winner.dsmp_entropy) <= kTieTolerance;
    });
    return cmp;
}

} // namespace dsm
