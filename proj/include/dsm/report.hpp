#pragma once

#include <optional>
#include <string>
#include <vector>

#include "dsm/scenario.hpp"

namespace dsm {

// Environment variable controlling text-report float precision (decimals).
inline constexpr const char* kPrecisionEnvVar = "FUSE_REPORT_PRECISION";
inline constexpr int kDefaultReportPrecision = 5;

// Everything one pipeline run produced. Exactly one of fused /
// fused_interval / qualitative is set, per the pipeline's mass kind.
struct PipelineReport {
    std::string name;
    FusionRule rule = FusionRule::PCR6;
    ScenarioPipeline::Discount discount = ScenarioPipeline::Discount::None;
    std::vector<std::string> sources;
    MassKind kind = MassKind::Precise;

    // Inputs after discounting (empty unless a discount mode is set);
    // one entry per source, aligned with `sources`.
    std::vector<MassFunction> discounted_inputs;
    std::optional<double> prenormal_total; // importance pipelines only

    std::optional<MassFunction> fused;
    std::optional<ProbabilityDistribution> dsmp_dist;
    std::optional<ProbabilityDistribution> betp_dist;
    double dsmp_entropy = 0.0, dsmp_pic = 0.0;
    double betp_entropy = 0.0, betp_pic = 0.0;
    std::vector<HypothesisEvaluation> evaluations;
    std::vector<ConflictLedgerEntry<double>> ledger;

    std::optional<IntervalMassFunction> fused_interval;
    std::vector<Interval> dsmp_interval; // unclamped; clamped at render
    std::vector<IntervalHypothesisEvaluation> interval_evaluations;
    std::vector<ConflictLedgerEntry<Interval>> interval_ledger;

    std::optional<QualitativeMassFunction> qualitative;
    std::optional<QualitativeDistribution> qdsmp;
};

struct DecisionReport {
    std::string scenario_name;
    FramePtr frame;
    double epsilon = kDefaultEpsilon;
    std::vector<PipelineReport> pipelines;
    std::optional<SubsystemComparison> comparison;
};

DecisionReport run(const CompiledScenario& c);
inline DecisionReport run(const Scenario& s) { return run(compile(s)); }

// Aligned text tables (layout mirrors the paper's result tables).
std::string render_text(const DecisionReport& r);
// Stable machine-readable document (sorted keys, deterministic).
std::string render_json(const DecisionReport& r);

// Outcome of comparing a report against the scenario's expected block.
struct TableCheck {
    std::string pipeline;
    std::string table;
    double max_deviation = 0.0;
    double tolerance = 0.0;
    std::size_t mismatches = 0; // exact-match tables (crude labels, decisions)
    bool pass = true;
    std::vector<std::string> details; // failing entries
};

struct TableReport {
    std::vector<TableCheck> checks;
    bool all_pass = true;
};

// `fuse tables`: deviation of the computed report from the expected block.
TableReport compare_tables(const CompiledScenario& c, const DecisionReport& r);
std::string render_table_report(const TableReport& t);

} // namespace dsm
