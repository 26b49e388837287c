#pragma once

#include <span>
#include <utility>
#include <vector>

#include "dsm/fusion.hpp"
#include "dsm/transforms.hpp"

namespace dsm {

// Interval-valued pipelines run the same kernels as the precise ones through
// the Interval scalar; with degenerate inputs they reproduce the precise
// results. Clamping to [0,1] is a report-time operation, never applied
// mid-computation.

inline IntervalMassFunction interval_conjunctive(std::span<const IntervalMassFunction> sources) {
    return conjunctive(sources);
}
inline IntervalMassFunction interval_pcr5(std::span<const IntervalMassFunction> sources) {
    return pcr5(sources);
}
inline IntervalMassFunction interval_pcr6(std::span<const IntervalMassFunction> sources) {
    return pcr6(sources);
}
inline IntervalFusionResult interval_fuse(FusionRule rule,
                                          std::span<const IntervalMassFunction> sources,
                                          FusionOptions options = {.with_ledger = true}) {
    return fuse(rule, sources, options);
}

inline IntervalMassFunction interval_pcr6(const std::vector<IntervalMassFunction>& s) {
    return pcr6(std::span<const IntervalMassFunction>(s));
}
inline IntervalMassFunction interval_pcr5(const std::vector<IntervalMassFunction>& s) {
    return pcr5(std::span<const IntervalMassFunction>(s));
}
inline IntervalFusionResult interval_fuse(FusionRule rule,
                                          const std::vector<IntervalMassFunction>& s,
                                          FusionOptions options = {.with_ledger = true}) {
    return fuse(rule, std::span<const IntervalMassFunction>(s), options);
}

// Unclamped interval belief and plausibility of one subset.
inline std::pair<Interval, Interval> interval_bel_pl(const IntervalMassFunction& m,
                                                     const Subset& x) {
    return {bel_value(m, x), pl_value(m, x)};
}

// Unclamped per-singleton interval DSmP. eps must be positive: the interval
// quotient needs a strictly positive denominator.
inline std::vector<Interval> interval_dsmp(const IntervalMassFunction& m,
                                           double eps = kDefaultEpsilon) {
    if (!(eps > 0.0))
        throw MassError("interval dsmp needs eps > 0");
    return detail::dsmp_values(m, eps);
}

} // namespace dsm
