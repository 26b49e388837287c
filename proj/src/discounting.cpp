#include "dsm/discounting.hpp"

namespace dsm {

namespace {

void check_factor(double f, const char* name) {
    if (!(f >= 0.0 && f <= 1.0))
        throw MassError(std::string(name) + " factor must lie in [0,1]");
}

} // namespace

MassFunction reliability_discount(const MassFunction& m, double alpha) {
    check_factor(alpha, "reliability");
    if (m.allow_empty())
        throw MassError("reliability discounting needs a normalized mass function");
    const auto it_bits = Subset::ignorance(m.frame()).bits();
    MassFunction::FocalMap focal;
    for (const auto& [bits, v] : m.focal())
        focal[bits] = alpha * v;
    focal[it_bits] += 1.0 - alpha;
    return MassFunction::make(m.frame(), std::move(focal));
}

MassFunction importance_discount(const MassFunction& m, double beta) {
    check_factor(beta, "importance");
    MassFunction::FocalMap focal;
    for (const auto& [bits, v] : m.focal())
        focal[bits] = beta * v;
    focal[0] += 1.0 - beta;
    return MassFunction::make(m.frame(), std::move(focal), /*allow_empty=*/true);
}

ImportanceFusionResult importance_fuse(std::span<const MassFunction> sources,
                                       std::span<const double> betas, FusionRule rule) {
    if (rule != FusionRule::PCR5 && rule != FusionRule::PCR6)
        throw FusionError("importance fusion runs on PCR5 or PCR6");
    if (sources.size() != betas.size())
        throw FusionError("one importance factor per source required");

    // Steps 1 and 2: discount, then treat the empty-set mass as gone.
    std::vector<MassFunction> subnormal;
    subnormal.reserve(sources.size());
    for (std::size_t i = 0; i < sources.size(); ++i) {
        const auto d = importance_discount(sources[i], betas[i]);
        MassFunction::FocalMap focal;
        for (const auto& [bits, v] : d.focal())
            if (bits != 0)
                focal[bits] = v;
        if (focal.empty())
            throw FusionError("fully suppressed evidence: source " + std::to_string(i) +
                              " has importance 0");
        subnormal.push_back(MassFunction::make(sources[i].frame(), std::move(focal),
                                               /*allow_empty=*/true));
    }

    auto raw = detail::combine<double>(rule, subnormal, {}, /*allow_subnormal=*/true);
    if (!(raw.total > 0.0))
        throw FusionError("fully suppressed evidence: total fused mass is zero");

    // Step 3: normalize by the realized total.
    MassFunction::FocalMap focal;
    for (const auto& [bits, v] : raw.mass.focal())
        focal[bits] = v / raw.total;
    return {MassFunction::make(raw.mass.frame(), std::move(focal)), raw.total};
}

ImportanceFusionResult importance_fuse(const std::vector<MassFunction>& sources,
                                       const std::vector<double>& betas, FusionRule rule) {
    return importance_fuse(std::span<const MassFunction>(sources),
                           std::span<const double>(betas), rule);
}

} // namespace dsm
