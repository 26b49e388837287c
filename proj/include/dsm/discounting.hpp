#pragma once

#include <span>
#include <vector>

#include "dsm/fusion.hpp"
#include "dsm/mass.hpp"

namespace dsm {

// Per-source discount factor. Reliability moves the discounted remainder to
// total ignorance, importance moves it to the empty set.
struct DiscountProfile {
    enum class Kind { Reliability, Importance };
    Kind kind = Kind::Reliability;
    double factor = 1.0;
};

// Shafer's reliability discounting:
//   m_a(X) = a*m(X) for X != I_t,  m_a(I_t) = a*m(I_t) + (1-a).
MassFunction reliability_discount(const MassFunction& m, double alpha);

// Importance discounting:
//   m_b(X) = b*m(X) for X != {},   m_b({}) = b*m({}) + (1-b).
// The result keeps its empty-set mass (allow_empty state).
MassFunction importance_discount(const MassFunction& m, double beta);

struct ImportanceFusionResult {
    MassFunction fused;
    // Total output mass before the final normalization; equals the product
    // of the sources' non-empty discounted totals.
    double prenormal_total = 0.0;
};

// Three-step importance fusion: discount each source, drop the empty-set
// masses and run the PCR rule on the now-subnormal bba's, then divide by the
// realized total so the output sums to one.
ImportanceFusionResult importance_fuse(std::span<const MassFunction> sources,
                                       std::span<const double> betas, FusionRule rule);

ImportanceFusionResult importance_fuse(const std::vector<MassFunction>& sources,
                                       const std::vector<double>& betas, FusionRule rule);

} // namespace dsm
