#pragma once

#include <bit>
#include <cstdint>
#include <vector>

#include "dsm/mass.hpp"

namespace dsm {

// Every paper table uses epsilon = 0.001.
inline constexpr double kDefaultEpsilon = 0.001;

// Per-singleton probabilities obtained from a probabilistic transform.
struct ProbabilityDistribution {
    FramePtr frame;
    std::vector<double> p; // p[i] for atom i

    // Probability of a hypothesis as the sum of its singleton probabilities.
    double probability_of(const Subset& x) const;
};

namespace detail {

// DSmP redistribution shared by the precise and interval pipelines: each
// focal element Y hands m(Y) to its singletons s with weight m({s}) + eps,
// denominator sum_{s in Y} m({s}) + eps*|Y|. A singleton focal element keeps
// its whole mass (the ratio cancels exactly).
template <class S>
std::vector<S> dsmp_values(const BasicMassFunction<S>& m, double eps) {
    using Ops = ScalarOps<S>;
    if (eps < 0.0)
        throw MassError("dsmp epsilon must be non-negative");
    const std::size_t n = m.frame()->size();

    std::vector<S> singleton(n, Ops::zero());
    for (std::size_t i = 0; i < n; ++i)
        singleton[i] = m.mass_of(static_cast<std::uint32_t>(1u << i));

    std::vector<S> p(n, Ops::zero());
    for (const auto& [bits, v] : m.focal()) {
        if (bits == 0)
            throw MassError("dsmp needs a normalized mass function");
        const auto card = static_cast<std::size_t>(std::popcount(bits));
        if (card == 1) {
            const auto i = static_cast<std::size_t>(std::countr_zero(bits));
            p[i] = Ops::add(p[i], v);
            continue;
        }
        S den = Ops::from_real(eps * static_cast<double>(card));
        for (std::size_t i = 0; i < n; ++i)
            if ((bits >> i) & 1u)
                den = Ops::add(den, singleton[i]);
        const S ratio = Ops::div(v, den); // throws when eps = 0 and Y has no support
        for (std::size_t i = 0; i < n; ++i)
            if ((bits >> i) & 1u)
                p[i] = Ops::add(p[i], Ops::mul(Ops::add(singleton[i], Ops::from_real(eps)), ratio));
    }
    return p;
}

} // namespace detail

// DSmP_eps transform. eps must be positive whenever some focal element has
// no singleton support (otherwise its denominator vanishes).
ProbabilityDistribution dsmp(const MassFunction& m, double eps = kDefaultEpsilon);

// Pignistic transform: each focal element splits uniformly over its atoms.
ProbabilityDistribution betp(const MassFunction& m);

// Shannon entropy in bits, with 0*log(0) := 0.
double entropy(const ProbabilityDistribution& p);

// Probabilistic information content: 1 - H/log2(n); 1 for a point mass,
// 0 for the uniform distribution.
double pic(const ProbabilityDistribution& p);

} // namespace dsm
