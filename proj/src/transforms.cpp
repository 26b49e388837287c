#include "dsm/transforms.hpp"

#include <bit>
#include <cmath>

namespace dsm {

double ProbabilityDistribution::probability_of(const Subset& x) const {
    if (x.frame()->id() != frame->id())
        throw MassError("subset belongs to a different frame");
    double acc = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i)
        if (x.contains_atom(i))
            acc += p[i];
    return acc;
}

ProbabilityDistribution dsmp(const MassFunction& m, double eps) {
    if (m.allow_empty())
        throw MassError("dsmp needs a normalized mass function");
    return {m.frame(), detail::dsmp_values(m, eps)};
}

ProbabilityDistribution betp(const MassFunction& m) {
    if (m.allow_empty())
        throw MassError("betp needs a normalized mass function");
    const std::size_t n = m.frame()->size();
    std::vector<double> p(n, 0.0);
    for (const auto& [bits, v] : m.focal()) {
        const auto card = std::popcount(bits);
        for (std::size_t i = 0; i < n; ++i)
            if ((bits >> i) & 1u)
                p[i] += v / static_cast<double>(card);
    }
    return {m.frame(), std::move(p)};
}

double entropy(const ProbabilityDistribution& d) {
    double h = 0.0;
    for (double x : d.p)
        if (x > 0.0)
            h -= x * std::log2(x);
    return h;
}

double pic(const ProbabilityDistribution& d) {
    const std::size_t n = d.p.size();
    if (n <= 1)
        return 1.0;
    return 1.0 - entropy(d) / std::log2(static_cast<double>(n));
}

} // namespace dsm
