#pragma once

#include <cassert>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "dsm/mass.hpp"

namespace dsm {

enum class FusionRule { Conjunctive, PCR5, PCR6 };

inline const char* to_string(FusionRule r) {
    switch (r) {
    case FusionRule::Conjunctive: return "conjunctive";
    case FusionRule::PCR5: return "pcr5";
    case FusionRule::PCR6: return "pcr6";
    }
    return "?";
}

// One conflicting focal tuple and how its product mass was redistributed.
// Shares are kept in first-appearance order of the sets within the tuple.
template <class S>
struct ConflictLedgerEntry {
    std::vector<std::uint32_t> tuple; // focal element per source
    S product;                        // pi = prod_i m_i(Y_i)
    std::vector<std::pair<std::uint32_t, S>> shares;
};

template <class S>
struct BasicFusionResult {
    FusionRule rule = FusionRule::Conjunctive;
    BasicMassFunction<S> mass;
    S total; // sum of output masses before any normalization
    std::vector<ConflictLedgerEntry<S>> ledger;
};

using FusionResult = BasicFusionResult<double>;
using IntervalFusionResult = BasicFusionResult<Interval>;

struct FusionOptions {
    bool with_ledger = false;
    // Tuple enumeration is the full cartesian product of focal lists; refuse
    // anything past this many tuples.
    std::size_t tuple_limit = 10'000'000;
};

namespace detail {

template <class S>
void check_sources(std::span<const BasicMassFunction<S>> sources, bool allow_subnormal) {
    if (sources.size() < 2)
        throw FusionError("combination needs at least two sources");
    const auto& frame = sources.front().frame();
    for (const auto& s : sources) {
        if (s.frame()->id() != frame->id())
            throw FusionError("sources live on different frames");
        if (s.allow_empty() && !allow_subnormal)
            throw FusionError("sources must be normalized mass functions");
        if (s.focal_count() == 0)
            throw FusionError("source has no focal elements");
    }
}

// Shared N-source combination kernel. Enumerates every tuple of focal
// elements (one per source, lexicographic by bitmask, first source most
// significant); a tuple's product mass goes to the intersection when it is
// non-empty, otherwise:
//   Conjunctive: accrues on the empty set,
//   PCR5/PCR6:   is returned to the tuple's own sets with weight
//                m_i(Y_i), repeated sets combined by product (PCR5) or
//                sum (PCR6); share(Z) = pi * weight(Z) / sum of weights.
template <class S>
BasicFusionResult<S> combine(FusionRule rule, std::span<const BasicMassFunction<S>> sources,
                             const FusionOptions& options, bool allow_subnormal) {
    using Ops = ScalarOps<S>;
    check_sources(sources, allow_subnormal);

    std::vector<std::vector<std::pair<std::uint32_t, S>>> focal;
    focal.reserve(sources.size());
    std::size_t tuples = 1;
    for (const auto& s : sources) {
        focal.emplace_back(s.focal().begin(), s.focal().end());
        if (tuples > options.tuple_limit / s.focal_count())
            throw FusionError("focal-element product exceeds the tuple limit");
        tuples *= s.focal_count();
    }

    const std::size_t n = sources.size();
    const std::uint32_t all_bits = Subset::ignorance(sources.front().frame()).bits();
    std::map<std::uint32_t, S> out;
    std::vector<ConflictLedgerEntry<S>> ledger;
    std::vector<std::size_t> idx(n, 0);
    std::vector<std::pair<std::uint32_t, S>> groups; // per-conflict weights

    for (;;) {
        S pi = Ops::one();
        std::uint32_t inter = all_bits;
        for (std::size_t i = 0; i < n; ++i) {
            const auto& [bits, m] = focal[i][idx[i]];
            pi = Ops::mul(pi, m);
            inter &= bits;
        }

        if (inter != 0 || rule == FusionRule::Conjunctive) {
            auto [it, inserted] = out.try_emplace(inter, pi);
            if (!inserted)
                it->second = Ops::add(it->second, pi);
        } else {
            groups.clear();
            for (std::size_t i = 0; i < n; ++i) {
                const auto& [bits, m] = focal[i][idx[i]];
                auto g = groups.begin();
                while (g != groups.end() && g->first != bits)
                    ++g;
                if (g == groups.end())
                    groups.emplace_back(bits, m);
                else
                    g->second = rule == FusionRule::PCR6 ? Ops::add(g->second, m)
                                                         : Ops::mul(g->second, m);
            }
            S weight_sum = Ops::zero();
            for (const auto& [bits, w] : groups)
                weight_sum = Ops::add(weight_sum, w);
            assert(!Ops::is_zero(weight_sum));
            const S ratio = Ops::div(pi, weight_sum);

            ConflictLedgerEntry<S> entry;
            if (options.with_ledger) {
                entry.tuple.reserve(n);
                for (std::size_t i = 0; i < n; ++i)
                    entry.tuple.push_back(focal[i][idx[i]].first);
                entry.product = pi;
            }
            for (const auto& [bits, w] : groups) {
                const S share = Ops::mul(w, ratio);
                auto [it, inserted] = out.try_emplace(bits, share);
                if (!inserted)
                    it->second = Ops::add(it->second, share);
                if (options.with_ledger)
                    entry.shares.emplace_back(bits, share);
            }
            if (options.with_ledger)
                ledger.push_back(std::move(entry));
        }

        // odometer, last source fastest
        std::size_t i = n;
        while (i > 0) {
            --i;
            if (++idx[i] < focal[i].size())
                break;
            idx[i] = 0;
            if (i == 0)
                goto done;
        }
    }
done:

    S total = Ops::zero();
    for (const auto& [bits, v] : out)
        total = Ops::add(total, v);

    const bool subnormal_out = rule == FusionRule::Conjunctive || allow_subnormal;
    return {rule,
            BasicMassFunction<S>::make(sources.front().frame(), std::move(out), subnormal_out),
            total, std::move(ledger)};
}

} // namespace detail

// Unnormalized conjunctive combination; total conflict sits on the empty set.
template <class S>
BasicMassFunction<S> conjunctive(std::span<const BasicMassFunction<S>> sources) {
    return detail::combine(FusionRule::Conjunctive, sources, {}, false).mass;
}

template <class S>
BasicMassFunction<S> pcr5(std::span<const BasicMassFunction<S>> sources) {
    return detail::combine(FusionRule::PCR5, sources, {}, false).mass;
}

template <class S>
BasicMassFunction<S> pcr6(std::span<const BasicMassFunction<S>> sources) {
    return detail::combine(FusionRule::PCR6, sources, {}, false).mass;
}

template <class S>
BasicFusionResult<S> fuse(FusionRule rule, std::span<const BasicMassFunction<S>> sources,
                          FusionOptions options = {.with_ledger = true}) {
    return detail::combine(rule, sources, options, false);
}

// Convenience overloads for vectors of sources.
inline MassFunction conjunctive(const std::vector<MassFunction>& s) {
    return conjunctive(std::span<const MassFunction>(s));
}
inline MassFunction pcr5(const std::vector<MassFunction>& s) {
    return pcr5(std::span<const MassFunction>(s));
}
inline MassFunction pcr6(const std::vector<MassFunction>& s) {
    return pcr6(std::span<const MassFunction>(s));
}
inline FusionResult fuse(FusionRule rule, const std::vector<MassFunction>& s,
                         FusionOptions options = {.with_ledger = true}) {
    return fuse(rule, std::span<const MassFunction>(s), options);
}

} // namespace dsm
