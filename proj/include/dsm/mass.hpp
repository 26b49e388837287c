#pragma once

#include <cmath>
#include <cstdint>
#include <map>
#include <utility>
#include <vector>

#include "dsm/frames.hpp"
#include "dsm/scalar.hpp"

namespace dsm {

// Normalization tolerance on construction; inputs farther off are rejected
// rather than silently renormalized.
inline constexpr double kMassTolerance = 1e-9;

// Basic belief assignment over one frame, scalar type S (double or Interval).
// Focal elements are keyed by subset bitmask; zero-mass entries are dropped
// so map equality is a valid equality test.
//
// allow_empty marks the mid-pipeline state used by importance discounting:
// mass on the empty set is permitted and the total may fall below one.
template <class S>
class BasicMassFunction {
public:
    using FocalMap = std::map<std::uint32_t, S>;

    static BasicMassFunction make(FramePtr frame, FocalMap focal, bool allow_empty = false) {
        BasicMassFunction m(std::move(frame), std::move(focal), allow_empty);
        m.validate();
        return m;
    }

    // Total ignorance: m(I_t) = 1.
    static BasicMassFunction vacuous(FramePtr frame) {
        const auto it = Subset::ignorance(frame).bits();
        FocalMap focal;
        focal.emplace(it, ScalarOps<S>::one());
        return make(std::move(frame), std::move(focal));
    }

    const FramePtr& frame() const { return frame_; }
    bool allow_empty() const { return allow_empty_; }
    const FocalMap& focal() const { return focal_; }
    std::size_t focal_count() const { return focal_.size(); }

    S mass_of(std::uint32_t bits) const {
        const auto it = focal_.find(bits);
        return it == focal_.end() ? ScalarOps<S>::zero() : it->second;
    }
    S mass_of(const Subset& x) const {
        check_frame(x);
        return mass_of(x.bits());
    }

    Subset subset_of(std::uint32_t bits) const { return {frame_, bits}; }

    bool operator==(const BasicMassFunction& o) const {
        return frame_->id() == o.frame_->id() && focal_ == o.focal_;
    }

    void check_frame(const Subset& x) const {
        if (x.frame()->id() != frame_->id())
            throw MassError("subset belongs to a different frame");
    }

private:
    BasicMassFunction(FramePtr frame, FocalMap focal, bool allow_empty)
        : frame_(std::move(frame)), focal_(std::move(focal)), allow_empty_(allow_empty) {}

    void validate();

    FramePtr frame_;
    FocalMap focal_;
    bool allow_empty_ = false;
};

using MassFunction = BasicMassFunction<double>;
using IntervalMassFunction = BasicMassFunction<Interval>;

template <>
inline void BasicMassFunction<double>::validate() {
    if (!frame_)
        throw MassError("mass function needs a frame");
    double total = 0.0;
    for (auto it = focal_.begin(); it != focal_.end();) {
        if (it->second == 0.0) {
            it = focal_.erase(it);
            continue;
        }
        if (!(it->second > 0.0))
            throw MassError("negative or NaN mass on " + subset_of(it->first).to_string());
        if (it->first >> frame_->size())
            throw MassError("focal element outside the frame");
        total += it->second;
        ++it;
    }
    if (!allow_empty_) {
        if (focal_.count(0))
            throw MassError("mass on the empty set");
        if (std::abs(total - 1.0) > kMassTolerance)
            throw MassError("masses sum to " + std::to_string(total) + ", expected 1");
    } else if (total > 1.0 + kMassTolerance) {
        throw MassError("masses sum to " + std::to_string(total) + ", expected <= 1");
    }
}

// Interval bba validity: some precise selection must be able to sum to 1,
// i.e. sum of lower bounds <= 1 <= sum of upper bounds.
template <>
inline void BasicMassFunction<Interval>::validate() {
    if (!frame_)
        throw MassError("mass function needs a frame");
    double lo = 0.0, hi = 0.0;
    for (auto it = focal_.begin(); it != focal_.end();) {
        if (ScalarOps<Interval>::is_zero(it->second)) {
            it = focal_.erase(it);
            continue;
        }
        if (it->first >> frame_->size())
            throw MassError("focal element outside the frame");
        lo += it->second.lo;
        hi += it->second.hi;
        ++it;
    }
    if (!allow_empty_) {
        if (focal_.count(0))
            throw MassError("mass on the empty set");
        if (lo > 1.0 + kMassTolerance || hi < 1.0 - kMassTolerance)
            throw MassError("no selection of the interval masses sums to 1");
    }
}

// Lower/upper probability bounds of one subset, with their gap.
struct BeliefInterval {
    double bel = 0.0;
    double pl = 0.0;
    double delta = 0.0; // pl - bel
};

namespace detail {

template <class S>
void check_evaluable(const BasicMassFunction<S>& m, const Subset& x) {
    m.check_frame(x);
    if (m.allow_empty())
        throw MassError("bel/pl need a normalized mass function");
}

} // namespace detail

template <class S>
S bel_value(const BasicMassFunction<S>& m, const Subset& x) {
    detail::check_evaluable(m, x);
    S acc = ScalarOps<S>::zero();
    for (const auto& [bits, v] : m.focal())
        if (bits != 0 && (bits & ~x.bits()) == 0)
            acc = ScalarOps<S>::add(acc, v);
    return acc;
}

template <class S>
S pl_value(const BasicMassFunction<S>& m, const Subset& x) {
    detail::check_evaluable(m, x);
    S acc = ScalarOps<S>::zero();
    for (const auto& [bits, v] : m.focal())
        if (bits & x.bits())
            acc = ScalarOps<S>::add(acc, v);
    return acc;
}

inline double bel(const MassFunction& m, const Subset& x) { return bel_value(m, x); }
inline double pl(const MassFunction& m, const Subset& x) { return pl_value(m, x); }

inline BeliefInterval delta(const MassFunction& m, const Subset& x) {
    const double b = bel(m, x);
    const double p = pl(m, x);
    return {b, p, p - b};
}

// Lift every focal element through cylinder_extend, masses unchanged.
template <class S>
BasicMassFunction<S> vacuous_extension(const BasicMassFunction<S>& m, const FramePtr& target) {
    typename BasicMassFunction<S>::FocalMap focal;
    for (const auto& [bits, v] : m.focal()) {
        const auto ext = cylinder_extend(m.subset_of(bits), target);
        focal[ext.bits()] = v; // extension is injective, no merging needed
    }
    return BasicMassFunction<S>::make(target, std::move(focal), m.allow_empty());
}

// Divide every mass by the current total (the importance pipeline's step 3).
inline MassFunction normalize(const MassFunction& m) {
    double total = 0.0;
    for (const auto& [bits, v] : m.focal())
        if (bits != 0)
            total += v;
    if (total <= 0.0)
        throw MassError("cannot normalize: total non-empty mass is zero");
    MassFunction::FocalMap focal;
    for (const auto& [bits, v] : m.focal())
        if (bits != 0)
            focal[bits] = v / total;
    return MassFunction::make(m.frame(), std::move(focal));
}

} // namespace dsm
