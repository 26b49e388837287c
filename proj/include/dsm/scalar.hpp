#pragma once

#include <algorithm>
#include <string>

#include "dsm/errors.hpp"

namespace dsm {

// Closed interval [lo, hi] of non-negative reals. This is the scalar type of
// interval-valued mass functions; plain endpoint arithmetic, no dependency
// tracking. Intermediate values above 1 are legal (clamping to [0,1] happens
// only when a probability is reported).
struct Interval {
    double lo = 0.0;
    double hi = 0.0;

    Interval() = default;
    Interval(double v) : Interval(v, v) {} // NOLINT: degenerate intervals convert implicitly
    Interval(double lo_, double hi_) : lo(lo_), hi(hi_) {
        if (!(lo >= 0.0) || !(hi >= lo))
            throw MassError("invalid interval [" + std::to_string(lo_) + "," +
                            std::to_string(hi_) + "]");
    }

    bool is_degenerate() const { return lo == hi; }
    double width() const { return hi - lo; }

    bool operator==(const Interval& o) const { return lo == o.lo && hi == o.hi; }
};

inline Interval iadd(Interval a, Interval b) {
    return {a.lo + b.lo, a.hi + b.hi};
}

inline Interval imul(Interval a, Interval b) {
    return {a.lo * b.lo, a.hi * b.hi};
}

// Positive-interval quotient: [a.lo/b.hi, a.hi/b.lo]. Requires b.lo > 0.
inline Interval idiv(Interval a, Interval b) {
    if (!(b.lo > 0.0))
        throw MassError("interval division by an interval containing zero");
    return {a.lo / b.hi, a.hi / b.lo};
}

// Report-time projection onto [0,1].
inline Interval clamp_unit(Interval a) {
    return {std::min(a.lo, 1.0), std::min(a.hi, 1.0)};
}

// True if inner lies within outer (set containment).
inline bool contains(Interval outer, Interval inner) {
    return outer.lo <= inner.lo && inner.hi <= outer.hi;
}

// Uniform arithmetic over the scalars a mass can carry (double or Interval),
// so the combination and transform kernels are written once.
template <class S>
struct ScalarOps;

template <>
struct ScalarOps<double> {
    static double zero() { return 0.0; }
    static double one() { return 1.0; }
    static double add(double a, double b) { return a + b; }
    static double mul(double a, double b) { return a * b; }
    static double div(double a, double b) {
        if (b == 0.0)
            throw MassError("division by zero mass");
        return a / b;
    }
    static bool is_zero(double a) { return a == 0.0; }
    static double from_real(double x) { return x; }
};

template <>
struct ScalarOps<Interval> {
    static Interval zero() { return {}; }
    static Interval one() { return {1.0}; }
    static Interval add(Interval a, Interval b) { return iadd(a, b); }
    static Interval mul(Interval a, Interval b) { return imul(a, b); }
    static Interval div(Interval a, Interval b) { return idiv(a, b); }
    static bool is_zero(Interval a) { return a.lo == 0.0 && a.hi == 0.0; }
    static Interval from_real(double x) { return {x}; }
};

} // namespace dsm
