#include <cmath>
#include <doctest.h>

#include "dsm/intervals.hpp"
#include "helpers.hpp"

using namespace dsm;
using doctest::Approx;

namespace {

// Interval sources with the Table 19 imprecision pattern.
std::vector<IntervalMassFunction> table19(const vbied::Fixture& v) {
    const auto make = [&](IntervalMassFunction::FocalMap focal) {
        return IntervalMassFunction::make(v.theta, std::move(focal));
    };
    return {make({{v.f1.bits(), Interval(1.0)}}),
            make({{v.f2.bits(), {0.75, 0.90}}, {v.it.bits(), {0.10, 0.25}}}),
            make({{v.f1.bits(), Interval(0.3)}, {v.f3.bits(), Interval(0.7)}}),
            make({{v.f2.bits(), {0.10, 0.25}}, {v.it.bits(), {0.75, 0.90}}})};
}

void check_iv(Interval got, double lo, double hi, double tol = 1e-5) {
    CHECK(std::abs(got.lo - lo) <= tol);
    CHECK(std::abs(got.hi - hi) <= tol);
}

// Random interval bba that embeds a precise selection summing to one.
std::pair<IntervalMassFunction, MassFunction> random_interval_mass(std::mt19937_64& rng,
                                                                   const FramePtr& frame,
                                                                   double max_slack) {
    auto precise = gen::random_mass(rng, frame, 5);
    std::uniform_real_distribution<double> slack(0.0, max_slack);
    IntervalMassFunction::FocalMap focal;
    for (const auto& [bits, m] : precise.focal())
        focal[bits] = Interval(m * (1.0 - slack(rng)), m * (1.0 + slack(rng)));
    return {IntervalMassFunction::make(frame, std::move(focal)), precise};
}

} // namespace

TEST_CASE("interval scalar operators") {
    CHECK(iadd({0.1, 0.2}, {0.3, 0.5}) == Interval{0.4, 0.7});
    CHECK(imul({0.1, 0.2}, {0.3, 0.5}) == Interval{0.03, 0.1});
    // quotient crosses the endpoints: [lo/hi, hi/lo]
    check_iv(idiv({0.0525, 0.1575}, {2.55, 2.85}), 0.018421, 0.061765, 1e-6);
    // degenerate intervals behave like plain reals
    CHECK(idiv({0.6}, {2.0}) == Interval{0.3});
    CHECK_THROWS_AS(idiv({0.1, 0.2}, {0.0, 0.5}), MassError);
    CHECK_THROWS_AS(Interval(0.5, 0.2), MassError);
    CHECK_THROWS_AS(Interval(-0.1, 0.2), MassError);
    CHECK(clamp_unit({0.654243, 1.352123}) == Interval{0.654243, 1.0});
    CHECK(contains({0.1, 0.9}, {0.2, 0.8}));
    CHECK_FALSE(contains({0.3, 0.9}, {0.2, 0.8}));

    // chained products and redistribution arithmetic
    check_iv(imul(imul(imul(Interval(1.0), {0.75, 0.90}), Interval(0.3)), {0.10, 0.25}),
             0.0225, 0.0675, 1e-9);
    const auto ratio = idiv({0.152524, 0.323743}, {0.196250, 0.331250});
    check_iv(ratio, 0.460449, 1.649645, 1e-5);
    check_iv(imul(Interval(0.001), ratio), 0.000460, 0.001650, 1e-6);
}

TEST_CASE("interval bba validity") {
    vbied::Fixture v;
    // no selection sums to one
    CHECK_THROWS_AS(IntervalMassFunction::make(
                        v.theta, {{v.f1.bits(), Interval{0.6, 0.7}}, {v.f2.bits(), Interval{0.5, 0.6}}}),
                    MassError);
    CHECK_THROWS_AS(IntervalMassFunction::make(v.theta, {{v.f1.bits(), Interval{0.1, 0.2}}}),
                    MassError);
    CHECK_NOTHROW(IntervalMassFunction::make(
        v.theta, {{v.f1.bits(), Interval{0.75, 0.9}}, {v.f2.bits(), Interval{0.1, 0.25}}}));
}

TEST_CASE("interval PCR6 on the imprecise inputs") {
    vbied::Fixture v;
    auto result = interval_fuse(FusionRule::PCR6, table19(v));
    const auto& m = result.mass;
    check_iv(m.mass_of(v.t8), 0.194250, 0.329250);
    check_iv(m.mass_of(v.f2), 0.100351, 0.236255);
    check_iv(m.mass_of(v.f3), 0.106767, 0.226620);
    check_iv(m.mass_of(v.it), 0.100351, 0.236255);
    // f1 collects its direct conjunctive product [0.0225,0.0675] on top of
    // the four redistribution shares
    check_iv(m.mass_of(v.f1), 0.175024, 0.391243);

    // the four conflicting products and their shares
    REQUIRE(result.ledger.size() == 4);
    const auto& pi3 = result.ledger[0];
    check_iv(pi3.product, 0.0525, 0.1575, 1e-9);
    REQUIRE(pi3.shares.size() == 3);
    CHECK(pi3.shares[0].first == v.f1.bits());
    check_iv(pi3.shares[0].second, 0.018421, 0.061765, 1e-6);
    CHECK(pi3.shares[1].first == v.f2.bits());
    check_iv(pi3.shares[1].second, 0.015658, 0.071029, 1e-6);
    check_iv(pi3.shares[2].second, 0.012895, 0.043235, 1e-6);

    const auto& pi4 = result.ledger[1];
    check_iv(pi4.product, 0.39375, 0.567, 1e-9);
    REQUIRE(pi4.shares.size() == 4);
    check_iv(pi4.shares[0].second, 0.112500, 0.177188, 1e-6);
    check_iv(pi4.shares[1].second, 0.084375, 0.159469, 1e-6);
    check_iv(pi4.shares[2].second, 0.078750, 0.124031, 1e-6);
    check_iv(pi4.shares[3].second, 0.084375, 0.159469, 1e-6);

    const auto& pi7 = result.ledger[2];
    check_iv(pi7.product, 0.007, 0.04375, 1e-9);
    REQUIRE(pi7.shares.size() == 4);
    check_iv(pi7.shares[0].second, 0.003182, 0.023026, 1e-6);
    CHECK(pi7.shares[1].first == v.it.bits());
    check_iv(pi7.shares[1].second, 0.000318, 0.005757, 1e-6);
    check_iv(pi7.shares[2].second, 0.002227, 0.016118, 1e-6);
    CHECK(pi7.shares[3].first == v.f2.bits());
    check_iv(pi7.shares[3].second, 0.000318, 0.005757, 1e-6);

    const auto& pi8 = result.ledger[3];
    check_iv(pi8.product, 0.0525, 0.1575, 1e-9);
    REQUIRE(pi8.shares.size() == 3);
    check_iv(pi8.shares[0].second, 0.018421, 0.061765, 1e-6);
    CHECK(pi8.shares[1].first == v.it.bits());
    check_iv(pi8.shares[1].second, 0.015658, 0.071029, 1e-6);
    check_iv(pi8.shares[2].second, 0.012895, 0.043235, 1e-6);
}

TEST_CASE("interval bel/pl with report clamping") {
    vbied::Fixture v;
    auto m = interval_pcr6(table19(v));
    auto vehicle = Subset::of_atoms(v.theta, {6, 7});
    auto [b, p] = interval_bel_pl(m, vehicle);
    check_iv(b, 0.194250, 0.329250);
    check_iv(p, 0.676743, 1.419623);
    check_iv(clamp_unit(p), 0.676743, 1.0);
    // total-ignorance belief collects every focal element's interval
    auto [bit, pit] = interval_bel_pl(m, v.it);
    check_iv(bit, 0.676743, 1.419623);

    auto prudent = Subset::of_atoms(v.theta, {5, 6, 7});
    auto [bp, pp] = interval_bel_pl(m, prudent);
    check_iv(bp, 0.294601, 0.565505);
    check_iv(clamp_unit(pp), 0.676743, 1.0);
}

TEST_CASE("interval DSmP") {
    vbied::Fixture v;
    auto m = interval_pcr6(table19(v));
    auto p = interval_dsmp(m, 0.001);
    for (const std::size_t i : {0, 1, 2, 4, 6})
        check_iv(p[i], 0.018092, 0.038938);
    check_iv(p[3], 0.000826, 0.003162);
    check_iv(p[5], 0.018395, 0.040142);
    // theta8 keeps its own fused mass before collecting the shares; the
    // upper bound exceeds one and clamps at report time
    check_iv(p[7], 0.414663, 1.770981);
    check_iv(clamp_unit(p[7]), 0.414663, 1.0);

    CHECK_THROWS_AS(interval_dsmp(m, 0.0), MassError);
}

TEST_CASE("property: degenerate-interval pipeline equals the precise pipeline") {
    std::mt19937_64 rng(808);
    for (int i = 0; i < 200; ++i) {
        auto inst = gen::random_instance(rng, 4, 3, 4);
        std::vector<IntervalMassFunction> degenerate;
        for (const auto& s : inst.sources) {
            IntervalMassFunction::FocalMap focal;
            for (const auto& [bits, mass] : s.focal())
                focal[bits] = Interval(mass);
            degenerate.push_back(IntervalMassFunction::make(inst.frame, std::move(focal)));
        }
        for (const auto rule : {FusionRule::PCR5, FusionRule::PCR6}) {
            auto precise = detail::combine<double>(rule, inst.sources, {}, false).mass;
            auto interval = detail::combine<Interval>(rule, degenerate, {}, false).mass;
            REQUIRE(interval.focal_count() == precise.focal_count());
            for (const auto& [bits, mass] : precise.focal()) {
                const auto iv = interval.mass_of(bits);
                CHECK(iv.lo == Approx(mass).epsilon(1e-12));
                CHECK(iv.hi == Approx(mass).epsilon(1e-12));
            }
            // downstream transforms collapse as well
            const auto dp = dsmp(precise, 0.001);
            const auto di = interval_dsmp(interval, 0.001);
            for (std::size_t a = 0; a < dp.p.size(); ++a) {
                CHECK(di[a].lo == Approx(dp.p[a]).epsilon(1e-12));
                CHECK(di[a].hi == Approx(dp.p[a]).epsilon(1e-12));
            }
            std::uniform_int_distribution<std::uint32_t> dist(
                1, (1u << inst.frame->size()) - 1u);
            const Subset x(inst.frame, dist(rng));
            const auto bi = delta(precise, x);
            auto [ib, ip] = interval_bel_pl(interval, x);
            CHECK(ib.lo == Approx(bi.bel).epsilon(1e-12));
            CHECK(ip.hi == Approx(bi.pl).epsilon(1e-12));
        }
    }
}

TEST_CASE("property: interval inclusion monotonicity") {
    std::mt19937_64 rng(909);
    for (int i = 0; i < 200; ++i) {
        auto inst = gen::random_instance(rng, 4, 3, 4);
        std::vector<IntervalMassFunction> narrow, wide;
        std::uniform_real_distribution<double> extra(0.0, 0.3);
        for (const auto& s : inst.sources) {
            IntervalMassFunction::FocalMap nf, wf;
            for (const auto& [bits, mass] : s.focal()) {
                const double down = extra(rng), up = extra(rng);
                const Interval inner(mass * (1.0 - down), mass * (1.0 + up));
                nf[bits] = inner;
                wf[bits] = Interval(inner.lo * (1.0 - extra(rng)), inner.hi * (1.0 + extra(rng)));
            }
            narrow.push_back(IntervalMassFunction::make(inst.frame, std::move(nf)));
            wide.push_back(IntervalMassFunction::make(inst.frame, std::move(wf)));
        }
        auto rn = interval_pcr6(narrow);
        auto rw = interval_pcr6(wide);
        for (const auto& [bits, iv] : rn.focal()) {
            const auto outer = rw.mass_of(bits);
            CHECK(outer.lo <= iv.lo + 1e-12);
            CHECK(outer.hi >= iv.hi - 1e-12);
        }
        const auto dn = interval_dsmp(rn, 0.001);
        const auto dw = interval_dsmp(rw, 0.001);
        for (std::size_t a = 0; a < dn.size(); ++a) {
            CHECK(dw[a].lo <= dn[a].lo + 1e-12);
            CHECK(dw[a].hi >= dn[a].hi - 1e-12);
        }
    }
}

TEST_CASE("property: per-conflict shares contain the product mass") {
    std::mt19937_64 rng(606);
    for (int i = 0; i < 100; ++i) {
        auto inst = gen::random_instance(rng, 3, 3, 3);
        std::vector<IntervalMassFunction> widened;
        for (const auto& s : inst.sources)
            widened.push_back(random_interval_mass(rng, inst.frame, 0.25).first);
        auto result = interval_fuse(FusionRule::PCR6, widened);
        for (const auto& e : result.ledger) {
            Interval sum{0.0};
            for (const auto& [bits, share] : e.shares) {
                CHECK(share.lo <= share.hi);
                sum = iadd(sum, share);
            }
            // endpoint arithmetic widens: the share sum contains the product
            CHECK(sum.lo <= e.product.lo + 1e-12);
            CHECK(sum.hi >= e.product.hi - 1e-12);
        }
        // degenerate intervals make that containment an equality
        auto exact = fuse(FusionRule::PCR6, inst.sources);
        for (const auto& e : exact.ledger) {
            double sum = 0.0;
            for (const auto& [bits, share] : e.shares)
                sum += share;
            CHECK(sum == Approx(e.product).epsilon(1e-12));
        }
    }
}

TEST_CASE("interval PCR5 matches precise PCR5 on degenerate inputs") {
    vbied::Fixture v;
    std::vector<IntervalMassFunction> degenerate;
    for (const auto& s : v.table1()) {
        IntervalMassFunction::FocalMap focal;
        for (const auto& [bits, mass] : s.focal())
            focal[bits] = Interval(mass);
        degenerate.push_back(IntervalMassFunction::make(v.theta, std::move(focal)));
    }
    auto precise = pcr5(v.table1());
    auto interval = interval_pcr5(degenerate);
    for (const auto& [bits, mass] : precise.focal()) {
        CHECK(interval.mass_of(bits).lo == Approx(mass).epsilon(1e-12));
        CHECK(interval.mass_of(bits).hi == Approx(mass).epsilon(1e-12));
    }
}
