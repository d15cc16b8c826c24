#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "siirv/catalog.hpp"
#include "siirv/error.hpp"
#include "siirv/expfam.hpp"
#include "support.hpp"

using namespace siirv;

namespace {

// T = (x, x^2) on the integers with the full upper cone, for mode checks
// away from the catalog box.
ExpFamilySpec quad_family() {
    auto s = catalog::discrete_gaussian(Box{{-1.5, 1.5}, {1.5, 3.0}});
    s.L = 1.0;
    return s;
}

double zeta6() { return std::pow(std::numbers::pi, 6) / 945.0; }

}  // namespace

TEST(Mode, GeometricIsZero) {
    const auto g = catalog::geometric(0.1, 5.0);
    for (double a : {0.1, 1.0, 5.0, 40.0}) EXPECT_EQ(mode(g, {a}), std::vector<std::int64_t>{0});
}

TEST(Mode, QuadraticStatistic) {
    const auto s = quad_family();
    EXPECT_EQ(mode(s, {0.0, 2.0}), std::vector<std::int64_t>{0});
    // brute-force argmin of x + x^2 over [-10, 10]; (2, 2) has the same minimisers and lies in the rho-cone
    std::vector<std::int64_t> brute;
    double best = 1e300;
    for (std::int64_t x = -10; x <= 10; ++x) {
        const double v = static_cast<double>(x + x * x);
        if (v < best - 1e-12) best = v, brute = {x};
        else if (std::abs(v - best) <= 1e-12) brute.push_back(x);
    }
    EXPECT_EQ(brute, (std::vector<std::int64_t>{-1, 0}));
    EXPECT_EQ(minimizers(s, {1.0, 1.0}, {-10, 10}), brute);
    EXPECT_EQ(mode(s, {2.0, 2.0}), brute);
}

TEST(Mode, OutOfRangeModeIsAViolation) {
    auto s = quad_family();
    s.L = 0.5;
    EXPECT_THROW(mode(s, {2.0, 2.0}), AssumptionViolation);
}

TEST(Mode, RescalingDoesNotMoveModes) {
    const auto s = quad_family();
    Rng rng(9);
    for (int i = 0; i < 100; ++i) {
        const Vec a = s.base_region.sample(rng);
        const auto m = mode(s, a);
        for (double t : {1.0, 1.7, 4.0, 25.0}) EXPECT_EQ(mode(s, scale(a, t)), m);
    }
    const auto g = catalog::geometric(0.5, 3.0);
    for (double t : {1.0, 3.0, 50.0}) EXPECT_EQ(mode(g, {0.5 * t}), mode(g, {0.5}));
}

TEST(TailRadius, Examples) {
    EXPECT_EQ(tail_radius({1e-12, 0.5, 0.0, 1.0, 1.0}), 1);
    // exp(2.5 / 2.5) = e
    EXPECT_EQ(tail_radius({2.5, 0.5, 0.0, 1.0, 1.0}), 3);
    const double B = 7.0, kappa = 1.3, eta = 0.25, s = 1.0, c = 4.0;
    const double d = 3.0 - eta - s;
    EXPECT_EQ(tail_radius({kappa, eta, s, B, c}),
              static_cast<std::int64_t>(std::ceil(c * std::exp(kappa / d) * std::pow(B, 5.0 / (4.0 * d)))));
}

TEST(TailRadius, VanishingDeviationHoldsPointwise) {
    const auto geo = catalog::geometric(0.5, 3.0);
    const auto lap = catalog::laplacian(0.5, 3.0);
    const auto zet = catalog::zeta(5.5, 9.0);
    const auto dg = quad_family();
    Rng rng(12);
    for (const auto* spec : {&geo, &lap, &zet, &dg}) {
        for (int trial = 0; trial < 20; ++trial) {
            Vec a = spec->base_region.sample(rng);
            if (trial % 2 == 1) a = scale(a, rng.uniform(1.0, 6.0));
            for (double kappa : {0.5, 2.0}) {
                for (double s : {0.0, 1.0, 2.0}) {
                    const double eta = 0.5;
                    const auto ell = tail_radius({kappa, eta, s, spec->B, 4.0});
                    const auto p = pmf_member(*spec, a, 1e-14);
                    const auto m = mode(*spec, a).front();
                    const double pm = p.at(m);
                    const double env = std::exp(-kappa * std::max(1.0, norm(a) / spec->rho));
                    for (std::int64_t x = p.lo; x <= p.hi(); ++x) {
                        const double d = std::abs(static_cast<double>(x - m));
                        if (d < static_cast<double>(ell)) continue;
                        EXPECT_LE(p.at(x), env * pm / std::pow(d, 1.0 + eta + s) * (1.0 + 1e-9))
                            << "x=" << x << " a0=" << a[0];
                    }
                }
            }
        }
    }
}

TEST(PmfMember, GeometricMatchesClosedForm) {
    const auto g = catalog::geometric(0.1, 5.0);
    const auto p = pmf_member(g, {std::log(2.0)}, 1e-10);
    EXPECT_LE(p.tail_bound, 1e-10);
    for (std::int64_t x = p.lo; x <= p.hi(); ++x) EXPECT_NEAR(p.at(x), std::pow(0.5, x + 1), 1e-10);
}

TEST(PmfMember, ZetaMatchesRiemannZeta) {
    const auto z = catalog::zeta(5.5, 9.0);
    const auto p = pmf_member(z, {6.0}, 1e-10);
    EXPECT_NEAR(p.at(1), 1.0 / zeta6(), 1e-6);
    EXPECT_NEAR(1.0 / zeta6(), 0.98295, 1e-5);
    EXPECT_NEAR(p.at(2), std::pow(2.0, -6) / zeta6(), 1e-6);
}

TEST(PmfMember, NormalisedAndConsistentWithMode) {
    const auto geo = catalog::geometric(0.5, 3.0);
    const auto dg = quad_family();
    Rng rng(13);
    for (const auto* spec : {&geo, &dg}) {
        for (int i = 0; i < 50; ++i) {
            const Vec a = scale(spec->base_region.sample(rng), rng.uniform(1.0, 3.0));
            const double tail = 1e-9;
            const auto p = pmf_member(*spec, a, tail);
            EXPECT_NO_THROW(p.validate());
            EXPECT_LE(p.tail_bound, tail);
            EXPECT_NEAR(p.mass(), 1.0, tail + 1e-12);
            EXPECT_EQ(modes_of(p).modes, mode(*spec, a));
        }
    }
}

TEST(PmfMember, OutsideRhoConeRejected) {
    const auto g = catalog::geometric(0.5, 3.0);
    EXPECT_THROW(pmf_member(g, {0.2}), InvalidInput);
}

TEST(StructuralDistance, IdentityAndDifferentModes) {
    const auto s = quad_family();
    EXPECT_EQ(structural_distance(s, {0.0, 2.0}, {0.0, 2.0}, {-30, 30}), 0.0);
    // mode 0 against mode set {-1, 0}
    EXPECT_EQ(structural_distance(s, {0.0, 2.0}, {2.0, 2.0}, {-30, 30}), 1.0);
}

TEST(StructuralDistance, GeometricOneVersusTwo) {
    const auto g = catalog::geometric(0.5, 3.0);
    // brute force over x = 0..40: mode-normalised weights e^{-a x}
    const std::vector<double> cand = [] {
        std::vector<double> c{0.0};
        for (int x = 0; x <= 40; ++x) c.push_back(std::exp(-1.0 * x)), c.push_back(std::exp(-2.0 * x));
        return c;
    }();
    double brute = 1.0;
    for (double e : cand) {
        bool ok = true;
        for (int x = 0; x <= 40; ++x) {
            const double r1 = std::exp(-1.0 * x), r2 = std::exp(-2.0 * x);
            const bool small = r1 <= e && r2 <= e;
            const bool equal = std::abs(r1 - r2) <= 1e-9 * std::max(r1, r2);
            ok = ok && (small || equal);
        }
        if (ok) brute = std::min(brute, e);
    }
    EXPECT_NEAR(brute, std::exp(-1.0), 1e-15);
    EXPECT_NEAR(structural_distance(g, {1.0}, {2.0}, {0, 40}), brute, 1e-12);
}

TEST(StructuralDistance, MetricAxiomsOnRandomTriples) {
    const auto geo = catalog::geometric(0.5, 3.0);
    const auto dg = quad_family();
    Rng rng(21);
    for (const auto* spec : {&geo, &dg}) {
        for (int i = 0; i < 100; ++i) {
            const Vec a = spec->base_region.sample(rng), b = spec->base_region.sample(rng), c = spec->base_region.sample(rng);
            const IntRange w{-30, 30};
            const double ab = structural_distance(*spec, a, b, w), ba = structural_distance(*spec, b, a, w);
            const double bc = structural_distance(*spec, b, c, w), ac = structural_distance(*spec, a, c, w);
            EXPECT_EQ(structural_distance(*spec, a, a, w), 0.0);
            EXPECT_NEAR(ab, ba, 1e-15);
            EXPECT_LE(ac, ab + bc + 1e-9);
            EXPECT_GE(ab, 0.0);
            EXPECT_LE(ab, 1.0);
        }
    }
}

TEST(Verify, GeometricCatalogPasses) {
    auto g = catalog::geometric(0.1, 5.0);
    g.L = 0.0;
    g.B = 1e6;
    g.gamma = catalog::geometric_variance(5.0) * 0.9;
    std::vector<ParamVector> samples;
    for (int i = 0; i < 25; ++i) samples.push_back({0.1 + 4.9 * i / 24.0});
    const auto rep = verify_assumptions(g, samples, {0, 100});
    for (const auto& e : rep.entries) EXPECT_TRUE(e.passed) << e.condition << " " << e.witness << " " << e.detail;
}

TEST(Verify, NegativeModeBoundFailsAtZero) {
    auto g = catalog::geometric(0.1, 5.0);
    g.B = 1e6;
    g.gamma = catalog::geometric_variance(5.0) * 0.9;
    g.L = -1.0;
    const auto rep = verify_assumptions(g, {{0.1}, {1.0}}, {0, 100});
    EXPECT_FALSE(rep.all_passed());
    bool found = false;
    for (const auto& e : rep.entries)
        if (e.condition == "modes_in_range") {
            EXPECT_FALSE(e.passed);
            EXPECT_NE(e.witness.find("mode=0"), std::string::npos);
            found = true;
        }
    EXPECT_TRUE(found);
}

TEST(Verify, FourthMomentBelowTruthFails) {
    auto g = catalog::geometric(0.1, 5.0);
    // fourth central moment of a geometric with q = e^-a: q (1 + 7q + q^2) / (1 - q)^4 (hand derivation)
    const double q = std::exp(-0.1);
    const double truth = q * (1.0 + 7.0 * q + q * q) / std::pow(1.0 - q, 4);
    EXPECT_NEAR(catalog::geometric_fourth_central(0.1), truth, truth * 1e-12);
    g.B = truth * 0.9;
    g.gamma = 0.001;
    g.Lambda = 1e6;
    const auto rep = verify_assumptions(g, {{0.1}}, {0, 100});
    for (const auto& e : rep.entries)
        if (e.condition == "fourth_moment_bound") EXPECT_FALSE(e.passed);
}

TEST(PartitionBound, Examples) {
    const auto g = catalog::geometric(0.1, 5.0);
    const auto r = partition_bound_check(g, {std::log(2.0)});
    EXPECT_NEAR(r.value, 2.0, 1e-9);
    EXPECT_NEAR(r.bound, 64.0 * std::pow(g.B, 0.25), 1e-9);
    EXPECT_TRUE(r.holds);
    const auto big = partition_bound_check(g, {60.0});
    EXPECT_NEAR(big.value, 1.0, 1e-12);
    EXPECT_TRUE(big.holds);
    const auto z = catalog::zeta(5.5, 9.0);
    const auto rz = partition_bound_check(z, {6.0});
    EXPECT_NEAR(rz.value, zeta6(), 1e-6);
    EXPECT_TRUE(rz.holds);
}

TEST(PartitionBound, HoldsAcrossCatalogs) {
    const auto geo = catalog::geometric(0.5, 3.0);
    const auto lap = catalog::laplacian(0.5, 3.0);
    const auto zet = catalog::zeta(5.5, 9.0);
    const auto dg = quad_family();
    Rng rng(5);
    for (const auto* spec : {&geo, &lap, &zet, &dg})
        for (int i = 0; i < 30; ++i) {
            const Vec a = scale(spec->base_region.sample(rng), rng.uniform(1.0, 10.0));
            EXPECT_TRUE(partition_bound_check(*spec, a).holds);
        }
}

TEST(KlBound, TvAtMostEuclideanTimesRootHalfLambda) {
    const auto geo = catalog::geometric(0.5, 3.0);
    const auto dg = quad_family();
    Rng rng(6);
    for (const auto* spec : {&geo, &dg})
        for (int i = 0; i < 50; ++i) {
            const Vec a = spec->base_region.sample(rng), b = spec->base_region.sample(rng);
            const auto t = tv_distance(pmf_member(*spec, a, 1e-13), pmf_member(*spec, b, 1e-13));
            EXPECT_LE(t.value - t.slack, distance(a, b) * std::sqrt(spec->Lambda / 2.0) + 1e-12);
        }
}

TEST(Stats, ExplicitTableWindowIsEnforced) {
    const auto c = StatCoord::table(0, {0.0, 1.0, 2.0});
    EXPECT_DOUBLE_EQ(c.eval(2), 2.0);
    EXPECT_THROW(c.eval(3), InvalidInput);
    EXPECT_THROW(StatCoord::catalog("log").eval(0), InvalidInput);
    EXPECT_THROW(StatCoord::catalog("cube"), InvalidInput);
}
