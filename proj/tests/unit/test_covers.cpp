#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <functional>

#include "siirv/catalog.hpp"
#include "siirv/covers.hpp"
#include "siirv/error.hpp"
#include "support.hpp"

using namespace siirv;

namespace {

CoverRegion interval(double lo, double hi) {
    return {[lo, hi](const Vec& a) { return a[0] >= lo - 1e-12 && a[0] <= hi + 1e-12; }, {lo}, {hi}};
}

PMFTable sum_of(const ExpFamilySpec& f, const std::vector<ParamVector>& ps) {
    SIIRVSpec s;
    for (const auto& p : ps) s.terms.emplace_back(p);
    return sum_pmf(s, &f, 1e-14);
}

// Every multiset of size 1..n over pts, by recursion.
void each_multiset(std::size_t pts, std::size_t n, const std::function<void(const std::vector<std::size_t>&)>& f) {
    std::vector<std::size_t> cur;
    std::function<void(std::size_t)> rec = [&](std::size_t start) {
        if (!cur.empty()) f(cur);
        if (cur.size() == n) return;
        for (std::size_t i = start; i < pts; ++i) {
            cur.push_back(i);
            rec(i);
            cur.pop_back();
        }
    };
    rec(0);
}

}  // namespace

TEST(EuclidCover, SegmentAtFullRadius) {
    const double r = 2.0;
    const auto pts = euclid_cover(interval(0.0, r), r);
    EXPECT_LE(pts.size(), 3u);
    for (int i = 0; i <= 1000; ++i) {
        const double x = r * i / 1000.0;
        double best = 1e9;
        for (const auto& p : pts) best = std::min(best, std::abs(p[0] - x));
        EXPECT_LE(best, r + 1e-12);
    }
}

TEST(EuclidCover, SinglePoint) {
    const auto pts = euclid_cover(interval(0.7, 0.7), 0.1);
    ASSERT_EQ(pts.size(), 1u);
    EXPECT_NEAR(pts[0][0], 0.7, 1e-12);
}

TEST(EuclidCover, RandomBoxesCoveredAndSeparated) {
    Rng rng(1);
    for (int b = 0; b < 5; ++b) {
        const Vec lo{rng.uniform(-2, 0), rng.uniform(-2, 0)};
        const Vec hi{lo[0] + rng.uniform(0.5, 2), lo[1] + rng.uniform(0.5, 2)};
        const double eps = rng.uniform(0.1, 0.4);
        CoverRegion reg{[&](const Vec& a) { return a[0] >= lo[0] && a[0] <= hi[0] && a[1] >= lo[1] && a[1] <= hi[1]; },
                        lo, hi};
        const auto pts = euclid_cover(reg, eps);
        const double r = std::max(norm(lo), norm(hi)) + norm(sub(hi, lo));
        EXPECT_LE(static_cast<double>(pts.size()), std::pow(1.0 + 2.0 * r / eps, 2));
        for (std::size_t i = 0; i < pts.size(); ++i)
            for (std::size_t j = i + 1; j < pts.size(); ++j) EXPECT_GT(distance(pts[i], pts[j]), eps);
        // grid points are covered within eps; arbitrary points within eps plus half a grid diagonal
        const double slack = eps / 2.0;
        for (int s = 0; s < 10000; ++s) {
            const Vec a{rng.uniform(lo[0], hi[0]), rng.uniform(lo[1], hi[1])};
            double best = 1e9;
            for (const auto& p : pts) best = std::min(best, distance(a, p));
            EXPECT_LE(best, eps + slack);
        }
    }
}

TEST(EuclidCover, GridCapRaises) {
    EXPECT_THROW(euclid_cover(interval(0.0, 1.0), 1e-6, 1000), GridOverflow);
}

TEST(Sparsify, GeometricGridIsCovered) {
    const auto g = catalog::geometric(0.5, 3.0);
    const auto pc = sparsify_family(g, 0.1);
    for (const auto& p : pc.points) EXPECT_TRUE(g.in_rho_cone(p));
    EXPECT_LE(static_cast<double>(pc.points.size()), sparse_size_bound(g, 0.1));
    for (int i = 0; i < 100; ++i) {
        const ParamVector a{0.5 + 2.5 * i / 99.0};
        const auto pa = pmf_member(g, a, 1e-13);
        double best = 1.0;
        for (auto id : pc.nearest(a, 4)) best = std::min(best, tv_distance(pa, pmf_member(g, pc.points[id], 1e-13)).value);
        EXPECT_LE(best, 0.1 + 1e-6) << a[0];
    }
}

TEST(Sparsify, SizeBoundFormula) {
    const auto g = catalog::geometric(0.5, 3.0);
    const double r = sparsify_family(g, 0.2).r_crit;
    EXPECT_NEAR(sparse_size_bound(g, 0.2), 1.0 + 2.0 * r * std::sqrt(g.Lambda / 2.0) / 0.2, 1e-9);
}

TEST(CriticalOrder, PinnedPolynomials) {
    const auto g = catalog::geometric(0.8, 1.2);
    const auto c = critical_order(g, 0.2);
    const double e2 = 0.04, B = g.B, gm = g.gamma, L = g.L;
    EXPECT_NEAR(c.n1, B * B / (e2 * std::pow(gm, 3)), 1e-9 * c.n1);
    EXPECT_NEAR(c.n2, std::pow(B, 7) / (e2 * std::pow(gm, 7)), 1e-9 * c.n2);
    EXPECT_NEAR(c.n3, std::pow(B, 7.5) / (e2 * std::pow(gm, 8)), 1e-9 * c.n3);
    EXPECT_NEAR(c.n4, (L * L + std::sqrt(B)) / (e2 * gm * gm), 1e-9 * c.n4);
    EXPECT_EQ(c.n_crit, static_cast<std::uint64_t>(std::ceil(std::max({c.n1, c.n2, c.n3, c.n4}))));
}

TEST(CoverSiierv, SmallOrderHasNoDensePart) {
    const auto g = catalog::geometric(0.8, 1.2);
    const auto c = cover_siierv(g, 3, 0.3);
    EXPECT_FALSE(c.dense_enabled);
    EXPECT_EQ(c.sparse_order, 3u);
    EXPECT_THROW(cover_siierv(g, 3, 0.0), InvalidInput);
}

TEST(CoverSiierv, DenseOrderRangeAndLattice) {
    const auto g = catalog::geometric(0.8, 1.2);
    Constants k;
    k.c_n = {1e-14, 1e-14, 1e-14, 1e-14};
    const auto c = cover_siierv(g, 200, 0.2, k);
    ASSERT_TRUE(c.dense_enabled);
    EXPECT_EQ(c.m_max, static_cast<std::int64_t>(std::ceil(200 * std::sqrt(g.B) / g.gamma)));
    EXPECT_LE(c.m_min, c.m_max);
    EXPECT_NEAR(c.dense.radius, 0.2 / c.m_max * std::sqrt(2.0 / g.Lambda), 1e-15);
    // every base-region point is within the lattice radius of its nearest lattice point
    Rng rng(2);
    for (int i = 0; i < 200; ++i) {
        const Vec a = g.base_region.sample(rng);
        EXPECT_LE(distance(a, c.dense.point(c.dense.nearest_index(a))), c.dense.radius + 1e-12);
    }
}

TEST(NearestInCover, ExhaustiveMatchesBruteForce) {
    const auto g = catalog::geometric(0.8, 1.2);
    auto c = cover_siierv(g, 2, 0.3);
    // a thinned cover keeps the brute force at desk scale
    std::vector<ParamVector> thin;
    for (std::size_t i = 0; i < c.sparse.points.size(); i += 4) thin.push_back(c.sparse.points[i]);
    c.sparse.points = thin;
    c.sparse.build_index();
    ASSERT_LE(c.sparse_candidate_count(), 1000.0);
    Rng rng(4);
    for (int trial = 0; trial < 10; ++trial) {
        const auto x = sum_of(g, {{rng.uniform(0.8, 1.2)}, {rng.uniform(0.8, 1.2)}});
        double brute = 1.0;
        std::uint64_t count = 0;
        each_multiset(c.sparse.points.size(), c.sparse_order, [&](const std::vector<std::size_t>& ids) {
            std::vector<ParamVector> ps;
            for (auto i : ids) ps.push_back(c.sparse.points[i]);
            brute = std::min(brute, tv_distance(x, sum_of(g, ps)).value);
            ++count;
        });
        EXPECT_DOUBLE_EQ(static_cast<double>(count), c.sparse_candidate_count());
        const auto r = nearest_in_cover(x, c, g);
        EXPECT_FALSE(r.heuristic);
        EXPECT_EQ(r.regime, "sparse");
        EXPECT_NEAR(r.tv.value, brute, 1e-12);
    }
}

TEST(NearestInCover, ContainsItself) {
    const auto g = catalog::geometric(0.8, 1.2);
    const auto c = cover_siierv(g, 3, 0.3);
    const auto x = sum_of(g, {c.sparse.points.front(), c.sparse.points.back()});
    const auto r = nearest_in_cover(x, c, g);
    EXPECT_LE(r.tv.value, r.tv.slack + 1e-12);
}

TEST(NearestInCover, SingletonCover) {
    const auto g = catalog::geometric(0.8, 1.2);
    auto c = cover_siierv(g, 1, 0.3);
    c.sparse.points.resize(1);
    c.sparse.build_index();
    const auto x = sum_of(g, {{1.0}});
    const auto r = nearest_in_cover(x, c, g);
    ASSERT_EQ(r.params.size(), 1u);
    EXPECT_EQ(r.params[0], c.sparse.points[0]);
    EXPECT_NEAR(r.tv.value, tv_distance(x, pmf_member(g, c.sparse.points[0], 1e-14)).value, 1e-12);
}

TEST(MomentMatch, FixedPointOfAnIidSum) {
    const auto g = catalog::geometric(0.5, 3.0);
    const double b = 1.3;
    const auto m1 = moments(pmf_member(g, {b}, 1e-14));
    const auto r = moment_match(12 * m1.mean, 12 * m1.variance, g, g.base_region.path());
    EXPECT_NEAR(r.b[0], b, 1e-6);
    EXPECT_EQ(r.m, 12);
}

TEST(MomentMatch, SandwichOnGeometricSums) {
    const auto g = catalog::geometric(0.3, 2.0);
    std::vector<ParamVector> ps;
    for (int rep = 0; rep < 10; ++rep)
        for (double a : {0.5, 1.0, 1.5}) ps.push_back({a});
    const auto x = moments(sum_of(g, ps));
    const auto r = moment_match(x.mean, x.variance, g, g.base_region.path());
    const auto y = moments(convolve_power(pmf_member(g, r.b, 1e-14), r.m));
    EXPECT_GE(y.variance, x.variance - 1e-6);
    EXPECT_LE(y.variance, x.variance + std::sqrt(g.B) + 1e-6);
    EXPECT_LE(std::abs(y.mean - x.mean), std::abs(r.mean_b) + 1e-6);
}

TEST(MomentMatch, CentredTargetOnSymmetricPath) {
    const auto dg = catalog::discrete_gaussian(Box{{-1.5, 1.5}, {1.5, 3.0}});
    const auto r = moment_match(0.0, 5.0, dg, {{-1.5, 2.0}, {1.5, 2.0}});
    EXPECT_LE(std::abs(r.mean_b), 1e-6);
    EXPECT_GE(r.m * r.var_b, 5.0 - 1e-9);
}

TEST(MomentMatch, NegativeMeanMirrorsPositiveCase) {
    // pmf ~ exp(-a1 x - a2 x^2) has mean near -a1 / (2 a2): a1 > 0 gives a negative mean
    const auto dg = catalog::discrete_gaussian(Box{{-1.5, 1.5}, {1.5, 3.0}});
    Rng rng(8);
    std::vector<ParamVector> ps;
    for (int i = 0; i < 8; ++i) ps.push_back({rng.uniform(0.5, 1.5), rng.uniform(1.5, 3.0)});
    const auto x = moments(sum_of(dg, ps));
    ASSERT_LT(x.mean, 0.0);
    const auto r = moment_match(x.mean, x.variance, dg, ps);
    const auto y = moments(convolve_power(pmf_member(dg, r.b, 1e-14), r.m));
    EXPECT_GE(y.variance, x.variance - 1e-6);
    EXPECT_LE(y.variance, x.variance + std::sqrt(dg.B) + 1e-6);
    EXPECT_LE(std::abs(y.mean - x.mean), std::abs(r.mean_b) + 1e-6);
}

TEST(MomentMatch, UnbracketedPathFails) {
    const auto g = catalog::geometric(0.3, 2.0);
    // Var / E = 1 / (1 - e^-a) is at least 1 for every geometric
    EXPECT_THROW(moment_match(10.0, 5.0, g, g.base_region.path()), BracketFailure);
}

TEST(RatioOfSums, SandwichOnRandomSequences) {
    Rng rng(9);
    for (int i = 0; i < 1000; ++i) {
        const int n = static_cast<int>(rng.uniform_int(1, 20));
        double sa = 0.0, sb = 0.0, lo = 1e300, hi = -1e300;
        for (int j = 0; j < n; ++j) {
            const double a = std::exp(rng.uniform(-5, 5)), b = std::exp(rng.uniform(-5, 5));
            sa += a, sb += b;
            lo = std::min(lo, a / b), hi = std::max(hi, a / b);
        }
        EXPECT_LE(lo, sa / sb * (1 + 1e-12));
        EXPECT_GE(hi, sa / sb * (1 - 1e-12));
    }
}

TEST(RatioOfSums, VarianceToMeanOfASumIsBracketedByItsTerms) {
    // the moment-matching bracket relies on this instance of the inequality
    const auto g = catalog::geometric(0.3, 2.0);
    Rng rng(10);
    for (int i = 0; i < 50; ++i) {
        std::vector<ParamVector> ps;
        double lo = 1e300, hi = 0.0;
        for (int j = 0; j < 6; ++j) {
            const ParamVector a{rng.uniform(0.3, 2.0)};
            const auto m = moments(pmf_member(g, a, 1e-14));
            lo = std::min(lo, m.variance / m.mean), hi = std::max(hi, m.variance / m.mean);
            ps.push_back(a);
        }
        const auto x = moments(sum_of(g, ps));
        EXPECT_LE(lo, x.variance / x.mean * (1 + 1e-9));
        EXPECT_GE(hi, x.variance / x.mean * (1 - 1e-9));
    }
}
