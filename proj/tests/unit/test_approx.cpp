#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "siirv/approx.hpp"
#include "siirv/catalog.hpp"
#include "support.hpp"

using namespace siirv;

namespace {

double phi(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

}  // namespace

TEST(DiscGauss, StandardAtZero) {
    const auto p = disc_gauss_pmf({0.0, 1.0}, 1e-12);
    EXPECT_NEAR(p.at(0), phi(0.5) - phi(-0.5), 1e-12);
    EXPECT_NEAR(p.at(0), 0.38292, 1e-5);
    for (int x = 1; x < 6; ++x) EXPECT_NEAR(p.at(x), p.at(-x), 1e-15);
    EXPECT_NEAR(p.mass(), 1.0, 1e-12);
}

TEST(DiscGauss, IntegerMeanAndUnimodal) {
    for (double mu : {-7.0, 0.0, 12.0})
        for (double s2 : {0.3, 4.0, 250.0}) {
            const auto p = disc_gauss_pmf({mu, s2}, 1e-12);
            EXPECT_NEAR(moments(p).mean, mu, 1e-9);
            EXPECT_TRUE(modes_of(p).unimodal);
            EXPECT_LE(p.tail_bound, 1e-12);
        }
    const auto q = disc_gauss_pmf({3.3, 7.1}, 1e-12);
    EXPECT_TRUE(modes_of(q).unimodal);
}

TEST(TvGauss, Examples) {
    EXPECT_EQ(tv_gauss_bound({1.0, 2.0}, {1.0, 2.0}), 0.0);
    EXPECT_NEAR(tv_gauss_bound({0.0, 100.0}, {1.0, 100.0}), 0.05, 1e-15);
    // sigma1 is the smaller one whichever order is given
    EXPECT_DOUBLE_EQ(tv_gauss_bound({0.0, 4.0}, {1.0, 9.0}), tv_gauss_bound({1.0, 9.0}, {0.0, 4.0}));
    EXPECT_NEAR(tv_gauss_bound({0.0, 4.0}, {1.0, 9.0}), 0.5 * (1.0 / 2.0 + 5.0 / 4.0), 1e-15);
}

TEST(TvGauss, DominatesOracle) {
    Rng rng(1);
    for (int i = 0; i < 50; ++i) {
        const GaussParams a{rng.uniform(-5, 5), rng.uniform(0.5, 50)}, b{rng.uniform(-5, 5), rng.uniform(0.5, 50)};
        EXPECT_TRUE(check_tv_gauss(a, b).holds);
    }
}

TEST(TvPoisson, Examples) {
    EXPECT_EQ(tv_poisson_bound(2.0, 2.0), 0.0);
    EXPECT_NEAR(tv_poisson_bound(1.0, 1.1), std::sinh(0.1), 1e-15);
    EXPECT_NEAR(std::sinh(0.1), 0.10017, 1e-5);
    Rng rng(2);
    for (int i = 0; i < 50; ++i) {
        const double l = rng.uniform(0.1, 20.0);
        EXPECT_TRUE(check_tv_poisson(l, l + rng.uniform(0.0, 0.5)).holds);
    }
}

TEST(PoissonPmf, MatchesDirectFormula) {
    const auto p = poisson_pmf(3.5, 1e-14);
    double f = std::exp(-3.5);
    for (int x = 0; x < 20; ++x) {
        EXPECT_NEAR(p.at(x), f, 1e-14);
        f *= 3.5 / (x + 1);
    }
}

TEST(ShiftDistance, Examples) {
    EXPECT_DOUBLE_EQ(shift_distance_bound({}), 1.0);
    EXPECT_NEAR(std::sqrt(2.0 / std::numbers::pi) / 0.5, 1.5958, 1e-4);
    const std::vector<double> half(100, 0.5);
    EXPECT_NEAR(shift_distance_bound(half), std::sqrt(2.0 / std::numbers::pi) / std::sqrt(50.25), 1e-15);
    EXPECT_NEAR(shift_distance_bound(half), 0.11256, 1e-5);
}

TEST(ShiftDistance, DominatesOracleOnGeometricSums) {
    Rng rng(3);
    for (int i = 0; i < 30; ++i) {
        std::vector<PMFTable> terms;
        const int n = static_cast<int>(rng.uniform_int(1, 40));
        for (int j = 0; j < n; ++j) terms.push_back(geometric_pmf(rng.uniform(0.2, 0.9), 1e-14));
        EXPECT_TRUE(check_shift_distance(terms).holds);
    }
}

TEST(BerryEsseen, Examples) {
    MomentSummary s;
    s.sigma2 = 1.0;
    EXPECT_NEAR(berry_esseen_bound(s), 1.0 / (2.0 * std::sqrt(2.0 * std::numbers::pi)), 1e-15);
    EXPECT_NEAR(berry_esseen_bound(s), 0.19947, 1e-5);
    s.sigma2 = 1e16;
    EXPECT_LT(berry_esseen_bound(s), 1e-8);
    // full display with every term active
    MomentSummary t{0.0, 4.0, 3.0, 0.1};
    const double sig = 2.0;
    const double expect = 0.1 * (1 + 1.5 * 3.0 / 4.0) +
                          (1.0 / sig) * (1.0 / (2.0 * std::sqrt(2.0 * std::numbers::pi)) +
                                         (5.0 + 3.0 * std::sqrt(std::numbers::pi / 8.0)) * 3.0 / 4.0);
    EXPECT_NEAR(berry_esseen_bound(t), expect, 1e-12);
}

TEST(BerryEsseen, DominatesOracleOnTwoHundredGeometrics) {
    const auto g = catalog::geometric(0.5, 3.0);
    Rng rng(4);
    std::vector<PMFTable> terms;
    for (int j = 0; j < 200; ++j) terms.push_back(pmf_member(g, {rng.uniform(0.8, 1.5)}, 1e-14));
    const auto c = check_berry_esseen(terms);
    EXPECT_TRUE(c.holds) << c.bound << " vs " << c.oracle;
}

TEST(SummarizeSum, MatchesConvolutionMoments) {
    Rng rng(5);
    std::vector<PMFTable> terms;
    for (int j = 0; j < 6; ++j) terms.push_back(geometric_pmf(rng.uniform(0.3, 0.8), 1e-15));
    const auto s = summarize_sum(terms);
    const auto m = moments(convolve_all(terms));
    EXPECT_NEAR(s.mu, m.mean, 1e-9);
    EXPECT_NEAR(s.sigma2, m.variance, 1e-9);
    double beta = 0.0;
    for (const auto& t : terms) beta += moments(t).third_abs;
    EXPECT_NEAR(s.beta, beta, 1e-9);
}

TEST(PoissonApprox, Examples) {
    const std::vector<double> half{0.5};
    const auto r = poisson_approx_bound(half);
    EXPECT_DOUBLE_EQ(r.lambda, 1.0);
    EXPECT_DOUBLE_EQ(r.bound, 1.0);
    const std::vector<double> near_one(10, 1.0 - 1e-9);
    EXPECT_LT(poisson_approx_bound(near_one).bound, 1e-8);
    Rng rng(6);
    for (int i = 0; i < 5; ++i) {
        std::vector<double> ps;
        for (int j = 0; j < 4; ++j) ps.push_back(rng.uniform(0.5, 0.99));
        EXPECT_TRUE(check_poisson_approx(ps).holds);
    }
}

TEST(GeometricPmf, SuccessParametrisation) {
    const auto p = geometric_pmf(0.25, 1e-14);
    for (int x = 0; x < 30; ++x) EXPECT_NEAR(p.at(x), 0.25 * std::pow(0.75, x), 1e-15);
}
