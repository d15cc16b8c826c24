#include <gtest/gtest.h>

#include <cmath>
#include <numeric>

#include "siirv/error.hpp"
#include "siirv/pmf.hpp"
#include "siirv/siirv.hpp"
#include "siirv/catalog.hpp"
#include "support.hpp"

using namespace siirv;
using siirv::test::closed_geometric;
using siirv::test::random_table;

TEST(PmfTable, RejectsNegativeEntriesAndHeavyTails) {
    EXPECT_THROW(PMFTable::make(0, {0.5, -0.1, 0.6}), InvalidInput);
    EXPECT_THROW(PMFTable::make(0, {0.4}, 0.6), InvalidInput);
    EXPECT_THROW(PMFTable::make(0, {0.7, 0.7}), InvalidInput);
    EXPECT_NO_THROW(PMFTable::make(0, {0.3, 0.3}, 0.4));
}

TEST(TvDistance, IdenticalTablesHaveZeroValueAndSummedTailsAsSlack) {
    // a renormalised window can sit a full tail_bound away from the law it stands for
    const auto p = PMFTable::make(-2, {0.2, 0.5, 0.29}, 0.01);
    const auto r = tv_distance(p, p);
    EXPECT_EQ(r.value, 0.0);
    EXPECT_DOUBLE_EQ(r.slack, 0.02);
}

TEST(TvDistance, SlackCoversRenormalisedWindows) {
    // Geometric(1/2) cut at 10 entries and renormalised, against a much longer window
    const auto exact = siirv::test::closed_geometric(std::log(2.0), 1e-15);
    std::vector<double> w(exact.probs.begin(), exact.probs.begin() + 10);
    double m = 0.0;
    for (double v : w) m += v;
    for (double& v : w) v /= m;
    const auto cut = PMFTable::make(0, w, 1.0 - m);
    const auto r = tv_distance(cut, exact);
    EXPECT_GT(r.value, 0.5 * (cut.tail_bound + exact.tail_bound));
    EXPECT_LE(r.value, r.slack);
}

TEST(TvDistance, DisjointPointMasses) {
    const auto r = tv_distance(PMFTable::point_mass(0), PMFTable::point_mass(1));
    EXPECT_DOUBLE_EQ(r.value, 1.0);
    EXPECT_EQ(r.slack, 0.0);
}

TEST(TvDistance, GeometricPairMatchesClosedForm) {
    const auto p = closed_geometric(std::log(2.0), 1e-12);
    const auto q = closed_geometric(std::log(3.0), 1e-12);
    double oracle = 0.0;
    for (int x = 0; x < 200; ++x) oracle += std::abs(0.5 * std::pow(0.5, x) - (2.0 / 3.0) * std::pow(1.0 / 3.0, x));
    oracle *= 0.5;
    EXPECT_NEAR(tv_distance(p, q).value, oracle, 1e-9);
    EXPECT_NEAR(oracle, 0.16666666666666666, 1e-9);
}

TEST(TvDistance, SymmetricAndTriangleUpToSlack) {
    Rng rng(11);
    for (int i = 0; i < 500; ++i) {
        auto a = random_table(rng), b = random_table(rng), c = random_table(rng);
        const auto ab = tv_distance(a, b), ba = tv_distance(b, a), bc = tv_distance(b, c), ac = tv_distance(a, c);
        EXPECT_DOUBLE_EQ(ab.value, ba.value);
        EXPECT_LE(ac.value, ab.value + bc.value + ab.slack + bc.slack + 1e-12);
        EXPECT_GE(ab.value, 0.0);
        EXPECT_LE(ab.value, 1.0 + 1e-12);
    }
}

TEST(Convolve, PointMasses) {
    const auto r = convolve(PMFTable::point_mass(2), PMFTable::point_mass(3));
    ASSERT_EQ(r.size(), 1u);
    EXPECT_EQ(r.lo, 5);
    EXPECT_DOUBLE_EQ(r.probs[0], 1.0);
}

TEST(Convolve, BernoulliPairIsBinomial) {
    const auto b = PMFTable::make(0, {0.5, 0.5});
    const auto r = convolve(b, b);
    ASSERT_EQ(r.size(), 3u);
    EXPECT_EQ(r.lo, 0);
    EXPECT_DOUBLE_EQ(r.probs[0], 0.25);
    EXPECT_DOUBLE_EQ(r.probs[1], 0.5);
    EXPECT_DOUBLE_EQ(r.probs[2], 0.25);
}

TEST(Convolve, TailBoundsAdd) {
    const auto p = PMFTable::make(0, {0.5, 0.49}, 0.01);
    const auto q = PMFTable::make(0, {0.3, 0.68}, 0.02);
    EXPECT_NEAR(convolve(p, q).tail_bound, 0.03, 1e-15);
}

TEST(Convolve, FiftyFoldGeometricMatchesNegativeBinomialMoments) {
    // NB(50, 1/2) counting failures: mean 50 (1-p)/p = 50, variance 50 (1-p)/p^2 = 100
    const auto g = closed_geometric(std::log(2.0), 1e-15);
    const auto m = moments(convolve_power(g, 50));
    EXPECT_NEAR(m.mean, 50.0, 1e-6);
    EXPECT_NEAR(m.variance, 100.0, 1e-6);
    // repeated squaring agrees with sequential convolution
    PMFTable seq = g;
    for (int i = 1; i < 50; ++i) seq = convolve(seq, g);
    EXPECT_LE(tv_distance(seq, convolve_power(g, 50)).value, 1e-12);
}

TEST(Convolve, WindowCapRaises) {
    const auto p = PMFTable::make(0, std::vector<double>(100, 0.01));
    EXPECT_THROW(convolve(p, p, 150), WindowOverflow);
}

TEST(Convolve, CommutativeAndAssociative) {
    Rng rng(5);
    for (int i = 0; i < 200; ++i) {
        auto a = random_table(rng), b = random_table(rng), c = random_table(rng);
        const auto ab = convolve(a, b), ba = convolve(b, a);
        ASSERT_EQ(ab.lo, ba.lo);
        ASSERT_EQ(ab.size(), ba.size());
        for (std::size_t j = 0; j < ab.size(); ++j) EXPECT_NEAR(ab.probs[j], ba.probs[j], 1e-12);
        const auto l = convolve(ab, c), r = convolve(a, convolve(b, c));
        for (std::int64_t x = std::min(l.lo, r.lo); x <= std::max(l.hi(), r.hi()); ++x) EXPECT_NEAR(l.at(x), r.at(x), 1e-12);
    }
}

TEST(Convolve, MomentsAdd) {
    Rng rng(6);
    for (int i = 0; i < 200; ++i) {
        auto a = random_table(rng), b = random_table(rng);
        const auto ma = moments(a), mb = moments(b), mab = moments(convolve(a, b));
        EXPECT_NEAR(mab.mean, ma.mean + mb.mean, 1e-9);
        EXPECT_NEAR(mab.variance, ma.variance + mb.variance, 1e-9);
    }
}

TEST(SumPmf, SingleTermIsUnchanged) {
    const auto t = PMFTable::make(3, {0.1, 0.6, 0.3});
    SIIRVSpec s;
    s.terms.emplace_back(t);
    const auto r = sum_pmf(s, nullptr);
    EXPECT_EQ(r.lo, 3);
    ASSERT_EQ(r.size(), 3u);
    for (std::size_t i = 0; i < 3; ++i) EXPECT_DOUBLE_EQ(r.probs[i], t.probs[i]);
}

TEST(SumPmf, TwoPointMasses) {
    SIIRVSpec s;
    s.terms.emplace_back(PMFTable::point_mass(1));
    s.terms.emplace_back(PMFTable::point_mass(1));
    const auto r = sum_pmf(s, nullptr);
    EXPECT_EQ(r.lo, 2);
    EXPECT_DOUBLE_EQ(r.at(2), 1.0);
}

TEST(SumPmf, GeometricMeansAdd) {
    const auto g = catalog::geometric(0.5, 3.0);
    SIIRVSpec s;
    double expect = 0.0;
    for (double a : {0.5, 0.9, 1.4, 2.2, 3.0}) {
        s.terms.emplace_back(ParamVector{a});
        expect += catalog::geometric_mean(a);
    }
    EXPECT_NEAR(moments(sum_pmf(s, &g, 1e-14)).mean, expect, 1e-9);
}

TEST(SumPmf, ParametricTermsNeedAFamily) {
    SIIRVSpec s;
    s.terms.emplace_back(ParamVector{1.0});
    EXPECT_THROW(sum_pmf(s, nullptr), InvalidInput);
}

TEST(Shift, RoundTrips) {
    const auto p = PMFTable::make(-1, {0.2, 0.3, 0.5});
    const auto z = shift(p, 0);
    EXPECT_EQ(z.lo, p.lo);
    EXPECT_EQ(z.probs, p.probs);
    const auto back = shift(shift(p, 1), -1);
    EXPECT_EQ(back.lo, p.lo);
    EXPECT_EQ(back.probs, p.probs);
}

TEST(Shift, UnimodalShiftDistanceIsModeMass) {
    Rng rng(8);
    for (int i = 0; i < 200; ++i) {
        // unimodal table: increasing then decreasing weights
        const int up = static_cast<int>(rng.uniform_int(0, 5)), down = static_cast<int>(rng.uniform_int(0, 5));
        std::vector<double> w;
        double v = rng.uniform(0.1, 1.0);
        for (int j = 0; j < up; ++j) w.push_back(v), v += rng.uniform(0.0, 1.0);
        w.push_back(v);
        for (int j = 0; j < down; ++j) v *= rng.uniform(0.0, 1.0), w.push_back(v);
        const double s = std::accumulate(w.begin(), w.end(), 0.0);
        for (auto& x : w) x /= s;
        const auto p = PMFTable::make(rng.uniform_int(-4, 4), w);
        ASSERT_TRUE(modes_of(p).unimodal);
        const auto t = tv_distance(p, shift(p, 1));
        EXPECT_NEAR(t.value, *std::max_element(w.begin(), w.end()), 1e-12 + t.slack);
    }
}

TEST(Moments, PointMassAndBernoulli) {
    const auto m0 = moments(PMFTable::point_mass(7));
    EXPECT_DOUBLE_EQ(m0.mean, 7.0);
    EXPECT_DOUBLE_EQ(m0.variance, 0.0);
    EXPECT_DOUBLE_EQ(m0.third_abs, 0.0);
    EXPECT_DOUBLE_EQ(m0.fourth, 0.0);
    const auto mb = moments(PMFTable::make(0, {0.5, 0.5}));
    EXPECT_DOUBLE_EQ(mb.mean, 0.5);
    EXPECT_DOUBLE_EQ(mb.variance, 0.25);
    EXPECT_DOUBLE_EQ(mb.third_abs, 0.125);
    EXPECT_DOUBLE_EQ(mb.fourth, 0.0625);
}

TEST(Moments, GeometricHalf) {
    // (1 - p) / p = 1 and (1 - p) / p^2 = 2 at p = 1/2
    const auto m = moments(closed_geometric(std::log(2.0), 1e-15));
    EXPECT_NEAR(m.mean, 1.0, 1e-6);
    EXPECT_NEAR(m.variance, 2.0, 1e-6);
}

TEST(Modes, Examples) {
    const auto a = modes_of(PMFTable::point_mass(4));
    EXPECT_EQ(a.modes, std::vector<std::int64_t>{4});
    EXPECT_TRUE(a.unimodal);
    const auto b = modes_of(PMFTable::make(0, {1.0 / 3, 1.0 / 3, 1.0 / 3}));
    EXPECT_EQ(b.modes, (std::vector<std::int64_t>{0, 1, 2}));
    EXPECT_TRUE(b.unimodal);
    const auto c = modes_of(PMFTable::make(0, {0.4, 0.1, 0.5}));
    EXPECT_EQ(c.modes, std::vector<std::int64_t>{2});
    EXPECT_FALSE(c.unimodal);
}

TEST(Sample, PointMassAndDeterminism) {
    Rng r1(3);
    for (auto x : sample(PMFTable::point_mass(-6), r1, 50)) EXPECT_EQ(x, -6);
    const auto g = closed_geometric(std::log(2.0), 1e-14);
    Rng a(99), b(99);
    EXPECT_EQ(sample(g, a, 1000), sample(g, b, 1000));
}

TEST(Sample, GeometricEmpiricalMeanWithinThreeSigma) {
    const auto g = closed_geometric(std::log(2.0), 1e-14);
    Rng rng(2024);
    const auto xs = sample(g, rng, 100000);
    const double mean = std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
    EXPECT_NEAR(mean, 1.0, 3.0 * std::sqrt(2.0) / std::sqrt(1e5));
}

TEST(Rng, SplitStreamsIgnoreParentDraws) {
    Rng a(42), b(42);
    for (int i = 0; i < 10; ++i) b.next_u64();
    auto ca = a.split(7), cb = b.split(7);
    for (int i = 0; i < 20; ++i) EXPECT_EQ(ca.next_u64(), cb.next_u64());
    auto c1 = a.split(1), c2 = a.split(2);
    EXPECT_NE(c1.next_u64(), c2.next_u64());
}

TEST(Trim, ChargesRemovedMassToTail) {
    auto p = PMFTable::make(0, {1e-17, 0.5, 0.5 - 2e-17, 1e-17});
    trim(p);
    EXPECT_EQ(p.lo, 1);
    EXPECT_EQ(p.size(), 2u);
    EXPECT_NEAR(p.tail_bound, 2e-17, 1e-30);
}
