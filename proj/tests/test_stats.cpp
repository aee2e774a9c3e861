#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "pwevo/random.hpp"
#include "pwevo/stats.hpp"

using namespace pwevo;

namespace {

std::vector<double> normal_sample(std::uint64_t seed, std::size_t n, double mean, double sd)
{
    Rng rng(seed);
    std::vector<double> v(n);
    for (auto& x : v) x = mean + sd * rng.normal();
    return v;
}

} // namespace

TEST(Describe, Examples)
{
    const std::vector<double> a{1, 2, 3};
    const auto s = describe(a);
    EXPECT_DOUBLE_EQ(s.mean, 2.0);
    EXPECT_NEAR(s.skewness, 0.0, 1e-15);

    // m2 = 3, m3 = 6 -> g1 = 6 / 3^1.5 = 2/sqrt(3)
    const std::vector<double> b{0, 0, 0, 4};
    const auto t = describe(b);
    EXPECT_DOUBLE_EQ(t.mean, 1.0);
    EXPECT_NEAR(t.std_dev, 2.0, 1e-12);
    EXPECT_NEAR(t.skewness, 2.0 / std::sqrt(3.0), 1e-9);
    EXPECT_NEAR(t.skewness, 1.1547, 5e-5);
}

TEST(Describe, QuartilesByLinearInterpolation)
{
    const std::vector<double> v{7, 1, 3, 5};
    const auto s = describe(v); // sorted 1 3 5 7; positions 0.75, 1.5, 2.25
    EXPECT_DOUBLE_EQ(s.q1, 2.5);
    EXPECT_DOUBLE_EQ(s.median, 4.0);
    EXPECT_DOUBLE_EQ(s.q3, 5.5);
    EXPECT_DOUBLE_EQ(s.min, 1.0);
    EXPECT_DOUBLE_EQ(s.max, 7.0);
}

TEST(Describe, ConstantSampleHasZeroSkewness)
{
    const std::vector<double> v(10, 3.5);
    const auto s = describe(v);
    EXPECT_EQ(s.std_dev, 0.0);
    EXPECT_EQ(s.skewness, 0.0);
}

TEST(Describe, RejectsTinySamples)
{
    const std::vector<double> one{1.0};
    EXPECT_THROW(describe(one), ValidationError);
}

TEST(Describe, PermutationInvariantAndTranslationCovariant)
{
    auto v = normal_sample(3, 501, 0.3, 0.1);
    for (double& x : v) x = x * x; // skewed
    const auto s = describe(v);
    auto p = v;
    std::reverse(p.begin(), p.end());
    std::rotate(p.begin(), p.begin() + 17, p.end());
    const auto sp = describe(p);
    EXPECT_NEAR(sp.mean, s.mean, 1e-12);
    EXPECT_NEAR(sp.std_dev, s.std_dev, 1e-12);
    EXPECT_NEAR(sp.skewness, s.skewness, 1e-9);
    EXPECT_EQ(sp.median, s.median);

    auto shifted = v;
    for (double& x : shifted) x += 10.0;
    const auto ss = describe(shifted);
    EXPECT_NEAR(ss.mean, s.mean + 10.0, 1e-9);
    EXPECT_NEAR(ss.std_dev, s.std_dev, 1e-9);
    EXPECT_NEAR(ss.skewness, s.skewness, 1e-6);
    EXPECT_LE(ss.min, ss.q1);
    EXPECT_LE(ss.q1, ss.median);
    EXPECT_LE(ss.median, ss.q3);
    EXPECT_LE(ss.q3, ss.max);
}

TEST(WelchTTest, ClosedFormFixture)
{
    // s^2 = 2.5 in both, n = 5: t = -1 / sqrt(0.5 + 0.5) = -1, df = 1 / (2 * 0.25 / 4) = 8
    const std::vector<double> a{1, 2, 3, 4, 5};
    const std::vector<double> b{2, 3, 4, 5, 6};
    const auto r = welch_t_test(a, b);
    EXPECT_NEAR(r.t_statistic, -1.0, 1e-12);
    EXPECT_NEAR(r.degrees_of_freedom, 8.0, 1e-12);
    EXPECT_DOUBLE_EQ(r.mean_a, 3.0);
    EXPECT_DOUBLE_EQ(r.mean_b, 4.0);
    EXPECT_NEAR(r.critical_value, 2.306004, 1e-6); // t_{0.975, 8}
    EXPECT_FALSE(r.significant_at_5pct);
}

TEST(WelchTTest, EqualSamplesAreNotSignificant)
{
    const auto a = normal_sample(4, 100, 0.0, 1.0);
    const auto r = welch_t_test(a, a);
    EXPECT_EQ(r.t_statistic, 0.0);
    EXPECT_FALSE(r.significant_at_5pct);
}

TEST(WelchTTest, AntisymmetricInArguments)
{
    const auto a = normal_sample(5, 80, 0.2, 1.0);
    const auto b = normal_sample(6, 120, 0.5, 2.0);
    const auto ab = welch_t_test(a, b);
    const auto ba = welch_t_test(b, a);
    EXPECT_NEAR(ab.t_statistic, -ba.t_statistic, 1e-12);
    EXPECT_NEAR(ab.degrees_of_freedom, ba.degrees_of_freedom, 1e-9);
    EXPECT_GT(ab.degrees_of_freedom, 0.0);
    EXPECT_EQ(ab.significant_at_5pct, std::abs(ab.t_statistic) > ab.critical_value);
}

TEST(WelchTTest, LargeDfCriticalValueApproachesNormal)
{
    EXPECT_NEAR(t_critical(80000.0), 1.95996, 1e-3);
}

TEST(WelchTTest, Errors)
{
    const std::vector<double> c1(5, 1.0);
    const std::vector<double> c2(5, 2.0);
    const std::vector<double> tiny{1.0};
    EXPECT_THROW(welch_t_test(c1, c2), ValidationError);
    EXPECT_THROW(welch_t_test(tiny, c2), ValidationError);
}

TEST(CiMean, ConstantSample)
{
    const std::vector<double> v(40000, 5.0);
    const auto ci = ci_mean(v, 95.0);
    EXPECT_EQ(ci.low, 5.0);
    EXPECT_EQ(ci.high, 5.0);
}

TEST(CiMean, UniformWidth)
{
    Rng rng(8);
    std::vector<double> v(10000);
    for (auto& x : v) x = rng.uniform01();
    const auto ci = ci_mean(v, 95.0);
    const double expected = 2.0 * 1.959964 * std::sqrt(1.0 / 12.0) / 100.0;
    EXPECT_NEAR(ci.high - ci.low, expected, 0.0006);
    EXPECT_NEAR(expected, 0.0113, 5e-5);
}

TEST(CiMean, WiderLevelContainsNarrower)
{
    const auto v = normal_sample(9, 1000, 1.0, 2.0);
    const auto c90 = ci_mean(v, 90.0);
    const auto c95 = ci_mean(v, 95.0);
    const auto c99 = ci_mean(v, 99.0);
    EXPECT_LT(c99.low, c95.low);
    EXPECT_GT(c99.high, c95.high);
    EXPECT_LT(c95.low, c90.low);
    EXPECT_GT(c95.high, c90.high);
}

TEST(CiMean, Errors)
{
    const std::vector<double> small(29, 1.0);
    const std::vector<double> ok(30, 1.0);
    EXPECT_THROW(ci_mean(small, 95.0), ValidationError);
    EXPECT_THROW(ci_mean(ok, 80.0), ValidationError);
}

TEST(CiMean, CoverageNearNominal)
{
    std::size_t covered = 0;
    for (std::uint64_t trial = 0; trial < 1000; ++trial) {
        const auto v = normal_sample(derive_seed(1000, trial), 10000, 3.0, 2.0);
        const auto ci = ci_mean(v, 95.0);
        covered += (ci.low <= 3.0 && 3.0 <= ci.high) ? 1 : 0;
    }
    EXPECT_GE(covered, 930u);
    EXPECT_LE(covered, 970u);
}

TEST(Histogram, DirectBinning)
{
    const std::vector<double> v{0.05, 0.15, 0.15};
    const auto h = histogram(v, 10, {0.0, 1.0});
    ASSERT_EQ(h.counts.size(), 10u);
    ASSERT_EQ(h.bin_edges.size(), 11u);
    EXPECT_EQ(h.counts[0], 1u);
    EXPECT_EQ(h.counts[1], 2u);
    for (std::size_t i = 2; i < 10; ++i) EXPECT_EQ(h.counts[i], 0u);
    EXPECT_EQ(h.total, 3u);
}

TEST(Histogram, EdgeRules)
{
    const std::vector<double> top{1.0};
    EXPECT_EQ(histogram(top).counts.back(), 1u);
    const std::vector<double> interior{0.1};
    EXPECT_EQ(histogram(interior).counts[1], 1u);
    const std::vector<double> zero{0.0};
    EXPECT_EQ(histogram(zero).counts[0], 1u);
    // Every interior edge goes to the bin on its right.
    for (int i = 1; i < 10; ++i) {
        const std::vector<double> e{static_cast<double>(i) / 10.0};
        EXPECT_EQ(histogram(e).counts[static_cast<std::size_t>(i)], 1u) << i;
    }
}

TEST(Histogram, OutOfRangeCountedSeparately)
{
    const std::vector<double> v{-0.5, 0.5, 1.5, 2.0};
    const auto h = histogram(v, 4, {0.0, 1.0});
    EXPECT_EQ(h.below, 1u);
    EXPECT_EQ(h.above, 2u);
    EXPECT_EQ(h.total, 1u);
    EXPECT_EQ(std::accumulate(h.counts.begin(), h.counts.end(), std::size_t{0}), h.total);
}

TEST(Histogram, PermutationInvariant)
{
    Rng rng(10);
    std::vector<double> v(1000);
    for (auto& x : v) x = rng.uniform01() * 1.2 - 0.1;
    const auto a = histogram(v, 7, {0.0, 1.0});
    std::reverse(v.begin(), v.end());
    const auto b = histogram(v, 7, {0.0, 1.0});
    EXPECT_EQ(a.counts, b.counts);
    EXPECT_EQ(std::accumulate(a.counts.begin(), a.counts.end(), std::size_t{0}), a.total);
}

TEST(Histogram, Errors)
{
    const std::vector<double> v{0.5};
    EXPECT_THROW(histogram(v, 0, {0.0, 1.0}), ValidationError);
    EXPECT_THROW(histogram(v, 10, {1.0, 1.0}), ValidationError);
}

TEST(Boxplot, Examples)
{
    const std::vector<double> a{1, 2, 3, 4, 5};
    const auto b = boxplot_stats(a);
    EXPECT_DOUBLE_EQ(b.median, 3.0);
    EXPECT_TRUE(b.outliers.empty());
    EXPECT_DOUBLE_EQ(b.lower_whisker, 1.0);
    EXPECT_DOUBLE_EQ(b.upper_whisker, 5.0);

    // q1 = 2, q3 = 4, IQR = 2, upper fence 7
    const std::vector<double> c{1, 2, 3, 4, 100};
    const auto d = boxplot_stats(c);
    EXPECT_EQ(d.outliers, (std::vector<double>{100.0}));
    EXPECT_DOUBLE_EQ(d.upper_whisker, 4.0);

    const std::vector<double> flat(6, 2.0);
    const auto f = boxplot_stats(flat);
    EXPECT_TRUE(f.outliers.empty());
    EXPECT_EQ(f.q1, f.q3);
}

TEST(Boxplot, Errors)
{
    const std::vector<double> v{1, 2, 3, 4};
    EXPECT_THROW(boxplot_stats(v), ValidationError);
}
