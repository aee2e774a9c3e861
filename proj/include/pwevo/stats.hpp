#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include <boost/math/distributions/normal.hpp>
#include <boost/math/distributions/students_t.hpp>

#include "pwevo/error.hpp"

namespace pwevo {

struct SummaryStats {
    std::size_t n = 0;
    double min = 0.0;
    double max = 0.0;
    double mean = 0.0;
    double std_dev = 0.0; // sample standard deviation, n - 1 denominator
    double skewness = 0.0;
    double q1 = 0.0;
    double median = 0.0;
    double q3 = 0.0;
};

/// Quantile by linear interpolation at position (n - 1) * p of sorted data.
inline double quantile_sorted(std::span<const double> sorted, double p)
{
    if (sorted.empty()) throw ValidationError("quantile of empty sample");
    const double pos = static_cast<double>(sorted.size() - 1) * p;
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
    const double frac = pos - static_cast<double>(lo);
    return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

namespace detail {

inline double mean_of(std::span<const double> v)
{
    double s = 0.0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
}

inline double sample_variance(std::span<const double> v, double mean)
{
    double ss = 0.0;
    for (double x : v) ss += (x - mean) * (x - mean);
    return ss / static_cast<double>(v.size() - 1);
}

} // namespace detail

/// Skewness is g1 = m3 / m2^1.5 with central moments over n; a constant
/// sample has skewness 0.
inline SummaryStats describe(std::span<const double> values)
{
    if (values.size() < 2) throw ValidationError("describe needs at least 2 values");
    std::vector<double> sorted(values.begin(), values.end());
    std::sort(sorted.begin(), sorted.end());

    SummaryStats s;
    s.n = values.size();
    s.min = sorted.front();
    s.max = sorted.back();
    s.mean = detail::mean_of(values);

    double m2 = 0.0;
    double m3 = 0.0;
    for (double x : values) {
        const double d = x - s.mean;
        m2 += d * d;
        m3 += d * d * d;
    }
    const auto n = static_cast<double>(s.n);
    s.std_dev = std::sqrt(m2 / (n - 1.0));
    m2 /= n;
    m3 /= n;
    s.skewness = m2 > 0.0 ? m3 / std::pow(m2, 1.5) : 0.0;
    s.q1 = quantile_sorted(sorted, 0.25);
    s.median = quantile_sorted(sorted, 0.5);
    s.q3 = quantile_sorted(sorted, 0.75);
    return s;
}

struct TTestResult {
    double t_statistic = 0.0;
    double degrees_of_freedom = 0.0;
    double mean_a = 0.0;
    double mean_b = 0.0;
    double critical_value = 0.0; // two-sided 5% quantile of t(df)
    bool significant_at_5pct = false;
};

/// Two-sided critical value of Student's t at the given significance level.
inline double t_critical(double df, double alpha = 0.05)
{
    boost::math::students_t dist(df);
    return boost::math::quantile(boost::math::complement(dist, alpha / 2.0));
}

/// Unpaired two-sample t-test with unequal variances (Welch), two-sided at 5%.
inline TTestResult welch_t_test(std::span<const double> a, std::span<const double> b)
{
    if (a.size() < 2 || b.size() < 2) throw ValidationError("welch_t_test needs at least 2 values per sample");
    TTestResult r;
    r.mean_a = detail::mean_of(a);
    r.mean_b = detail::mean_of(b);
    const double va = detail::sample_variance(a, r.mean_a) / static_cast<double>(a.size());
    const double vb = detail::sample_variance(b, r.mean_b) / static_cast<double>(b.size());
    const double se2 = va + vb;
    if (!(se2 > 0.0)) throw ValidationError("welch_t_test: both samples have zero variance");
    r.t_statistic = (r.mean_a - r.mean_b) / std::sqrt(se2);
    const double na1 = static_cast<double>(a.size() - 1);
    const double nb1 = static_cast<double>(b.size() - 1);
    r.degrees_of_freedom = se2 * se2 / (va * va / na1 + vb * vb / nb1);
    r.critical_value = t_critical(r.degrees_of_freedom);
    r.significant_at_5pct = std::abs(r.t_statistic) > r.critical_value;
    return r;
}

struct ConfidenceInterval {
    double low = 0.0;
    double high = 0.0;
    double level = 95.0;
};

/// Normal-approximation interval mean +- z * s / sqrt(n). Needs n >= 30 and a
/// level of 90, 95 or 99 percent.
inline ConfidenceInterval ci_mean(std::span<const double> values, double level = 95.0)
{
    if (values.size() < 30) throw ValidationError("ci_mean needs at least 30 values");
    if (level != 90.0 && level != 95.0 && level != 99.0) throw ValidationError("ci_mean level must be 90, 95 or 99");
    const double mean = detail::mean_of(values);
    const double sd = std::sqrt(detail::sample_variance(values, mean));
    const double z = boost::math::quantile(boost::math::normal(), 0.5 + level / 200.0);
    const double half = z * sd / std::sqrt(static_cast<double>(values.size()));
    return {mean - half, mean + half, level};
}

struct Histogram {
    std::vector<double> bin_edges; // bin_count + 1 ascending edges
    std::vector<std::size_t> counts;
    std::size_t total = 0; // in-range values
    std::size_t below = 0;
    std::size_t above = 0;
};

/// Equal-width bins [e_i, e_{i+1}); the top edge belongs to the last bin.
/// Out-of-range values are tallied in `below` / `above`.
inline Histogram histogram(std::span<const double> values, std::size_t bin_count = 10,
                           std::pair<double, double> range = {0.0, 1.0})
{
    const auto [low, high] = range;
    if (bin_count < 1) throw ValidationError("histogram needs at least one bin");
    if (!(low < high)) throw ValidationError("histogram range must satisfy low < high");

    Histogram h;
    h.bin_edges.resize(bin_count + 1);
    for (std::size_t i = 0; i <= bin_count; ++i) {
        h.bin_edges[i] = low + (high - low) * static_cast<double>(i) / static_cast<double>(bin_count);
    }
    h.bin_edges.back() = high;
    h.counts.assign(bin_count, 0);

    for (double v : values) {
        if (v < low) {
            ++h.below;
            continue;
        }
        if (v > high) {
            ++h.above;
            continue;
        }
        auto it = std::upper_bound(h.bin_edges.begin(), h.bin_edges.end(), v);
        auto bin = static_cast<std::size_t>(it - h.bin_edges.begin()) - 1;
        bin = std::min(bin, bin_count - 1);
        ++h.counts[bin];
        ++h.total;
    }
    return h;
}

struct BoxplotStats {
    double min = 0.0;
    double q1 = 0.0;
    double median = 0.0;
    double q3 = 0.0;
    double max = 0.0;
    double lower_whisker = 0.0;
    double upper_whisker = 0.0;
    std::vector<double> outliers; // ascending
};

/// Tukey box: whiskers reach the most extreme values inside
/// [q1 - 1.5 IQR, q3 + 1.5 IQR]; anything beyond is an outlier.
inline BoxplotStats boxplot_stats(std::span<const double> values)
{
    if (values.size() < 5) throw ValidationError("boxplot_stats needs at least 5 values");
    std::vector<double> sorted(values.begin(), values.end());
    std::sort(sorted.begin(), sorted.end());

    BoxplotStats b;
    b.min = sorted.front();
    b.max = sorted.back();
    b.q1 = quantile_sorted(sorted, 0.25);
    b.median = quantile_sorted(sorted, 0.5);
    b.q3 = quantile_sorted(sorted, 0.75);
    const double iqr = b.q3 - b.q1;
    const double lo_fence = b.q1 - 1.5 * iqr;
    const double hi_fence = b.q3 + 1.5 * iqr;
    b.lower_whisker = b.q1;
    b.upper_whisker = b.q3;
    for (double v : sorted) {
        if (v < lo_fence || v > hi_fence) {
            b.outliers.push_back(v);
            continue;
        }
        b.lower_whisker = std::min(b.lower_whisker, v);
        b.upper_whisker = std::max(b.upper_whisker, v);
    }
    return b;
}

} // namespace pwevo
