#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <unordered_set>
#include <vector>

#include "pwevo/error.hpp"
#include "pwevo/random.hpp"

namespace pwevo {

template <std::size_t D>
using Point = std::array<double, D>;

template <std::size_t D>
double squared_distance(const Point<D>& a, const Point<D>& b) noexcept
{
    double s = 0.0;
    for (std::size_t i = 0; i < D; ++i) {
        const double d = a[i] - b[i];
        s += d * d;
    }
    return s;
}

template <std::size_t D>
double distance(const Point<D>& a, const Point<D>& b) noexcept
{
    return std::sqrt(squared_distance(a, b));
}

template <std::size_t D>
std::size_t count_distinct(std::span<const Point<D>> points)
{
    std::vector<Point<D>> sorted(points.begin(), points.end());
    std::sort(sorted.begin(), sorted.end());
    return static_cast<std::size_t>(std::unique(sorted.begin(), sorted.end()) - sorted.begin());
}

struct KMeansOptions {
    std::size_t max_iter = 300;
    double tol = 1e-6;           // on the largest centroid displacement
    std::size_t restarts = 3;    // independent seedings; lowest SSE wins
    std::size_t silhouette_sample = 10000; // 0 = use every point
};

template <std::size_t D>
struct Clustering {
    std::size_t k = 0;
    std::vector<Point<D>> centroids;
    std::vector<std::size_t> assignment;
    std::vector<std::size_t> sizes;
    double silhouette = 0.0;
    std::size_t silhouette_points = 0; // how many points the silhouette was computed on
    std::size_t iterations = 0;
    bool converged = false;
    std::uint64_t seed = 0;
    double sse = 0.0;
    std::vector<double> sse_trace; // after every centroid update
};

/// Mean silhouette (b - a) / max(a, b). Singleton clusters and a = b = 0
/// contribute 0.
template <std::size_t D>
double silhouette(std::span<const Point<D>> points, std::span<const std::size_t> assignment, std::size_t k)
{
    if (points.size() != assignment.size()) throw ValidationError("silhouette: assignment size mismatch");
    std::vector<std::size_t> sizes(k, 0);
    for (auto c : assignment) {
        if (c >= k) throw ValidationError("silhouette: cluster id out of range");
        ++sizes[c];
    }
    const auto populated = std::count_if(sizes.begin(), sizes.end(), [](std::size_t s) { return s > 0; });
    if (populated < 2) throw ValidationError("silhouette needs at least two non-empty clusters");

    const std::size_t n = points.size();
    std::vector<double> sums(k);
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t own = assignment[i];
        if (sizes[own] == 1) continue;
        std::fill(sums.begin(), sums.end(), 0.0);
        for (std::size_t j = 0; j < n; ++j) {
            if (j != i) sums[assignment[j]] += distance(points[i], points[j]);
        }
        const double a = sums[own] / static_cast<double>(sizes[own] - 1);
        double b = std::numeric_limits<double>::infinity();
        for (std::size_t c = 0; c < k; ++c) {
            if (c != own && sizes[c] > 0) b = std::min(b, sums[c] / static_cast<double>(sizes[c]));
        }
        const double m = std::max(a, b);
        if (m > 0.0) total += (b - a) / m;
    }
    return total / static_cast<double>(n);
}

namespace detail {

template <std::size_t D>
std::size_t nearest_centroid(const Point<D>& p, const std::vector<Point<D>>& centroids)
{
    std::size_t best = 0;
    double best_d = squared_distance(p, centroids[0]);
    for (std::size_t c = 1; c < centroids.size(); ++c) {
        const double d = squared_distance(p, centroids[c]);
        if (d < best_d) {
            best_d = d;
            best = c;
        }
    }
    return best;
}

template <std::size_t D>
std::vector<Point<D>> kmeanspp_seed(std::span<const Point<D>> points, std::size_t k, Rng& rng)
{
    const std::size_t n = points.size();
    std::vector<Point<D>> centroids;
    centroids.reserve(k);
    centroids.push_back(points[rng.uniform_index(n)]);
    std::vector<double> d2(n);
    for (std::size_t i = 0; i < n; ++i) d2[i] = squared_distance(points[i], centroids[0]);

    while (centroids.size() < k) {
        double sum = 0.0;
        for (double v : d2) sum += v;
        if (!(sum > 0.0)) throw ValidationError("kmeans: fewer distinct points than k");
        const double target = rng.uniform01() * sum;
        double acc = 0.0;
        std::size_t pick = n;
        std::size_t last_positive = n;
        for (std::size_t i = 0; i < n; ++i) {
            if (d2[i] <= 0.0) continue;
            last_positive = i;
            acc += d2[i];
            if (acc > target) {
                pick = i;
                break;
            }
        }
        if (pick == n) pick = last_positive; // rounding at the tail
        centroids.push_back(points[pick]);
        for (std::size_t i = 0; i < n; ++i) d2[i] = std::min(d2[i], squared_distance(points[i], centroids.back()));
    }
    return centroids;
}

template <std::size_t D>
std::vector<std::size_t> subsample_indices(std::size_t n, std::size_t limit, std::uint64_t seed)
{
    std::vector<std::size_t> idx;
    if (limit == 0 || n <= limit) {
        idx.resize(n);
        for (std::size_t i = 0; i < n; ++i) idx[i] = i;
        return idx;
    }
    Rng rng(seed);
    std::unordered_set<std::size_t> chosen;
    for (std::size_t j = n - limit; j < n; ++j) {
        const auto t = static_cast<std::size_t>(rng.uniform_index(j + 1));
        if (!chosen.insert(t).second) chosen.insert(j);
    }
    idx.assign(chosen.begin(), chosen.end());
    std::sort(idx.begin(), idx.end());
    return idx;
}

} // namespace detail

/// Silhouette on at most `limit` points drawn with `seed`. Returns the value
/// and the number of points used.
template <std::size_t D>
std::pair<double, std::size_t> silhouette_subsampled(std::span<const Point<D>> points,
                                                     std::span<const std::size_t> assignment, std::size_t k,
                                                     std::size_t limit, std::uint64_t seed)
{
    const auto idx = detail::subsample_indices<D>(points.size(), limit, seed);
    if (idx.size() == points.size()) return {silhouette<D>(points, assignment, k), points.size()};
    std::vector<Point<D>> sub;
    std::vector<std::size_t> sub_assign;
    sub.reserve(idx.size());
    sub_assign.reserve(idx.size());
    for (auto i : idx) {
        sub.push_back(points[i]);
        sub_assign.push_back(assignment[i]);
    }
    std::vector<bool> present(k, false);
    for (auto c : sub_assign) present[c] = true;
    if (std::count(present.begin(), present.end(), true) < 2) return {0.0, sub.size()};
    return {silhouette<D>(sub, sub_assign, k), sub.size()};
}

/// Lloyd iterations from the given initial centroids. An empty cluster takes
/// over the point farthest from its current centroid.
template <std::size_t D>
Clustering<D> lloyd(std::span<const Point<D>> points, std::vector<Point<D>> centroids, const KMeansOptions& opts = {})
{
    const std::size_t n = points.size();
    const std::size_t k = centroids.size();
    if (k == 0 || n < k) throw ValidationError("lloyd: need at least k points");

    Clustering<D> cl;
    cl.k = k;
    cl.centroids = std::move(centroids);
    cl.assignment.assign(n, 0);
    cl.sizes.assign(k, 0);

    auto assign = [&] {
        bool changed = false;
        std::fill(cl.sizes.begin(), cl.sizes.end(), 0);
        for (std::size_t i = 0; i < n; ++i) {
            const auto c = detail::nearest_centroid(points[i], cl.centroids);
            changed |= c != cl.assignment[i];
            cl.assignment[i] = c;
            ++cl.sizes[c];
        }
        return changed;
    };
    auto repair_empty = [&] {
        for (std::size_t j = 0; j < k; ++j) {
            if (cl.sizes[j] > 0) continue;
            std::size_t far = n;
            double far_d = -1.0;
            for (std::size_t i = 0; i < n; ++i) {
                if (cl.sizes[cl.assignment[i]] < 2) continue;
                const double d = squared_distance(points[i], cl.centroids[cl.assignment[i]]);
                if (d > far_d) {
                    far_d = d;
                    far = i;
                }
            }
            --cl.sizes[cl.assignment[far]];
            cl.assignment[far] = j;
            cl.sizes[j] = 1;
            cl.centroids[j] = points[far];
        }
    };
    auto update = [&] {
        std::vector<Point<D>> sums(k, Point<D>{});
        for (std::size_t i = 0; i < n; ++i) {
            auto& s = sums[cl.assignment[i]];
            for (std::size_t d = 0; d < D; ++d) s[d] += points[i][d];
        }
        double shift = 0.0;
        for (std::size_t c = 0; c < k; ++c) {
            for (std::size_t d = 0; d < D; ++d) sums[c][d] /= static_cast<double>(cl.sizes[c]);
            shift = std::max(shift, distance(sums[c], cl.centroids[c]));
            cl.centroids[c] = sums[c];
        }
        return shift;
    };
    auto sse = [&] {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i) s += squared_distance(points[i], cl.centroids[cl.assignment[i]]);
        return s;
    };

    assign();
    for (cl.iterations = 0; cl.iterations < opts.max_iter;) {
        repair_empty();
        const double shift = update();
        ++cl.iterations;
        cl.sse_trace.push_back(sse());
        const bool changed = assign();
        if (!changed && shift < opts.tol) {
            cl.converged = true;
            break;
        }
    }
    if (!cl.converged) {
        // Leave centroids consistent with the final assignment.
        repair_empty();
        update();
    }
    cl.sse = sse();
    return cl;
}

/// k-means with k-means++ seeding. Deterministic for a fixed seed.
template <std::size_t D>
Clustering<D> kmeans(std::span<const Point<D>> points, std::size_t k, std::uint64_t seed, const KMeansOptions& opts = {})
{
    if (k < 2) throw ValidationError("kmeans needs k >= 2");
    if (count_distinct<D>(points) < k) throw ValidationError("kmeans: fewer distinct points than k");

    Clustering<D> best;
    bool have = false;
    const std::size_t restarts = std::max<std::size_t>(1, opts.restarts);
    for (std::size_t r = 0; r < restarts; ++r) {
        Rng rng(derive_seed(seed, r));
        auto init = detail::kmeanspp_seed<D>(points, k, rng);
        auto cl = lloyd<D>(points, std::move(init), opts);
        if (!have || cl.sse < best.sse) {
            best = std::move(cl);
            have = true;
        }
    }
    best.seed = seed;
    std::tie(best.silhouette, best.silhouette_points) =
        silhouette_subsampled<D>(points, best.assignment, k, opts.silhouette_sample, derive_seed(seed, 0x5111));
    return best;
}

struct KScanEntry {
    std::size_t k = 0;
    double silhouette = 0.0;
    double sse = 0.0;
    std::size_t iterations = 0;
};

template <std::size_t D>
struct KSelection {
    std::size_t best_k = 0;
    Clustering<D> clustering;
    std::vector<KScanEntry> trace;
};

/// Runs kmeans for every k in [k_min, k_max] (clipped to the number of
/// distinct points) and keeps the k with the highest silhouette; ties go to
/// the smaller k.
template <std::size_t D>
KSelection<D> select_k(std::span<const Point<D>> points, std::size_t k_min, std::size_t k_max, std::uint64_t seed,
                       const KMeansOptions& opts = {})
{
    if (k_min < 2 || k_min > k_max) throw ValidationError("select_k: invalid k range");
    const std::size_t distinct = count_distinct<D>(points);
    const std::size_t hi = std::min(k_max, distinct);
    if (k_min > hi) {
        throw ValidationError("select_k: only " + std::to_string(distinct) + " distinct points, k_min is " +
                              std::to_string(k_min));
    }
    KSelection<D> out;
    bool have = false;
    for (std::size_t k = k_min; k <= hi; ++k) {
        auto cl = kmeans<D>(points, k, derive_seed(seed, k), opts);
        out.trace.push_back({k, cl.silhouette, cl.sse, cl.iterations});
        if (!have || cl.silhouette > out.clustering.silhouette) {
            out.best_k = k;
            out.clustering = std::move(cl);
            have = true;
        }
    }
    return out;
}

template <std::size_t D>
struct ClusterSummary {
    std::size_t id = 0;
    std::size_t size = 0;
    Point<D> centroid{}; // rounded to 2 decimals
};

inline double round2(double x) { return std::round(x * 100.0) / 100.0; }

/// One row per cluster, largest first (ties by id).
template <std::size_t D>
std::vector<ClusterSummary<D>> summarize_clusters(const Clustering<D>& cl)
{
    std::vector<ClusterSummary<D>> rows;
    for (std::size_t c = 0; c < cl.k; ++c) {
        ClusterSummary<D> r;
        r.id = c;
        r.size = cl.sizes[c];
        for (std::size_t d = 0; d < D; ++d) r.centroid[d] = round2(cl.centroids[c][d]);
        rows.push_back(r);
    }
    std::stable_sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) { return a.size > b.size; });
    return rows;
}

template <std::size_t D>
struct Standardization {
    Point<D> mean{};
    Point<D> std_dev{};
};

/// z-scores every dimension in place; constant dimensions are only centered.
template <std::size_t D>
Standardization<D> standardize(std::span<Point<D>> points)
{
    Standardization<D> s;
    if (points.empty()) return s;
    const auto n = static_cast<double>(points.size());
    for (const auto& p : points)
        for (std::size_t d = 0; d < D; ++d) s.mean[d] += p[d];
    for (std::size_t d = 0; d < D; ++d) s.mean[d] /= n;
    for (const auto& p : points)
        for (std::size_t d = 0; d < D; ++d) s.std_dev[d] += (p[d] - s.mean[d]) * (p[d] - s.mean[d]);
    for (std::size_t d = 0; d < D; ++d) s.std_dev[d] = points.size() > 1 ? std::sqrt(s.std_dev[d] / (n - 1.0)) : 0.0;
    for (auto& p : points) {
        for (std::size_t d = 0; d < D; ++d) {
            p[d] -= s.mean[d];
            if (s.std_dev[d] > 0.0) p[d] /= s.std_dev[d];
        }
    }
    return s;
}

} // namespace pwevo
