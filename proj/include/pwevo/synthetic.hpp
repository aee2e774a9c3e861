#pragma once

// Seeded synthetic corpora for tests, benchmarks and desk-scale checks.

#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "pwevo/random.hpp"

namespace pwevo::synthetic {

inline constexpr std::string_view kLower = "abcdefghijklmnopqrstuvwxyz";
inline constexpr std::string_view kMixed =
    "abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ0123456789!@#$%^&*.-_";

inline std::string random_string(Rng& rng, std::size_t len, std::string_view alphabet)
{
    std::string s(len, ' ');
    for (auto& c : s) c = alphabet[rng.uniform_index(alphabet.size())];
    return s;
}

/// One random insertion, deletion or substitution. A substitution always
/// changes the character, so the result is at edit distance exactly 1 unless
/// the string is empty (then an insertion is made).
inline std::string random_edit(Rng& rng, std::string s, std::string_view alphabet)
{
    const auto kind = s.empty() ? 0 : rng.uniform_index(3);
    if (kind == 0) {
        const auto pos = rng.uniform_index(s.size() + 1);
        s.insert(s.begin() + static_cast<std::ptrdiff_t>(pos), alphabet[rng.uniform_index(alphabet.size())]);
    } else if (kind == 1 && s.size() > 1) {
        s.erase(rng.uniform_index(s.size()), 1);
    } else {
        const auto pos = rng.uniform_index(s.size());
        char c;
        do {
            c = alphabet[rng.uniform_index(alphabet.size())];
        } while (c == s[pos]);
        s[pos] = c;
    }
    return s;
}

/// Entries drawn from `base` with at most `max_edits` random edits each.
inline std::vector<std::string> near_copies(const std::vector<std::string>& base, std::size_t n,
                                            std::uint64_t seed, std::size_t max_edits = 1,
                                            std::string_view alphabet = kMixed)
{
    Rng rng(seed);
    std::vector<std::string> out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        std::string s = base[rng.uniform_index(base.size())];
        const auto edits = rng.uniform_index(max_edits + 1);
        for (std::size_t e = 0; e < edits; ++e) s = random_edit(rng, std::move(s), alphabet);
        out.push_back(std::move(s));
    }
    return out;
}

/// Entries drawn from `base` with exactly one random edit each.
inline std::vector<std::string> single_edit_copies(const std::vector<std::string>& base, std::size_t n,
                                                   std::uint64_t seed, std::string_view alphabet = kMixed)
{
    Rng rng(seed);
    std::vector<std::string> out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) out.push_back(random_edit(rng, base[rng.uniform_index(base.size())], alphabet));
    return out;
}

/// Random strings of a fixed length over a mixed-class alphabet.
inline std::vector<std::string> random_strings(std::size_t n, std::size_t len, std::uint64_t seed,
                                               std::string_view alphabet = kMixed)
{
    Rng rng(seed);
    std::vector<std::string> out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) out.push_back(random_string(rng, len, alphabet));
    return out;
}

/// A password-like query mix: half near-copies of the blacklist (0-3 edits),
/// half random strings of length 6-12.
inline std::vector<std::string> password_like(const std::vector<std::string>& blacklist, std::size_t n,
                                              std::uint64_t seed)
{
    Rng rng(seed);
    auto near = near_copies(blacklist, n / 2, derive_seed(seed, 1), 3);
    std::vector<std::string> out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (i % 2 == 0 && i / 2 < near.size()) {
            out.push_back(std::move(near[i / 2]));
        } else {
            out.push_back(random_string(rng, 6 + rng.uniform_index(7), kMixed));
        }
    }
    return out;
}

template <std::size_t D>
struct PlantedBlobs {
    std::vector<std::array<double, D>> points;
    std::vector<std::size_t> truth;
    std::vector<std::array<double, D>> centers;
};

/// `k` Gaussian blobs (k <= D) of `per_blob` points each. Centers sit on
/// scaled axes, pairwise `separation * spread` apart; `spread` is the RMS
/// distance of a point from its center. Points are interleaved by blob.
template <std::size_t D>
PlantedBlobs<D> planted_blobs(std::size_t k, std::size_t per_blob, double separation, double spread,
                              std::uint64_t seed)
{
    Rng rng(seed);
    PlantedBlobs<D> out;
    const double sigma = spread / std::sqrt(static_cast<double>(D));
    for (std::size_t c = 0; c < k; ++c) {
        std::array<double, D> center{};
        center[c % D] = separation * spread / std::sqrt(2.0);
        out.centers.push_back(center);
    }
    for (std::size_t i = 0; i < per_blob; ++i) {
        for (std::size_t c = 0; c < k; ++c) {
            std::array<double, D> p = out.centers[c];
            for (auto& x : p) x += sigma * rng.normal();
            out.points.push_back(p);
            out.truth.push_back(c);
        }
    }
    return out;
}

} // namespace pwevo::synthetic
