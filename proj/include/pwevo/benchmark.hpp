#pragma once

#include <chrono>
#include <cstddef>
#include <vector>

#include "pwevo/editdist.hpp"

namespace pwevo {

struct SweepTiming {
    std::size_t queries = 0;
    std::size_t blacklist_size = 0;
    double indexed_seconds = 0.0;
    double naive_seconds = 0.0;
    std::size_t mismatches = 0; // indexed vs naive disagreements

    [[nodiscard]] double speedup() const { return indexed_seconds > 0.0 ? naive_seconds / indexed_seconds : 0.0; }
};

/// Times a single-worker min-distance sweep through the index and through the
/// plain linear scan, and cross-checks the two answers.
inline SweepTiming benchmark_sweep(const std::vector<CodePoints>& queries, const BlacklistIndex& index,
                                   Normalization norm = Normalization::MaxLen)
{
    using clock = std::chrono::steady_clock;
    SweepTiming t;
    t.queries = queries.size();
    t.blacklist_size = index.size();

    std::vector<NearestMatch> fast(queries.size());
    auto start = clock::now();
    for (std::size_t i = 0; i < queries.size(); ++i) fast[i] = min_distance_to_set(queries[i], index, {norm, true});
    t.indexed_seconds = std::chrono::duration<double>(clock::now() - start).count();

    start = clock::now();
    for (std::size_t i = 0; i < queries.size(); ++i) {
        const auto slow = min_distance_linear(queries[i], index, norm);
        if (slow.raw != fast[i].raw || slow.nearest != fast[i].nearest || slow.normalized != fast[i].normalized) {
            ++t.mismatches;
        }
    }
    t.naive_seconds = std::chrono::duration<double>(clock::now() - start).count();
    return t;
}

} // namespace pwevo
