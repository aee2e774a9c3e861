#pragma once

#include <algorithm>
#include <array>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <thread>
#include <unordered_map>
#include <utility>
#include <vector>

#include "pwevo/corpus.hpp"
#include "pwevo/error.hpp"
#include "pwevo/unicode.hpp"

namespace pwevo {

// ---------------------------------------------------------------------------
// Distance kernels
// ---------------------------------------------------------------------------

namespace detail {

inline std::vector<std::size_t>& scratch_row(int which)
{
    thread_local std::vector<std::size_t> rows[2];
    return rows[which];
}

constexpr std::size_t abs_diff(std::size_t a, std::size_t b) noexcept { return a > b ? a - b : b - a; }

} // namespace detail

/// Unit-cost Levenshtein distance (insertions, deletions, substitutions).
/// Two rolling rows over the shorter string.
template <typename CharT>
std::size_t levenshtein(std::basic_string_view<CharT> a, std::basic_string_view<CharT> b)
{
    if (a.size() < b.size()) std::swap(a, b);
    const std::size_t m = b.size();
    if (m == 0) return a.size();

    auto& prev = detail::scratch_row(0);
    auto& cur = detail::scratch_row(1);
    prev.resize(m + 1);
    cur.resize(m + 1);
    for (std::size_t j = 0; j <= m; ++j) prev[j] = j;

    for (std::size_t i = 1; i <= a.size(); ++i) {
        cur[0] = i;
        const CharT ca = a[i - 1];
        for (std::size_t j = 1; j <= m; ++j) {
            const std::size_t subst = prev[j - 1] + (ca == b[j - 1] ? 0 : 1);
            cur[j] = std::min({subst, prev[j] + 1, cur[j - 1] + 1});
        }
        std::swap(prev, cur);
    }
    return prev[m];
}

inline std::size_t levenshtein(std::u32string_view a, std::u32string_view b)
{
    return levenshtein<char32_t>(a, b);
}

/// Levenshtein distance if it is <= bound, nullopt otherwise. Only cells
/// within `bound` of the main diagonal are evaluated, and the scan stops as
/// soon as a whole band row exceeds the bound.
template <typename CharT>
std::optional<std::size_t> levenshtein_bounded(std::basic_string_view<CharT> a,
                                               std::basic_string_view<CharT> b,
                                               std::size_t bound)
{
    const std::size_t n = a.size();
    const std::size_t m = b.size();
    if (detail::abs_diff(n, m) > bound) return std::nullopt;
    if (bound >= std::max(n, m)) return levenshtein(a, b);

    // Here bound < max(n, m) and both strings are non-empty.
    const std::size_t inf = bound + 1;
    auto& prev = detail::scratch_row(0);
    auto& cur = detail::scratch_row(1);
    prev.resize(m + 1);
    cur.resize(m + 1);
    for (std::size_t j = 0; j <= m; ++j) prev[j] = j <= bound ? j : inf;

    for (std::size_t i = 1; i <= n; ++i) {
        const std::size_t jlo = i > bound ? i - bound : 1;
        const std::size_t jhi = std::min(m, i + bound);
        cur[jlo - 1] = jlo == 1 && i <= bound ? i : inf;
        std::size_t row_min = cur[jlo - 1];
        const CharT ca = a[i - 1];
        for (std::size_t j = jlo; j <= jhi; ++j) {
            std::size_t v = prev[j - 1] + (ca == b[j - 1] ? 0 : 1);
            v = std::min({v, prev[j] + 1, cur[j - 1] + 1, inf});
            cur[j] = v;
            row_min = std::min(row_min, v);
        }
        if (jhi < m) cur[jhi + 1] = inf;
        if (row_min > bound) return std::nullopt;
        std::swap(prev, cur);
    }
    return prev[m] <= bound ? std::optional<std::size_t>(prev[m]) : std::nullopt;
}

inline std::optional<std::size_t> levenshtein_bounded(std::u32string_view a, std::u32string_view b,
                                                      std::size_t bound)
{
    return levenshtein_bounded<char32_t>(a, b, bound);
}

enum class Normalization {
    MaxLen,   // lev / max(|s1|, |s2|), always within [0, 1]
    FirstLen, // lev / |s1|, may exceed 1 when s2 is much longer than s1
};

inline std::string_view to_string(Normalization n)
{
    return n == Normalization::MaxLen ? "maxlen" : "firstlen";
}

inline Normalization parse_normalization(std::string_view s)
{
    if (s == "maxlen") return Normalization::MaxLen;
    if (s == "firstlen") return Normalization::FirstLen;
    throw ValidationError("unknown normalization: " + std::string(s));
}

constexpr std::size_t normalizer(std::size_t len1, std::size_t len2, Normalization norm) noexcept
{
    return norm == Normalization::MaxLen ? std::max(len1, len2) : len1;
}

template <typename CharT>
double normalized_distance(std::basic_string_view<CharT> a, std::basic_string_view<CharT> b,
                           Normalization norm = Normalization::MaxLen)
{
    const std::size_t denom = normalizer(a.size(), b.size(), norm);
    if (denom == 0) throw ValidationError("normalized distance undefined for empty input");
    return static_cast<double>(levenshtein(a, b)) / static_cast<double>(denom);
}

inline double normalized_distance(std::u32string_view a, std::u32string_view b,
                                  Normalization norm = Normalization::MaxLen)
{
    return normalized_distance<char32_t>(a, b, norm);
}

// ---------------------------------------------------------------------------
// Blacklist index
// ---------------------------------------------------------------------------

/// Immutable search structure over a blacklist. Entries are partitioned into
/// buckets by code-point length; each bucket holds a BK-tree keyed by raw
/// Levenshtein distance. Queries are exact: they return the same answer as a
/// linear scan.
class BlacklistIndex {
public:
    struct Node {
        std::size_t entry = 0; // blacklist id
        std::size_t max_edge = 0;
        std::vector<std::pair<std::size_t, std::size_t>> children; // (edge label, node index)
    };

    struct Bucket {
        std::size_t length = 0;
        std::vector<std::size_t> ids; // ascending blacklist ids
        std::vector<Node> nodes;      // nodes[0] is the root
    };

    BlacklistIndex() = default;

    explicit BlacklistIndex(const Corpus& blacklist)
        : label_(blacklist.source_label), provenance_(blacklist.provenance)
    {
        if (blacklist.empty()) throw ValidationError("blacklist is empty");
        entries_.reserve(blacklist.size());
        for (std::size_t i = 0; i < blacklist.size(); ++i) entries_.push_back(blacklist.code_points(i));
        utf8_ = blacklist.entries;
        build();
    }

    [[nodiscard]] std::size_t size() const noexcept { return entries_.size(); }
    [[nodiscard]] const CodePoints& entry(std::size_t id) const { return entries_[id]; }
    [[nodiscard]] const std::string& entry_utf8(std::size_t id) const { return utf8_[id]; }
    [[nodiscard]] const std::map<std::size_t, Bucket>& buckets() const noexcept { return buckets_; }
    /// Entries containing code point c, as (id, occurrences), ascending id.
    [[nodiscard]] const std::vector<std::pair<std::uint32_t, std::uint32_t>>* postings(char32_t c) const
    {
        if (c < 128) return &ascii_postings_[c];
        auto it = other_postings_.find(c);
        return it == other_postings_.end() ? nullptr : &it->second;
    }
    [[nodiscard]] const std::string& label() const noexcept { return label_; }
    [[nodiscard]] const Provenance& provenance() const noexcept { return provenance_; }

    /// Lowest id of an entry equal to s, if any.
    [[nodiscard]] std::optional<std::size_t> find_exact(CodePointView s) const
    {
        auto it = exact_.find(CodePoints(s));
        if (it == exact_.end()) return std::nullopt;
        return it->second;
    }

private:
    void build()
    {
        for (std::size_t id = 0; id < entries_.size(); ++id) {
            std::map<char32_t, std::uint32_t> counts;
            for (char32_t c : entries_[id]) ++counts[c];
            for (const auto& [c, n] : counts) {
                auto& list = c < 128 ? ascii_postings_[c] : other_postings_[c];
                list.emplace_back(static_cast<std::uint32_t>(id), n);
            }
            exact_.try_emplace(entries_[id], id);
            auto& bucket = buckets_[entries_[id].size()];
            bucket.length = entries_[id].size();
            bucket.ids.push_back(id);
            insert(bucket, id);
        }
    }

    void insert(Bucket& bucket, std::size_t id)
    {
        if (bucket.nodes.empty()) {
            bucket.nodes.push_back(Node{id, 0, {}});
            return;
        }
        std::size_t at = 0;
        for (;;) {
            const std::size_t d = levenshtein(CodePointView(entries_[id]), CodePointView(entries_[bucket.nodes[at].entry]));
            // Duplicates (d == 0) hang off the first copy like any other child.
            auto& kids = bucket.nodes[at].children;
            auto it = std::find_if(kids.begin(), kids.end(), [d](const auto& c) { return c.first == d; });
            if (it != kids.end()) {
                at = it->second;
                continue;
            }
            const std::size_t child = bucket.nodes.size();
            kids.emplace_back(d, child);
            bucket.nodes[at].max_edge = std::max(bucket.nodes[at].max_edge, d);
            bucket.nodes.push_back(Node{id, 0, {}});
            return;
        }
    }

    std::vector<CodePoints> entries_;
    std::vector<std::string> utf8_;
    std::map<std::size_t, Bucket> buckets_;
    std::array<std::vector<std::pair<std::uint32_t, std::uint32_t>>, 128> ascii_postings_;
    std::unordered_map<char32_t, std::vector<std::pair<std::uint32_t, std::uint32_t>>> other_postings_;
    std::unordered_map<CodePoints, std::size_t> exact_;
    std::string label_;
    Provenance provenance_;
};

inline BlacklistIndex build_index(const Corpus& blacklist)
{
    return BlacklistIndex(blacklist);
}

struct NearestMatch {
    std::size_t raw = 0;
    std::size_t denominator = 1;
    double normalized = 0.0;
    std::size_t nearest = 0; // blacklist id
};

struct SearchOptions {
    Normalization norm = Normalization::MaxLen;
    bool pruning = true; // false: plain-DP linear scan over every entry
};

namespace detail {

// Bit-parallel Levenshtein (Myers 1999, Hyyro's global variant) for a query
// of 1..64 code points. The match table is built once per query and reused
// across every blacklist entry it is compared against.
class QueryPattern {
public:
    explicit QueryPattern(CodePointView p) : size_(p.size())
    {
        ascii_.fill(0);
        for (std::size_t i = 0; i < p.size(); ++i) {
            const std::uint64_t bit = std::uint64_t{1} << i;
            if (p[i] < 128) {
                ascii_[p[i]] |= bit;
                continue;
            }
            auto it = std::find_if(other_.begin(), other_.end(), [&](const auto& e) { return e.first == p[i]; });
            if (it == other_.end()) other_.emplace_back(p[i], bit);
            else it->second |= bit;
        }
    }

    static constexpr std::size_t kMaxLength = 64;

    [[nodiscard]] std::size_t size() const noexcept { return size_; }

    [[nodiscard]] std::uint64_t match(char32_t c) const noexcept
    {
        if (c < 128) return ascii_[c];
        for (const auto& [cp, bits] : other_)
            if (cp == c) return bits;
        return 0;
    }

    /// Distance to text if <= bound, nullopt otherwise.
    [[nodiscard]] std::optional<std::size_t> distance(CodePointView text, std::size_t bound) const noexcept
    {
        const std::size_t m = size_;
        const std::size_t n = text.size();
        if (abs_diff(m, n) > bound) return std::nullopt;
        const std::uint64_t high = std::uint64_t{1} << (m - 1);
        std::uint64_t pv = m == 64 ? ~std::uint64_t{0} : (high << 1) - 1;
        std::uint64_t mv = 0;
        std::size_t score = m;
        for (std::size_t j = 0; j < n; ++j) {
            const std::uint64_t eq = match(text[j]);
            const std::uint64_t xv = eq | mv;
            const std::uint64_t xh = (((eq & pv) + pv) ^ pv) | eq;
            std::uint64_t ph = mv | ~(xh | pv);
            std::uint64_t mh = pv & xh;
            score += static_cast<std::size_t>((ph & high) != 0);
            score -= static_cast<std::size_t>((mh & high) != 0);
            ph = (ph << 1) | 1;
            mh <<= 1;
            pv = mh | ~(xv | ph);
            mv = ph & xv;
            // Each remaining column lowers the final score by at most one.
            if (score > bound + (n - 1 - j)) return std::nullopt;
        }
        return score <= bound ? std::optional<std::size_t>(score) : std::nullopt;
    }

private:
    std::size_t size_;
    std::array<std::uint64_t, 128> ascii_{};
    std::vector<std::pair<char32_t, std::uint64_t>> other_;
};

// Exact bounded distance through the bit-parallel kernel when the query fits
// in one word, the banded DP otherwise.
struct BoundedKernel {
    CodePointView query;
    std::optional<QueryPattern> pattern;

    std::vector<std::uint32_t> common; // multiset intersection size with every entry

    BoundedKernel(CodePointView q, const BlacklistIndex& index) : query(q)
    {
        if (q.size() <= QueryPattern::kMaxLength) pattern.emplace(q);
        std::map<char32_t, std::uint32_t> counts;
        for (char32_t c : q) ++counts[c];
        common.assign(index.size(), 0);
        for (const auto& [c, nq] : counts) {
            const auto* list = index.postings(c);
            if (list == nullptr) continue;
            for (const auto& [id, ne] : *list) common[id] += std::min(nq, ne);
        }
    }

    /// Bag distance: every edit fixes at most one unmatched character, so
    /// lev >= max(|q|, |t|) - |multiset intersection|.
    [[nodiscard]] std::size_t bag_lower_bound(std::size_t id, std::size_t text_size) const noexcept
    {
        return std::max(query.size(), text_size) - common[id];
    }

    [[nodiscard]] std::optional<std::size_t> operator()(CodePointView text, std::size_t bound) const
    {
        if (pattern) return pattern->distance(text, bound);
        return levenshtein_bounded(query, text, bound);
    }
};

struct Best {
    std::size_t raw = 0;
    std::size_t denom = 1;
    std::size_t id = 0;
    bool found = false;

    // Largest raw distance that could still beat or tie the current best
    // against an entry with normalizer `denom_other`.
    [[nodiscard]] std::size_t allowed(std::size_t denom_other) const noexcept
    {
        if (!found) return std::numeric_limits<std::size_t>::max();
        return raw * denom_other / denom;
    }

    bool offer(std::size_t r, std::size_t d, std::size_t i) noexcept
    {
        if (found) {
            const auto lhs = r * denom;
            const auto rhs = raw * d;
            if (lhs > rhs || (lhs == rhs && i >= id)) return false;
        }
        raw = r;
        denom = d;
        id = i;
        found = true;
        return true;
    }
};

inline NearestMatch finish(const Best& b)
{
    return NearestMatch{b.raw, b.denom, static_cast<double>(b.raw) / static_cast<double>(b.denom), b.id};
}

inline void search_bucket(const BoundedKernel& kernel, const BlacklistIndex& index,
                          const BlacklistIndex::Bucket& bucket, std::size_t denom, Best& best)
{
    const CodePointView p = kernel.query;
    struct Pending {
        std::size_t node;
        std::size_t lower_bound;
    };
    thread_local std::vector<Pending> stack;
    stack.clear();
    stack.push_back({0, abs_diff(p.size(), bucket.length)});
    const std::size_t cap = std::max(p.size(), bucket.length); // no distance exceeds this

    while (!stack.empty()) {
        const Pending top = stack.back();
        stack.pop_back();
        std::size_t radius = std::min(best.allowed(denom), cap);
        if (top.lower_bound > radius) continue;

        const auto& node = bucket.nodes[top.node];
        const auto& text = index.entry(node.entry);
        const std::size_t gap = abs_diff(p.size(), bucket.length);
        const std::size_t bag_lb = kernel.bag_lower_bound(node.entry, text.size());
        const std::size_t first = stack.size();
        if (bag_lb > radius) {
            // Not a candidate itself. Its exact distance is not needed: d >= bag_lb
            // already gives lev(p, x) >= bag_lb - edge for every child subtree x.
            for (const auto& [edge, child] : node.children) {
                const std::size_t lb = std::max(bag_lb > edge ? bag_lb - edge : 0, gap);
                if (lb <= radius) stack.push_back({child, lb});
            }
        } else {
            // Exact distance up to radius + max_edge decides which children
            // survive the triangle inequality.
            const auto d = kernel(CodePointView(text), radius + node.max_edge);
            if (!d) continue; // every child subtree lies farther than radius
            if (*d <= radius && best.offer(*d, denom, node.entry)) {
                if (best.raw == 0) return;
                radius = std::min(best.allowed(denom), cap);
            }
            for (const auto& [edge, child] : node.children) {
                const std::size_t lb = std::max(abs_diff(*d, edge), gap);
                if (lb <= radius) stack.push_back({child, lb});
            }
        }
        // Smallest lower bound on top of the stack.
        std::sort(stack.begin() + static_cast<std::ptrdiff_t>(first), stack.end(),
                  [](const Pending& x, const Pending& y) { return x.lower_bound > y.lower_bound; });
    }
}

// Loose-radius path: bag lower bounds for the whole bucket, then exact
// distances in ascending lower-bound order until the bound passes the radius.
inline void scan_bucket(const BoundedKernel& kernel, const BlacklistIndex& index,
                        const BlacklistIndex::Bucket& bucket, std::size_t denom, Best& best)
{
    const std::size_t cap = std::max(kernel.query.size(), bucket.length);
    std::size_t radius = std::min(best.allowed(denom), cap);
    thread_local std::vector<std::pair<std::size_t, std::size_t>> candidates; // (lower bound, id)
    candidates.clear();
    std::size_t lowest = cap;
    for (std::size_t id : bucket.ids) {
        const std::size_t lb = kernel.bag_lower_bound(id, bucket.length);
        if (lb <= radius) {
            candidates.emplace_back(lb, id);
            lowest = std::min(lowest, lb);
        }
    }
    // Bounds are small integers; sweeping level by level beats sorting.
    for (std::size_t level = lowest; level <= radius; ++level) {
        for (const auto& [lb, id] : candidates) {
            if (lb != level) continue;
            const auto d = kernel(CodePointView(index.entry(id)), radius);
            if (d && best.offer(*d, denom, id)) {
                if (best.raw == 0) return;
                radius = std::min(best.allowed(denom), cap);
            }
        }
    }
}

} // namespace detail

/// Reference path: plain DP against every blacklist entry.
inline NearestMatch min_distance_linear(CodePointView p, const BlacklistIndex& index,
                                        Normalization norm = Normalization::MaxLen)
{
    if (p.empty()) throw ValidationError("query password is empty");
    detail::Best best;
    for (std::size_t id = 0; id < index.size(); ++id) {
        const auto& e = index.entry(id);
        best.offer(levenshtein(p, CodePointView(e)), normalizer(p.size(), e.size(), norm), id);
    }
    return detail::finish(best);
}

/// Minimum normalized distance from p to any blacklist entry. Ties resolve to
/// the lowest blacklist id.
inline NearestMatch min_distance_to_set(CodePointView p, const BlacklistIndex& index, SearchOptions opts = {})
{
    if (p.empty()) throw ValidationError("query password is empty");
    if (!opts.pruning) return min_distance_linear(p, index, opts.norm);

    if (auto hit = index.find_exact(p)) {
        return NearestMatch{0, normalizer(p.size(), p.size(), opts.norm), 0.0, *hit};
    }

    // Visit buckets in order of their length-gap lower bound.
    struct Candidate {
        std::size_t gap;
        std::size_t denom;
        const BlacklistIndex::Bucket* bucket;
    };
    thread_local std::vector<Candidate> order;
    order.clear();
    for (const auto& [len, bucket] : index.buckets()) {
        order.push_back({detail::abs_diff(p.size(), len), normalizer(p.size(), len, opts.norm), &bucket});
    }
    std::sort(order.begin(), order.end(), [](const Candidate& x, const Candidate& y) {
        const auto lhs = x.gap * y.denom;
        const auto rhs = y.gap * x.denom;
        if (lhs != rhs) return lhs < rhs;
        return x.bucket->length < y.bucket->length;
    });

    const detail::BoundedKernel kernel(p, index);
    detail::Best best;
    for (const auto& c : order) {
        if (best.found && c.gap > best.allowed(c.denom)) break; // later buckets have larger lower bounds
        const std::size_t cap = std::max(p.size(), c.bucket->length);
        if (2 * std::min(best.allowed(c.denom), cap) < cap) {
            detail::search_bucket(kernel, index, *c.bucket, c.denom, best);
        } else {
            detail::scan_bucket(kernel, index, *c.bucket, c.denom, best);
        }
        if (best.found && best.raw == 0) break;
    }
    return detail::finish(best);
}

// ---------------------------------------------------------------------------
// Distance samples
// ---------------------------------------------------------------------------

/// Per-password minimum distances of one corpus against one blacklist.
struct DistanceSample {
    std::vector<double> values;          // normalized, corpus order
    std::vector<std::size_t> raw_values; // raw Levenshtein distances
    std::vector<std::size_t> nearest;    // blacklist ids; empty unless requested
    std::string corpus_label;
    std::string blacklist_label;
    Normalization norm = Normalization::MaxLen;

    [[nodiscard]] std::size_t size() const noexcept { return values.size(); }
    [[nodiscard]] double mean() const
    {
        double s = 0.0;
        for (double v : values) s += v;
        return values.empty() ? 0.0 : s / static_cast<double>(values.size());
    }
};

struct SampleOptions {
    SearchOptions search;
    bool keep_nearest = false;
    unsigned threads = 1;
};

inline DistanceSample distance_sample(const Corpus& corpus, const BlacklistIndex& index, SampleOptions opts = {})
{
    if (corpus.empty()) throw ValidationError("corpus is empty");
    const std::size_t n = corpus.size();
    DistanceSample out;
    out.corpus_label = corpus.source_label;
    out.blacklist_label = index.label();
    out.norm = opts.search.norm;
    out.values.resize(n);
    out.raw_values.resize(n);
    std::vector<std::size_t> nearest(n);

    auto work = [&](std::size_t lo, std::size_t hi) {
        for (std::size_t i = lo; i < hi; ++i) {
            const auto m = min_distance_to_set(corpus.code_points(i), index, opts.search);
            out.values[i] = m.normalized;
            out.raw_values[i] = m.raw;
            nearest[i] = m.nearest;
        }
    };

    const std::size_t workers = std::clamp<std::size_t>(opts.threads, 1, std::max<std::size_t>(1, n / 64));
    if (workers == 1) {
        work(0, n);
    } else {
        std::vector<std::jthread> pool;
        const std::size_t chunk = (n + workers - 1) / workers;
        for (std::size_t w = 0; w < workers; ++w) {
            const std::size_t lo = w * chunk;
            const std::size_t hi = std::min(n, lo + chunk);
            if (lo < hi) pool.emplace_back(work, lo, hi);
        }
    }
    if (opts.keep_nearest) out.nearest = std::move(nearest);
    return out;
}

} // namespace pwevo
