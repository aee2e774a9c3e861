#pragma once

#include <algorithm>
#include <cctype>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_set>
#include <utility>
#include <vector>

#include "pwevo/error.hpp"
#include "pwevo/random.hpp"
#include "pwevo/unicode.hpp"

namespace pwevo {

enum class DecodePolicy {
    StrictUtf8,     // invalid UTF-8 is an error
    LossyUtf8,      // invalid bytes become U+FFFD
    Latin1Fallback, // a line that is not valid UTF-8 is decoded as Latin-1
};

inline std::string_view to_string(DecodePolicy p)
{
    switch (p) {
    case DecodePolicy::StrictUtf8: return "strict-utf8";
    case DecodePolicy::LossyUtf8: return "lossy-utf8";
    case DecodePolicy::Latin1Fallback: return "latin1-fallback";
    }
    return "unknown";
}

inline DecodePolicy parse_decode_policy(std::string_view s)
{
    if (s == "strict-utf8") return DecodePolicy::StrictUtf8;
    if (s == "lossy-utf8") return DecodePolicy::LossyUtf8;
    if (s == "latin1-fallback") return DecodePolicy::Latin1Fallback;
    throw ValidationError("unknown decode policy: " + std::string(s));
}

struct SampleInfo {
    std::size_t n = 0;
    std::uint64_t seed = 0;
    std::size_t population = 0;
};

struct Provenance {
    std::string path;
    std::size_t lines_read = 0;
    std::size_t blank_lines_dropped = 0;
    std::size_t duplicates_dropped = 0;
    std::size_t lines_decoded_with_fallback = 0; // latin1 fallback or lossy replacement
    std::optional<SampleInfo> sample;
};

/// Ordered collection of passwords. Entries are stored as valid UTF-8; all
/// password semantics are defined over the decoded code points.
struct Corpus {
    std::vector<std::string> entries;
    std::string source_label;
    DecodePolicy decode_policy = DecodePolicy::Latin1Fallback;
    bool deduped = false;
    Provenance provenance;

    [[nodiscard]] std::size_t size() const noexcept { return entries.size(); }
    [[nodiscard]] bool empty() const noexcept { return entries.empty(); }
    [[nodiscard]] CodePoints code_points(std::size_t i) const { return utf8::decode_valid(entries[i]); }
};

namespace detail {

inline void dedup_in_place(Corpus& c)
{
    std::unordered_set<std::string_view> seen;
    seen.reserve(c.entries.size());
    std::vector<std::string> kept;
    kept.reserve(c.entries.size());
    for (auto& e : c.entries) {
        if (seen.contains(e)) {
            ++c.provenance.duplicates_dropped;
            continue;
        }
        kept.push_back(std::move(e));
        seen.insert(kept.back()); // string_view into kept: stable, reserve() above prevents reallocation
    }
    c.entries = std::move(kept);
    c.deduped = true;
}

inline void strip_line_terminator(std::string& line)
{
    if (!line.empty() && line.back() == '\r') line.pop_back();
}

} // namespace detail

/// Keeps the first occurrence of every entry, preserving input order.
inline Corpus dedup(Corpus c)
{
    detail::dedup_in_place(c);
    return c;
}

/// Builds a corpus from in-memory UTF-8 strings. Empty strings are dropped.
inline Corpus make_corpus(std::vector<std::string> entries, std::string label, bool dedup_entries = true)
{
    Corpus c;
    c.source_label = std::move(label);
    c.provenance.lines_read = entries.size();
    c.entries.reserve(entries.size());
    for (auto& e : entries) {
        if (e.empty()) {
            ++c.provenance.blank_lines_dropped;
            continue;
        }
        if (!utf8::decode(e)) throw ValidationError("corpus entry is not valid UTF-8");
        c.entries.push_back(std::move(e));
    }
    if (dedup_entries) detail::dedup_in_place(c);
    if (c.entries.empty()) throw ValidationError("corpus '" + c.source_label + "' has no usable entries");
    return c;
}

/// Reads a newline-delimited password dump (LF or CRLF).
inline Corpus load_corpus(const std::filesystem::path& path,
                          DecodePolicy policy = DecodePolicy::Latin1Fallback,
                          bool dedup_entries = true,
                          std::string label = {})
{
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot read corpus file: " + path.string());

    Corpus c;
    c.source_label = label.empty() ? path.stem().string() : std::move(label);
    c.decode_policy = policy;
    c.provenance.path = path.string();

    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        detail::strip_line_terminator(line);
        ++c.provenance.lines_read;
        if (line.empty()) {
            ++c.provenance.blank_lines_dropped;
            continue;
        }
        if (utf8::decode(line)) {
            c.entries.push_back(std::move(line));
            continue;
        }
        switch (policy) {
        case DecodePolicy::StrictUtf8:
            throw DataError(path.string() + ":" + std::to_string(line_no) + ": invalid UTF-8");
        case DecodePolicy::LossyUtf8:
            c.entries.push_back(utf8::encode(utf8::decode_lossy(line)));
            break;
        case DecodePolicy::Latin1Fallback:
            c.entries.push_back(utf8::encode(utf8::decode_latin1(line)));
            break;
        }
        ++c.provenance.lines_decoded_with_fallback;
    }
    if (in.bad()) throw DataError("error while reading " + path.string());
    if (dedup_entries) detail::dedup_in_place(c);
    if (c.entries.empty()) throw DataError("no usable lines in " + path.string());
    return c;
}

/// Uniform sample of n entries without replacement (Floyd's algorithm). The
/// chosen entries keep their relative corpus order.
inline Corpus sample_corpus(const Corpus& corpus, std::size_t n, std::uint64_t seed)
{
    const std::size_t population = corpus.size();
    if (n < 1 || n > population) {
        throw ValidationError("sample size " + std::to_string(n) + " outside [1, " + std::to_string(population) + "]");
    }
    Rng rng(seed);
    std::unordered_set<std::size_t> chosen;
    chosen.reserve(n * 2);
    for (std::size_t j = population - n; j < population; ++j) {
        const auto t = static_cast<std::size_t>(rng.uniform_index(j + 1));
        if (!chosen.insert(t).second) chosen.insert(j);
    }
    std::vector<std::size_t> idx(chosen.begin(), chosen.end());
    std::sort(idx.begin(), idx.end());

    Corpus out;
    out.decode_policy = corpus.decode_policy;
    out.deduped = corpus.deduped;
    out.provenance = corpus.provenance;
    out.provenance.sample = SampleInfo{n, seed, population};
    out.source_label = corpus.source_label + "[n=" + std::to_string(n) + ",seed=" + std::to_string(seed) + "]";
    out.entries.reserve(n);
    for (auto i : idx) out.entries.push_back(corpus.entries[i]);
    return out;
}

/// Lowercase first names used for the contains-name feature.
struct NameList {
    std::vector<CodePoints> names; // sorted, unique
    std::size_t min_length = 3;
    std::size_t max_length = 0;
    std::size_t dropped_short = 0;
    std::string path;

    [[nodiscard]] std::size_t size() const noexcept { return names.size(); }
    [[nodiscard]] bool contains(CodePointView name) const
    {
        return std::binary_search(names.begin(), names.end(), name,
                                  [](CodePointView a, CodePointView b) { return a < b; });
    }
};

inline NameList make_namelist(const std::vector<std::string>& raw, std::size_t min_length = 3)
{
    NameList list;
    list.min_length = min_length;
    for (const auto& r : raw) {
        auto cps = utf8::decode(r);
        CodePoints name = cps ? to_lower(*cps) : to_lower(utf8::decode_latin1(r));
        if (name.empty()) continue;
        if (name.size() < min_length) {
            ++list.dropped_short;
            continue;
        }
        list.names.push_back(std::move(name));
    }
    std::sort(list.names.begin(), list.names.end());
    list.names.erase(std::unique(list.names.begin(), list.names.end()), list.names.end());
    if (list.names.empty()) throw ValidationError("name list is empty after filtering");
    for (const auto& n : list.names) list.max_length = std::max(list.max_length, n.size());
    return list;
}

/// One name per line, or a CSV whose first column holds the name. A header
/// row named "name"/"first_name"/"firstname" and '#' comments are skipped.
inline NameList load_namelist(const std::filesystem::path& path, std::size_t min_length = 3)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot read name list: " + path.string());
    std::vector<std::string> raw;
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
        detail::strip_line_terminator(line);
        if (!line.empty() && line.front() == '#') continue;
        std::string field = line.substr(0, line.find(','));
        auto not_space = [](unsigned char ch) { return ch != ' ' && ch != '\t' && ch != '"'; };
        field.erase(field.begin(), std::find_if(field.begin(), field.end(), not_space));
        field.erase(std::find_if(field.rbegin(), field.rend(), not_space).base(), field.end());
        if (first) {
            first = false;
            std::string lower = field;
            std::transform(lower.begin(), lower.end(), lower.begin(), [](unsigned char ch) {
                return static_cast<char>(std::tolower(ch));
            });
            if (lower == "name" || lower == "first_name" || lower == "firstname") continue;
        }
        raw.push_back(std::move(field));
    }
    NameList list;
    try {
        list = make_namelist(raw, min_length);
    } catch (const ValidationError&) {
        throw DataError("no usable names in " + path.string());
    }
    list.path = path.string();
    return list;
}

} // namespace pwevo
