#pragma once

#include <algorithm>
#include <array>
#include <cstddef>
#include <cstdio>
#include <map>
#include <string>
#include <vector>

#include "pwevo/corpus.hpp"
#include "pwevo/error.hpp"
#include "pwevo/features.hpp"
#include "pwevo/unicode.hpp"

namespace pwevo {

struct FrequencyReport {
    std::size_t corpus_size = 0;
    std::map<std::size_t, std::size_t> length_counts;
    std::array<std::size_t, 10> digit_occurrences{};
    std::array<std::size_t, 10> digit_password_counts{};
    std::map<char32_t, std::size_t> special_occurrences;
    std::map<char32_t, std::size_t> special_password_counts;
    std::size_t email_count = 0;
    std::vector<std::string> email_examples; // masked

    /// Elementwise sum of two partial reports (e.g. from corpus shards).
    /// Email examples are concatenated.
    void merge(const FrequencyReport& other)
    {
        corpus_size += other.corpus_size;
        for (const auto& [len, n] : other.length_counts) length_counts[len] += n;
        for (std::size_t d = 0; d < 10; ++d) {
            digit_occurrences[d] += other.digit_occurrences[d];
            digit_password_counts[d] += other.digit_password_counts[d];
        }
        for (const auto& [c, n] : other.special_occurrences) special_occurrences[c] += n;
        for (const auto& [c, n] : other.special_password_counts) special_password_counts[c] += n;
        email_count += other.email_count;
        email_examples.insert(email_examples.end(), other.email_examples.begin(), other.email_examples.end());
    }
};

struct LengthShare {
    std::size_t length = 0;
    std::size_t count = 0;
    double percent = 0.0;
};

struct LengthDistribution {
    std::size_t total = 0;
    std::vector<LengthShare> rows; // ascending length
    double percent_8_to_24 = 0.0;

    [[nodiscard]] double percent_of(std::size_t len) const
    {
        for (const auto& r : rows)
            if (r.length == len) return r.percent;
        return 0.0;
    }
};

inline LengthDistribution length_distribution(const std::map<std::size_t, std::size_t>& counts)
{
    LengthDistribution out;
    for (const auto& [len, n] : counts) out.total += n;
    if (out.total == 0) throw ValidationError("length distribution of an empty corpus");
    std::size_t window = 0;
    for (const auto& [len, n] : counts) {
        out.rows.push_back({len, n, 100.0 * static_cast<double>(n) / static_cast<double>(out.total)});
        if (len >= 8 && len <= 24) window += n;
    }
    out.percent_8_to_24 = 100.0 * static_cast<double>(window) / static_cast<double>(out.total);
    return out;
}

inline LengthDistribution length_distribution(const Corpus& corpus)
{
    if (corpus.empty()) throw ValidationError("length_distribution: empty corpus");
    std::map<std::size_t, std::size_t> counts;
    for (std::size_t i = 0; i < corpus.size(); ++i) ++counts[corpus.code_points(i).size()];
    return length_distribution(counts);
}

struct DigitDistribution {
    std::array<std::size_t, 10> occurrences{};
    std::array<std::size_t, 10> passwords_containing{};
};

inline DigitDistribution digit_distribution(const Corpus& corpus)
{
    if (corpus.empty()) throw ValidationError("digit_distribution: empty corpus");
    DigitDistribution out;
    for (const auto& e : corpus.entries) {
        std::array<bool, 10> seen{};
        for (char ch : e) { // digits are single-byte in UTF-8
            if (ch >= '0' && ch <= '9') {
                const auto d = static_cast<std::size_t>(ch - '0');
                ++out.occurrences[d];
                seen[d] = true;
            }
        }
        for (std::size_t d = 0; d < 10; ++d) out.passwords_containing[d] += seen[d] ? 1 : 0;
    }
    return out;
}

struct SpecialCharCount {
    char32_t code_point = 0;
    std::size_t occurrences = 0;
    std::size_t passwords_containing = 0;
};

/// Display token for a special character: "sp" for space, U+XXXX for
/// control characters, the character itself otherwise.
inline std::string special_token(char32_t c)
{
    if (c == U' ') return "sp";
    if (c < 0x20 || c == 0x7F || (c >= 0x80 && c < 0xA0)) {
        char buf[16];
        std::snprintf(buf, sizeof buf, "U+%04X", static_cast<unsigned>(c));
        return buf;
    }
    std::string s;
    utf8::append(s, c);
    return s;
}

/// Ranked by occurrences descending, then by code point.
inline std::vector<SpecialCharCount> rank_specials(const std::map<char32_t, std::size_t>& occurrences,
                                                   const std::map<char32_t, std::size_t>& containing)
{
    std::vector<SpecialCharCount> out;
    for (const auto& [c, n] : occurrences) {
        auto it = containing.find(c);
        out.push_back({c, n, it == containing.end() ? 0 : it->second});
    }
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
        if (a.occurrences != b.occurrences) return a.occurrences > b.occurrences;
        return a.code_point < b.code_point;
    });
    return out;
}

inline std::vector<SpecialCharCount> special_char_distribution(const Corpus& corpus)
{
    if (corpus.empty()) throw ValidationError("special_char_distribution: empty corpus");
    std::map<char32_t, std::size_t> occ;
    std::map<char32_t, std::size_t> containing;
    std::vector<char32_t> seen;
    for (std::size_t i = 0; i < corpus.size(); ++i) {
        seen.clear();
        for (char32_t c : corpus.code_points(i)) {
            if (!is_special(c)) continue;
            ++occ[c];
            if (std::find(seen.begin(), seen.end(), c) == seen.end()) seen.push_back(c);
        }
        for (char32_t c : seen) ++containing[c];
    }
    return rank_specials(occ, containing);
}

/// Keeps the first character of the local part, the '@', the final domain
/// label and the dot before it; every other character becomes '*'.
inline std::string mask_email(CodePointView email)
{
    const auto at = email.find(U'@');
    const auto last_dot = email.rfind(U'.');
    CodePoints out(email);
    for (std::size_t i = 0; i < out.size(); ++i) {
        const bool keep = i == 0 || i == at || (last_dot != CodePointView::npos && last_dot > at && i >= last_dot);
        if (!keep) out[i] = U'*';
    }
    return utf8::encode(out);
}

struct EmailCensus {
    std::size_t count = 0;
    std::vector<std::string> examples; // masked, first matches in corpus order
};

inline EmailCensus email_census(const Corpus& corpus, std::size_t max_examples = 3)
{
    if (corpus.empty()) throw ValidationError("email_census: empty corpus");
    EmailCensus out;
    for (std::size_t i = 0; i < corpus.size(); ++i) {
        if (corpus.entries[i].find('@') == std::string::npos) continue;
        const auto cps = corpus.code_points(i);
        if (!is_email(cps)) continue;
        ++out.count;
        if (out.examples.size() < max_examples) out.examples.push_back(mask_email(cps));
    }
    return out;
}

/// All censuses in a single pass over the corpus.
inline FrequencyReport frequency_report(const Corpus& corpus, std::size_t max_email_examples = 3)
{
    if (corpus.empty()) throw ValidationError("frequency_report: empty corpus");
    FrequencyReport r;
    r.corpus_size = corpus.size();
    std::vector<char32_t> seen_special;
    for (std::size_t i = 0; i < corpus.size(); ++i) {
        const auto cps = corpus.code_points(i);
        ++r.length_counts[cps.size()];
        std::array<bool, 10> seen_digit{};
        seen_special.clear();
        for (char32_t c : cps) {
            if (is_ascii_digit(c)) {
                const auto d = static_cast<std::size_t>(c - U'0');
                ++r.digit_occurrences[d];
                seen_digit[d] = true;
            } else if (is_special(c)) {
                ++r.special_occurrences[c];
                if (std::find(seen_special.begin(), seen_special.end(), c) == seen_special.end()) {
                    seen_special.push_back(c);
                }
            }
        }
        for (std::size_t d = 0; d < 10; ++d) r.digit_password_counts[d] += seen_digit[d] ? 1 : 0;
        for (char32_t c : seen_special) ++r.special_password_counts[c];
        if (is_email(cps)) {
            ++r.email_count;
            if (r.email_examples.size() < max_email_examples) r.email_examples.push_back(mask_email(cps));
        }
    }
    return r;
}

} // namespace pwevo
