#pragma once

#include <array>
#include <cstddef>
#include <string_view>
#include <unordered_set>

#include "pwevo/corpus.hpp"
#include "pwevo/editdist.hpp"
#include "pwevo/error.hpp"
#include "pwevo/unicode.hpp"

namespace pwevo {

// Only basic Latin letters and decimal digits count as letters/digits;
// every other code point (whitespace, punctuation, non-ASCII) is special.
constexpr bool is_ascii_lower(char32_t c) noexcept { return c >= U'a' && c <= U'z'; }
constexpr bool is_ascii_upper(char32_t c) noexcept { return c >= U'A' && c <= U'Z'; }
constexpr bool is_ascii_digit(char32_t c) noexcept { return c >= U'0' && c <= U'9'; }
constexpr bool is_ascii_alpha(char32_t c) noexcept { return is_ascii_lower(c) || is_ascii_upper(c); }
constexpr bool is_special(char32_t c) noexcept { return !is_ascii_alpha(c) && !is_ascii_digit(c); }

struct CharCounts {
    std::size_t lowercase = 0;
    std::size_t uppercase = 0;
    std::size_t digits = 0;
    std::size_t special = 0;

    [[nodiscard]] std::size_t total() const noexcept { return lowercase + uppercase + digits + special; }
    bool operator==(const CharCounts&) const = default;
};

inline CharCounts classify_chars(CodePointView password)
{
    if (password.empty()) throw ValidationError("classify_chars: empty password");
    CharCounts c;
    for (char32_t ch : password) {
        if (is_ascii_lower(ch)) ++c.lowercase;
        else if (is_ascii_upper(ch)) ++c.uppercase;
        else if (is_ascii_digit(ch)) ++c.digits;
        else ++c.special;
    }
    return c;
}

inline constexpr std::size_t kFeatureDims = 10;

/// Policy-compliance encoding of one password, x1..x10.
struct FeatureVector {
    std::size_t length = 0;        // x1
    bool mixed_case = false;       // x2: has both lower- and uppercase letters
    std::size_t lowercase = 0;     // x3
    std::size_t uppercase = 0;     // x4
    bool letters_and_digits = false; // x5: has at least one letter and one digit
    std::size_t digits = 0;        // x6
    bool has_special = false;      // x7
    std::size_t special = 0;       // x8
    double blacklist_distance = 0; // x9: normalized min distance to the blacklist
    bool contains_name = false;    // x10

    [[nodiscard]] std::array<double, kFeatureDims> to_array() const noexcept
    {
        return {static_cast<double>(length),    mixed_case ? 1.0 : 0.0,
                static_cast<double>(lowercase), static_cast<double>(uppercase),
                letters_and_digits ? 1.0 : 0.0, static_cast<double>(digits),
                has_special ? 1.0 : 0.0,        static_cast<double>(special),
                blacklist_distance,             contains_name ? 1.0 : 0.0};
    }
};

/// Case-insensitive contiguous-substring match against the name list.
inline bool contains_name(CodePointView password, const NameList& names)
{
    if (password.size() < names.min_length || names.names.empty()) return false;
    const CodePoints lower = to_lower(password);
    const std::size_t longest = names.max_length;
    const CodePointView view(lower);
    for (std::size_t start = 0; start + names.min_length <= view.size(); ++start) {
        const std::size_t max_len = std::min(longest, view.size() - start);
        for (std::size_t len = names.min_length; len <= max_len; ++len) {
            if (names.contains(view.substr(start, len))) return true;
        }
    }
    return false;
}

/// Whole-string email check: local@domain, non-empty local part, a dotted
/// domain whose final label has at least two letters. Conservative on
/// purpose (not an RFC 5322 grammar).
inline bool is_email(CodePointView s)
{
    const auto at = s.find(U'@');
    if (at == CodePointView::npos || at == 0 || s.find(U'@', at + 1) != CodePointView::npos) return false;
    const auto local = s.substr(0, at);
    const auto domain = s.substr(at + 1);

    for (char32_t c : local) {
        const bool ok = is_ascii_alpha(c) || is_ascii_digit(c) || c == U'.' || c == U'_' || c == U'%' || c == U'+' ||
                        c == U'-';
        if (!ok) return false;
    }
    if (local.front() == U'.' || local.back() == U'.') return false;

    const auto last_dot = domain.rfind(U'.');
    if (last_dot == CodePointView::npos) return false;
    std::size_t label_start = 0;
    for (std::size_t i = 0; i <= domain.size(); ++i) {
        if (i == domain.size() || domain[i] == U'.') {
            const auto label = domain.substr(label_start, i - label_start);
            if (label.empty() || label.front() == U'-' || label.back() == U'-') return false;
            label_start = i + 1;
            continue;
        }
        const char32_t c = domain[i];
        if (!is_ascii_alpha(c) && !is_ascii_digit(c) && c != U'-') return false;
    }
    const auto tld = domain.substr(last_dot + 1);
    if (tld.size() < 2) return false;
    for (char32_t c : tld) {
        if (!is_ascii_alpha(c)) return false;
    }
    return true;
}

/// Feature vector with x9 supplied by the caller (e.g. reused from a
/// distance sample computed against the same blacklist).
inline FeatureVector vectorize(CodePointView password, double blacklist_distance, const NameList& names)
{
    const CharCounts c = classify_chars(password);
    FeatureVector f;
    f.length = password.size();
    f.lowercase = c.lowercase;
    f.uppercase = c.uppercase;
    f.digits = c.digits;
    f.special = c.special;
    f.mixed_case = c.lowercase > 0 && c.uppercase > 0;
    f.letters_and_digits = (c.lowercase + c.uppercase) > 0 && c.digits > 0;
    f.has_special = c.special > 0;
    f.blacklist_distance = blacklist_distance;
    f.contains_name = contains_name(password, names);
    return f;
}

inline FeatureVector vectorize(CodePointView password, const BlacklistIndex& index, const NameList& names,
                               Normalization norm = Normalization::MaxLen)
{
    if (password.empty()) throw ValidationError("vectorize: empty password");
    return vectorize(password, min_distance_to_set(password, index, {norm, true}).normalized, names);
}

} // namespace pwevo
