#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace pwevo {

// Passwords are handled as sequences of Unicode code points.
using CodePoints = std::u32string;
using CodePointView = std::u32string_view;

namespace utf8 {

/// Strict UTF-8 decode. Rejects overlong forms, surrogates and values above
/// U+10FFFF. Returns nullopt on the first invalid sequence.
inline std::optional<CodePoints> decode(std::string_view bytes)
{
    CodePoints out;
    out.reserve(bytes.size());
    std::size_t i = 0;
    const std::size_t n = bytes.size();
    while (i < n) {
        const auto b0 = static_cast<unsigned char>(bytes[i]);
        if (b0 < 0x80) {
            out.push_back(b0);
            ++i;
            continue;
        }
        std::size_t len = 0;
        char32_t cp = 0;
        char32_t min_cp = 0;
        if ((b0 & 0xE0) == 0xC0) {
            len = 2;
            cp = b0 & 0x1F;
            min_cp = 0x80;
        } else if ((b0 & 0xF0) == 0xE0) {
            len = 3;
            cp = b0 & 0x0F;
            min_cp = 0x800;
        } else if ((b0 & 0xF8) == 0xF0) {
            len = 4;
            cp = b0 & 0x07;
            min_cp = 0x10000;
        } else {
            return std::nullopt;
        }
        if (i + len > n) return std::nullopt;
        for (std::size_t k = 1; k < len; ++k) {
            const auto b = static_cast<unsigned char>(bytes[i + k]);
            if ((b & 0xC0) != 0x80) return std::nullopt;
            cp = (cp << 6) | (b & 0x3F);
        }
        if (cp < min_cp || cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)) return std::nullopt;
        out.push_back(cp);
        i += len;
    }
    return out;
}

/// Lossy decode: every invalid byte becomes U+FFFD.
inline CodePoints decode_lossy(std::string_view bytes, std::size_t* replaced = nullptr)
{
    CodePoints out;
    out.reserve(bytes.size());
    std::size_t bad = 0;
    std::size_t i = 0;
    while (i < bytes.size()) {
        // Find the longest valid prefix starting at i by trying 1..4 byte windows.
        bool ok = false;
        for (std::size_t len = 1; len <= 4 && i + len <= bytes.size(); ++len) {
            auto cps = decode(bytes.substr(i, len));
            if (cps && cps->size() == 1) {
                out.push_back((*cps)[0]);
                i += len;
                ok = true;
                break;
            }
        }
        if (!ok) {
            out.push_back(U'�');
            ++bad;
            ++i;
        }
    }
    if (replaced != nullptr) *replaced += bad;
    return out;
}

/// Each byte maps to the code point of the same value (U+0000..U+00FF).
inline CodePoints decode_latin1(std::string_view bytes)
{
    CodePoints out;
    out.reserve(bytes.size());
    for (char c : bytes) out.push_back(static_cast<unsigned char>(c));
    return out;
}

inline void append(std::string& out, char32_t cp)
{
    if (cp < 0x80) {
        out.push_back(static_cast<char>(cp));
    } else if (cp < 0x800) {
        out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else if (cp < 0x10000) {
        out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else {
        out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    }
}

inline std::string encode(CodePointView cps)
{
    std::string out;
    out.reserve(cps.size());
    for (char32_t cp : cps) append(out, cp);
    return out;
}

/// Decodes text that is already known to be valid UTF-8 (e.g. corpus entries).
inline CodePoints decode_valid(std::string_view bytes)
{
    return decode_lossy(bytes);
}

} // namespace utf8

/// Lowercases basic Latin and Latin-1 letters; other code points pass through.
constexpr char32_t to_lower(char32_t c) noexcept
{
    if (c >= U'A' && c <= U'Z') return c + 32;
    if (c >= 0xC0 && c <= 0xDE && c != 0xD7) return c + 32;
    return c;
}

constexpr char32_t to_upper(char32_t c) noexcept
{
    if (c >= U'a' && c <= U'z') return c - 32;
    if (c >= 0xE0 && c <= 0xFE && c != 0xF7) return c - 32;
    return c;
}

inline CodePoints to_lower(CodePointView s)
{
    CodePoints out(s);
    for (auto& c : out) c = to_lower(c);
    return out;
}

} // namespace pwevo
