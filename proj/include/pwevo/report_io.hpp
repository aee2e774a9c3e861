#pragma once

// Output plumbing: atomic file writes, the PARTIAL marker, number formatting.

#include <charconv>
#include <chrono>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <string>
#include <string_view>

#include "pwevo/error.hpp"

namespace pwevo {

/// Shortest representation that round-trips; identical across runs.
inline std::string format_double(double x)
{
    char buf[64];
    const auto r = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, r.ptr);
}

/// RFC 4180 quoting when needed.
inline std::string csv_field(std::string_view s)
{
    if (s.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(s);
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

inline std::string utc_timestamp()
{
    const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

class OutputDir {
public:
    explicit OutputDir(std::filesystem::path root) : root_(std::move(root)) {}

    [[nodiscard]] const std::filesystem::path& root() const noexcept { return root_; }

    /// Writes to a temporary sibling and renames it into place, so readers
    /// never observe a half-written file.
    std::filesystem::path write(const std::filesystem::path& relative, std::string_view content) const
    {
        namespace fs = std::filesystem;
        const fs::path target = root_ / relative;
        std::error_code ec;
        fs::create_directories(target.parent_path(), ec);
        if (ec) throw DataError("cannot create directory " + target.parent_path().string() + ": " + ec.message());
        fs::path tmp = target;
        tmp += ".tmp";
        {
            std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
            if (!out) throw DataError("cannot write " + tmp.string());
            out.write(content.data(), static_cast<std::streamsize>(content.size()));
            out.flush();
            if (!out) throw DataError("short write to " + tmp.string());
        }
        fs::rename(tmp, target, ec);
        if (ec) throw DataError("cannot move " + tmp.string() + " into place: " + ec.message());
        return target;
    }

    void mark_partial(std::string_view reason) const noexcept
    {
        try {
            write("PARTIAL", std::string("run did not complete: ") + std::string(reason) + "\n");
        } catch (...) {
            // best effort; the exit code still reports the failure
        }
    }

    void clear_partial() const
    {
        std::error_code ec;
        std::filesystem::remove(root_ / "PARTIAL", ec);
    }

private:
    std::filesystem::path root_;
};

} // namespace pwevo
