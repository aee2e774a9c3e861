#pragma once

#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "pwevo/corpus.hpp"
#include "pwevo/editdist.hpp"
#include "pwevo/error.hpp"

#ifndef PWEVO_DEFAULT_DATA_DIR
#define PWEVO_DEFAULT_DATA_DIR "data"
#endif

namespace pwevo {

struct CorpusSpec {
    std::string label;
    std::filesystem::path path;
};

struct RunConfig {
    std::vector<CorpusSpec> corpora; // order matters: pairwise tests follow it
    std::filesystem::path blacklist;
    std::filesystem::path names;
    std::size_t sample_n = 40000;
    std::uint64_t seed = 20100101;
    std::size_t repeats = 1;
    Normalization norm = Normalization::MaxLen;
    std::size_t bins = 10;
    std::size_t k_min = 2;
    std::size_t k_max = 8;
    bool dedup = true;
    bool scale_features = false;
    bool keep_nearest = true; // nearest_id column in distances.csv
    bool emit_plaintext = false;
    DecodePolicy decode = DecodePolicy::Latin1Fallback;
    std::size_t name_min_length = 3;
    std::size_t email_examples = 3;
    std::size_t silhouette_sample = 10000;
    unsigned threads = 1;
    std::filesystem::path out = "pwevo-out";
    std::optional<std::string> fixed_timestamp;
};

/// PWEVO_DATA_DIR if set, otherwise the data directory of the source tree.
inline std::filesystem::path default_data_dir()
{
    if (const char* env = std::getenv("PWEVO_DATA_DIR"); env != nullptr && *env != '\0') return env;
    return PWEVO_DEFAULT_DATA_DIR;
}

inline RunConfig default_config()
{
    RunConfig c;
    c.blacklist = default_data_dir() / "bad_passwords.txt";
    c.names = default_data_dir() / "first_names.txt";
    return c;
}

namespace detail {

inline std::string trim(std::string_view s)
{
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

inline std::size_t parse_count(std::string_view key, const std::string& v)
{
    std::size_t pos = 0;
    unsigned long long x = 0;
    try {
        if (!v.empty() && v[0] == '-') throw std::invalid_argument("negative");
        x = std::stoull(v, &pos);
    } catch (const std::exception&) {
        throw ValidationError(std::string(key) + ": expected a non-negative integer, got '" + v + "'");
    }
    if (pos != v.size()) throw ValidationError(std::string(key) + ": trailing characters in '" + v + "'");
    return static_cast<std::size_t>(x);
}

inline bool parse_bool(std::string_view key, const std::string& v)
{
    if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
    if (v == "false" || v == "0" || v == "no" || v == "off") return false;
    throw ValidationError(std::string(key) + ": expected a boolean, got '" + v + "'");
}

} // namespace detail

/// "label=path"
inline CorpusSpec parse_corpus_spec(std::string_view s)
{
    const auto eq = s.find('=');
    if (eq == std::string_view::npos || eq == 0 || eq + 1 == s.size()) {
        throw ValidationError("corpus must be given as label=path, got '" + std::string(s) + "'");
    }
    return {detail::trim(s.substr(0, eq)), detail::trim(s.substr(eq + 1))};
}

inline void apply_setting(RunConfig& c, const std::string& key, const std::string& value)
{
    using detail::parse_bool;
    using detail::parse_count;
    if (key == "corpus") c.corpora.push_back(parse_corpus_spec(value));
    else if (key == "blacklist") c.blacklist = value;
    else if (key == "names") c.names = value;
    else if (key == "sample_n") c.sample_n = parse_count(key, value);
    else if (key == "seed") c.seed = parse_count(key, value);
    else if (key == "repeats") c.repeats = parse_count(key, value);
    else if (key == "norm") c.norm = parse_normalization(value);
    else if (key == "bins") c.bins = parse_count(key, value);
    else if (key == "k_min") c.k_min = parse_count(key, value);
    else if (key == "k_max") c.k_max = parse_count(key, value);
    else if (key == "dedup") c.dedup = parse_bool(key, value);
    else if (key == "scale_features") c.scale_features = parse_bool(key, value);
    else if (key == "keep_nearest") c.keep_nearest = parse_bool(key, value);
    else if (key == "emit_plaintext") c.emit_plaintext = parse_bool(key, value);
    else if (key == "decode") c.decode = parse_decode_policy(value);
    else if (key == "name_min_length") c.name_min_length = parse_count(key, value);
    else if (key == "email_examples") c.email_examples = parse_count(key, value);
    else if (key == "silhouette_sample") c.silhouette_sample = parse_count(key, value);
    else if (key == "threads") c.threads = static_cast<unsigned>(parse_count(key, value));
    else if (key == "out") c.out = value;
    else if (key == "fixed_timestamp") c.fixed_timestamp = value;
    else throw ValidationError("unknown config key '" + key + "'");
}

/// key = value lines; '#' starts a comment; `corpus` may repeat. Relative
/// paths are resolved against the config file's directory.
inline void load_config_file(RunConfig& c, const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot read config file " + path.string());
    const auto base = path.parent_path();
    auto resolve = [&](const std::filesystem::path& p) { return p.is_relative() && !base.empty() ? base / p : p; };

    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        const std::string t = detail::trim(line);
        if (t.empty()) continue;
        const auto eq = t.find('=');
        if (eq == std::string::npos) {
            throw ValidationError(path.string() + ":" + std::to_string(lineno) + ": expected key = value");
        }
        const std::string key = detail::trim(std::string_view(t).substr(0, eq));
        const std::string value = detail::trim(std::string_view(t).substr(eq + 1));
        apply_setting(c, key, value);
        if (key == "corpus") c.corpora.back().path = resolve(c.corpora.back().path);
        else if (key == "blacklist") c.blacklist = resolve(c.blacklist);
        else if (key == "names") c.names = resolve(c.names);
        else if (key == "out") c.out = resolve(c.out);
    }
}

inline bool valid_label(std::string_view s)
{
    if (s.empty() || s == "." || s == "..") return false;
    for (char ch : s) {
        const bool ok = (ch >= 'a' && ch <= 'z') || (ch >= 'A' && ch <= 'Z') || (ch >= '0' && ch <= '9') || ch == '-' ||
                        ch == '_' || ch == '.';
        if (!ok) return false;
    }
    return true;
}

struct ValidationNeeds {
    bool corpora = true;
    bool blacklist = true;
    bool names = false;
};

inline void validate(const RunConfig& c, ValidationNeeds needs = {})
{
    namespace fs = std::filesystem;
    if (needs.corpora && c.corpora.empty()) throw ValidationError("no corpus given (use --corpus label=path)");
    for (std::size_t i = 0; i < c.corpora.size(); ++i) {
        const auto& spec = c.corpora[i];
        if (!valid_label(spec.label)) {
            throw ValidationError("corpus label '" + spec.label + "' must use only letters, digits, '-', '_' or '.'");
        }
        for (std::size_t j = 0; j < i; ++j)
            if (c.corpora[j].label == spec.label) throw ValidationError("duplicate corpus label '" + spec.label + "'");
        if (!fs::is_regular_file(spec.path)) throw ValidationError("corpus file not found: " + spec.path.string());
    }
    if (needs.blacklist && !fs::is_regular_file(c.blacklist)) {
        throw ValidationError("blacklist file not found: " + c.blacklist.string());
    }
    if (needs.names && !fs::is_regular_file(c.names)) throw ValidationError("name list not found: " + c.names.string());
    if (c.sample_n < 1) throw ValidationError("sample size must be at least 1");
    if (c.repeats < 1) throw ValidationError("repeats must be at least 1");
    if (c.bins < 1) throw ValidationError("bins must be at least 1");
    if (c.k_min < 2 || c.k_max > 64 || c.k_min > c.k_max) throw ValidationError("k range must satisfy 2 <= k_min <= k_max <= 64");
    if (c.name_min_length < 1) throw ValidationError("name_min_length must be at least 1");
    if (c.threads < 1) throw ValidationError("threads must be at least 1");
}

} // namespace pwevo
