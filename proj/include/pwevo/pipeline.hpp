#pragma once

// The analysis pipeline behind the CLI: sampling, similarity, pairwise tests,
// clustering and frequency censuses, assembled into one JSON report with CSV
// sidecars.

#include <algorithm>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "pwevo/cluster.hpp"
#include "pwevo/config.hpp"
#include "pwevo/corpus.hpp"
#include "pwevo/editdist.hpp"
#include "pwevo/features.hpp"
#include "pwevo/freq.hpp"
#include "pwevo/random.hpp"
#include "pwevo/report_io.hpp"
#include "pwevo/stats.hpp"

#ifndef PWEVO_VERSION
#define PWEVO_VERSION "0.0.0"
#endif

namespace pwevo {

using Json = nlohmann::ordered_json;

// Stable across platforms, unlike std::hash.
constexpr std::uint64_t fnv1a(std::string_view s) noexcept
{
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

inline Json to_json(const Provenance& p)
{
    Json j;
    j["path"] = p.path;
    j["lines_read"] = p.lines_read;
    j["blank_lines_dropped"] = p.blank_lines_dropped;
    j["duplicates_dropped"] = p.duplicates_dropped;
    j["lines_decoded_with_fallback"] = p.lines_decoded_with_fallback;
    return j;
}

inline Json to_json(const SummaryStats& s)
{
    return Json{{"n", s.n},           {"min", s.min},       {"max", s.max},
                {"mean", s.mean},     {"std_dev", s.std_dev}, {"skewness", s.skewness},
                {"q1", s.q1},         {"median", s.median}, {"q3", s.q3}};
}

inline Json to_json(const Histogram& h)
{
    return Json{{"bin_edges", h.bin_edges}, {"counts", h.counts}, {"total", h.total}, {"below", h.below},
                {"above", h.above}};
}

inline Json to_json(const BoxplotStats& b)
{
    return Json{{"min", b.min},
                {"q1", b.q1},
                {"median", b.median},
                {"q3", b.q3},
                {"max", b.max},
                {"lower_whisker", b.lower_whisker},
                {"upper_whisker", b.upper_whisker},
                {"outlier_count", b.outliers.size()}};
}

inline Json to_json(const TTestResult& t)
{
    return Json{{"t_statistic", t.t_statistic},
                {"degrees_of_freedom", t.degrees_of_freedom},
                {"mean_a", t.mean_a},
                {"mean_b", t.mean_b},
                {"critical_value", t.critical_value},
                {"significant_at_5pct", t.significant_at_5pct}};
}

inline Json config_json(const RunConfig& c)
{
    Json corpora = Json::array();
    for (const auto& s : c.corpora) corpora.push_back({{"label", s.label}, {"path", s.path.string()}});
    Json j;
    j["corpora"] = corpora;
    j["blacklist"] = c.blacklist.string();
    j["names"] = c.names.string();
    j["sample_n"] = c.sample_n;
    j["seed"] = c.seed;
    j["repeats"] = c.repeats;
    j["norm"] = std::string(to_string(c.norm));
    j["bins"] = c.bins;
    j["k_min"] = c.k_min;
    j["k_max"] = c.k_max;
    j["dedup"] = c.dedup;
    j["scale_features"] = c.scale_features;
    j["keep_nearest"] = c.keep_nearest;
    j["emit_plaintext"] = c.emit_plaintext;
    j["decode"] = std::string(to_string(c.decode));
    j["name_min_length"] = c.name_min_length;
    j["email_examples"] = c.email_examples;
    j["silhouette_sample"] = c.silhouette_sample;
    j["significance_level"] = 0.05;
    return j;
}

struct PreparedCorpus {
    std::string label;
    Corpus full;
    std::vector<Corpus> samples; // one per repeat; samples[0] drives tests and clustering
    std::uint64_t seed = 0;
    std::string sampling_mode; // full-corpus | single-sample | repeated-samples
};

struct SimilarityResult {
    std::vector<DistanceSample> repeats;
    [[nodiscard]] const DistanceSample& primary() const { return repeats.front(); }
};

/// Lazily loads shared inputs and caches per-corpus results so that `report`
/// computes each distance sample once.
class Session {
public:
    explicit Session(RunConfig config) : config_(std::move(config)), out_(config_.out) {}

    [[nodiscard]] const RunConfig& config() const noexcept { return config_; }
    [[nodiscard]] const OutputDir& out() const noexcept { return out_; }

    const BlacklistIndex& index()
    {
        if (!index_) {
            auto bl = load_corpus(config_.blacklist, config_.decode, true, "blacklist");
            index_ = std::make_unique<BlacklistIndex>(bl);
        }
        return *index_;
    }

    const NameList& names()
    {
        if (!names_) names_ = std::make_unique<NameList>(load_namelist(config_.names, config_.name_min_length));
        return *names_;
    }

    const PreparedCorpus& corpus(const std::string& label)
    {
        if (auto it = corpora_.find(label); it != corpora_.end()) return it->second;
        const auto spec = std::find_if(config_.corpora.begin(), config_.corpora.end(),
                                       [&](const CorpusSpec& s) { return s.label == label; });
        if (spec == config_.corpora.end()) throw ValidationError("unknown corpus label '" + label + "'");

        PreparedCorpus pc;
        pc.label = label;
        pc.full = load_corpus(spec->path, config_.decode, config_.dedup, label);
        pc.seed = derive_seed(config_.seed, fnv1a(label));
        if (config_.sample_n >= pc.full.size()) {
            pc.sampling_mode = "full-corpus";
            pc.samples.push_back(pc.full);
        } else {
            pc.sampling_mode = config_.repeats > 1 ? "repeated-samples" : "single-sample";
            for (std::size_t r = 0; r < config_.repeats; ++r) {
                pc.samples.push_back(sample_corpus(pc.full, config_.sample_n, derive_seed(pc.seed, r)));
            }
        }
        return corpora_.emplace(label, std::move(pc)).first->second;
    }

    const SimilarityResult& similarity(const std::string& label)
    {
        if (auto it = similarity_.find(label); it != similarity_.end()) return it->second;
        const auto& pc = corpus(label);
        SampleOptions opts;
        opts.search.norm = config_.norm;
        opts.keep_nearest = true;
        opts.threads = config_.threads;
        SimilarityResult r;
        for (const auto& s : pc.samples) r.repeats.push_back(distance_sample(s, index(), opts));
        return similarity_.emplace(label, std::move(r)).first->second;
    }

    Json sampling_json(const PreparedCorpus& pc) const
    {
        Json j;
        j["mode"] = pc.sampling_mode;
        j["method"] = config_.dedup ? "uniform without replacement, after dedup" : "uniform without replacement";
        j["population"] = pc.full.size();
        j["n"] = pc.samples.front().size();
        j["repeats"] = pc.samples.size();
        Json seeds = Json::array();
        for (const auto& s : pc.samples)
            if (s.provenance.sample) seeds.push_back(s.provenance.sample->seed);
        j["seeds"] = seeds;
        return j;
    }

    Json corpus_header(const PreparedCorpus& pc) const
    {
        Json j;
        j["label"] = pc.label;
        j["size"] = pc.full.size();
        j["deduped"] = pc.full.deduped;
        j["decode_policy"] = std::string(to_string(pc.full.decode_policy));
        j["provenance"] = to_json(pc.full.provenance);
        j["sampling"] = sampling_json(pc);
        return j;
    }

    Json blacklist_json()
    {
        const auto& ix = index();
        Json j = to_json(ix.provenance());
        j["size"] = ix.size();
        j["length_buckets"] = ix.buckets().size();
        return j;
    }

    Json names_json()
    {
        const auto& n = names();
        return Json{{"path", n.path}, {"size", n.size()}, {"min_length", n.min_length},
                    {"dropped_short", n.dropped_short}};
    }

private:
    RunConfig config_;
    OutputDir out_;
    std::unique_ptr<BlacklistIndex> index_;
    std::unique_ptr<NameList> names_;
    std::map<std::string, PreparedCorpus> corpora_;
    std::map<std::string, SimilarityResult> similarity_;
};

// ---------------------------------------------------------------------------
// Sub-commands. Each returns its JSON section and writes its CSV sidecars.
// ---------------------------------------------------------------------------

inline Json describe_distances(const DistanceSample& ds, std::size_t bins)
{
    Json j;
    const std::span<const double> v(ds.values);
    j["n"] = v.size();
    j["mean"] = ds.mean();
    j["exact_matches"] = std::count(ds.raw_values.begin(), ds.raw_values.end(), std::size_t{0});
    j["summary"] = v.size() >= 2 ? to_json(describe(v)) : Json(nullptr);
    if (v.size() >= 30) {
        const auto ci = ci_mean(v, 95.0);
        j["ci95"] = Json{{"low", ci.low}, {"high", ci.high}};
    } else {
        j["ci95"] = nullptr;
    }
    j["histogram"] = to_json(histogram(v, bins, {0.0, 1.0}));
    j["boxplot"] = v.size() >= 5 ? to_json(boxplot_stats(v)) : Json(nullptr);
    return j;
}

inline Json cmd_similarity(Session& s, const std::string& label)
{
    const auto& cfg = s.config();
    const auto& pc = s.corpus(label);
    const auto& sim = s.similarity(label);
    const auto& ds = sim.primary();
    const auto& ix = s.index();

    std::ostringstream csv;
    csv << "index,raw,normalized";
    if (cfg.keep_nearest) csv << ",nearest_id";
    if (cfg.emit_plaintext) csv << ",password,nearest_entry";
    csv << '\n';
    const auto& sample = pc.samples.front();
    for (std::size_t i = 0; i < ds.size(); ++i) {
        csv << i << ',' << ds.raw_values[i] << ',' << format_double(ds.values[i]);
        if (cfg.keep_nearest) csv << ',' << ds.nearest[i];
        if (cfg.emit_plaintext) {
            csv << ',' << csv_field(sample.entries[i]) << ',' << csv_field(ix.entry_utf8(ds.nearest[i]));
        }
        csv << '\n';
    }
    s.out().write(label + "/distances.csv", csv.str());

    Json j = describe_distances(ds, cfg.bins);
    const auto& h = j["histogram"];
    std::ostringstream hist;
    hist << "bin_low,bin_high,count\n";
    for (std::size_t b = 0; b < cfg.bins; ++b) {
        hist << format_double(h["bin_edges"][b].get<double>()) << ','
             << format_double(h["bin_edges"][b + 1].get<double>()) << ',' << h["counts"][b].get<std::size_t>()
             << '\n';
    }
    s.out().write(label + "/hist.csv", hist.str());

    Json out;
    out["normalization"] = std::string(to_string(cfg.norm));
    out["statistics_from"] = sim.repeats.size() > 1 ? "repeat 0 (see per_repeat)" : "single sample";
    for (auto it = j.begin(); it != j.end(); ++it) out[it.key()] = it.value();
    if (sim.repeats.size() > 1) {
        Json reps = Json::array();
        double acc = 0.0;
        for (std::size_t r = 0; r < sim.repeats.size(); ++r) {
            const auto& rep = sim.repeats[r];
            const auto st = describe(std::span<const double>(rep.values));
            reps.push_back({{"repeat", r}, {"seed", pc.samples[r].provenance.sample->seed}, {"mean", st.mean},
                            {"std_dev", st.std_dev}, {"median", st.median}, {"skewness", st.skewness}});
            acc += st.mean;
        }
        out["per_repeat"] = reps;
        out["mean_over_repeats"] = acc / static_cast<double>(sim.repeats.size());
    }
    out["files"] = Json{{"distances", label + "/distances.csv"}, {"histogram", label + "/hist.csv"}};
    return out;
}

inline Json cmd_ttest(Session& s, const std::string& label_a, const std::string& label_b)
{
    const auto& a = s.similarity(label_a).primary();
    const auto& b = s.similarity(label_b).primary();
    const auto t = welch_t_test(std::span<const double>(a.values), std::span<const double>(b.values));
    Json j;
    j["a"] = label_a;
    j["b"] = label_b;
    j["samples"] = "repeat 0 of each corpus";
    j["n_a"] = a.size();
    j["n_b"] = b.size();
    const Json tj = to_json(t);
    for (auto it = tj.begin(); it != tj.end(); ++it) j[it.key()] = it.value();
    j["decision"] = t.significant_at_5pct ? "H0 rejected: mean distances differ at the 5% level"
                                          : "H0 retained: no significant difference at the 5% level";
    if (t.significant_at_5pct) j["farther_from_blacklist"] = t.t_statistic > 0 ? label_a : label_b;
    return j;
}

inline Json cmd_cluster(Session& s, const std::string& label)
{
    const auto& cfg = s.config();
    const auto& pc = s.corpus(label);
    const auto& ds = s.similarity(label).primary();
    const auto& names = s.names();
    const auto& sample = pc.samples.front();

    std::vector<Point<kFeatureDims>> raw(sample.size());
    std::ostringstream vec;
    vec << "x1,x2,x3,x4,x5,x6,x7,x8,x9,x10\n";
    for (std::size_t i = 0; i < sample.size(); ++i) {
        raw[i] = vectorize(sample.code_points(i), ds.values[i], names).to_array();
        for (std::size_t d = 0; d < kFeatureDims; ++d) vec << (d ? "," : "") << format_double(raw[i][d]);
        vec << '\n';
    }
    s.out().write(label + "/vectors.csv", vec.str());

    auto points = raw;
    std::optional<Standardization<kFeatureDims>> scaling;
    if (cfg.scale_features) scaling = standardize<kFeatureDims>(std::span<Point<kFeatureDims>>(points));

    KMeansOptions opts;
    opts.silhouette_sample = cfg.silhouette_sample;
    const std::uint64_t seed = derive_seed(pc.seed, 0xC1);
    const auto sel =
        select_k<kFeatureDims>(std::span<const Point<kFeatureDims>>(points), cfg.k_min, cfg.k_max, seed, opts);
    const auto& cl = sel.clustering;

    std::ostringstream asg;
    asg << "index,cluster\n";
    for (std::size_t i = 0; i < cl.assignment.size(); ++i) asg << i << ',' << cl.assignment[i] << '\n';
    s.out().write(label + "/assignments.csv", asg.str());

    // Centroids in original feature units, whatever space the clustering ran in.
    std::vector<Point<kFeatureDims>> unscaled(cl.k, Point<kFeatureDims>{});
    for (std::size_t i = 0; i < raw.size(); ++i)
        for (std::size_t d = 0; d < kFeatureDims; ++d) unscaled[cl.assignment[i]][d] += raw[i][d];
    for (std::size_t c = 0; c < cl.k; ++c)
        for (std::size_t d = 0; d < kFeatureDims; ++d) unscaled[c][d] /= static_cast<double>(cl.sizes[c]);

    Json rows = Json::array();
    for (const auto& r : summarize_clusters(cl)) {
        Json row;
        row["name"] = label + "-" + std::to_string(rows.size() + 1);
        row["cluster_id"] = r.id;
        row["size"] = r.size;
        Point<kFeatureDims> shown = r.centroid;
        if (scaling) {
            for (std::size_t d = 0; d < kFeatureDims; ++d) shown[d] = round2(unscaled[r.id][d]);
            row["centroid_scaled"] = r.centroid;
        }
        row["centroid"] = shown;
        rows.push_back(row);
    }
    Json trace = Json::array();
    for (const auto& e : sel.trace) {
        trace.push_back({{"k", e.k}, {"silhouette", e.silhouette}, {"sse", e.sse}, {"iterations", e.iterations}});
    }

    Json j;
    j["points"] = points.size();
    j["feature_order"] = {"x1", "x2", "x3", "x4", "x5", "x6", "x7", "x8", "x9", "x10"};
    j["scaled"] = cfg.scale_features;
    j["seed"] = seed;
    j["k_range"] = {cfg.k_min, cfg.k_max};
    j["best_k"] = sel.best_k;
    j["silhouette"] = cl.silhouette;
    j["silhouette_points"] = cl.silhouette_points;
    j["iterations"] = cl.iterations;
    j["converged"] = cl.converged;
    j["sse"] = cl.sse;
    j["clusters"] = rows;
    j["k_scan"] = trace;
    j["files"] = Json{{"vectors", label + "/vectors.csv"}, {"assignments", label + "/assignments.csv"},
                      {"clusters", label + "/clusters.json"}};
    s.out().write(label + "/clusters.json", j.dump(2) + "\n");
    return j;
}

inline Json cmd_freq(Session& s, const std::string& label)
{
    const auto& cfg = s.config();
    const auto& pc = s.corpus(label);
    const auto r = frequency_report(pc.full, cfg.email_examples);
    const auto lengths = length_distribution(r.length_counts);
    const auto specials = rank_specials(r.special_occurrences, r.special_password_counts);

    std::ostringstream lcsv;
    lcsv << "length,count,percent\n";
    Json lrows = Json::array();
    Json window = Json::object();
    for (const auto& row : lengths.rows) {
        lcsv << row.length << ',' << row.count << ',' << format_double(row.percent) << '\n';
        lrows.push_back({{"length", row.length}, {"count", row.count}, {"percent", row.percent}});
    }
    for (std::size_t len = 6; len <= 10; ++len) window[std::to_string(len)] = lengths.percent_of(len);
    s.out().write(label + "/freq/lengths.csv", lcsv.str());

    std::ostringstream dcsv;
    dcsv << "digit,occurrences,passwords_containing\n";
    Json drows = Json::array();
    for (std::size_t d = 0; d < 10; ++d) {
        dcsv << d << ',' << r.digit_occurrences[d] << ',' << r.digit_password_counts[d] << '\n';
        drows.push_back({{"digit", d}, {"occurrences", r.digit_occurrences[d]},
                         {"passwords_containing", r.digit_password_counts[d]}});
    }
    s.out().write(label + "/freq/digits.csv", dcsv.str());

    std::ostringstream scsv;
    scsv << "token,code_point,occurrences,passwords_containing\n";
    Json srows = Json::array();
    for (const auto& sc : specials) {
        const auto token = special_token(sc.code_point);
        scsv << csv_field(token) << ',' << static_cast<std::uint32_t>(sc.code_point) << ',' << sc.occurrences << ','
             << sc.passwords_containing << '\n';
        srows.push_back({{"token", token}, {"code_point", static_cast<std::uint32_t>(sc.code_point)},
                         {"occurrences", sc.occurrences}, {"passwords_containing", sc.passwords_containing}});
    }
    s.out().write(label + "/freq/specials.csv", scsv.str());

    Json j;
    j["computed_on"] = "full corpus";
    j["corpus_size"] = r.corpus_size;
    j["lengths"] = lrows;
    j["length_percent_6_to_10"] = window;
    j["length_percent_8_to_24"] = lengths.percent_8_to_24;
    j["digits"] = drows;
    j["specials"] = srows;
    j["emails"] = Json{{"count", r.email_count}, {"examples_masked", r.email_examples}};
    j["files"] = Json{{"lengths", label + "/freq/lengths.csv"}, {"digits", label + "/freq/digits.csv"},
                      {"specials", label + "/freq/specials.csv"}};
    return j;
}

struct ReportParts {
    bool similarity = true;
    bool ttests = true;
    bool cluster = true;
    bool freq = true;
    std::vector<std::string> labels;                         // empty = every configured corpus
    std::vector<std::pair<std::string, std::string>> pairs; // empty = all pairs in config order
};

/// Runs the requested sections and writes report.json. Corpus sections keep
/// config order; every configured label that was processed appears once.
inline Json run_report(Session& s, const std::string& command, ReportParts parts)
{
    const auto& cfg = s.config();
    if (parts.labels.empty())
        for (const auto& c : cfg.corpora) parts.labels.push_back(c.label);
    if (parts.ttests && parts.pairs.empty()) {
        for (std::size_t i = 0; i < parts.labels.size(); ++i)
            for (std::size_t j = i + 1; j < parts.labels.size(); ++j) parts.pairs.emplace_back(parts.labels[i], parts.labels[j]);
    }

    Json report;
    report["tool"] = Json{{"name", "pwevo"}, {"version", PWEVO_VERSION}};
    report["command"] = command;
    report["generated_at"] = cfg.fixed_timestamp ? *cfg.fixed_timestamp : utc_timestamp();
    report["config"] = config_json(cfg);
    if (parts.similarity || parts.ttests || parts.cluster) report["blacklist"] = s.blacklist_json();
    if (parts.cluster) report["names"] = s.names_json();

    Json corpora = Json::array();
    for (const auto& label : parts.labels) {
        Json c = s.corpus_header(s.corpus(label));
        if (parts.similarity) c["similarity"] = cmd_similarity(s, label);
        if (parts.cluster) c["clustering"] = cmd_cluster(s, label);
        if (parts.freq) c["frequency"] = cmd_freq(s, label);
        corpora.push_back(std::move(c));
    }
    report["corpora"] = corpora;

    if (parts.ttests) {
        Json tests = Json::array();
        for (const auto& [a, b] : parts.pairs) tests.push_back(cmd_ttest(s, a, b));
        report["ttests"] = tests;
    }
    report["status"] = "complete";
    s.out().write("report.json", report.dump(2) + "\n");
    s.out().clear_partial();
    return report;
}

/// Numbers from a text file: one per line, or a CSV whose header names a
/// `normalized` column (so a distances.csv can be fed back in).
inline std::vector<double> load_numbers(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in) throw DataError("cannot read " + path.string());
    std::vector<double> v;
    std::string line;
    std::optional<std::size_t> column;
    std::size_t lineno = 0;
    auto split = [](const std::string& l) {
        std::vector<std::string> f;
        std::stringstream ss(l);
        std::string x;
        while (std::getline(ss, x, ',')) f.push_back(detail::trim(x));
        return f;
    };
    while (std::getline(in, line)) {
        ++lineno;
        detail::strip_line_terminator(line);
        if (detail::trim(line).empty()) continue;
        if (lineno == 1 && line.find(',') != std::string::npos) {
            const auto f = split(line);
            const auto it = std::find(f.begin(), f.end(), "normalized");
            if (it == f.end()) throw DataError(path.string() + ": CSV input needs a 'normalized' column");
            column = static_cast<std::size_t>(it - f.begin());
            continue;
        }
        std::string field = detail::trim(line);
        if (column) {
            const auto f = split(line);
            if (*column >= f.size()) throw DataError(path.string() + ":" + std::to_string(lineno) + ": missing column");
            field = f[*column];
        }
        double x = 0.0;
        const auto r = std::from_chars(field.data(), field.data() + field.size(), x);
        if (r.ec != std::errc{} || r.ptr != field.data() + field.size()) {
            throw DataError(path.string() + ":" + std::to_string(lineno) + ": not a number: '" + field + "'");
        }
        v.push_back(x);
    }
    if (v.empty()) throw DataError(path.string() + ": no values");
    return v;
}

/// Descriptive statistics of an arbitrary sample (the `stats` sub-command).
inline Json cmd_stats(std::span<const double> v, std::size_t bins, std::pair<double, double> range)
{
    Json j;
    j["n"] = v.size();
    j["summary"] = to_json(describe(v));
    j["ci95"] = v.size() >= 30 ? Json{{"low", ci_mean(v).low}, {"high", ci_mean(v).high}} : Json(nullptr);
    j["histogram"] = to_json(histogram(v, bins, range));
    j["boxplot"] = v.size() >= 5 ? to_json(boxplot_stats(v)) : Json(nullptr);
    return j;
}

} // namespace pwevo
