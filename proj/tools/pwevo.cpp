// pwevo command-line front end.
//
// Exit codes: 0 success, 1 invalid usage or configuration, 2 data/runtime error.

#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "pwevo/pipeline.hpp"

namespace {

constexpr int kValidationExit = 1;
constexpr int kDataExit = 2;

struct Flags {
    std::optional<std::string> config;
    std::vector<std::string> corpora;
    std::optional<std::string> blacklist;
    std::optional<std::string> names;
    std::optional<std::size_t> sample_n;
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> repeats;
    std::optional<std::size_t> bins;
    std::optional<std::size_t> k_min;
    std::optional<std::size_t> k_max;
    std::optional<std::string> norm;
    std::optional<std::string> decode;
    std::optional<unsigned> threads;
    std::optional<std::string> out;
    std::optional<std::string> fixed_timestamp;
    bool no_dedup = false;
    bool scale_features = false;
    bool emit_plaintext = false;

    std::vector<std::string> labels; // cluster / freq / similarity filter
    std::string label_a;
    std::string label_b;
};

void add_run_options(CLI::App* cmd, Flags& f)
{
    cmd->add_option("--config", f.config, "key = value config file; flags override it");
    cmd->add_option("--corpus", f.corpora, "Corpus as label=path (repeatable, order is kept)");
    cmd->add_option("--blacklist", f.blacklist, "Bad-password list (default: <data dir>/bad_passwords.txt)");
    cmd->add_option("--names", f.names, "First-name list (default: <data dir>/first_names.txt)");
    cmd->add_option("--sample-n", f.sample_n, "Sample size per corpus (default 40000)");
    cmd->add_option("--seed", f.seed, "Master seed");
    cmd->add_option("--repeats", f.repeats, "Independent samples per corpus (default 1)");
    cmd->add_option("--bins", f.bins, "Histogram bins on [0,1] (default 10)");
    cmd->add_option("--k-min", f.k_min, "Smallest k tried (default 2)");
    cmd->add_option("--k-max", f.k_max, "Largest k tried (default 8)");
    cmd->add_option("--norm", f.norm, "maxlen or firstlen")->check(CLI::IsMember({"maxlen", "firstlen"}));
    cmd->add_option("--decode", f.decode, "strict-utf8, lossy-utf8 or latin1-fallback")
        ->check(CLI::IsMember({"strict-utf8", "lossy-utf8", "latin1-fallback"}));
    cmd->add_option("--threads", f.threads, "Worker threads for distance sweeps");
    cmd->add_option("--out", f.out, "Output directory (default pwevo-out)");
    cmd->add_option("--fixed-timestamp", f.fixed_timestamp, "Timestamp written into report.json");
    cmd->add_flag("--no-dedup", f.no_dedup, "Keep duplicate passwords");
    cmd->add_flag("--scale-features", f.scale_features, "z-score feature vectors before clustering");
    cmd->add_flag("--emit-plaintext", f.emit_plaintext, "Allow raw passwords in output files");
}

pwevo::RunConfig build_config(const Flags& f)
{
    auto c = pwevo::default_config();
    if (f.config) pwevo::load_config_file(c, *f.config);
    if (!f.corpora.empty()) {
        c.corpora.clear();
        for (const auto& s : f.corpora) c.corpora.push_back(pwevo::parse_corpus_spec(s));
    }
    if (f.blacklist) c.blacklist = *f.blacklist;
    if (f.names) c.names = *f.names;
    if (f.sample_n) c.sample_n = *f.sample_n;
    if (f.seed) c.seed = *f.seed;
    if (f.repeats) c.repeats = *f.repeats;
    if (f.bins) c.bins = *f.bins;
    if (f.k_min) c.k_min = *f.k_min;
    if (f.k_max) c.k_max = *f.k_max;
    if (f.norm) c.norm = pwevo::parse_normalization(*f.norm);
    if (f.decode) c.decode = pwevo::parse_decode_policy(*f.decode);
    if (f.threads) c.threads = *f.threads;
    if (f.out) c.out = *f.out;
    if (f.fixed_timestamp) c.fixed_timestamp = *f.fixed_timestamp;
    if (f.no_dedup) c.dedup = false;
    if (f.scale_features) c.scale_features = true;
    if (f.emit_plaintext) c.emit_plaintext = true;
    return c;
}

int run_stats(const std::string& path, std::size_t bins, double low, double high, const std::optional<std::string>& out)
{
    const auto values = pwevo::load_numbers(path);
    auto j = pwevo::cmd_stats(values, bins, {low, high});
    const auto text = j.dump(2) + "\n";
    if (out) {
        pwevo::OutputDir(*out).write("stats.json", text);
    } else {
        std::cout << text;
    }
    return EXIT_SUCCESS;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"pwevo: password-corpus similarity, clustering and frequency analysis"};
    app.set_version_flag("--version", PWEVO_VERSION);
    app.require_subcommand(1);

    Flags f;

    std::string stats_file;
    std::size_t stats_bins = 10;
    double range_low = 0.0;
    double range_high = 1.0;
    std::optional<std::string> stats_out;
    auto* stats = app.add_subcommand("stats", "Describe a list of numbers (one per line, or a distances.csv)");
    stats->add_option("file", stats_file, "Input file")->required();
    stats->add_option("--bins", stats_bins, "Histogram bins");
    stats->add_option("--range-low", range_low, "Histogram lower edge (default 0)");
    stats->add_option("--range-high", range_high, "Histogram upper edge (default 1)");
    stats->add_option("--out", stats_out, "Write stats.json here instead of stdout");

    auto* similarity = app.add_subcommand("similarity", "Min-distance of each corpus sample to the blacklist");
    auto* ttest = app.add_subcommand("ttest", "Welch t-test between two corpora's distance samples");
    auto* cluster = app.add_subcommand("cluster", "Vectorize a corpus sample and cluster it");
    auto* freq = app.add_subcommand("freq", "Length, digit, special-character and email censuses");
    auto* report = app.add_subcommand("report", "Everything above for every corpus, plus pairwise t-tests");
    for (auto* cmd : {similarity, ttest, cluster, freq, report}) add_run_options(cmd, f);
    for (auto* cmd : {similarity, cluster, freq}) {
        cmd->add_option("--label", f.labels, "Restrict to these corpus labels (repeatable)");
    }
    ttest->add_option("--a", f.label_a, "First corpus label (default: first configured)");
    ttest->add_option("--b", f.label_b, "Second corpus label (default: second configured)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kValidationExit;
    }

    if (stats->parsed()) {
        try {
            return run_stats(stats_file, stats_bins, range_low, range_high, stats_out);
        } catch (const pwevo::ValidationError& e) {
            std::cerr << "error: " << e.what() << '\n';
            return kValidationExit;
        } catch (const std::exception& e) {
            std::cerr << "error: " << e.what() << '\n';
            return kDataExit;
        }
    }

    std::optional<pwevo::Session> session;
    try {
        auto cfg = build_config(f);
        pwevo::ReportParts parts;
        pwevo::ValidationNeeds needs;
        std::string command;
        if (similarity->parsed()) {
            command = "similarity";
            parts = {true, false, false, false, f.labels, {}};
        } else if (ttest->parsed()) {
            command = "ttest";
            std::string a = f.label_a;
            std::string b = f.label_b;
            if (a.empty() && !cfg.corpora.empty()) a = cfg.corpora[0].label;
            if (b.empty() && cfg.corpora.size() > 1) b = cfg.corpora[1].label;
            if (a.empty() || b.empty()) throw pwevo::ValidationError("ttest needs two corpora");
            parts = {true, true, false, false, {a, b}, {{a, b}}};
        } else if (cluster->parsed()) {
            command = "cluster";
            parts = {false, false, true, false, f.labels, {}};
            needs.names = true;
        } else if (freq->parsed()) {
            command = "freq";
            parts = {false, false, false, true, f.labels, {}};
            needs.blacklist = false;
        } else {
            command = "report";
            needs.names = true;
        }
        pwevo::validate(cfg, needs);
        for (const auto& l : parts.labels) {
            bool known = false;
            for (const auto& c : cfg.corpora) known = known || c.label == l;
            if (!known) throw pwevo::ValidationError("unknown corpus label '" + l + "'");
        }

        session.emplace(std::move(cfg));
        const auto r = pwevo::run_report(*session, command, parts);
        std::cout << "wrote " << (session->out().root() / "report.json").string() << '\n';
        for (const auto& t : r.value("ttests", pwevo::Json::array())) {
            std::cout << t["a"].get<std::string>() << " vs " << t["b"].get<std::string>()
                      << ": t = " << t["t_statistic"].get<double>() << ", df = " << t["degrees_of_freedom"].get<double>()
                      << ", " << t["decision"].get<std::string>() << '\n';
        }
        return EXIT_SUCCESS;
    } catch (const pwevo::ValidationError& e) {
        std::cerr << "error: " << e.what() << '\n';
        if (session) session->out().mark_partial(e.what());
        return kValidationExit;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        if (session) session->out().mark_partial(e.what());
        return kDataExit;
    }
}
