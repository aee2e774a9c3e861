#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>

#include "pwevo/pipeline.hpp"
#include "pwevo/synthetic.hpp"
#include "test_util.hpp"

using namespace pwevo;
namespace fs = std::filesystem;

namespace {

std::string lines(const std::vector<std::string>& v)
{
    std::string s;
    for (const auto& e : v) s += e + "\n";
    return s;
}

const Corpus& vendored_blacklist()
{
    static const Corpus bl = load_corpus(default_data_dir() / "bad_passwords.txt");
    return bl;
}

std::vector<std::string> length8_blacklist_entries()
{
    std::vector<std::string> out;
    for (const auto& e : vendored_blacklist().entries)
        if (e.size() == 8) out.push_back(e);
    return out;
}

RunConfig base_config(const testutil::TempDir& dir)
{
    RunConfig c = default_config();
    c.out = dir.path() / "out";
    c.fixed_timestamp = "2000-01-01T00:00:00Z";
    c.sample_n = 1500;
    c.k_max = 4;
    return c;
}

std::string all_output_bytes(const fs::path& root)
{
    std::string all;
    for (const auto& e : fs::recursive_directory_iterator(root))
        if (e.is_regular_file()) all += testutil::read_file(e.path());
    return all;
}

} // namespace

TEST(Config, FileParsingAndRelativePaths)
{
    testutil::TempDir dir;
    dir.write("a.txt", "x\n");
    const auto cfg_path = dir.write("run.cfg", "# comment line\n"
                                               "corpus = old=a.txt\n"
                                               "corpus = new=/abs/b.txt   # trailing comment\n"
                                               "sample_n = 500\n"
                                               "seed = 7\n"
                                               "norm = firstlen\n"
                                               "k_min = 3\n"
                                               "dedup = false\n"
                                               "decode = strict-utf8\n");
    RunConfig c = default_config();
    load_config_file(c, cfg_path);
    ASSERT_EQ(c.corpora.size(), 2u);
    EXPECT_EQ(c.corpora[0].label, "old");
    EXPECT_EQ(c.corpora[0].path, dir.path() / "a.txt");
    EXPECT_EQ(c.corpora[1].path, fs::path("/abs/b.txt"));
    EXPECT_EQ(c.sample_n, 500u);
    EXPECT_EQ(c.seed, 7u);
    EXPECT_EQ(c.norm, Normalization::FirstLen);
    EXPECT_EQ(c.k_min, 3u);
    EXPECT_FALSE(c.dedup);
    EXPECT_EQ(c.decode, DecodePolicy::StrictUtf8);
}

TEST(Config, RejectsMalformedInput)
{
    testutil::TempDir dir;
    RunConfig c = default_config();
    EXPECT_THROW(load_config_file(c, dir.write("a.cfg", "bogus_key = 1\n")), ValidationError);
    EXPECT_THROW(load_config_file(c, dir.write("b.cfg", "sample_n = -3\n")), ValidationError);
    EXPECT_THROW(load_config_file(c, dir.write("c.cfg", "sample_n = 12x\n")), ValidationError);
    EXPECT_THROW(load_config_file(c, dir.write("d.cfg", "dedup = maybe\n")), ValidationError);
    EXPECT_THROW(load_config_file(c, dir.write("e.cfg", "just text\n")), ValidationError);
    EXPECT_THROW(load_config_file(c, dir.path() / "missing.cfg"), ValidationError);
    EXPECT_THROW(parse_corpus_spec("nolabel"), ValidationError);
    EXPECT_THROW(parse_corpus_spec("=path"), ValidationError);
    EXPECT_THROW(parse_corpus_spec("label="), ValidationError);
}

TEST(Config, Validation)
{
    testutil::TempDir dir;
    const auto a = dir.write("a.txt", "x\n");
    RunConfig c = base_config(dir);
    EXPECT_THROW(validate(c), ValidationError); // empty corpus list
    c.corpora = {{"a", a}};
    EXPECT_NO_THROW(validate(c));

    auto bad = c;
    bad.corpora.push_back({"a", a});
    EXPECT_THROW(validate(bad), ValidationError);
    bad = c;
    bad.corpora[0].label = "a/b";
    EXPECT_THROW(validate(bad), ValidationError);
    bad = c;
    bad.corpora[0].path = dir.path() / "nope.txt";
    EXPECT_THROW(validate(bad), ValidationError);
    bad = c;
    bad.blacklist = dir.path() / "nope.txt";
    EXPECT_THROW(validate(bad), ValidationError);
    bad = c;
    bad.sample_n = 0;
    EXPECT_THROW(validate(bad), ValidationError);
    bad = c;
    bad.k_min = 1;
    EXPECT_THROW(validate(bad), ValidationError);
    bad = c;
    bad.k_max = 65;
    EXPECT_THROW(validate(bad), ValidationError);
    bad = c;
    bad.k_min = 5;
    bad.k_max = 4;
    EXPECT_THROW(validate(bad), ValidationError);
}

TEST(Similarity, CorpusEqualToBlacklist)
{
    testutil::TempDir dir;
    RunConfig c = base_config(dir);
    c.corpora = {{"bl", c.blacklist}};
    Session s(c);
    const auto j = cmd_similarity(s, "bl");
    EXPECT_EQ(j["mean"].get<double>(), 0.0);
    EXPECT_EQ(j["histogram"]["counts"][0].get<std::size_t>(), j["n"].get<std::size_t>());
    EXPECT_EQ(j["exact_matches"].get<std::size_t>(), j["n"].get<std::size_t>());
    EXPECT_TRUE(fs::exists(dir.path() / "out" / "bl" / "distances.csv"));
    EXPECT_TRUE(fs::exists(dir.path() / "out" / "bl" / "hist.csv"));
}

TEST(Similarity, NearBlacklistMeanIsAboutOneEighth)
{
    testutil::TempDir dir;
    const auto near = synthetic::single_edit_copies(length8_blacklist_entries(), 3000, 40);
    RunConfig c = base_config(dir);
    c.dedup = false;
    c.sample_n = 3000;
    c.corpora = {{"near", dir.write("near.txt", lines(near))}};
    Session s(c);
    const double mean = cmd_similarity(s, "near")["mean"].get<double>();
    EXPECT_NEAR(mean, 1.0 / 8.0, 0.03);
}

TEST(Similarity, RepeatsAreSummarized)
{
    testutil::TempDir dir;
    RunConfig c = base_config(dir);
    c.sample_n = 300;
    c.repeats = 3;
    c.corpora = {{"r", dir.write("r.txt", lines(synthetic::random_strings(2000, 9, 41)))}};
    Session s(c);
    const auto j = cmd_similarity(s, "r");
    ASSERT_EQ(j["per_repeat"].size(), 3u);
    double acc = 0.0;
    for (const auto& r : j["per_repeat"]) acc += r["mean"].get<double>();
    EXPECT_NEAR(j["mean_over_repeats"].get<double>(), acc / 3.0, 1e-12);
    EXPECT_NEAR(j["per_repeat"][0]["mean"].get<double>(), j["mean"].get<double>(), 1e-12);
    const auto header = s.corpus_header(s.corpus("r"));
    EXPECT_EQ(header["sampling"]["mode"], "repeated-samples");
    EXPECT_EQ(header["sampling"]["seeds"].size(), 3u);
}

TEST(TTest, CorpusAgainstItselfRetainsH0)
{
    testutil::TempDir dir;
    RunConfig c = base_config(dir);
    const auto p = dir.write("r.txt", lines(synthetic::random_strings(500, 8, 42)));
    c.corpora = {{"a", p}};
    Session s(c);
    const auto j = cmd_ttest(s, "a", "a");
    EXPECT_EQ(j["t_statistic"].get<double>(), 0.0);
    EXPECT_FALSE(j["significant_at_5pct"].get<bool>());
    EXPECT_EQ(j["decision"].get<std::string>().rfind("H0 retained", 0), 0u);
}

TEST(TTest, NearVersusRandomRejectsH0)
{
    testutil::TempDir dir;
    RunConfig c = base_config(dir);
    c.corpora = {{"near", dir.write("near.txt", lines(synthetic::single_edit_copies(vendored_blacklist().entries, 2000, 43)))},
                 {"random", dir.write("rand.txt", lines(synthetic::random_strings(2000, 10, 44)))}};
    Session s(c);
    const auto j = cmd_ttest(s, "near", "random");
    EXPECT_GT(std::abs(j["t_statistic"].get<double>()), 1.96);
    EXPECT_LT(j["t_statistic"].get<double>(), 0.0);
    EXPECT_TRUE(j["significant_at_5pct"].get<bool>());
    EXPECT_EQ(j["farther_from_blacklist"], "random");
    EXPECT_THROW(cmd_ttest(s, "near", "unknown"), ValidationError);
}

TEST(Cluster, SingleRepeatedPasswordIsRejected)
{
    testutil::TempDir dir;
    RunConfig c = base_config(dir);
    c.corpora = {{"one", dir.write("one.txt", lines({"hunter2", "hunter2", "hunter2"}))}};
    Session s(c);
    EXPECT_THROW(cmd_cluster(s, "one"), ValidationError);
}

TEST(Cluster, PlantedTwoPopulations)
{
    testutil::TempDir dir;
    Rng rng(45);
    std::vector<std::string> v;
    for (int i = 0; i < 600; ++i) {
        v.push_back(synthetic::random_string(rng, 4 + rng.uniform_index(3), "0123456789"));
        v.push_back(synthetic::random_string(rng, 14 + rng.uniform_index(5), synthetic::kMixed));
    }
    RunConfig c = base_config(dir);
    c.k_max = 6;
    c.corpora = {{"mix", dir.write("mix.txt", lines(v))}};
    Session s(c);
    const auto j = cmd_cluster(s, "mix");
    ASSERT_EQ(j["best_k"].get<std::size_t>(), 2u);
    const auto& cl = j["clusters"];
    auto centroid = [&](std::size_t r, std::size_t d) { return cl[r]["centroid"][d].get<double>(); };
    // Which row is the digit-only population?
    const std::size_t digit_row = centroid(0, 0) < centroid(1, 0) ? 0 : 1;
    const std::size_t mixed_row = 1 - digit_row;
    EXPECT_LT(centroid(digit_row, 0), 7.0);
    EXPECT_GT(centroid(mixed_row, 0), 13.0);
    EXPECT_EQ(centroid(digit_row, 4), 0.0);  // x5: no letters
    EXPECT_GT(centroid(mixed_row, 4), 0.5);
    EXPECT_GT(centroid(digit_row, 5), centroid(mixed_row, 5)); // x6
    EXPECT_TRUE(fs::exists(dir.path() / "out" / "mix" / "vectors.csv"));
    EXPECT_TRUE(fs::exists(dir.path() / "out" / "mix" / "assignments.csv"));
    EXPECT_TRUE(fs::exists(dir.path() / "out" / "mix" / "clusters.json"));
    const auto vectors = testutil::read_file(dir.path() / "out" / "mix" / "vectors.csv");
    EXPECT_EQ(vectors.substr(0, vectors.find('\n')), "x1,x2,x3,x4,x5,x6,x7,x8,x9,x10");
}

TEST(Cluster, ScaledRunReportsRawUnitCentroids)
{
    testutil::TempDir dir;
    RunConfig c = base_config(dir);
    c.scale_features = true;
    c.corpora = {{"r", dir.write("r.txt", lines(synthetic::password_like(vendored_blacklist().entries, 800, 46)))}};
    Session s(c);
    const auto j = cmd_cluster(s, "r");
    EXPECT_TRUE(j["scaled"].get<bool>());
    for (const auto& row : j["clusters"]) {
        EXPECT_TRUE(row.contains("centroid_scaled"));
        EXPECT_GT(row["centroid"][0].get<double>(), 1.0); // lengths, not z-scores
    }
}

TEST(Report, PairCountsAndLabels)
{
    testutil::TempDir dir;
    std::vector<CorpusSpec> specs;
    for (int i = 0; i < 4; ++i) {
        const auto name = "c" + std::to_string(i);
        specs.push_back({name, dir.write(name + ".txt", lines(synthetic::random_strings(300, 6 + i, 50 + i)))});
    }
    {
        RunConfig c = base_config(dir);
        c.corpora = {specs[0], specs[1]};
        Session s(c);
        ReportParts parts;
        parts.cluster = false;
        parts.freq = false;
        const auto r = run_report(s, "report", parts);
        EXPECT_EQ(r["ttests"].size(), 1u);
    }
    RunConfig c = base_config(dir);
    c.corpora = specs;
    Session s(c);
    const auto r = run_report(s, "report", {});
    ASSERT_EQ(r["ttests"].size(), 6u);
    EXPECT_EQ(r["ttests"][0]["a"], "c0");
    EXPECT_EQ(r["ttests"][0]["b"], "c1");
    EXPECT_EQ(r["ttests"][5]["a"], "c2");
    EXPECT_EQ(r["ttests"][5]["b"], "c3");
    ASSERT_EQ(r["corpora"].size(), 4u);
    for (std::size_t i = 0; i < 4; ++i) {
        const auto& cj = r["corpora"][i];
        EXPECT_EQ(cj["label"], specs[i].label);
        EXPECT_TRUE(cj.contains("similarity"));
        EXPECT_TRUE(cj.contains("clustering"));
        EXPECT_TRUE(cj.contains("frequency"));
        EXPECT_TRUE(cj["clustering"].contains("seed"));
        EXPECT_TRUE(cj["sampling"].contains("seeds"));
    }
    EXPECT_EQ(r["status"], "complete");
    EXPECT_FALSE(fs::exists(dir.path() / "out" / "PARTIAL"));
    EXPECT_TRUE(fs::exists(dir.path() / "out" / "report.json"));
}

TEST(Report, ByteIdenticalAcrossRuns)
{
    testutil::TempDir dir;
    const auto a = dir.write("a.txt", lines(synthetic::password_like(vendored_blacklist().entries, 2500, 60)));
    const auto b = dir.write("b.txt", lines(synthetic::random_strings(2500, 10, 61)));
    std::string first;
    for (unsigned threads : {1u, 3u}) {
        RunConfig c = base_config(dir);
        c.threads = threads;
        c.out = dir.path() / ("out" + std::to_string(threads));
        c.corpora = {{"a", a}, {"b", b}};
        Session s(c);
        run_report(s, "report", {});
        const auto bytes = testutil::read_file(c.out / "report.json");
        if (first.empty()) first = bytes;
        else EXPECT_EQ(bytes, first);
    }
    EXPECT_FALSE(first.empty());
}

TEST(Report, NoPlaintextWithoutFlag)
{
    testutil::TempDir dir;
    auto v = synthetic::random_strings(400, 12, 62, synthetic::kLower);
    v.push_back("secretuser@example.com");
    const auto p = dir.write("p.txt", lines(v));
    for (bool emit : {false, true}) {
        RunConfig c = base_config(dir);
        c.emit_plaintext = emit;
        c.out = dir.path() / (emit ? "plain" : "safe");
        c.corpora = {{"p", p}};
        Session s(c);
        run_report(s, "report", {});
        const auto all = all_output_bytes(c.out);
        std::size_t leaked = 0;
        for (const auto& e : v) leaked += all.find(e) != std::string::npos ? 1 : 0;
        if (emit) EXPECT_EQ(leaked, v.size());
        else EXPECT_EQ(leaked, 0u);
        EXPECT_NE(all.find("s*********@*******.com"), std::string::npos);
    }
}

TEST(Stats, LoadNumbersAndDescribe)
{
    testutil::TempDir dir;
    const auto plain = load_numbers(dir.write("v.txt", "0.5\n0.25\n\n1\n"));
    EXPECT_EQ(plain, (std::vector<double>{0.5, 0.25, 1.0}));
    const auto csv = load_numbers(dir.write("d.csv", "index,raw,normalized\n0,1,0.125\n1,0,0\n"));
    EXPECT_EQ(csv, (std::vector<double>{0.125, 0.0}));
    EXPECT_THROW(load_numbers(dir.write("bad.txt", "0.5\nabc\n")), DataError);
    EXPECT_THROW(load_numbers(dir.write("nocol.csv", "a,b\n1,2\n")), DataError);

    const std::vector<double> v{0.1, 0.2, 0.3, 0.4, 0.5};
    const auto j = cmd_stats(v, 5, {0.0, 1.0});
    EXPECT_EQ(j["n"], 5u);
    EXPECT_NEAR(j["summary"]["mean"].get<double>(), 0.3, 1e-12);
    EXPECT_TRUE(j["ci95"].is_null());
    EXPECT_FALSE(j["boxplot"].is_null());
}
