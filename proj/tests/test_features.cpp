#include <gtest/gtest.h>

#include "pwevo/corpus.hpp"
#include "pwevo/features.hpp"
#include "pwevo/synthetic.hpp"

using namespace pwevo;

namespace {

CodePoints cp(std::string_view s) { return utf8::decode_valid(s); }

CharCounts counts(std::size_t l, std::size_t u, std::size_t d, std::size_t s)
{
    CharCounts c;
    c.lowercase = l;
    c.uppercase = u;
    c.digits = d;
    c.special = s;
    return c;
}

void expect_invariants(const FeatureVector& f)
{
    EXPECT_EQ(f.mixed_case, f.lowercase >= 1 && f.uppercase >= 1);
    EXPECT_EQ(f.has_special, f.special >= 1);
    EXPECT_EQ(f.lowercase + f.uppercase + f.digits + f.special, f.length);
    EXPECT_GE(f.blacklist_distance, 0.0);
    EXPECT_LE(f.blacklist_distance, 1.0);
}

} // namespace

TEST(ClassifyChars, Examples)
{
    EXPECT_EQ(classify_chars(cp("abc")), counts(3, 0, 0, 0));
    EXPECT_EQ(classify_chars(cp("Passw0rd!")), counts(6, 1, 1, 1));
    EXPECT_EQ(classify_chars(cp("héllo")), counts(4, 0, 0, 1));
    EXPECT_EQ(classify_chars(cp("a b\t9Z")), counts(2, 1, 1, 2));
    EXPECT_THROW(classify_chars(cp("")), ValidationError);
}

TEST(Vectorize, DigitOnlyBlacklistMember)
{
    const auto ix = build_index(make_corpus({"123456", "password"}, "bl"));
    const auto names = make_namelist({"john", "anna"});
    const auto f = vectorize(cp("123456"), ix, names);
    const std::array<double, 10> want{6, 0, 0, 0, 0, 6, 0, 0, 0.0, 0};
    EXPECT_EQ(f.to_array(), want);
}

TEST(Vectorize, NameAndDigits)
{
    const auto ix = build_index(make_corpus({"john1234"}, "bl"));
    const auto names = make_namelist({"john"});
    const auto f = vectorize(cp("john1985"), ix, names);
    const std::array<double, 10> want{8, 0, 4, 0, 1, 4, 0, 0, 3.0 / 8.0, 1};
    EXPECT_EQ(f.to_array(), want);
}

TEST(Vectorize, MixedClassPassword)
{
    const auto ix = build_index(make_corpus({"password"}, "bl"));
    const auto names = make_namelist({"anna", "john"});
    const auto f = vectorize(cp("Passw0rd!"), ix, names);
    EXPECT_EQ(f.length, 9u);
    EXPECT_TRUE(f.mixed_case);
    EXPECT_EQ(f.lowercase, 6u);
    EXPECT_EQ(f.uppercase, 1u);
    EXPECT_TRUE(f.letters_and_digits);
    EXPECT_EQ(f.digits, 1u);
    EXPECT_TRUE(f.has_special);
    EXPECT_EQ(f.special, 1u);
    EXPECT_FALSE(f.contains_name);
    // P->p counts as a substitution too: lev("Passw0rd!", "password") = 3.
    EXPECT_EQ(levenshtein(cp("Passw0rd!"), cp("password")), 3u);
    EXPECT_DOUBLE_EQ(f.blacklist_distance, 3.0 / 9.0);
    // The lowercase form is two edits away, as in the worked example.
    EXPECT_DOUBLE_EQ(vectorize(cp("passw0rd!"), ix, names).blacklist_distance, 2.0 / 9.0);
}

TEST(Vectorize, SelfBlacklistForcesZeroDistance)
{
    const auto names = make_namelist({"anna"});
    for (const char* p : {"Tr0ub4dor&3", "x", "correct horse", "ÄÖÜ"}) {
        const auto ix = build_index(make_corpus({p}, "bl"));
        EXPECT_EQ(vectorize(cp(p), ix, names).blacklist_distance, 0.0) << p;
    }
}

TEST(Vectorize, InvariantsHoldOnSyntheticCorpus)
{
    const auto bl = load_corpus(std::string(PWEVO_DEFAULT_DATA_DIR) + "/bad_passwords.txt");
    const auto ix = build_index(bl);
    const auto names = load_namelist(std::string(PWEVO_DEFAULT_DATA_DIR) + "/first_names.txt");
    auto queries = synthetic::password_like(bl.entries, 3000, 21);
    queries.push_back("naïve café 2024");
    queries.push_back(" ");
    for (const auto& q : queries) {
        const auto f = vectorize(cp(q), ix, names);
        expect_invariants(f);
        EXPECT_EQ(f.to_array(), vectorize(cp(q), ix, names).to_array());
    }
}

TEST(Vectorize, LettersAndDigitsFlag)
{
    const auto ix = build_index(make_corpus({"x"}, "bl"));
    const auto names = make_namelist({"zzz"});
    EXPECT_FALSE(vectorize(cp("123456"), ix, names).letters_and_digits);
    EXPECT_FALSE(vectorize(cp("abcdef"), ix, names).letters_and_digits);
    EXPECT_TRUE(vectorize(cp("abc123"), ix, names).letters_and_digits);
    EXPECT_TRUE(vectorize(cp("ABC1"), ix, names).letters_and_digits);
}

TEST(ContainsName, Examples)
{
    const auto names = make_namelist({"john"});
    EXPECT_TRUE(contains_name(cp("JOHN1985"), names));
    EXPECT_FALSE(contains_name(cp("xyz123"), names));
    EXPECT_TRUE(contains_name(cp("annabelle"), make_namelist({"anna"})));
    EXPECT_FALSE(contains_name(cp("jo"), names));
}

TEST(ContainsName, CaseInsensitive)
{
    const auto names = load_namelist(std::string(PWEVO_DEFAULT_DATA_DIR) + "/first_names.txt");
    for (const char* p : {"iloveMaria", "xxJamesxx", "qwerty", "123456", "Kevin!", "sunshine"}) {
        const auto c = cp(p);
        CodePoints upper = c;
        for (auto& ch : upper) ch = to_upper(ch);
        EXPECT_EQ(contains_name(c, names), contains_name(upper, names)) << p;
    }
}

TEST(ContainsName, ShortNamesAreIgnored)
{
    const auto names = make_namelist({"al", "bo", "eve"}, 3);
    EXPECT_FALSE(contains_name(cp("alabama"), names));
    EXPECT_TRUE(contains_name(cp("steve"), names));
}

TEST(IsEmail, Examples)
{
    EXPECT_TRUE(is_email(cp("user@example.com")));
    EXPECT_FALSE(is_email(cp("password")));
    EXPECT_FALSE(is_email(cp("a@b")));
}

TEST(IsEmail, ConservativePattern)
{
    EXPECT_TRUE(is_email(cp("first.last+tag@mail.example.co.uk")));
    EXPECT_TRUE(is_email(cp("x_1@a-b.de")));
    EXPECT_FALSE(is_email(cp("@example.com")));
    EXPECT_FALSE(is_email(cp("user@@example.com")));
    EXPECT_FALSE(is_email(cp("us er@example.com")));
    EXPECT_FALSE(is_email(cp("user@example.c")));
    EXPECT_FALSE(is_email(cp("user@example.c0m")));
    EXPECT_FALSE(is_email(cp("user@.com")));
    EXPECT_FALSE(is_email(cp("user@-x.com")));
    EXPECT_FALSE(is_email(cp(".user@example.com")));
    EXPECT_FALSE(is_email(cp("user@example.com ")));
    EXPECT_FALSE(is_email(cp("usér@example.com")));
}
