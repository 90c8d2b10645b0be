#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "aps/words.hpp"

using namespace aps;

// ---------------------------------------------------------------------------
// reflect
// ---------------------------------------------------------------------------

TEST_CASE("reflect reverses") {
    CHECK(ab_string(reflect(word_ab("ab"))) == "ba");
    CHECK(ab_string(reflect(word_ab("aba"))) == "aba");
    CHECK(ab_string(reflect(word_ab("bbabbaa"))) == "aabbabb");
    CHECK(reflect(Word{}).empty());
}

TEST_CASE("reflect is an involution and an anti-homomorphism") {
    std::mt19937_64 rng(12345);
    for (int t = 0; t < 200; ++t) {
        Word u, v;
        for (int i = 0; i < static_cast<int>(rng() % 12); ++i) u.push_back(static_cast<Symbol>(rng() % 2));
        for (int i = 0; i < static_cast<int>(rng() % 12); ++i) v.push_back(static_cast<Symbol>(rng() % 2));
        CHECK(reflect(reflect(u)) == u);
        CHECK(reflect(concat(u, v)) == concat(reflect(v), reflect(u)));
    }
}

// ---------------------------------------------------------------------------
// is_palindrome
// ---------------------------------------------------------------------------

TEST_CASE("palindrome detection") {
    CHECK(is_palindrome(word_digits("010")));
    CHECK_FALSE(is_palindrome(word_digits("01")));
    CHECK(is_palindrome(Word{}));
    CHECK(is_palindrome(word_ab("a")));
    CHECK(is_palindrome(word_digits("0102010")));
}

// ---------------------------------------------------------------------------
// count_occurrences
// ---------------------------------------------------------------------------

TEST_CASE("occurrence counting with overlaps") {
    CHECK(count_occurrences(word_ab("bbabbaa"), word_ab("bb")) == 2);
    CHECK(count_occurrences(word_ab("aaa"), word_ab("aa")) == 2);
    CHECK(count_occurrences(word_ab("ab"), word_ab("ba")) == 0);
    CHECK(count_occurrences(word_ab("a"), word_ab("a")) == 1);
    CHECK_THROWS_AS(count_occurrences(word_ab("ab"), Word{}), input_error);
}

namespace {
long long naive_count(const Word& h, const Word& n) {
    long long c = 0;
    for (std::size_t j = 0; j + n.size() <= h.size(); ++j)
        if (std::equal(n.begin(), n.end(), h.begin() + static_cast<long long>(j))) ++c;
    return c;
}
}  // namespace

TEST_CASE("occurrence counting matches naive scan and concatenation bounds") {
    std::mt19937_64 rng(777);
    for (int t = 0; t < 300; ++t) {
        Word u, v, w;
        for (int i = 0; i < static_cast<int>(2 + rng() % 20); ++i) u.push_back(static_cast<Symbol>(rng() % 2));
        for (int i = 0; i < static_cast<int>(2 + rng() % 20); ++i) v.push_back(static_cast<Symbol>(rng() % 2));
        for (int i = 0; i < static_cast<int>(1 + rng() % 4); ++i) w.push_back(static_cast<Symbol>(rng() % 2));
        CHECK(count_occurrences(u, w) == naive_count(u, w));
        Word uv = concat(u, v);
        long long cuv = count_occurrences(uv, w);
        CHECK(cuv >= count_occurrences(u, w) + count_occurrences(v, w));
        CHECK(cuv >= std::max(count_occurrences(u, w), count_occurrences(v, w)));
        CHECK(cuv <= count_occurrences(u, w) + count_occurrences(v, w) +
                         static_cast<long long>(w.size()) - 1);
    }
}

// ---------------------------------------------------------------------------
// rational powers
// ---------------------------------------------------------------------------

TEST_CASE("rational power realization") {
    RationalPower p{word_digits("01"), Rational(3, 2)};
    CHECK(p.realize() == word_digits("010"));
    RationalPower q{word_ab("ba"), Rational(3)};
    CHECK(ab_string(q.realize()) == "bababa");
    RationalPower z{word_ab("ab"), Rational(0)};
    CHECK(z.realize().empty());
}

TEST_CASE("max_power_of") {
    CHECK(max_power_of(word_digits("0102"), word_digits("01")) == Rational(3, 2));
    CHECK(max_power_of(word_ab("bb"), word_ab("b")) == Rational(2));
    CHECK(max_power_of(word_ab("ab"), word_ab("ba")) == Rational(0));
    CHECK(max_power_of(word_ab("bbabbaa"), word_ab("bba")) == Rational(2));
    CHECK(max_power_of(word_ab("bbabbab"), word_ab("bba")) == Rational(7, 3));
}

TEST_CASE("max_power_of agrees with a realization oracle") {
    std::mt19937_64 rng(4242);
    for (int t = 0; t < 200; ++t) {
        Word h, base;
        for (int i = 0; i < static_cast<int>(4 + rng() % 24); ++i) h.push_back(static_cast<Symbol>(rng() % 2));
        for (int i = 0; i < static_cast<int>(1 + rng() % 4); ++i) base.push_back(static_cast<Symbol>(rng() % 2));
        Rational s = max_power_of(h, base);
        if (s == Rational(0)) {
            CHECK_FALSE(contains(h, base));
            continue;
        }
        // the claimed power occurs ...
        CHECK(contains(h, RationalPower{base, s}.realize()));
        // ... and no longer fractional power does
        Rational next = s + Rational(1, static_cast<long long>(base.size()));
        CHECK_FALSE(contains(h, RationalPower{base, next}.realize()));
    }
}
