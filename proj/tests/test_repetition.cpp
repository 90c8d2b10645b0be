#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <vector>

#include "aps/repetition.hpp"

using namespace aps;

namespace {

Substitution guiding() { return Substitution(1, {0, 1}); }
Substitution power_three() { return Substitution(2, {0, 3, 0, 1}); }
Substitution bab4() { return Substitution(7, {1, 0, 0, 0, 0}); }

std::vector<Substitution> battery() {
    return {guiding(),          power_three(),          Substitution(2, {0, 1}),
            Substitution(3, {2, 0, 1}), Substitution(2, {1, 1, 0}), bab4()};
}

// brute-force oracle: Ind_b > n iff some b-leading u has u^n b inside a deep
// iterate of b
bool brute_exceeds(const Substitution& s, long long n, const Word& w) {
    long long max_len = s.r() * (s.k_max() + 1);
    for (std::size_t i = 0; i < w.size(); ++i) {
        if (w[i] != sym_b) continue;
        for (long long len = 1; len <= max_len; ++len) {
            long long need = len * n + 1;  // u^n followed by the first letter b
            if (static_cast<long long>(i) + need > static_cast<long long>(w.size())) break;
            bool ok = true;
            for (long long t = len; t < need && ok; ++t)
                if (w[i + static_cast<std::size_t>(t)] != w[i + static_cast<std::size_t>(t - len)])
                    ok = false;
            if (ok && w[i + static_cast<std::size_t>(len * n)] == sym_b) return true;
        }
    }
    return false;
}

}  // namespace

// ---------------------------------------------------------------------------
// legality of return-alphabet words
// ---------------------------------------------------------------------------

TEST_CASE("short return-word legality") {
    Substitution s = guiding();  // fixed sequence 0 1 0 2 0 1 0 3 ...
    CHECK(legal_return_word(s, word_digits("0")));
    CHECK(legal_return_word(s, word_digits("010")));
    CHECK(legal_return_word(s, word_digits("0102010")));
    CHECK(legal_return_word(s, Word{0, 3}));
    CHECK_FALSE(legal_return_word(s, word_digits("00")));
    CHECK_FALSE(legal_return_word(s, word_digits("11")));
    CHECK_FALSE(legal_return_word(s, Word{2, 2}));
    CHECK_FALSE(legal_return_word(s, Word{-3}));
    Substitution t(2, {1, 1, 0});  // fixed sequence 1 1 2 1 1 2 1 1 4 ...
    CHECK(legal_return_word(t, word_digits("11")));
    CHECK(legal_return_word(t, word_digits("112112")));
    CHECK_FALSE(legal_return_word(t, word_digits("111")));
    CHECK_FALSE(legal_return_word(t, word_digits("00")));
}

TEST_CASE("legality agrees with deep fixed-point scans") {
    for (const Substitution& s : battery()) {
        Word deep = rbar_apply(s, rbar_apply(s, rbar_apply(s, rbar_apply(s, {s.ks[0]}))));
        for (std::size_t i = 0; i + 3 <= deep.size(); i += 7) {
            Word y(deep.begin() + static_cast<long long>(i), deep.begin() + static_cast<long long>(i + 3));
            CHECK(legal_return_word(s, y));
        }
    }
}

// ---------------------------------------------------------------------------
// power test
// ---------------------------------------------------------------------------

TEST_CASE("pinned index verdicts") {
    CHECK(index_b_exceeds(guiding(), 1).exceeded);
    CHECK_FALSE(index_b_exceeds(guiding(), 2).exceeded);
    IndexVerdict v3 = index_b_exceeds(power_three(), 3);
    CHECK(v3.exceeded);
    CHECK(v3.witness_y == Word{0, 3});
    CHECK_FALSE(index_b_exceeds(power_three(), 4).exceeded);
    CHECK_THROWS_AS(index_b_exceeds(Substitution(1, {0, 1, 0}), 2), precondition_error);
    CHECK_THROWS_AS(index_b_exceeds(guiding(), 0), input_error);
}

TEST_CASE("positive verdicts carry valid witnesses") {
    for (const Substitution& s : battery()) {
        for (long long n = 1; n <= 5; ++n) {
            IndexVerdict v = index_b_exceeds(s, n);
            if (!v.exceeded) continue;
            CHECK(static_cast<long long>(v.witness_y.size()) <= s.r() - 1);
            CHECK(legal_return_word(s, v.witness_y));
            Word power;
            for (long long t = 0; t < n; ++t)
                power.insert(power.end(), v.witness_y.begin(), v.witness_y.end());
            CHECK(contains(v.host, power));
        }
    }
}

TEST_CASE("power test agrees with the deep-iterate oracle") {
    for (const Substitution& s : battery()) {
        Word w = iterate(s, sym_b, 8, 1LL << 24);
        bool monotone_done = false;
        for (long long n = 1; n <= 5; ++n) {
            bool fast = index_b_exceeds(s, n).exceeded;
            bool brute = brute_exceeds(s, n, w);
            CHECK(fast == brute);
            if (!fast) monotone_done = true;
            if (monotone_done) CHECK_FALSE(fast);  // exceeded is downward closed
        }
    }
}

// ---------------------------------------------------------------------------
// bracketing
// ---------------------------------------------------------------------------

TEST_CASE("index bounds") {
    IndexBounds g = index_b_bounds(guiding(), 6);
    CHECK(g.lower == 1);
    CHECK(g.upper == 2);
    CHECK(g.upper_valid);
    CHECK(g.equality);  // bb attains the upper bound: Ind_b = 2
    IndexBounds p = index_b_bounds(power_three(), 6);
    CHECK(p.lower == 3);
    CHECK(p.upper == 4);
    CHECK(p.upper_valid);
    CHECK(p.witness_y == Word{0, 3});
}

// ---------------------------------------------------------------------------
// Gordon criterion
// ---------------------------------------------------------------------------

TEST_CASE("gordon criterion") {
    GordonVerdict yes = gordon_criterion(power_three());
    CHECK(yes.holds);
    // witness u = tau(03) = b b aaa with uuub legal
    CHECK(ab_string(yes.witness_u) == "bbaaa");
    CHECK_FALSE(gordon_criterion(guiding()).holds);
    // (7, {1,0,0,0,0}) has 0000 in its return sequence (f fixes 0), so long
    // b-runs make the criterion hold there too
    GordonVerdict deep_runs = gordon_criterion(bab4());
    CHECK(deep_runs.holds);
    CHECK(ab_string(deep_runs.witness_u) == "b");
    Word w = iterate(bab4(), sym_b, 5, 1LL << 24);
    CHECK(brute_exceeds(bab4(), 3, w));
}

TEST_CASE("gordon witness occurs as u u u b in a deep iterate") {
    GordonVerdict v = gordon_criterion(power_three());
    REQUIRE(v.holds);
    Word probe;
    for (int t = 0; t < 3; ++t) probe.insert(probe.end(), v.witness_u.begin(), v.witness_u.end());
    probe.push_back(sym_b);
    CHECK(contains(iterate(power_three(), sym_b, 6), probe));
    CHECK(v.witness_u.front() == sym_b);
}

// ---------------------------------------------------------------------------
// witness reduction
// ---------------------------------------------------------------------------

TEST_CASE("reduction shortens witnesses to below r") {
    for (const Substitution& s : battery()) {
        // build a long witness by scanning a deep window for a squared word of
        // length divisible by r
        Word deep = rbar_apply(s, rbar_apply(s, rbar_apply(s, {s.ks[0]})));
        for (long long len : {s.r(), 2 * s.r()}) {
            std::optional<Word> y;
            for (std::size_t i = 0; !y && i + 2 * static_cast<std::size_t>(len) <= deep.size(); ++i) {
                Word cand(deep.begin() + static_cast<long long>(i),
                          deep.begin() + static_cast<long long>(i) + len);
                Word sq = cand;
                sq.insert(sq.end(), cand.begin(), cand.end());
                if (contains(deep, sq) && legal_return_word(s, sq)) y = cand;
            }
            if (!y) continue;
            Word reduced = reduce_power_witness(s, *y, 2);
            CHECK(static_cast<long long>(reduced.size()) <= s.r() - 1);
            Word sq = reduced;
            sq.insert(sq.end(), reduced.begin(), reduced.end());
            CHECK(legal_return_word(s, sq));
        }
    }
}

TEST_CASE("reduction for cubes collapses through the single-letter step") {
    // (03)(03)(03) legal for the power-three substitution; stretch the witness
    // to length 2r = 8 first, then reduce a cube
    Substitution s = power_three();
    Word y = {0, 3, 0, 3, 0, 3, 0, 3};  // not a multiple of... 8 = 2r, divisible path
    Word cube;
    for (int t = 0; t < 3; ++t) cube.insert(cube.end(), y.begin(), y.end());
    if (legal_return_word(s, cube)) {
        Word reduced = reduce_power_witness(s, y, 3);
        CHECK(static_cast<long long>(reduced.size()) <= s.r() - 1);
    }
    CHECK_THROWS_AS(reduce_power_witness(s, Word{9, 9, 9, 9, 9}, 2), input_error);
    CHECK_THROWS_AS(reduce_power_witness(s, Word{0, 3}, 1), input_error);
}
