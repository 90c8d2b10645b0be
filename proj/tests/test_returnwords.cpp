#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "aps/returnwords.hpp"

using namespace aps;

namespace {
Substitution guiding() { return Substitution(1, {0, 1}); }
Substitution power_three() { return Substitution(2, {0, 3, 0, 1}); }
Substitution bab4(long long p) { return Substitution(p, {1, 0, 0, 0, 0}); }

std::vector<Substitution> battery() {
    return {guiding(),          power_three(),          Substitution(2, {0, 1}),
            Substitution(3, {2, 0, 1}), Substitution(2, {1, 1, 0}), bab4(7)};
}

/// brute-force Toeplitz fill: iteratively place the skeleton of each level
/// at the digit-selected offset, keeping earlier levels' cells.
ToeplitzWindow brute_fill(const Substitution& s, const OdometerPrefix& prefix, long long lo,
                          long long hi) {
    ToeplitzWindow w;
    w.offset = lo;
    w.cells.assign(static_cast<std::size_t>(hi - lo + 1), std::nullopt);
    long long q = -1, pw = 1;
    for (long long level = 1; level <= prefix.depth(); ++level) {
        q -= prefix.digits[static_cast<std::size_t>(level - 1)] * pw;
        pw *= s.r();
        Word blk = beta(s, level);
        long long period = pw;
        for (long long i = lo; i <= hi; ++i) {
            auto& cell = w.cells[static_cast<std::size_t>(i - lo)];
            if (cell) continue;
            long long j = ((i - q - 1) % period + period) % period;
            if (j != period - 1) cell = blk[static_cast<std::size_t>(j)];
        }
    }
    return w;
}
}  // namespace

// ---------------------------------------------------------------------------
// f and rbar
// ---------------------------------------------------------------------------

TEST_CASE("f iteration") {
    CHECK(f_apply(guiding(), 0, 3) == 3);
    CHECK(f_apply(bab4(7), 1, 2) == 49);
    CHECK(f_apply(guiding(), sym_inf, 5) == sym_inf);
    CHECK(f_apply(power_three(), 3, 1) == 7);
}

TEST_CASE("return substitution images") {
    CHECK(rbar_apply(guiding(), Word{0}) == word_digits("01"));
    CHECK(rbar_apply(guiding(), word_digits("01")) == word_digits("0102"));
    CHECK(rbar_apply(power_three(), Word{5}) == Word{0, 3, 0, 11});
    CHECK(rbar_apply(guiding(), Word{sym_inf}) == Word{0, sym_inf});
    // orbit of 0 under the guiding return substitution
    Word w{0};
    for (int i = 0; i < 4; ++i) w = rbar_apply(guiding(), w);
    CHECK(w == word_digits("0102010301020104"));
}

TEST_CASE("tau expansion") {
    CHECK(ab_string(tau_expand(guiding(), word_digits("012")).word) == "bbabaa");
    CHECK(ab_string(tau_expand(guiding(), Word{4}).word) == "baaaa");
    CHECK(ab_string(tau_expand(bab4(7), Word{1, 0, 0, 0, 0}).word) == "babbbb");
    TauExpansion t = tau_expand(guiding(), Word{0, sym_inf, 2}, ReadingSide::Right);
    CHECK(t.truncated);
    CHECK(ab_string(t.word) == "bb");
    TauExpansion l = tau_expand(guiding(), Word{0, sym_inf, 2}, ReadingSide::Left);
    CHECK(l.truncated);
    CHECK(ab_string(l.word) == "baa");
}

TEST_CASE("conjugacy tau o rbar = rho o tau") {
    std::mt19937_64 rng(99);
    for (const Substitution& s : battery()) {
        std::vector<Symbol> alphabet{s.ks.begin(), s.ks.end() - 1};
        for (Symbol k : {s.ks[0], s.ks[static_cast<std::size_t>(s.r() - 2)]})
            for (long long m = 1; m <= 5; ++m) {
                Symbol v = f_apply(s, k, m);
                if (v <= 500) alphabet.push_back(v);
            }
        for (int t = 0; t < 1000; ++t) {
            Word y;
            std::size_t len = 1 + rng() % 50;
            for (std::size_t i = 0; i < len; ++i)
                y.push_back(alphabet[rng() % alphabet.size()]);
            CHECK(tau_expand(s, rbar_apply(s, y)).word == apply_once(s, tau_expand(s, y).word));
        }
    }
}

// ---------------------------------------------------------------------------
// beta blocks
// ---------------------------------------------------------------------------

TEST_CASE("beta recursion") {
    CHECK(beta(guiding(), 1) == word_digits("0"));
    CHECK(beta(guiding(), 2) == word_digits("010"));
    CHECK(beta(guiding(), 3) == word_digits("0102010"));
    for (const Substitution& s : battery())
        for (long long n = 1; n <= 4; ++n) {
            Word b = beta(s, n);
            long long rn = 1;
            for (long long i = 0; i < n; ++i) rn *= s.r();
            CHECK(static_cast<long long>(b.size()) == rn - 1);
            // rbar^n(k) = beta(n) f^n(k)
            Word img{s.ks[0]};
            for (long long i = 0; i < n; ++i) img = rbar_apply(s, img);
            Word expect = b;
            expect.push_back(f_apply(s, s.ks[0], n));
            CHECK(img == expect);
        }
}

TEST_CASE("last-letter property: n-fold images of different letters differ only at the end") {
    for (const Substitution& s : battery()) {
        for (long long n = 1; n <= 3; ++n) {
            Word u{2}, v{5};
            for (long long i = 0; i < n; ++i) {
                u = rbar_apply(s, u);
                v = rbar_apply(s, v);
            }
            CHECK(Word(u.begin(), u.end() - 1) == Word(v.begin(), v.end() - 1));
            CHECK(u.back() != v.back());
        }
    }
}

TEST_CASE("tau(beta(n)) b is a prefix of rho^n(b)") {
    for (const Substitution& s : battery())
        for (long long n = 1; n <= 8; ++n) {
            if (iterate_length(s, sym_b, n) > 2'000'000) break;
            Word pre = tau_expand(s, beta(s, n)).word;
            pre.push_back(sym_b);
            Word full = iterate(s, sym_b, n);
            REQUIRE(pre.size() <= full.size());
            CHECK(std::equal(pre.begin(), pre.end(), full.begin()));
        }
}

// ---------------------------------------------------------------------------
// odometer prefixes and approximants
// ---------------------------------------------------------------------------

TEST_CASE("q formula") {
    CHECK(q_of(OdometerPrefix(2, {0, 0, 0})) == -1);
    CHECK(q_of(OdometerPrefix(2, {1, 0, 1})) == -6);
    CHECK(q_of(OdometerPrefix(5, {4})) == -5);
    CHECK_THROWS_AS(OdometerPrefix(2, {2}), input_error);
}

TEST_CASE("approximant windows match the brute-force fill") {
    std::mt19937_64 rng(2024);
    std::vector<Substitution> subs{guiding(), Substitution(2, {1, 1, 0}), power_three(),
                                   Substitution(1, {0, 2, 0, 0, 1})};
    for (const Substitution& s : subs) {
        // exhaustive to depth 4 (windows across one full period)
        for (long long depth = 1; depth <= 4; ++depth) {
            long long total = 1;
            for (long long i = 0; i < depth; ++i) total *= s.r();
            if (total > 300) break;
            std::vector<long long> digits(static_cast<std::size_t>(depth), 0);
            for (long long code = 0; code < total; ++code) {
                long long c = code;
                for (auto& d : digits) {
                    d = c % s.r();
                    c /= s.r();
                }
                OdometerPrefix p(s.r(), digits);
                long long rn = total;
                ToeplitzWindow w = approximant_window(s, p, -rn, 2 * rn);
                ToeplitzWindow bf = brute_fill(s, p, -rn, 2 * rn);
                CHECK(w.cells == bf.cells);
            }
        }
        // randomized at depth 5 and 6
        for (long long depth = 5; depth <= 6; ++depth) {
            for (int t = 0; t < 50; ++t) {
                std::vector<long long> digits;
                for (long long i = 0; i < depth; ++i)
                    digits.push_back(static_cast<long long>(rng() % static_cast<unsigned long long>(s.r())));
                OdometerPrefix p(s.r(), digits);
                long long lo = static_cast<long long>(rng() % 1000) - 500;
                ToeplitzWindow w = approximant_window(s, p, lo, lo + 400);
                ToeplitzWindow bf = brute_fill(s, p, lo, lo + 400);
                CHECK(w.cells == bf.cells);
            }
        }
    }
}

TEST_CASE("undetermined cells shrink with depth and q marks the first gap left of 0") {
    std::mt19937_64 rng(5);
    Substitution s = power_three();
    for (int t = 0; t < 40; ++t) {
        std::vector<long long> digits;
        for (int i = 0; i < 4; ++i) digits.push_back(static_cast<long long>(rng() % 4));
        OdometerPrefix deep(s.r(), digits);
        OdometerPrefix shallow(s.r(), {digits[0], digits[1], digits[2]});
        ToeplitzWindow wd = approximant_window(s, deep, -300, 300);
        ToeplitzWindow ws = approximant_window(s, shallow, -300, 300);
        long long first_gap_left = 1;
        for (long long i = -1; i >= -300; --i) {
            std::size_t idx = static_cast<std::size_t>(i + 300);
            if (!wd.cells[idx]) {
                first_gap_left = i;
                break;
            }
        }
        CHECK(first_gap_left == q_of(deep));
        for (std::size_t idx = 0; idx < wd.cells.size(); ++idx)
            if (!wd.cells[idx]) CHECK(!ws.cells[idx]);
    }
}

TEST_CASE("position 0 stays undetermined exactly under the all-(r-1) digits") {
    for (const Substitution& s : {guiding(), power_three()}) {
        std::vector<long long> digits(5, s.r() - 1);
        ToeplitzWindow w = approximant_window(s, OdometerPrefix(s.r(), digits), 0, 0);
        CHECK(!w.cells[0]);
        digits[4] = 0;
        ToeplitzWindow w2 = approximant_window(s, OdometerPrefix(s.r(), digits), 0, 0);
        CHECK(w2.cells[0].has_value());
    }
}

// ---------------------------------------------------------------------------
// addressing
// ---------------------------------------------------------------------------

TEST_CASE("address_of inverts approximant windows") {
    std::mt19937_64 rng(31337);
    for (const Substitution& s : {guiding(), Substitution(2, {1, 1, 0})}) {
        for (int t = 0; t < 30; ++t) {
            long long depth = 2 + static_cast<long long>(rng() % 3);
            std::vector<long long> digits;
            for (long long i = 0; i < depth; ++i)
                digits.push_back(static_cast<long long>(rng() % static_cast<unsigned long long>(s.r())));
            OdometerPrefix p(s.r(), digits);
            // deepen far enough that the requested range is fully determined
            std::vector<long long> full_digits = digits;
            while (static_cast<long long>(full_digits.size()) < depth + 8) full_digits.push_back(0);
            long long rn = 1;
            for (long long i = 0; i < depth; ++i) rn *= s.r();
            ToeplitzWindow w = approximant_window(s, OdometerPrefix(s.r(), full_digits), 0, 3 * rn);
            AddressResult res = address_of(s, w, depth);
            CHECK(res.prefix.digits == digits);
        }
    }
}

TEST_CASE("shifted fixed-point windows have the radix expansion of the shift as address") {
    Substitution s = guiding();
    Word x{0};
    for (int i = 0; i < 10; ++i) x = rbar_apply(s, x);
    for (long long m : {0LL, 1LL, 5LL, 12LL}) {
        ToeplitzWindow w;
        w.offset = 0;
        for (long long i = m; i < m + 80; ++i)
            w.cells.push_back(x[static_cast<std::size_t>(i)]);
        AddressResult res = address_of(s, w, 4);
        long long v = 0;
        for (long long j = 3; j >= 0; --j) v = 2 * v + res.prefix.digits[static_cast<std::size_t>(j)];
        CHECK(v == m);
    }
}

TEST_CASE("type-0 ambiguity is reported") {
    Substitution t0(2, {0, 1, 0, 0});
    Word x{t0.ks[0]};
    for (int i = 0; i < 4; ++i) x = rbar_apply(t0, x);
    ToeplitzWindow w;
    w.offset = 0;
    for (long long i = 0; i < 40; ++i) w.cells.push_back(x[static_cast<std::size_t>(i)]);
    AddressResult res = address_of(t0, w, 2);
    CHECK(res.type0_ambiguous);
    ToeplitzWindow g;
    g.offset = 0;
    Word xg{0};
    for (int i = 0; i < 6; ++i) xg = rbar_apply(guiding(), xg);
    for (long long i = 0; i < 40; ++i) g.cells.push_back(xg[static_cast<std::size_t>(i)]);
    CHECK_FALSE(address_of(guiding(), g, 2).type0_ambiguous);
}

// ---------------------------------------------------------------------------
// induced system
// ---------------------------------------------------------------------------

TEST_CASE("induced shift return times") {
    CHECK(induced_shift(guiding(), Symbol{1}).return_time == 2);
    CHECK(induced_shift(guiding(), Symbol{0}).return_time == 1);
    InducedStep e = induced_shift(guiding(), sym_inf);
    CHECK(e.exceptional);
    CHECK(e.successor == "a^inf . rho^inf(b)");

    Word w = word_ab("bbabbaa");
    CHECK(induced_shift(guiding(), w, 0).return_time == 1);
    CHECK(induced_shift(guiding(), w, 1).return_time == 2);
    CHECK_THROWS_AS(induced_shift(guiding(), w, 2), input_error);
    CHECK_THROWS_AS(induced_shift(guiding(), w, 4), input_error);
}

TEST_CASE("induced shift iterates the return decomposition of rho^n(b)") {
    for (const Substitution& s : {guiding(), power_three()}) {
        Word w = iterate(s, sym_b, 5);
        Word x{s.ks[0]};
        for (int i = 0; i < 5; ++i) x = rbar_apply(s, x);
        long long pos = 0;
        for (std::size_t i = 0; i < 30; ++i) {
            InducedStep st = induced_shift(s, w, pos);
            CHECK(st.return_time == 1 + x[i]);
            pos += st.return_time;
        }
    }
}
