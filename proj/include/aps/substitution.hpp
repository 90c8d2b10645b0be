#pragma once
/** @file substitution.hpp
 *  Binary substitutions a -> a^p, b -> b a^{k1} b a^{k2} ... b a^{kr} in
 *  b-leading normal form: construction, classification, iteration,
 *  legal-word enumeration, complexity, matrix, measure approximants and
 *  eventually periodic generators.
 */

#include <array>
#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "aps/errors.hpp"
#include "aps/rational.hpp"
#include "aps/words.hpp"

namespace aps {

inline constexpr long long default_length_budget = 10'000'000;

struct Substitution {
    long long p = 1;                 ///< |image of a|
    std::vector<long long> ks;       ///< exponents of the a-blocks in the image of b

    Substitution(long long p_, std::vector<long long> ks_) : p(p_), ks(std::move(ks_)) {
        if (p < 1) throw input_error("substitution: p must be >= 1");
        if (ks.empty()) throw input_error("substitution: needs at least one b-block");
        for (long long k : ks)
            if (k < 0) throw input_error("substitution: negative exponent");
        if (q() == 0) throw degenerate_error("substitution: image of b contains no a (b -> b^r)");
    }

    long long r() const { return static_cast<long long>(ks.size()); }
    long long q() const { return std::accumulate(ks.begin(), ks.end(), 0LL); }
    long long k_last() const { return ks.back(); }

    /// max over the first r-1 exponents; requires r >= 2.
    long long k_max() const {
        if (r() < 2) throw precondition_error("k_max: needs r >= 2");
        return *std::max_element(ks.begin(), ks.end() - 1);
    }

    bool almost_primitive() const { return r() >= 2 && q() > 0 && (p > 1 || k_last() > 0); }
    bool minimal_case() const { return r() >= 2 && q() > 0 && p == 1 && k_last() == 0; }
    bool type0() const {
        if (k_last() != 0) return false;
        for (std::size_t i = 0; i + 1 < ks.size(); ++i)
            if (ks[i] == 0) return true;
        return false;
    }

    Word image_of_b() const {
        Word w;
        for (long long k : ks) {
            w.push_back(sym_b);
            w.insert(w.end(), static_cast<std::size_t>(k), sym_a);
        }
        return w;
    }

    friend bool operator==(const Substitution& x, const Substitution& y) {
        return x.p == y.p && x.ks == y.ks;
    }
};

enum class SubstitutionClass { TrivialAP, Minimal, AlmostPrimitive, Degenerate };

struct Classification {
    SubstitutionClass tag;
    bool type0 = false;

    std::string name() const {
        switch (tag) {
            case SubstitutionClass::TrivialAP: return "trivial";
            case SubstitutionClass::Minimal: return "minimal";
            case SubstitutionClass::AlmostPrimitive: return type0 ? "almost-primitive-type0" : "almost-primitive";
            default: return "degenerate";
        }
    }
};

/// Classify raw parameters without the constructor's degeneracy rejection.
inline Classification classify(long long p, const std::vector<long long>& ks) {
    long long q = std::accumulate(ks.begin(), ks.end(), 0LL);
    if (ks.empty() || q == 0) return {SubstitutionClass::Degenerate, false};
    if (ks.size() == 1) return {SubstitutionClass::TrivialAP, false};
    if (p == 1 && ks.back() == 0) return {SubstitutionClass::Minimal, false};
    Substitution s(p, ks);
    return {SubstitutionClass::AlmostPrimitive, s.type0()};
}

inline Classification classify(const Substitution& s) { return classify(s.p, s.ks); }

/// Normal form of (p, image of b): the a-prefix of the image is cyclically
/// moved to the end; the generated subshift is unchanged.
inline Substitution normalize(long long p, const Word& image_of_b) {
    std::size_t first_b = 0;
    while (first_b < image_of_b.size() && image_of_b[first_b] == sym_a) ++first_b;
    if (first_b == image_of_b.size())
        throw degenerate_error("normalize: image of b contains no b");
    Word rot(image_of_b.begin() + static_cast<long long>(first_b), image_of_b.end());
    rot.insert(rot.end(), image_of_b.begin(), image_of_b.begin() + static_cast<long long>(first_b));
    std::vector<long long> ks;
    for (Symbol c : rot) {
        if (c == sym_b) ks.push_back(0);
        else ++ks.back();
    }
    return Substitution(p, std::move(ks));
}

inline Substitution normalize(long long p, const std::string& image_of_b) {
    return normalize(p, word_ab(image_of_b));
}

/// 2x2 substitution matrix [[p, q], [0, r]] with M[x][y] = |image(y)|_x.
struct SubstitutionMatrix {
    std::array<std::array<long long, 2>, 2> m;
};

inline SubstitutionMatrix matrix_of(const Substitution& s) {
    return SubstitutionMatrix{{{{s.p, s.q()}, {0, s.r()}}}};
}

namespace detail {
inline long long sat_mul(long long a, long long b) {
    __int128 v = static_cast<__int128>(a) * b;
    const long long cap = (1LL << 62);
    if (v > cap) return cap;
    return static_cast<long long>(v);
}
inline long long sat_add(long long a, long long b) {
    const long long cap = (1LL << 62);
    if (a >= cap - b) return cap;
    return a + b;
}
}  // namespace detail

/// |rho^n(letter)| from the matrix-power closed form, saturating at 2^62.
inline long long iterate_length(const Substitution& s, Symbol letter, long long n) {
    if (letter == sym_a) {
        long long v = 1;
        for (long long i = 0; i < n; ++i) v = detail::sat_mul(v, s.p);
        return v;
    }
    // |rho^n(b)| = r^n + q * sum_{j=0}^{n-1} p^j r^{n-1-j}
    long long rn = 1, sum = 0, pj = 1;
    std::vector<long long> rpow(static_cast<std::size_t>(n) + 1, 1);
    for (long long i = 1; i <= n; ++i) rpow[static_cast<std::size_t>(i)] = detail::sat_mul(rpow[static_cast<std::size_t>(i - 1)], s.r());
    rn = rpow[static_cast<std::size_t>(n)];
    for (long long j = 0; j < n; ++j) {
        sum = detail::sat_add(sum, detail::sat_mul(pj, rpow[static_cast<std::size_t>(n - 1 - j)]));
        pj = detail::sat_mul(pj, s.p);
    }
    return detail::sat_add(rn, detail::sat_mul(s.q(), sum));
}

/// One application of the substitution to a word.
inline Word apply_once(const Substitution& s, const Word& w) {
    Word out;
    const Word ib = s.image_of_b();
    std::size_t len = 0;
    for (Symbol c : w) len += c == sym_a ? static_cast<std::size_t>(s.p) : ib.size();
    out.reserve(len);
    for (Symbol c : w) {
        if (c == sym_a) out.insert(out.end(), static_cast<std::size_t>(s.p), sym_a);
        else out.insert(out.end(), ib.begin(), ib.end());
    }
    return out;
}

/// n-fold image of a letter, with an explicit budget on the materialized length.
inline Word iterate(const Substitution& s, Symbol letter, long long n,
                    long long budget = default_length_budget) {
    long long projected = iterate_length(s, letter, n);
    if (projected > budget)
        throw budget_error("iterate: projected length " + std::to_string(projected) +
                               " exceeds budget " + std::to_string(budget),
                           projected);
    Word w{letter};
    for (long long i = 0; i < n; ++i) w = apply_once(s, w);
    return w;
}

namespace detail {

/// Generalized suffix automaton over {a,b}; counts distinct subwords per
/// length across an incrementally inserted collection of words.
struct BinarySAM {
    struct State {
        int len = 0;
        int link = -1;
        int next[2] = {-1, -1};
    };
    std::vector<State> st;

    BinarySAM() { st.emplace_back(); }

    int extend(int last, Symbol sym) {
        int c = sym == sym_a ? 0 : 1;
        if (st[static_cast<std::size_t>(last)].next[c] != -1) {
            int q = st[static_cast<std::size_t>(last)].next[c];
            if (st[static_cast<std::size_t>(q)].len == st[static_cast<std::size_t>(last)].len + 1) return q;
            int clone = static_cast<int>(st.size());
            st.push_back(st[static_cast<std::size_t>(q)]);
            st[static_cast<std::size_t>(clone)].len = st[static_cast<std::size_t>(last)].len + 1;
            int p = last;
            while (p != -1 && st[static_cast<std::size_t>(p)].next[c] == q) {
                st[static_cast<std::size_t>(p)].next[c] = clone;
                p = st[static_cast<std::size_t>(p)].link;
            }
            st[static_cast<std::size_t>(q)].link = clone;
            return clone;
        }
        int cur = static_cast<int>(st.size());
        st.emplace_back();
        st[static_cast<std::size_t>(cur)].len = st[static_cast<std::size_t>(last)].len + 1;
        int p = last;
        while (p != -1 && st[static_cast<std::size_t>(p)].next[c] == -1) {
            st[static_cast<std::size_t>(p)].next[c] = cur;
            p = st[static_cast<std::size_t>(p)].link;
        }
        if (p == -1) {
            st[static_cast<std::size_t>(cur)].link = 0;
        } else {
            int q = st[static_cast<std::size_t>(p)].next[c];
            if (st[static_cast<std::size_t>(p)].len + 1 == st[static_cast<std::size_t>(q)].len) {
                st[static_cast<std::size_t>(cur)].link = q;
            } else {
                int clone = static_cast<int>(st.size());
                st.push_back(st[static_cast<std::size_t>(q)]);
                st[static_cast<std::size_t>(clone)].len = st[static_cast<std::size_t>(p)].len + 1;
                while (p != -1 && st[static_cast<std::size_t>(p)].next[c] == q) {
                    st[static_cast<std::size_t>(p)].next[c] = clone;
                    p = st[static_cast<std::size_t>(p)].link;
                }
                st[static_cast<std::size_t>(q)].link = clone;
                st[static_cast<std::size_t>(cur)].link = clone;
            }
        }
        return cur;
    }

    void insert(const Word& w) {
        int last = 0;
        for (Symbol c : w) last = extend(last, c);
    }

    /// counts[n] = number of distinct subwords of length n, 1 <= n <= n_max.
    std::vector<long long> length_counts(long long n_max) const {
        std::vector<long long> diff(static_cast<std::size_t>(n_max) + 2, 0);
        for (std::size_t i = 1; i < st.size(); ++i) {
            long long lo = st[static_cast<std::size_t>(st[i].link)].len + 1;
            long long hi = std::min<long long>(st[i].len, n_max);
            if (lo > hi) continue;
            diff[static_cast<std::size_t>(lo)] += 1;
            diff[static_cast<std::size_t>(hi) + 1] -= 1;
        }
        std::vector<long long> counts(static_cast<std::size_t>(n_max) + 1, 0);
        long long acc = 0;
        for (long long n = 1; n <= n_max; ++n) {
            acc += diff[static_cast<std::size_t>(n)];
            counts[static_cast<std::size_t>(n)] = acc;
        }
        return counts;
    }
};

/// Per-level corpus words whose length-(<= n_max) subwords are exactly the new
/// subwords rho^m(b) contributes beyond rho^{m-1}(b).
///
/// Up to the first level where |rho^m(b)| exceeds the materialization cap the
/// full word is used. Past that point every length-n window of rho^m(b) lies
/// inside one block rho^{m-1}(b) (covered at the previous level) or crosses a
/// block boundary; boundary windows touch at most the last n_max symbols of
/// the left block, the a-gap k_i p^{m-1} (capped at 2 n_max: longer gaps admit
/// no new windows beyond the capped ones), and the first n_max symbols of the
/// right block. Prefix and suffix windows of the blocks are maintained
/// exactly level by level.
struct CorpusBuilder {
    const Substitution& s;
    long long n_max;
    long long cap;         ///< materialization cap for the full-word phase
    long long m = 0;       ///< current level
    bool junction_phase = false;
    Word full;             ///< full rho^m(b) during the early phase
    Word prefix, suffix;   ///< length-capped boundary windows of rho^m(b)

    CorpusBuilder(const Substitution& s_, long long n_max_)
        : s(s_), n_max(n_max_), cap(std::max<long long>(4 * n_max_, 4096)), full{sym_b} {}

    static Word take_prefix(const Word& w, long long len) {
        return Word(w.begin(), w.begin() + std::min<long long>(len, static_cast<long long>(w.size())));
    }
    static Word take_suffix(const Word& w, long long len) {
        long long cut = std::max<long long>(0, static_cast<long long>(w.size()) - len);
        return Word(w.begin() + cut, w.end());
    }

    /// Advance to level m+1; returns the corpus words introduced at that level.
    std::vector<Word> next_level() {
        ++m;
        std::vector<Word> out;
        if (!junction_phase && iterate_length(s, sym_b, m) <= cap) {
            full = apply_once(s, full);
            out.push_back(full);
            prefix = take_prefix(full, n_max);
            suffix = take_suffix(full, n_max);
            return out;
        }
        if (!junction_phase) {
            junction_phase = true;
            full.clear();
            full.shrink_to_fit();
        }
        // gap lengths k_i p^{m-1}, capped
        long long pm = 1;
        for (long long i = 0; i < m - 1 && pm <= 2 * n_max; ++i) pm = sat_mul(pm, s.p);
        for (long long i = 0; i < s.r(); ++i) {
            long long gap = std::min<long long>(sat_mul(s.ks[static_cast<std::size_t>(i)], pm), 2 * n_max);
            Word j = suffix;
            j.insert(j.end(), static_cast<std::size_t>(gap), sym_a);
            if (i + 1 < s.r()) j.insert(j.end(), prefix.begin(), prefix.end());
            out.push_back(std::move(j));
        }
        prefix = take_prefix(apply_once(s, prefix), n_max);
        suffix = take_suffix(apply_once(s, suffix), n_max);
        return out;
    }
};

}  // namespace detail

/// Per-length legal-word counts up to n_max, with the stabilization depth used.
struct ComplexityProfile {
    std::vector<long long> counts;  ///< counts[n], index 0 unused
    long long stabilization_depth;  ///< level m at which the counts stopped changing
};

/// Counts of legal words of each length 1..n_max.
///
/// Enumerates length-bounded subwords of rho^m(b) for increasing m (via the
/// boundary-window corpus, so deep levels stay cheap) and stops once the whole
/// count vector is identical over three consecutive levels and
/// |rho^m(b)| >= 4*n_max. The stopping rule is a heuristic; the depth is
/// reported for audit.
inline ComplexityProfile complexity_profile(const Substitution& s, long long n_max,
                                            long long budget = default_length_budget) {
    if (!s.almost_primitive())
        throw precondition_error("complexity_profile: needs almost primitive input");
    if (n_max < 1) throw input_error("complexity_profile: n >= 1 required");
    detail::CorpusBuilder cb(s, n_max);
    detail::BinarySAM sam;
    std::vector<long long> prev, prev2;
    long long corpus_symbols = 0;
    while (true) {
        for (const Word& w : cb.next_level()) {
            corpus_symbols += static_cast<long long>(w.size());
            if (corpus_symbols > budget)
                throw budget_error("complexity_profile: corpus exceeds budget", corpus_symbols);
            sam.insert(w);
        }
        std::vector<long long> counts = sam.length_counts(n_max);
        if (counts == prev && prev == prev2 && iterate_length(s, sym_b, cb.m) >= 4 * n_max)
            return {counts, cb.m};
        prev2 = std::move(prev);
        prev = std::move(counts);
    }
}

/// The set of legal words of length n.
inline std::set<Word> legal_words(const Substitution& s, long long n,
                                  long long budget = default_length_budget) {
    long long depth = complexity_profile(s, n, budget).stabilization_depth;
    detail::CorpusBuilder cb(s, n);
    std::set<Word> out;
    while (cb.m < depth)
        for (const Word& w : cb.next_level())
            for (long long j = 0; j + n <= static_cast<long long>(w.size()); ++j)
                out.insert(Word(w.begin() + j, w.begin() + j + n));
    return out;
}

inline long long complexity(const Substitution& s, long long n,
                            long long budget = default_length_budget) {
    return complexity_profile(s, n, budget).counts[static_cast<std::size_t>(n)];
}

enum class ComplexityClass { Linear, NLogLogN, NLogN, Quadratic, BoundedOrLinear };

inline std::string name(ComplexityClass c) {
    switch (c) {
        case ComplexityClass::Linear: return "Theta(n)";
        case ComplexityClass::NLogLogN: return "Theta(n log log n)";
        case ComplexityClass::NLogN: return "Theta(n log n)";
        case ComplexityClass::Quadratic: return "Theta(n^2)";
        default: return "bounded-or-linear";
    }
}

inline ComplexityClass complexity_class(const Substitution& s) {
    long long r = s.r(), p = s.p;
    if (r == 1) return ComplexityClass::BoundedOrLinear;
    if (r > 1 && r < p) return ComplexityClass::Linear;
    if (r > 1 && r == p) return ComplexityClass::NLogLogN;
    if (p > 1 && p < r) return ComplexityClass::NLogN;
    return ComplexityClass::Quadratic;  // p == 1 < r
}

/// Finite-depth cylinder-measure quotient with its successor for convergence diagnostics.
struct MeasureSample {
    Rational value;  ///< |rho^n(b)|_u / |rho^n(b)|_b
    Rational next;   ///< same quotient at depth n+1
};

inline MeasureSample measure_cylinder(const Substitution& s, const Word& u, long long n,
                                      long long budget = default_length_budget) {
    if (u.empty()) throw input_error("measure_cylinder: empty word");
    std::set<Word> legal = legal_words(s, static_cast<long long>(u.size()), budget);
    if (!legal.count(u)) throw input_error("measure_cylinder: word is not legal");
    const Word b_word{sym_b};
    auto quotient = [&](long long depth) {
        Word w = iterate(s, sym_b, depth, budget);
        return Rational(count_occurrences(w, u), count_occurrences(w, b_word));
    };
    return {quotient(n), quotient(n + 1)};
}

/// |rho^n(b)|_b / r^n; identically 1 in b-leading binary normal form.
inline Rational pf_prefactor(const Substitution& s, long long n,
                             long long budget = default_length_budget) {
    Word w = iterate(s, sym_b, n, budget);
    long long rn = 1;
    for (long long i = 0; i < n; ++i) rn *= s.r();
    return Rational(count_occurrences(w, Word{sym_b}), rn);
}

/// A window producer for one eventually periodic orbit generator.
struct EpGenerator {
    std::string name;  ///< "a^Z", "left-ep", "right-ep"
    Word window;       ///< materialized window of the requested length
    bool derived;      ///< true when obtained by suffix analysis rather than a closed form
};

/// Generators of the eventually periodic part: a^Z, the left generator
/// a^inf . rho^inf(b) (right half windows), and the right generator
/// w^- . a^inf (left half windows, trailing a-run stripped).
inline std::vector<EpGenerator> eventually_periodic_generators(
    const Substitution& s, long long window_length, long long budget = default_length_budget) {
    if (!s.almost_primitive())
        throw precondition_error("eventually_periodic_generators: needs almost primitive input");
    std::vector<EpGenerator> out;
    out.push_back({"a^Z", Word(static_cast<std::size_t>(window_length), sym_a), false});

    long long n = 1;
    while (iterate_length(s, sym_b, n) < window_length) ++n;
    Word w = iterate(s, sym_b, n, budget);
    out.push_back({"left-ep", Word(w.begin(), w.begin() + window_length), false});

    // Right generator: rho^n(b) with its trailing a-run stripped is a suffix of
    // the next level's stripped word, so suffixes converge to w^-.
    Word stripped = w;
    while (!stripped.empty() && stripped.back() == sym_a) stripped.pop_back();
    while (static_cast<long long>(stripped.size()) < window_length) {
        ++n;
        if (iterate_length(s, sym_b, n) > budget) break;
        stripped = iterate(s, sym_b, n, budget);
        while (!stripped.empty() && stripped.back() == sym_a) stripped.pop_back();
    }
    if (static_cast<long long>(stripped.size()) >= window_length)
        out.push_back({"right-ep",
                       Word(stripped.end() - window_length, stripped.end()), true});
    return out;
}

}  // namespace aps
