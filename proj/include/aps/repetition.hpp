#pragma once
/** @file repetition.hpp
 *  The b-index of the substitution language: a finite decision procedure for
 *  "Ind_b > n" over return-alphabet hosts, integer bracketing of the index,
 *  the Gordon power criterion, and reduction of long power witnesses to
 *  length at most r-1.
 */

#include <algorithm>
#include <set>
#include <string>
#include <vector>

#include "aps/errors.hpp"
#include "aps/returnwords.hpp"
#include "aps/substitution.hpp"
#include "aps/words.hpp"

namespace aps {

/// All values f^t(k_i) with t >= m that do not exceed `bound`, sorted and
/// deduplicated. Terminates because f is nondecreasing and strictly
/// increasing except at the fixed point 0 of the k_r = 0 case.
inline std::vector<Symbol> f_image_letters(const Substitution& s, long long m, Symbol bound) {
    std::set<Symbol> out;
    for (std::size_t i = 0; i + 1 < s.ks.size(); ++i) {
        Symbol v;
        try {
            v = f_apply(s, s.ks[i], m);
        } catch (const budget_error&) {
            continue;  // already beyond any representable bound
        }
        while (v <= bound) {
            out.insert(v);
            Symbol next = f_apply(s, v);
            if (next == v) break;
            v = next;
        }
    }
    return {out.begin(), out.end()};
}

/// Exact legality test for return-alphabet words: the two-sided sequence
/// decomposes at level m into blocks beta(m) separated by single letters from
/// f^m of the alphabet, so a word of length <= r^m - 1 is legal iff it is a
/// subword of beta(m) k' beta(m) for such a k' (or of beta(m) itself).
inline bool legal_return_word(const Substitution& s, const Word& y,
                              long long budget = default_length_budget) {
    if (y.empty()) return true;
    Symbol biggest = *std::max_element(y.begin(), y.end());
    if (biggest < 0) return false;
    long long m = 2, span = s.r() * s.r();
    while (span - 1 < static_cast<long long>(y.size())) {
        span = detail::sat_mul(span, s.r());
        ++m;
        if (span - 1 > budget) throw budget_error("legal_return_word: word exceeds budget", span - 1);
    }
    Word blk = beta(s, m, budget);
    if (contains(blk, y)) return true;
    for (Symbol k : f_image_letters(s, m, biggest)) {
        Word host = blk;
        host.push_back(k);
        host.insert(host.end(), blk.begin(), blk.end());
        if (contains(host, y)) return true;
    }
    return false;
}

/// Verdict of the finite power test at integer threshold n.
struct IndexVerdict {
    long long threshold;
    bool exceeded;
    Word witness_y;  ///< |y| <= r-1, y^n inside the host (when exceeded)
    Word host;       ///< beta(2) or a rotation of beta(2) k, k in f^2-image
};

/// Ind_b > n holds iff some legal y with |y| <= r-1 has y^n inside beta(2)
/// or inside a cyclic rotation of beta(2) k with k in the f^2-image of the
/// alphabet, k <= k_max.
inline IndexVerdict index_b_exceeds(const Substitution& s, long long n) {
    if (!s.almost_primitive())
        throw precondition_error("index_b_exceeds: needs almost primitive input");
    if (n < 1) throw input_error("index_b_exceeds: n >= 1 required");
    const long long r = s.r();
    std::vector<Word> hosts = {beta(s, 2)};
    for (Symbol k : f_image_letters(s, 2, s.k_max())) {
        Word base = hosts[0];
        base.push_back(k);
        for (std::size_t rot = 0; rot < base.size(); ++rot) {
            Word h(base.begin() + static_cast<long long>(rot), base.end());
            h.insert(h.end(), base.begin(), base.begin() + static_cast<long long>(rot));
            hosts.push_back(std::move(h));
        }
    }
    std::set<Word> seen;
    for (const Word& h : hosts) {
        for (std::size_t i = 0; i < h.size(); ++i) {
            for (long long len = 1; len <= r - 1 && i + len <= h.size(); ++len) {
                Word y(h.begin() + static_cast<long long>(i),
                       h.begin() + static_cast<long long>(i + len));
                if (!seen.insert(y).second) continue;
                if (!legal_return_word(s, y)) continue;
                Word power;
                for (long long t = 0; t < n; ++t) power.insert(power.end(), y.begin(), y.end());
                for (const Word& host : hosts)
                    if (contains(host, power)) return {n, true, y, host};
            }
        }
    }
    return {n, false, {}, {}};
}

/// Integer bracketing of Ind_b: the largest n with the power test positive is
/// a strict lower bound and n+1 an upper bound; equality at the upper bound
/// is decided by an attained-power scan of a deep iterate.
struct IndexBounds {
    long long lower;        ///< Ind_b > lower (witnessed)
    long long upper;        ///< Ind_b <= upper, valid when upper_valid
    bool upper_valid;       ///< false when every test up to n_max was positive
    bool equality;          ///< the upper bound is attained: Ind_b = upper
    Word witness_y;         ///< witness of the last positive test
};

inline IndexBounds index_b_bounds(const Substitution& s, long long n_max,
                                  long long budget = default_length_budget) {
    IndexBounds out{0, 0, false, false, {}};
    for (long long n = 1; n <= n_max; ++n) {
        IndexVerdict v = index_b_exceeds(s, n);
        if (!v.exceeded) {
            out.upper = n;
            out.upper_valid = true;
            break;
        }
        out.lower = n;
        out.witness_y = v.witness_y;
    }
    if (!out.upper_valid) return out;
    // attained-power scan: is some b-leading u with u^upper inside a deep
    // iterate? Then Ind_b >= upper, hence equality.
    Word w = iterate(s, sym_b, 6, budget);
    long long max_len = s.r() * (s.k_max() + 1);
    for (std::size_t i = 0; i < w.size() && !out.equality; ++i) {
        if (w[i] != sym_b) continue;
        for (long long len = 1; len <= max_len && !out.equality; ++len) {
            long long need = len * out.upper;
            if (static_cast<long long>(i) + need > static_cast<long long>(w.size())) break;
            bool ok = true;
            for (long long t = len; t < need && ok; ++t)
                if (w[i + static_cast<std::size_t>(t)] != w[i + static_cast<std::size_t>(t - len)])
                    ok = false;
            if (ok) out.equality = true;
        }
    }
    return out;
}

/// Gordon-type criterion: a word u starting with b such that u u u b is
/// legal; equivalent to the power test at threshold 3.
struct GordonVerdict {
    bool holds;
    Word witness_u;  ///< u = tau(y) with y the return-alphabet witness
};

inline GordonVerdict gordon_criterion(const Substitution& s,
                                      long long budget = default_length_budget) {
    IndexVerdict v = index_b_exceeds(s, 3);
    if (!v.exceeded) return {false, {}};
    Word u = tau_expand(s, v.witness_y).word;
    Word probe;
    for (int t = 0; t < 3; ++t) probe.insert(probe.end(), u.begin(), u.end());
    probe.push_back(sym_b);
    for (long long m = 2;; ++m) {
        if (iterate_length(s, sym_b, m) > budget)
            throw depth_error("gordon_criterion: witness not located within budget");
        Word w = iterate(s, sym_b, m, budget);
        if (contains(w, probe)) return {true, u};
    }
}

/// Reduce a power witness y (with y^n legal) to one of length <= r-1 along
/// the chain: divide the length by r while divisible; collapse to a single
/// letter when n >= 3; otherwise (n = 2) search the short lengths directly.
/// Each step is realized by scanning legal windows for a witness of the
/// target length.
inline Word reduce_power_witness(const Substitution& s, Word y, long long n,
                                 long long budget = default_length_budget) {
    if (n < 2) throw input_error("reduce_power_witness: n >= 2 required");
    auto power_of = [&](const Word& base) {
        Word p;
        for (long long t = 0; t < n; ++t) p.insert(p.end(), base.begin(), base.end());
        return p;
    };
    if (y.empty() || !legal_return_word(s, power_of(y), budget))
        throw input_error("reduce_power_witness: input power is not legal");
    const long long r = s.r();
    auto find_witness = [&](long long target_len) -> std::optional<Word> {
        // candidates live in level-m windows large enough to host the power
        long long m = 2, span = r * r;
        while (span - 1 < target_len * n) {
            span = detail::sat_mul(span, s.r());
            ++m;
        }
        Word blk = beta(s, m, budget);
        std::vector<Word> windows = {blk};
        for (Symbol k : f_image_letters(s, m, s.k_max())) {
            Word h = blk;
            h.push_back(k);
            h.insert(h.end(), blk.begin(), blk.end());
            windows.push_back(std::move(h));
        }
        std::set<Word> seen;
        for (const Word& h : windows)
            for (std::size_t i = 0; i + static_cast<std::size_t>(target_len) <= h.size(); ++i) {
                Word cand(h.begin() + static_cast<long long>(i),
                          h.begin() + static_cast<long long>(i + target_len));
                if (!seen.insert(cand).second) continue;
                if (legal_return_word(s, power_of(cand), budget)) return cand;
            }
        return std::nullopt;
    };
    while (static_cast<long long>(y.size()) > r - 1) {
        std::optional<Word> next;
        if (static_cast<long long>(y.size()) % r == 0) {
            next = find_witness(static_cast<long long>(y.size()) / r);
        } else if (n >= 3) {
            next = find_witness(1);
        } else {
            for (long long len = 1; len <= r - 1 && !next; ++len) next = find_witness(len);
        }
        if (!next) throw precondition_error("reduce_power_witness: reduction step found no witness");
        y = *next;
    }
    return y;
}

}  // namespace aps
