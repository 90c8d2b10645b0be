#pragma once
/** @file returnwords.hpp
 *  The return-word substitution over N union {inf}, the expansion map tau,
 *  the beta block recursion, generalized Toeplitz approximants, odometer
 *  addressing, and the induced first-return system.
 */

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "aps/errors.hpp"
#include "aps/substitution.hpp"
#include "aps/words.hpp"

namespace aps {

/// f(k) = k_r + p k on finite letters; f(inf) = inf. m-fold application.
inline Symbol f_apply(const Substitution& s, Symbol k, long long m = 1) {
    if (k == sym_inf) return sym_inf;
    if (k < 0) throw input_error("f_apply: negative letter");
    for (long long i = 0; i < m; ++i) {
        __int128 v = static_cast<__int128>(s.p) * k + s.k_last();
        if (v > (static_cast<__int128>(1) << 62))
            throw budget_error("f_apply: letter overflow", 1LL << 62);
        k = static_cast<Symbol>(v);
    }
    return k;
}

/// Letterwise image under the return substitution k -> k_1 ... k_{r-1} f(k).
inline Word rbar_apply(const Substitution& s, const Word& y) {
    if (s.r() < 2) throw precondition_error("rbar_apply: needs r >= 2");
    Word out;
    out.reserve(y.size() * static_cast<std::size_t>(s.r()));
    for (Symbol k : y) {
        for (long long i = 0; i + 1 < s.r(); ++i) out.push_back(s.ks[static_cast<std::size_t>(i)]);
        out.push_back(f_apply(s, k));
    }
    return out;
}

enum class ReadingSide { Right, Left };

struct TauExpansion {
    Word word;
    bool truncated = false;  ///< an infinite letter cut the expansion short
};

/// tau(k) = b a^k blockwise; an infinite letter truncates in reading direction.
///
/// Right-reading stops after emitting the b of the infinite block (b a^inf...).
/// Left-reading keeps only the blocks strictly after the last infinite letter
/// (... a^inf tau(tail)).
inline TauExpansion tau_expand(const Substitution& s, const Word& y,
                               ReadingSide side = ReadingSide::Right) {
    (void)s;
    TauExpansion out;
    std::size_t start = 0;
    if (side == ReadingSide::Left) {
        for (std::size_t i = 0; i < y.size(); ++i)
            if (y[i] == sym_inf) {
                start = i + 1;
                out.truncated = true;
            }
    }
    for (std::size_t i = start; i < y.size(); ++i) {
        Symbol k = y[i];
        out.word.push_back(sym_b);
        if (k == sym_inf) {
            out.truncated = true;
            break;
        }
        out.word.insert(out.word.end(), static_cast<std::size_t>(k), sym_a);
    }
    return out;
}

/// beta(n): the determined periodic block of the level-n approximant,
/// |beta(n)| = r^n - 1, built by
/// beta(n+1) = beta(n) f^n(k_1) ... beta(n) f^n(k_{r-1}) beta(n).
inline Word beta(const Substitution& s, long long n, long long budget = default_length_budget) {
    if (s.r() < 2) throw precondition_error("beta: needs r >= 2");
    if (n < 1) throw input_error("beta: n >= 1 required");
    long long len = 1;
    for (long long i = 0; i < n; ++i) len = detail::sat_mul(len, s.r());
    if (len - 1 > budget) throw budget_error("beta: length exceeds budget", len - 1);
    Word b(s.ks.begin(), s.ks.end() - 1);
    for (long long level = 1; level < n; ++level) {
        Word next = b;
        for (long long i = 0; i + 1 < s.r(); ++i) {
            next.push_back(f_apply(s, s.ks[static_cast<std::size_t>(i)], level));
            next.insert(next.end(), b.begin(), b.end());
        }
        b = std::move(next);
    }
    return b;
}

/// Finite odometer address: digits p_1 ... p_n in base r.
struct OdometerPrefix {
    long long radix;
    std::vector<long long> digits;

    OdometerPrefix(long long r, std::vector<long long> d) : radix(r), digits(std::move(d)) {
        if (radix < 2) throw input_error("odometer prefix: radix >= 2 required");
        for (long long x : digits)
            if (x < 0 || x >= radix) throw input_error("odometer prefix: digit out of range");
    }
    long long depth() const { return static_cast<long long>(digits.size()); }
};

/// q_n = -1 - sum p_m r^{m-1}.
inline long long q_of(const OdometerPrefix& prefix) {
    long long q = -1, pw = 1;
    for (long long d : prefix.digits) {
        q -= d * pw;
        pw *= prefix.radix;
    }
    return q;
}

/// A finite window of a Toeplitz approximant; '?' cells are nullopt.
struct ToeplitzWindow {
    long long offset = 0;                       ///< index of cells[0]
    std::vector<std::optional<Symbol>> cells;
};

inline std::string window_string(const ToeplitzWindow& w) {
    std::string s;
    for (std::size_t i = 0; i < w.cells.size(); ++i) {
        if (i) s += ' ';
        s += w.cells[i] ? letters_string({*w.cells[i]}) : std::string("?");
    }
    return s;
}

/// The level-n approximant restricted to [lo, hi]: r^n-periodic, equal to the
/// shifted periodic skeleton (beta(n) ?)^Z placed so that the undetermined
/// set is U_n = r^n Z + q_n.
inline ToeplitzWindow approximant_window(const Substitution& s, const OdometerPrefix& prefix,
                                         long long lo, long long hi,
                                         long long budget = default_length_budget) {
    if (prefix.radix != s.r()) throw input_error("approximant_window: radix mismatch");
    if (hi < lo) throw input_error("approximant_window: empty range");
    if (hi - lo + 1 > budget) throw budget_error("approximant_window: range exceeds budget", hi - lo + 1);
    long long n = prefix.depth();
    Word blk = beta(s, std::max<long long>(n, 1), budget);
    long long period = static_cast<long long>(blk.size()) + 1;
    long long q = q_of(prefix);
    ToeplitzWindow w;
    w.offset = lo;
    w.cells.reserve(static_cast<std::size_t>(hi - lo + 1));
    for (long long i = lo; i <= hi; ++i) {
        long long j = ((i - q - 1) % period + period) % period;
        if (n == 0 || j == period - 1) w.cells.push_back(std::nullopt);
        else w.cells.push_back(blk[static_cast<std::size_t>(j)]);
    }
    if (n == 0)
        for (auto& c : w.cells) c = std::nullopt;
    return w;
}

/// Result of odometer addressing; for type-0 substitutions integer addresses
/// are 2:1 and the ambiguity is reported instead of resolved.
struct AddressResult {
    OdometerPrefix prefix;
    bool type0_ambiguous = false;
};

/// Recover the unique digit prefix of depth n consistent with a fully
/// determined window (the inverse of approximant_window on determined cells).
inline AddressResult address_of(const Substitution& s, const ToeplitzWindow& window, long long n) {
    if (n < 1) throw input_error("address_of: depth >= 1 required");
    long long rn = 1;
    for (long long i = 0; i < n; ++i) rn = detail::sat_mul(rn, s.r());
    if (static_cast<long long>(window.cells.size()) < 2 * rn)
        throw input_error("address_of: window shorter than 2 r^n");
    for (const auto& c : window.cells)
        if (!c) throw input_error("address_of: window must be fully determined");

    std::vector<long long> digits;
    for (long long level = 1; level <= n; ++level) {
        Word blk = beta(s, level);
        long long period = static_cast<long long>(blk.size()) + 1;
        std::optional<long long> found;
        for (long long d = 0; d < s.r(); ++d) {
            digits.push_back(d);
            long long q = q_of(OdometerPrefix(s.r(), digits));
            bool ok = true;
            for (std::size_t idx = 0; idx < window.cells.size() && ok; ++idx) {
                long long i = window.offset + static_cast<long long>(idx);
                long long j = ((i - q - 1) % period + period) % period;
                if (j != period - 1 && *window.cells[idx] != blk[static_cast<std::size_t>(j)]) ok = false;
            }
            digits.pop_back();
            if (ok) {
                if (found) throw input_error("address_of: ambiguous window (too short to decide)");
                found = d;
            }
        }
        if (!found) throw input_error("address_of: window inconsistent with every digit");
        digits.push_back(*found);
    }
    return {OdometerPrefix(s.r(), digits), s.type0()};
}

/// One step of the induced first-return system on the b-cylinder.
struct InducedStep {
    bool exceptional = false;    ///< cursor sat on the infinite block (w = w^- . b a^inf)
    long long return_time = 0;   ///< t_b = 1 + k
    std::string successor;       ///< description of the image point when exceptional
};

/// Return time over the block b a^k at the cursor; the infinite letter signals
/// the exceptional branch whose image is a^inf . rho^inf(b).
inline InducedStep induced_shift(const Substitution& s, Symbol return_letter) {
    (void)s;
    if (return_letter == sym_inf) return {true, 0, "a^inf . rho^inf(b)"};
    if (return_letter < 0) throw input_error("induced_shift: negative letter");
    return {false, 1 + return_letter, ""};
}

/// Window form: cursor must sit on a b; returns the step to the next b.
inline InducedStep induced_shift(const Substitution& s, const Word& window, long long cursor) {
    if (cursor < 0 || cursor >= static_cast<long long>(window.size()) ||
        window[static_cast<std::size_t>(cursor)] != sym_b)
        throw input_error("induced_shift: cursor is not on a b cell");
    long long k = 0;
    for (long long i = cursor + 1; i < static_cast<long long>(window.size()); ++i) {
        if (window[static_cast<std::size_t>(i)] == sym_b) return induced_shift(s, k);
        ++k;
    }
    throw input_error("induced_shift: no next b inside the window");
}

}  // namespace aps
