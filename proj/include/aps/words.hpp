#pragma once
/** @file words.hpp
 *  Exact finite-word algebra over small-integer alphabets.
 *
 *  Symbols are integers: the binary alphabet maps a -> 0, b -> 1; return
 *  alphabets map each letter to its value, with a distinguished sentinel for
 *  the infinite letter. All operations are pure.
 */

#include <algorithm>
#include <cstdint>
#include <string>
#include <vector>

#include "aps/errors.hpp"
#include "aps/rational.hpp"

namespace aps {

using Symbol = long long;
using Word = std::vector<Symbol>;

/// Sentinel for the infinite return letter; never a valid finite value.
inline constexpr Symbol sym_inf = -1;

inline constexpr Symbol sym_a = 0;
inline constexpr Symbol sym_b = 1;

/// Parse a word over {a,b}.
inline Word word_ab(const std::string& s) {
    Word w;
    w.reserve(s.size());
    for (char c : s) {
        if (c == 'a') w.push_back(sym_a);
        else if (c == 'b') w.push_back(sym_b);
        else throw input_error(std::string("word_ab: unexpected character '") + c + "'");
    }
    return w;
}

/// Render a word over {a,b}.
inline std::string ab_string(const Word& w) {
    std::string s;
    s.reserve(w.size());
    for (Symbol x : w) {
        if (x == sym_a) s += 'a';
        else if (x == sym_b) s += 'b';
        else throw input_error("ab_string: symbol outside {a,b}");
    }
    return s;
}

/// Parse a word of single-digit return letters, e.g. "0102".
inline Word word_digits(const std::string& s) {
    Word w;
    w.reserve(s.size());
    for (char c : s) {
        if (c >= '0' && c <= '9') w.push_back(c - '0');
        else throw input_error(std::string("word_digits: unexpected character '") + c + "'");
    }
    return w;
}

/// Render a return word; multi-digit letters are space-separated, infinity prints as "inf".
inline std::string letters_string(const Word& w) {
    bool wide = false;
    for (Symbol x : w) wide = wide || x > 9 || x == sym_inf;
    std::string s;
    for (std::size_t i = 0; i < w.size(); ++i) {
        if (wide && i) s += ' ';
        s += w[i] == sym_inf ? std::string("inf") : std::to_string(w[i]);
    }
    return s;
}

inline Word concat(const Word& u, const Word& v) {
    Word w = u;
    w.insert(w.end(), v.begin(), v.end());
    return w;
}

inline Word reflect(const Word& u) {
    Word w(u.rbegin(), u.rend());
    return w;
}

inline bool is_palindrome(const Word& u) {
    return std::equal(u.begin(), u.begin() + u.size() / 2, u.rbegin());
}

/// Overlapping occurrence count of needle in haystack; empty needle rejected.
inline long long count_occurrences(const Word& haystack, const Word& needle) {
    if (needle.empty()) throw input_error("count_occurrences: empty needle");
    if (needle.size() > haystack.size()) return 0;
    long long n = 0;
    auto it = haystack.begin();
    const auto last = haystack.end() - (needle.size() - 1);
    while (it < last) {
        it = std::search(it, haystack.end(), needle.begin(), needle.end());
        if (it >= last) break;
        ++n;
        ++it;
    }
    return n;
}

inline bool contains(const Word& haystack, const Word& needle) {
    return std::search(haystack.begin(), haystack.end(), needle.begin(), needle.end()) != haystack.end();
}

/// A fractional power: base repeated floor(s) times plus the proper prefix of
/// length (s - floor(s))·|base|.
struct RationalPower {
    Word base;
    Rational exponent;

    Word realize() const {
        if (base.empty()) throw input_error("rational power: empty base");
        if (exponent < Rational(0)) throw input_error("rational power: negative exponent");
        long long total = (exponent * Rational(static_cast<long long>(base.size()))).num;
        if ((exponent * Rational(static_cast<long long>(base.size()))).den != 1)
            throw input_error("rational power: exponent not realizable over this base length");
        Word w;
        w.reserve(static_cast<std::size_t>(total));
        for (long long i = 0; i < total; ++i) w.push_back(base[static_cast<std::size_t>(i % base.size())]);
        return w;
    }
};

/// Largest rational s with base^s a subword of haystack; 0 if base is absent.
inline Rational max_power_of(const Word& haystack, const Word& base) {
    if (base.empty()) throw input_error("max_power_of: empty base");
    const long long n = static_cast<long long>(haystack.size());
    const long long m = static_cast<long long>(base.size());
    long long best = 0;
    for (long long j = 0; j < n; ++j) {
        long long len = 0;
        while (j + len < n && haystack[static_cast<std::size_t>(j + len)] == base[static_cast<std::size_t>(len % m)])
            ++len;
        best = std::max(best, len);
        if (best >= n - j) break;
    }
    if (best < m) return Rational(0);
    return Rational(best, m);
}

}  // namespace aps
