#pragma once
/** @file rational.hpp
 *  Minimal exact rational on 64-bit integers, normalized with positive denominator.
 */

#include <cstdint>
#include <numeric>
#include <ostream>
#include <string>

#include "aps/errors.hpp"

namespace aps {

struct Rational {
    long long num = 0;
    long long den = 1;

    constexpr Rational() = default;
    constexpr Rational(long long n) : num(n), den(1) {}
    Rational(long long n, long long d) : num(n), den(d) {
        if (den == 0) throw input_error("rational: zero denominator");
        if (den < 0) { num = -num; den = -den; }
        long long g = std::gcd(num < 0 ? -num : num, den);
        if (g > 1) { num /= g; den /= g; }
    }

    friend Rational operator+(Rational a, Rational b) { return {a.num * b.den + b.num * a.den, a.den * b.den}; }
    friend Rational operator-(Rational a, Rational b) { return {a.num * b.den - b.num * a.den, a.den * b.den}; }
    friend Rational operator*(Rational a, Rational b) { return {a.num * b.num, a.den * b.den}; }
    friend Rational operator/(Rational a, Rational b) {
        if (b.num == 0) throw input_error("rational: division by zero");
        return {a.num * b.den, a.den * b.num};
    }
    friend bool operator==(Rational a, Rational b) { return a.num == b.num && a.den == b.den; }
    friend bool operator!=(Rational a, Rational b) { return !(a == b); }
    friend bool operator<(Rational a, Rational b) { return a.num * b.den < b.num * a.den; }
    friend bool operator<=(Rational a, Rational b) { return a.num * b.den <= b.num * a.den; }
    friend bool operator>(Rational a, Rational b) { return b < a; }
    friend bool operator>=(Rational a, Rational b) { return b <= a; }

    double to_double() const { return static_cast<double>(num) / static_cast<double>(den); }
    long long floor() const {
        long long q = num / den;
        if (num % den != 0 && num < 0) --q;
        return q;
    }
    std::string str() const {
        return den == 1 ? std::to_string(num) : std::to_string(num) + "/" + std::to_string(den);
    }
    friend std::ostream& operator<<(std::ostream& os, Rational x) { return os << x.str(); }
};

}  // namespace aps
