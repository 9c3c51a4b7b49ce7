#pragma once

// Exact rational arithmetic for label indices, masses and confidence
// degrees. Everything in this library that looks like a number is one of
// these; no floating point is used anywhere, so worked results and golden
// tests compare exactly.
//
// Values are kept reduced (coprime numerator/denominator, denominator
// positive). Intermediates are computed in 128-bit and results must fit in
// 64-bit after reduction; anything larger throws std::overflow_error. The
// quantities handled here are small label indices and mass products, so an
// overflow always indicates misuse rather than a legitimate value.

#include <cstdint>
#include <numeric>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>

#include "qbel/errors.hpp"

namespace qbel {

class Rational {
public:
    constexpr Rational() : num_(0), den_(1) {}
    Rational(long long n) : num_(n), den_(1) {}
    Rational(long long n, long long d) { *this = make(n, d); }

    long long numerator() const { return num_; }
    long long denominator() const { return den_; }

    bool is_zero() const { return num_ == 0; }
    bool is_negative() const { return num_ < 0; }
    bool is_integer() const { return den_ == 1; }

    Rational operator-() const {
        Rational r;
        r.num_ = -num_;
        r.den_ = den_;
        return r;
    }

    friend Rational operator+(const Rational& a, const Rational& b) {
        return make(i128(a.num_) * b.den_ + i128(b.num_) * a.den_,
                    i128(a.den_) * b.den_);
    }
    friend Rational operator-(const Rational& a, const Rational& b) {
        return make(i128(a.num_) * b.den_ - i128(b.num_) * a.den_,
                    i128(a.den_) * b.den_);
    }
    friend Rational operator*(const Rational& a, const Rational& b) {
        return make(i128(a.num_) * b.num_, i128(a.den_) * b.den_);
    }
    friend Rational operator/(const Rational& a, const Rational& b) {
        if (b.num_ == 0)
            throw std::domain_error("rational division by zero");
        return make(i128(a.num_) * b.den_, i128(a.den_) * b.num_);
    }

    Rational& operator+=(const Rational& r) { return *this = *this + r; }
    Rational& operator-=(const Rational& r) { return *this = *this - r; }
    Rational& operator*=(const Rational& r) { return *this = *this * r; }
    Rational& operator/=(const Rational& r) { return *this = *this / r; }

    friend bool operator==(const Rational& a, const Rational& b) {
        return a.num_ == b.num_ && a.den_ == b.den_;
    }
    friend bool operator<(const Rational& a, const Rational& b) {
        return i128(a.num_) * b.den_ < i128(b.num_) * a.den_;
    }
    friend bool operator<=(const Rational& a, const Rational& b) { return !(b < a); }
    friend bool operator>(const Rational& a, const Rational& b) { return b < a; }
    friend bool operator>=(const Rational& a, const Rational& b) { return !(a < b); }

    /// Nearest integer, ties rounded away from zero: 1.5 -> 2, -1.5 -> -2.
    long long round_half_away() const {
        long long q = num_ / den_;
        long long r = num_ % den_;
        if (r < 0) r = -r;
        if (2 * r >= den_) q += (num_ < 0 ? -1 : 1);
        return q;
    }

    /// Canonical text form: "p" for integers, "p/q" otherwise.
    std::string str() const {
        if (den_ == 1) return std::to_string(num_);
        return std::to_string(num_) + "/" + std::to_string(den_);
    }

    /// Exact decimal form when the denominator is of shape 2^a*5^b
    /// ("0.3", "1.1", "0.25"), otherwise falls back to str().
    std::string decimal_str() const {
        long long d = den_;
        int twos = 0, fives = 0;
        while (d % 2 == 0) { d /= 2; ++twos; }
        while (d % 5 == 0) { d /= 5; ++fives; }
        if (d != 1) return str();
        int places = twos > fives ? twos : fives;
        if (places == 0) return std::to_string(num_);
        i128 scaled = i128(num_ < 0 ? -num_ : num_);
        for (int i = 0; i < places; ++i) scaled *= 10;
        scaled /= den_;
        std::string digits = to_digits(scaled);
        while (static_cast<int>(digits.size()) <= places)
            digits.insert(digits.begin(), '0');
        digits.insert(digits.end() - places, '.');
        if (num_ < 0) digits.insert(digits.begin(), '-');
        return digits;
    }

    /// Parses "p", "p/q" or an exact decimal like "0.3" / "-1.25".
    static Rational parse(std::string_view text) {
        std::size_t pos = 0;
        Rational value = parse_prefix(text, pos);
        if (pos != text.size())
            throw ParseError("trailing characters after number", pos + 1);
        return value;
    }

    /// Parses a rational starting at `pos`, advancing `pos` past it.
    static Rational parse_prefix(std::string_view text, std::size_t& pos) {
        const std::size_t start = pos;
        bool negative = false;
        if (pos < text.size() && (text[pos] == '-' || text[pos] == '+')) {
            negative = text[pos] == '-';
            ++pos;
        }
        long long int_part = parse_digits(text, pos);
        if (pos < text.size() && text[pos] == '/') {
            ++pos;
            long long den = parse_digits(text, pos);
            if (den == 0) throw ParseError("zero denominator", start + 1);
            return Rational(negative ? -int_part : int_part, den);
        }
        if (pos < text.size() && text[pos] == '.') {
            ++pos;
            std::size_t frac_start = pos;
            long long frac = parse_digits(text, pos);
            std::size_t places = pos - frac_start;
            i128 den = 1;
            for (std::size_t i = 0; i < places; ++i) den *= 10;
            i128 num = i128(int_part) * den + frac;
            return make(negative ? -num : num, den);
        }
        return Rational(negative ? -int_part : int_part);
    }

    friend Rational abs(const Rational& r) { return r.num_ < 0 ? -r : r; }

    friend std::ostream& operator<<(std::ostream& os, const Rational& r) {
        return os << r.str();
    }

private:
    __extension__ typedef __int128 i128;

    static Rational make(i128 n, i128 d) {
        if (d == 0) throw std::domain_error("rational division by zero");
        if (d < 0) { n = -n; d = -d; }
        i128 g = gcd128(n < 0 ? -n : n, d);
        if (g > 1) { n /= g; d /= g; }
        constexpr i128 lo = INT64_MIN, hi = INT64_MAX;
        if (n < lo || n > hi || d > hi)
            throw std::overflow_error("rational out of 64-bit range");
        Rational r;
        r.num_ = static_cast<long long>(n);
        r.den_ = static_cast<long long>(d);
        return r;
    }

    static i128 gcd128(i128 a, i128 b) {
        while (b != 0) {
            i128 t = a % b;
            a = b;
            b = t;
        }
        return a == 0 ? 1 : a;
    }

    static long long parse_digits(std::string_view text, std::size_t& pos) {
        if (pos >= text.size() || text[pos] < '0' || text[pos] > '9')
            throw ParseError("expected digit", pos + 1);
        i128 value = 0;
        while (pos < text.size() && text[pos] >= '0' && text[pos] <= '9') {
            value = value * 10 + (text[pos] - '0');
            if (value > INT64_MAX)
                throw std::overflow_error("number literal out of range");
            ++pos;
        }
        return static_cast<long long>(value);
    }

    static std::string to_digits(i128 v) {
        if (v == 0) return "0";
        std::string s;
        while (v > 0) {
            s.insert(s.begin(), static_cast<char>('0' + static_cast<int>(v % 10)));
            v /= 10;
        }
        return s;
    }

    long long num_;
    long long den_;
};

} // namespace qbel
