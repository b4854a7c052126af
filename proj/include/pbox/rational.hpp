#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <compare>
#include <cstdint>
#include <ostream>
#include <string>
#include <string_view>

#include "pbox/error.hpp"

namespace pbox {

using BigInt = boost::multiprecision::cpp_int;

/// Exact rational number backed by arbitrary precision integers.
///
/// Values are kept in lowest terms with a positive denominator, so two
/// rationals are equal iff their numerators and denominators are equal.
/// Text form is "p/q", or just "p" when the denominator is 1.
class Rational {
public:
    Rational() = default;
    Rational(std::int64_t n) : value_(n) {} // NOLINT(google-explicit-constructor)
    explicit Rational(const BigInt& n) : value_(n) {}

    Rational(const BigInt& num, const BigInt& den)
    {
        if (den == 0) {
            throw DomainError("rational with zero denominator");
        }
        value_ = Impl(num, den);
    }

    /// Accepts "p/q" or "p" with an optional leading '-' on p. Decimal
    /// notation, whitespace and signed denominators are rejected.
    static Rational parse(std::string_view text)
    {
        auto slash = text.find('/');
        auto num_text = text.substr(0, slash);
        auto den_text = slash == std::string_view::npos ? std::string_view{} : text.substr(slash + 1);
        if (!is_integer(num_text, true) || (slash != std::string_view::npos && !is_integer(den_text, false))) {
            throw ParseError("malformed rational \"" + std::string(text) + "\"");
        }
        BigInt num{std::string(num_text)};
        BigInt den = slash == std::string_view::npos ? BigInt(1) : BigInt(std::string(den_text));
        if (den == 0) {
            throw ParseError("malformed rational \"" + std::string(text) + "\": zero denominator");
        }
        return Rational(num, den);
    }

    BigInt numerator() const { return boost::multiprecision::numerator(value_); }
    BigInt denominator() const { return boost::multiprecision::denominator(value_); }

    bool is_zero() const { return value_ == 0; }
    bool is_integer() const { return denominator() == 1; }
    int sign() const { return value_.sign(); }

    std::string str() const
    {
        auto den = denominator();
        if (den == 1) {
            return numerator().str();
        }
        return numerator().str() + "/" + den.str();
    }

    double to_double() const { return value_.convert_to<double>(); }

    Rational& operator+=(const Rational& o) { value_ += o.value_; return *this; }
    Rational& operator-=(const Rational& o) { value_ -= o.value_; return *this; }
    Rational& operator*=(const Rational& o) { value_ *= o.value_; return *this; }
    Rational& operator/=(const Rational& o)
    {
        if (o.is_zero()) {
            throw DomainError("division by zero");
        }
        value_ /= o.value_;
        return *this;
    }

    friend Rational operator+(Rational a, const Rational& b) { return a += b; }
    friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
    friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
    friend Rational operator/(Rational a, const Rational& b) { return a /= b; }
    friend Rational operator-(const Rational& a) { Rational r; r.value_ = -a.value_; return r; }

    friend bool operator==(const Rational& a, const Rational& b) { return a.value_ == b.value_; }
    friend std::strong_ordering operator<=>(const Rational& a, const Rational& b)
    {
        if (a.value_ < b.value_) return std::strong_ordering::less;
        if (b.value_ < a.value_) return std::strong_ordering::greater;
        return std::strong_ordering::equal;
    }

    friend std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.str(); }

private:
    using Impl = boost::multiprecision::cpp_rational;

    static bool is_integer(std::string_view s, bool allow_sign)
    {
        if (allow_sign && !s.empty() && s.front() == '-') {
            s.remove_prefix(1);
        }
        if (s.empty()) {
            return false;
        }
        for (char ch : s) {
            if (ch < '0' || ch > '9') {
                return false;
            }
        }
        return true;
    }

    Impl value_;
};

inline Rational abs(const Rational& r) { return r.sign() < 0 ? -r : r; }

namespace literals {
inline Rational operator""_q(const char* text, std::size_t len) { return Rational::parse({text, len}); }
inline Rational operator""_q(unsigned long long v) { return Rational(BigInt(v)); }
} // namespace literals

} // namespace pbox
