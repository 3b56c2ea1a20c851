#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <compare>
#include <optional>
#include <string>
#include <string_view>

namespace skelmetric {

using Integer = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

/// Parses "n", "n/d" or "-n/d". Throws Error("rational", "Parse") on bad input
/// or a zero denominator.
Rational parse_rational(std::string_view text);

/// "n/d" in lowest terms, "/d" omitted when d == 1.
std::string to_string(const Rational& q);

Integer floor(const Rational& q);
Integer ceil(const Rational& q);

inline Integer numerator(const Rational& q) { return boost::multiprecision::numerator(q); }
inline Integer denominator(const Rational& q) { return boost::multiprecision::denominator(q); }

/// An exact rational or +infinity. Used for p-adic valuations: the radius of a
/// ball is p^(-value), so +infinity is the degenerate radius 0.
class Val {
public:
    Val() = default;
    Val(const Rational& q) : value_(q) {}  // NOLINT(google-explicit-constructor)
    Val(long long n) : value_(Rational(n)) {}  // NOLINT(google-explicit-constructor)

    static Val infinity() {
        Val v;
        v.value_.reset();
        return v;
    }

    bool is_infinite() const noexcept { return !value_.has_value(); }
    /// Precondition: finite.
    const Rational& value() const;

    friend Val operator+(const Val& a, const Val& b);
    friend bool operator==(const Val& a, const Val& b);
    friend std::strong_ordering operator<=>(const Val& a, const Val& b);

    std::string str() const;

private:
    std::optional<Rational> value_{Rational(0)};
};

}  // namespace skelmetric
