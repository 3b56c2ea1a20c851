#include "skelmetric/rational.hpp"

#include "skelmetric/error.hpp"

#include <cctype>

namespace skelmetric {

namespace {

Integer parse_integer(std::string_view text, std::string_view whole) {
    std::size_t pos = 0;
    bool negative = false;
    if (pos < text.size() && (text[pos] == '-' || text[pos] == '+')) {
        negative = text[pos] == '-';
        ++pos;
    }
    if (pos == text.size())
        throw Error("rational", "Parse", "malformed rational '" + std::string(whole) + "'");
    Integer value = 0;
    for (; pos < text.size(); ++pos) {
        const char c = text[pos];
        if (!std::isdigit(static_cast<unsigned char>(c)))
            throw Error("rational", "Parse", "malformed rational '" + std::string(whole) + "'");
        value = value * 10 + (c - '0');
    }
    return negative ? Integer(-value) : value;
}

}  // namespace

Rational parse_rational(std::string_view text) {
    const auto slash = text.find('/');
    if (slash == std::string_view::npos)
        return Rational(parse_integer(text, text));
    const Integer num = parse_integer(text.substr(0, slash), text);
    const Integer den = parse_integer(text.substr(slash + 1), text);
    if (den == 0)
        throw Error("rational", "Parse", "zero denominator in '" + std::string(text) + "'");
    return Rational(num, den);
}

std::string to_string(const Rational& q) {
    const Integer den = denominator(q);
    if (den == 1)
        return numerator(q).str();
    return numerator(q).str() + "/" + den.str();
}

Integer floor(const Rational& q) {
    const Integer num = numerator(q);
    const Integer den = denominator(q);  // always positive
    Integer quot = num / den;            // truncates toward zero
    if (num < 0 && quot * den != num)
        quot -= 1;
    return quot;
}

Integer ceil(const Rational& q) { return -floor(-q); }

const Rational& Val::value() const {
    if (!value_)
        throw Error("padic", "InfiniteValuation", "valuation is +infinity");
    return *value_;
}

Val operator+(const Val& a, const Val& b) {
    if (a.is_infinite() || b.is_infinite())
        return Val::infinity();
    return Val(*a.value_ + *b.value_);
}

bool operator==(const Val& a, const Val& b) {
    if (a.is_infinite() || b.is_infinite())
        return a.is_infinite() == b.is_infinite();
    return *a.value_ == *b.value_;
}

std::strong_ordering operator<=>(const Val& a, const Val& b) {
    if (a.is_infinite() || b.is_infinite()) {
        if (a.is_infinite() && b.is_infinite())
            return std::strong_ordering::equal;
        return a.is_infinite() ? std::strong_ordering::greater : std::strong_ordering::less;
    }
    if (*a.value_ < *b.value_)
        return std::strong_ordering::less;
    if (*b.value_ < *a.value_)
        return std::strong_ordering::greater;
    return std::strong_ordering::equal;
}

std::string Val::str() const { return is_infinite() ? std::string("inf") : to_string(*value_); }

}  // namespace skelmetric
