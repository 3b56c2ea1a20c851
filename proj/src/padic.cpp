#include "skelmetric/padic.hpp"

#include "skelmetric/error.hpp"

#include <algorithm>

namespace skelmetric::padic {

bool is_prime(unsigned long long n) {
    if (n < 2)
        return false;
    for (unsigned long long d = 2; d * d <= n; ++d)
        if (n % d == 0)
            return false;
    return true;
}

void KummerQuery::validate() const {
    if (!is_prime(p))
        throw Error("padic", "InvalidQuery", "p = " + std::to_string(p) + " is not prime");
    if (v < Val(0))
        throw Error("padic", "InvalidQuery", "valuation must be >= 0, got " + v.str());
}

Rational split_threshold(unsigned p, unsigned e) {
    if (p < 2)
        throw Error("padic", "InvalidQuery", "p must be >= 2");
    return Rational(e) + Rational(1, p - 1);
}

unsigned preimage_exponent(const KummerQuery& q) {
    q.validate();
    if (q.e == 0)
        return 0;
    if (q.v.is_infinite())
        return q.e;
    // Each z -> z^p step that splits lowers the valuation by one; a step splits
    // iff the current valuation exceeds p/(p-1) = 1 + 1/(p-1).
    const Rational shifted = q.v.value() - split_threshold(q.p, 1);
    const Integer steps = ceil(shifted);
    if (steps <= 0)
        return 0;
    if (steps >= q.e)
        return q.e;
    return steps.convert_to<unsigned>();
}

Integer preimage_count(const KummerQuery& q) {
    return boost::multiprecision::pow(Integer(q.p), preimage_exponent(q));
}

bool is_split_ball(const KummerQuery& q) { return preimage_exponent(q) == q.e; }

Val transport_radius(unsigned p, const Val& v) {
    if (v.is_infinite())
        return v;
    return Val(std::min<Rational>(Rational(p) * v.value(), v.value() + 1));
}

}  // namespace skelmetric::padic
