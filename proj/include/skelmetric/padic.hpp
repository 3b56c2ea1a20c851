#pragma once

// Splitting law of the Kummer covering z -> z^(p^e) of G_m over the Berkovich
// point B(1, r), r = p^(-v).
//
// With c = 1/(p-1), a point of valuation v has p^i preimages where
//   i = 0            for v <= 1 + c,
//   i                for i + c < v <= i + 1 + c   (1 <= i <= e - 1),
//   i = e            for v > e + c,
// i.e. i = min(e, max(0, ceil(v - 1 - c))). A radius sitting exactly on a
// boundary belongs to the larger ball (fewer preimages), so the covering is
// split iff v > e + c strictly.

#include "skelmetric/rational.hpp"

namespace skelmetric::padic {

bool is_prime(unsigned long long n);

struct KummerQuery {
    unsigned p = 2;
    unsigned e = 0;
    Val v;

    /// Throws Error("padic", "InvalidQuery") unless p is prime and v >= 0.
    void validate() const;
};

/// e + 1/(p-1): the valuation above which B(1, p^-v) splits completely.
Rational split_threshold(unsigned p, unsigned e);

/// Exponent i with 0 <= i <= e; the preimage count of B(1, p^-v) is p^i.
unsigned preimage_exponent(const KummerQuery& q);

/// Preimage count p^i (exact, arbitrary size).
Integer preimage_count(const KummerQuery& q);

/// True iff the covering is split over B(1, p^-v): all p^e preimages present.
/// For e = 0 the covering is the identity and is split everywhere.
bool is_split_ball(const KummerQuery& q);

/// Valuation of the radius of the image ball under one z -> z^p step,
/// v' = min(p*v, v + 1).
Val transport_radius(unsigned p, const Val& v);

}  // namespace skelmetric::padic
