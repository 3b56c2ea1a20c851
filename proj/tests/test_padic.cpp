#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "skelmetric/padic.hpp"
#include "support.hpp"

using namespace skelmetric;
using namespace skelmetric::padic;
using testing::error_name;

namespace {

unsigned exponent(unsigned p, unsigned e, const Rational& v) { return preimage_exponent({p, e, Val(v)}); }

}  // namespace

TEST_CASE("split threshold") {
    CHECK(split_threshold(2, 1) == 2);
    CHECK(split_threshold(3, 2) == Rational(5, 2));
    CHECK(split_threshold(5, 0) == Rational(1, 4));
    CHECK(error_name([] { split_threshold(1, 1); }) == "padic::InvalidQuery");
}

TEST_CASE("preimage exponent examples") {
    CHECK(exponent(2, 1, 0) == 0);
    CHECK(exponent(3, 2, 3) == 2);
    CHECK(preimage_count({3, 2, Val(3)}) == 9);
    CHECK(exponent(3, 2, 1) == 0);
    for (unsigned p : {2u, 3u, 7u})
        for (int v : {0, 1, 5, 40})
            CHECK(exponent(p, 0, v) == 0);
    CHECK(preimage_exponent({5, 3, Val::infinity()}) == 3);
}

TEST_CASE("split ball examples") {
    CHECK(is_split_ball({2, 1, Val(3)}));
    CHECK_FALSE(is_split_ball({2, 1, Val(2)}));
    CHECK(is_split_ball({3, 0, Val(0)}));
    CHECK(error_name([] { is_split_ball({4, 1, Val(3)}); }) == "padic::InvalidQuery");
    CHECK(error_name([] { is_split_ball({3, 1, Val(-1)}); }) == "padic::InvalidQuery");
}

TEST_CASE("law agrees with the itemized intervals on a rational grid") {
    for (unsigned p : {2u, 3u, 5u, 7u})
        for (unsigned e = 0; e <= 5; ++e)
            for (long long den = 1; den <= 12; ++den)
                for (long long num = 0; num <= (e + 3) * den; ++num) {
                    const Rational v(num, den);
                    const unsigned i = exponent(p, e, v);
                    CHECK(i == testing::itemized_exponent(p, e, v));
                    CHECK(is_split_ball({p, e, Val(v)}) == (e == 0 || v > split_threshold(p, e)));
                    if (v > split_threshold(p, e))
                        CHECK(i == e);
                }
}

TEST_CASE("intervals tile and the law is monotone") {
    for (unsigned p : {2u, 3u, 5u}) {
        const Rational c(1, p - 1);
        // Upper end of interval i is i + p/(p-1); lower end of i + 1 is (i + 1) + 1/(p-1).
        for (int i = 0; i < 6; ++i)
            CHECK(Rational(i) + Rational(p, p - 1) == Rational(i + 1) + c);
        for (unsigned e = 1; e <= 5; ++e) {
            unsigned last = 0;
            CHECK(exponent(p, e, 0) == 0);
            for (long long num = 0; num <= 12 * (e + 3); ++num) {
                const unsigned i = exponent(p, e, Rational(num, 12));
                CHECK(i >= last);
                CHECK(i - last <= 1);
                last = i;
            }
            CHECK(last == e);
        }
    }
}

TEST_CASE("composition law through radius transport") {
    // z -> z^(p^(a+b)) is z -> z^(p^b) followed by z -> z^(p^a): a ball of
    // valuation v has p^(i_b(v)) preimages, each of valuation u with
    // T^b(u) = v, and each of those has p^(i_a(u)) preimages.
    for (unsigned p : {2u, 3u, 5u})
        for (unsigned a = 0; a <= 3; ++a)
            for (unsigned b = 0; a + b <= 4; ++b)
                for (long long num = 0; num <= 60; ++num) {
                    const Rational u(num, 12);
                    Val v(u);
                    for (unsigned k = 0; k < b; ++k)
                        v = transport_radius(p, v);
                    CHECK(exponent(p, a + b, v.value()) == exponent(p, b, v.value()) + exponent(p, a, u));
                }
}

TEST_CASE("radius transport") {
    CHECK(transport_radius(2, Val(Rational(1, 2))) == Val(1));        // r^p regime
    CHECK(transport_radius(3, Val(Rational(1, 2))) == Val(Rational(3, 2)));
    CHECK(transport_radius(3, Val(2)) == Val(3));                     // r/p regime
    CHECK(transport_radius(5, Val::infinity()).is_infinite());
}

TEST_CASE("valuations") {
    const Val inf = Val::infinity();
    CHECK((inf + Val(3)).is_infinite());
    CHECK(Val(Rational(1, 2)) + Val(Rational(1, 3)) == Val(Rational(5, 6)));
    CHECK(Val(100) < inf);
    CHECK(inf.str() == "inf");
    CHECK(Val(Rational(-3, 4)).str() == "-3/4");
    CHECK(error_name([&] { (void)inf.value(); }) == "padic::InfiniteValuation");
    CHECK(is_prime(2));
    CHECK(is_prime(97));
    CHECK_FALSE(is_prime(1));
    CHECK_FALSE(is_prime(91));
}

TEST_CASE("rational text") {
    CHECK(parse_rational("6/4") == Rational(3, 2));
    CHECK(parse_rational("-7") == -7);
    CHECK(to_string(Rational(4, 2)) == "2");
    CHECK(to_string(Rational(-1, 3)) == "-1/3");
    CHECK(error_name([] { parse_rational("1/0"); }) == "rational::Parse");
    CHECK(error_name([] { parse_rational("x"); }) == "rational::Parse");
    CHECK(error_name([] { parse_rational("1.5"); }) == "rational::Parse");
}
