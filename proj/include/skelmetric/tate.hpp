#pragma once

// Edge lengths of punctured lines and the interval calculus that tells two
// punctured Tate curves apart by v_p(q).

#include "skelmetric/graph.hpp"
#include "skelmetric/rational.hpp"

#include <optional>
#include <set>
#include <string>

namespace skelmetric::tate {

/// Length of the single edge of the stable model of P^1 minus {0, 1, inf, lambda}
/// with v_p(lambda) = v_lambda > 0. Throws tate::GoodReduction for v_lambda <= 0.
Rational p1_edge_length(const Rational& v_lambda);

struct TateParams {
    unsigned p = 3;
    Rational v;   // v_p(q) > 0
    long long n = 1;
    long long l = 1;
    long long m = 1;

    /// gcd(n, p) = 1, l >= 1 + 2np/((p-1)v), m >= 2l/n. Throws tate::InvalidParams.
    void validate() const;
};

struct ParamPair {
    TateParams alpha;
    TateParams beta;
};

/// Smallest n prime to p with n >= v_a v_b (p-1) / (|v_b - v_a| p), then the
/// smallest l valid for both valuations, then the smallest m >= 2l/n.
/// Throws tate::NothingToDistinguish when v_alpha == v_beta.
ParamPair choose_parameters(const Rational& v_alpha, const Rational& v_beta, unsigned p);

struct SplitInterval {
    Rational lo;
    Rational hi;
    std::set<long long> integer_points;

    Rational length() const { return hi - lo; }
};

/// np / (v (p-1)): the half-width of the non-split zone around a branch cusp,
/// measured in circle steps.
Rational branch_margin(const TateParams& params);

/// [l + w, mn - w] with w = branch_margin.
SplitInterval interval_I1(const TateParams& params);
/// [w, l - w].
SplitInterval interval_I2(const TateParams& params);

struct DistinguishReport {
    ParamPair params;
    SplitInterval i1_alpha;
    SplitInterval i1_beta;
    bool sets_differ = false;
    Rational length_gap;  // lg(I1) for the larger v minus lg(I1) for the smaller v
};

/// Throws tate::NothingToDistinguish, or tate::InvariantViolated if a fact the
/// argument relies on fails.
DistinguishReport distinguish(const Rational& v_alpha, const Rational& v_beta, unsigned p);

/// Cycle on m*n vertices c0..c{mn-1}, every edge of length v/n, with n cusps
/// at every vertex.
MetricGraph circle_graph(const Rational& v, long long n, long long m);

struct TorsorPatterns {
    std::set<long long> t;         // vertices where T splits: integer points of I1
    std::set<long long> t_prime;   // integer points of I2
    std::set<long long> t_second;  // every vertex
};

TorsorPatterns torsor_basis_patterns(const TateParams& params);

struct WitnessCounts {
    unsigned e = 0;
    Integer alpha;
    Integer beta;
};

/// For 0 < v_alpha < v_beta (integers), e = v_beta - 1, preimage counts of
/// B(1, p^-v) under z -> z^(p^e). Throws tate::InvalidValuations, or
/// tate::Unsupported for p = 2 and e = 1.
WitnessCounts thm43_witness(const Rational& v_alpha, const Rational& v_beta, unsigned p);

}  // namespace skelmetric::tate
