#include "skelmetric/tate.hpp"

#include "skelmetric/error.hpp"
#include "skelmetric/padic.hpp"

#include <numeric>

namespace skelmetric::tate {

Rational p1_edge_length(const Rational& v_lambda) {
    if (v_lambda <= 0)
        throw Error("tate", "GoodReduction", "v_p(lambda) <= 0: good reduction, no edge");
    return v_lambda;
}

namespace {

long long ceil_ll(const Rational& q) { return ceil(q).convert_to<long long>(); }

Rational l_bound(long long n, unsigned p, const Rational& v) {
    return 1 + Rational(2 * n * static_cast<long long>(p)) / (Rational(p - 1) * v);
}

}  // namespace

void TateParams::validate() const {
    if (!padic::is_prime(p))
        throw Error("tate", "InvalidParams", "p must be prime");
    if (v <= 0 || n < 1 || l < 1 || m < 1)
        throw Error("tate", "InvalidParams", "v, n, l, m must be positive");
    if (std::gcd(n, static_cast<long long>(p)) != 1)
        throw Error("tate", "InvalidParams", "n must be prime to p");
    if (Rational(l) < l_bound(n, p, v))
        throw Error("tate", "InvalidParams", "l below 1 + 2np/((p-1)v)");
    if (Rational(m) < Rational(2 * l, n))
        throw Error("tate", "InvalidParams", "m below 2l/n");
}

ParamPair choose_parameters(const Rational& v_alpha, const Rational& v_beta, unsigned p) {
    if (!padic::is_prime(p))
        throw Error("tate", "InvalidParams", "p must be prime");
    if (v_alpha <= 0 || v_beta <= 0)
        throw Error("tate", "InvalidParams", "valuations must be positive");
    if (v_alpha == v_beta)
        throw Error("tate", "NothingToDistinguish", "v_alpha == v_beta");
    const Rational gap = abs(v_beta - v_alpha);
    const Rational n_bound = v_alpha * v_beta * (p - 1) / (gap * p);
    long long n = std::max(1LL, ceil_ll(n_bound));
    while (std::gcd(n, static_cast<long long>(p)) != 1)
        ++n;
    const long long l = std::max(ceil_ll(l_bound(n, p, v_alpha)), ceil_ll(l_bound(n, p, v_beta)));
    const long long m = ceil_ll(Rational(2 * l, n));
    ParamPair out{TateParams{p, v_alpha, n, l, m}, TateParams{p, v_beta, n, l, m}};
    out.alpha.validate();
    out.beta.validate();
    return out;
}

Rational branch_margin(const TateParams& params) {
    return Rational(params.n * static_cast<long long>(params.p)) / (params.v * (params.p - 1));
}

namespace {

SplitInterval make_interval(Rational lo, Rational hi) {
    SplitInterval out{std::move(lo), std::move(hi), {}};
    for (long long i = ceil_ll(out.lo); Rational(i) <= out.hi; ++i)
        out.integer_points.insert(i);
    return out;
}

}  // namespace

SplitInterval interval_I1(const TateParams& params) {
    params.validate();
    const Rational w = branch_margin(params);
    return make_interval(params.l + w, Rational(params.m * params.n) - w);
}

SplitInterval interval_I2(const TateParams& params) {
    params.validate();
    const Rational w = branch_margin(params);
    return make_interval(w, params.l - w);
}

DistinguishReport distinguish(const Rational& v_alpha, const Rational& v_beta, unsigned p) {
    DistinguishReport report;
    report.params = choose_parameters(v_alpha, v_beta, p);
    report.i1_alpha = interval_I1(report.params.alpha);
    report.i1_beta = interval_I1(report.params.beta);
    report.sets_differ = report.i1_alpha.integer_points != report.i1_beta.integer_points;
    const bool alpha_smaller = v_alpha < v_beta;
    const auto& small_v = alpha_smaller ? report.i1_alpha : report.i1_beta;
    const auto& large_v = alpha_smaller ? report.i1_beta : report.i1_alpha;
    report.length_gap = large_v.length() - small_v.length();
    if (!report.sets_differ)
        throw Error("tate", "InvariantViolated", "I1 integer point sets coincide");
    if (report.length_gap < 2)
        throw Error("tate", "InvariantViolated", "lg(I1) gap below 2");
    return report;
}

MetricGraph circle_graph(const Rational& v, long long n, long long m) {
    if (v <= 0 || n < 1 || m < 1)
        throw Error("tate", "InvalidParams", "circle_graph needs positive v, n, m");
    const long long count = m * n;
    Graph g;
    for (long long i = 0; i < count; ++i)
        g.add_vertex("c" + std::to_string(i));
    std::vector<Rational> lengths;
    for (long long i = 0; i < count; ++i) {
        g.add_edge("s" + std::to_string(i), static_cast<VertexIndex>(i), static_cast<VertexIndex>((i + 1) % count));
        lengths.push_back(v / n);
    }
    for (long long i = 0; i < count; ++i)
        for (long long k = 0; k < n; ++k)
            g.add_cusp("z" + std::to_string(i) + "_" + std::to_string(k), static_cast<VertexIndex>(i));
    return MetricGraph(std::move(g), std::move(lengths));
}

TorsorPatterns torsor_basis_patterns(const TateParams& params) {
    const auto i1 = interval_I1(params);
    const auto i2 = interval_I2(params);
    if (i1.integer_points.empty() || i2.integer_points.empty())
        throw Error("tate", "InvariantViolated", "split interval without integer points");
    if (!(i2.hi < i1.lo))
        throw Error("tate", "InvariantViolated", "I1 and I2 intersect");
    TorsorPatterns out;
    const long long count = params.m * params.n;
    for (long long i : i1.integer_points)
        if (i < count)
            out.t.insert(i);
    for (long long i : i2.integer_points)
        out.t_prime.insert(i);
    for (long long i = 0; i < count; ++i)
        out.t_second.insert(i);
    return out;
}

WitnessCounts thm43_witness(const Rational& v_alpha, const Rational& v_beta, unsigned p) {
    if (!(0 < v_alpha && v_alpha < v_beta))
        throw Error("tate", "InvalidValuations", "need 0 < v_alpha < v_beta");
    if (denominator(v_alpha) != 1 || denominator(v_beta) != 1)
        throw Error("tate", "InvalidValuations", "valuations of lambda - 1 are integers here");
    const unsigned e = (numerator(v_beta) - 1).convert_to<unsigned>();
    if (p == 2 && e == 1)
        throw Error("tate", "Unsupported", "p = 2, e = 1 is settled by comparing reduction graphs");
    WitnessCounts out;
    out.e = e;
    out.alpha = padic::preimage_count({p, e, Val(v_alpha)});
    out.beta = padic::preimage_count({p, e, Val(v_beta)});
    if (p != 2 && out.alpha == out.beta)
        throw Error("tate", "InvariantViolated", "preimage counts coincide");
    return out;
}

}  // namespace skelmetric::tate
