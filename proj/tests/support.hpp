#pragma once

// Shared fixtures and brute-force oracles for the unit tests.

#include "skelmetric/currents.hpp"
#include "skelmetric/error.hpp"
#include "skelmetric/generate.hpp"
#include "skelmetric/graph.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <string>
#include <vector>

namespace testing {

using namespace skelmetric;

// "module::Kind" of the Error thrown by f, empty if none.
template <class F>
std::string error_name(F&& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.name();
    }
    return {};
}

inline Graph theta() {
    Graph g;
    g.add_vertex("x");
    g.add_vertex("y");
    g.add_edge("a", "x", "y");
    g.add_edge("b", "x", "y");
    g.add_edge("c", "x", "y");
    return g;
}

// Self-loop a at x, bridge b, self-loop c at y.
inline Graph dumbbell() {
    Graph g;
    g.add_vertex("x");
    g.add_vertex("y");
    g.add_edge("a", "x", "x");
    g.add_edge("b", "x", "y");
    g.add_edge("c", "y", "y");
    return g;
}

inline Graph k4() {
    Graph g;
    for (const char* v : {"0", "1", "2", "3"})
        g.add_vertex(v);
    int n = 0;
    for (VertexIndex u = 0; u < 4; ++u)
        for (VertexIndex v = u + 1; v < 4; ++v)
            g.add_edge("k" + std::to_string(n++), u, v);
    return g;
}

inline Graph path_tree(std::size_t vertices) {
    Graph g;
    for (std::size_t v = 0; v < vertices; ++v)
        g.add_vertex("p" + std::to_string(v));
    for (std::size_t v = 1; v < vertices; ++v)
        g.add_edge("q" + std::to_string(v), v - 1, v);
    return g;
}

inline MetricGraph with_lengths(const Graph& g, std::vector<Rational> lengths) { return MetricGraph(g, std::move(lengths)); }

// Arbitrary multigraph (self-loops, parallel edges, isolated vertices allowed).
inline Graph random_multigraph(generate::Rng& rng, std::size_t max_vertices, std::size_t max_edges) {
    Graph g;
    const auto n = static_cast<std::size_t>(rng.uniform(1, static_cast<std::int64_t>(max_vertices)));
    for (std::size_t v = 0; v < n; ++v)
        g.add_vertex("v" + std::to_string(v));
    const auto m = rng.uniform(0, static_cast<std::int64_t>(max_edges));
    for (std::int64_t e = 0; e < m; ++e)
        g.add_edge("e" + std::to_string(e), static_cast<VertexIndex>(rng.uniform(0, static_cast<std::int64_t>(n) - 1)),
                   static_cast<VertexIndex>(rng.uniform(0, static_cast<std::int64_t>(n) - 1)));
    return g;
}

// Connected variant: a random spanning tree plus random extra edges.
inline Graph random_connected_multigraph(generate::Rng& rng, std::size_t max_vertices, std::size_t extra_edges) {
    Graph g;
    const auto n = static_cast<std::size_t>(rng.uniform(1, static_cast<std::int64_t>(max_vertices)));
    for (std::size_t v = 0; v < n; ++v)
        g.add_vertex("v" + std::to_string(v));
    std::size_t e = 0;
    for (std::size_t v = 1; v < n; ++v)
        g.add_edge("e" + std::to_string(e++), static_cast<VertexIndex>(rng.uniform(0, static_cast<std::int64_t>(v) - 1)), v);
    const auto extra = rng.uniform(0, static_cast<std::int64_t>(extra_edges));
    for (std::int64_t k = 0; k < extra; ++k)
        g.add_edge("e" + std::to_string(e++), static_cast<VertexIndex>(rng.uniform(0, static_cast<std::int64_t>(n) - 1)),
                   static_cast<VertexIndex>(rng.uniform(0, static_cast<std::int64_t>(n) - 1)));
    return g;
}

// Edge sets of all simple cycles, by testing every subset of edges: a subset
// is a simple cycle iff it is connected and every touched vertex meets it
// exactly twice (a self-loop counting twice).
inline std::set<std::vector<EdgeIndex>> brute_force_cycles(const Graph& g) {
    std::set<std::vector<EdgeIndex>> out;
    const std::size_t m = g.edge_count();
    for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << m); ++mask) {
        std::vector<EdgeIndex> edges;
        std::vector<int> degree(g.vertex_count(), 0);
        for (EdgeIndex e = 0; e < m; ++e)
            if (mask >> e & 1) {
                edges.push_back(e);
                ++degree[g.edge(e).u];
                ++degree[g.edge(e).v];
            }
        if (std::any_of(degree.begin(), degree.end(), [](int d) { return d != 0 && d != 2; }))
            continue;
        // Connectivity of the chosen edges by repeated relaxation.
        std::vector<bool> reach(g.vertex_count(), false);
        reach[g.edge(edges.front()).u] = true;
        for (bool grew = true; grew;) {
            grew = false;
            for (EdgeIndex e : edges) {
                const auto& ed = g.edge(e);
                if (reach[ed.u] != reach[ed.v]) {
                    reach[ed.u] = reach[ed.v] = true;
                    grew = true;
                }
            }
        }
        bool connected = true;
        for (VertexIndex v = 0; v < g.vertex_count(); ++v)
            if (degree[v] != 0 && !reach[v])
                connected = false;
        if (connected)
            out.insert(edges);
    }
    return out;
}

// Random tree window around a marked line: a path of `line_edges` edges whose
// ends are boundary leaves, with random branches grown off the line until
// they are at least `depth` away from it. Branch tips are boundary too.
inline currents::TreeWindow random_line_window(generate::Rng& rng, std::size_t line_edges, const Rational& depth) {
    Graph g;
    std::vector<Rational> lengths;
    std::vector<Rational> away;  // distance to the line
    auto vertex = [&](const Rational& d) {
        const auto v = g.add_vertex("w" + std::to_string(g.vertex_count()));
        away.push_back(d);
        return v;
    };
    auto edge = [&](VertexIndex a, VertexIndex b) {
        g.add_edge("f" + std::to_string(g.edge_count()), a, b);
        lengths.push_back(rng.rational(Rational(1, 4), 2, 4));
        return lengths.back();
    };
    std::vector<OrientedEdge> line;
    VertexIndex at = vertex(0);
    for (std::size_t k = 0; k < line_edges; ++k) {
        const VertexIndex next = vertex(0);
        edge(at, next);
        line.push_back({g.edge_count() - 1, true});
        at = next;
    }
    std::vector<VertexIndex> grow;
    for (VertexIndex v = 1; v < line_edges; ++v)
        grow.push_back(v);
    while (!grow.empty()) {
        const VertexIndex v = grow.back();
        grow.pop_back();
        const auto children = rng.uniform(1, 2);
        for (std::int64_t c = 0; c < children; ++c) {
            const VertexIndex w = vertex(0);
            away[w] = away[v] + edge(v, w);
            if (away[w] < depth)
                grow.push_back(w);
        }
    }
    std::vector<bool> boundary(g.vertex_count(), false);
    for (VertexIndex v = 0; v < g.vertex_count(); ++v)
        boundary[v] = valency(g, v) == 1;
    return currents::TreeWindow(MetricGraph(std::move(g), std::move(lengths)), std::move(boundary), std::move(line), 0);
}

// r = p^(-v) compared with p^(-(k + j/(p-1))) by integers: v = a/b against
// (k(p-1) + j)/(p-1).
inline int compare_radius_exponent(const Rational& v, long long k, long long j, unsigned p) {
    const Integer lhs = numerator(v) * (p - 1);
    const Integer rhs = denominator(v) * (k * (p - 1) + j);
    return lhs < rhs ? -1 : (lhs > rhs ? 1 : 0);
}

// Number i with p^i preimages, by membership in the itemized radius
// intervals, each boundary radius going to the side with fewer preimages:
//   i = 0           r >= p^(-p/(p-1))
//   1 <= i <= e-1   p^(-i-p/(p-1)) <= r < p^(-i-1/(p-1))
//   i = e           r < p^(-e-1/(p-1))
inline unsigned itemized_exponent(unsigned p, unsigned e, const Rational& v) {
    if (e == 0 || compare_radius_exponent(v, 1, 1, p) <= 0)
        return 0;
    for (unsigned i = 1; i + 1 <= e; ++i)
        if (compare_radius_exponent(v, i, 1, p) > 0 && compare_radius_exponent(v, i + 1, 1, p) <= 0)
            return i;
    return e;
}

struct SearchedParameters {
    long long n, l, m;
};

// (n, l, m) found by walking the integers upward and testing each displayed
// constraint directly.
inline SearchedParameters search_parameters(const Rational& va, const Rational& vb, unsigned p) {
    const Rational gap = va > vb ? va - vb : vb - va;
    long long n = 1;
    while (std::gcd(n, static_cast<long long>(p)) != 1 || Rational(n) * gap * p < va * vb * (p - 1))
        ++n;
    auto l_ok = [&](long long l, const Rational& v) { return Rational(l) >= 1 + Rational(2 * n * p) / ((p - 1) * v); };
    long long l = 1;
    while (!l_ok(l, va) || !l_ok(l, vb))
        ++l;
    long long m = 1;
    while (m * n < 2 * l)
        ++m;
    return {n, l, m};
}

}  // namespace testing
