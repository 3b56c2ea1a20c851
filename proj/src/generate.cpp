#include "skelmetric/generate.hpp"

#include "skelmetric/error.hpp"

#include <algorithm>
#include <limits>

namespace skelmetric::generate {

std::int64_t Rng::uniform(std::int64_t lo, std::int64_t hi) {
    if (hi < lo)
        throw Error("generate", "InvalidArgument", "empty range");
    const auto span = static_cast<std::uint64_t>(hi - lo) + 1;
    if (span == 0)
        return static_cast<std::int64_t>(engine_());
    // Rejection keeps the draw exactly uniform.
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % span;
    std::uint64_t x;
    do
        x = engine_();
    while (x >= limit);
    return lo + static_cast<std::int64_t>(x % span);
}

Rational Rng::rational(const Rational& lo, const Rational& hi, std::int64_t max_den) {
    for (;;) {
        const std::int64_t den = uniform(1, max_den);
        const auto a = ceil(lo * den).convert_to<std::int64_t>();
        const auto b = floor(hi * den).convert_to<std::int64_t>();
        if (a <= b)
            return Rational(uniform(a, b), den);
    }
}

Graph min_valency3_graph(Rng& rng, std::size_t max_edges) {
    if (max_edges < 2)
        throw Error("generate", "InvalidArgument", "min valency 3 needs at least 2 edges");
    for (;;) {
        const auto vertices = static_cast<std::size_t>(rng.uniform(1, static_cast<std::int64_t>(2 * max_edges / 3)));
        std::vector<std::pair<VertexIndex, VertexIndex>> ends;
        std::vector<std::size_t> valency(vertices, 0);
        auto join = [&](VertexIndex u, VertexIndex v) {
            ends.emplace_back(u, v);
            ++valency[u];
            ++valency[v];
        };
        for (VertexIndex v = 1; v < vertices; ++v)
            join(static_cast<VertexIndex>(rng.uniform(0, static_cast<std::int64_t>(v) - 1)), v);
        for (;;) {
            std::vector<VertexIndex> low;
            for (VertexIndex v = 0; v < vertices; ++v)
                if (valency[v] < 3)
                    low.push_back(v);
            if (low.empty())
                break;
            const VertexIndex u = low[static_cast<std::size_t>(rng.uniform(0, static_cast<std::int64_t>(low.size()) - 1))];
            const VertexIndex v = static_cast<VertexIndex>(rng.uniform(0, static_cast<std::int64_t>(vertices) - 1));
            join(u, v);
        }
        if (ends.size() > max_edges)
            continue;
        const auto extra = rng.uniform(0, static_cast<std::int64_t>(std::min<std::size_t>(2, max_edges - ends.size())));
        for (std::int64_t k = 0; k < extra; ++k)
            join(static_cast<VertexIndex>(rng.uniform(0, static_cast<std::int64_t>(vertices) - 1)),
                 static_cast<VertexIndex>(rng.uniform(0, static_cast<std::int64_t>(vertices) - 1)));
        Graph g;
        for (VertexIndex v = 0; v < vertices; ++v)
            g.add_vertex("v" + std::to_string(v));
        for (std::size_t e = 0; e < ends.size(); ++e)
            g.add_edge("e" + std::to_string(e), ends[e].first, ends[e].second);
        return g;
    }
}

MetricGraph with_random_lengths(Rng& rng, const Graph& g, std::int64_t max_den) {
    std::vector<Rational> lengths;
    for (std::size_t e = 0; e < g.edge_count(); ++e)
        lengths.push_back(rng.rational(Rational(1, max_den), 1, max_den));
    return MetricGraph(g, std::move(lengths));
}

}  // namespace skelmetric::generate
