#include "skelmetric/covering.hpp"

#include "skelmetric/error.hpp"

#include <algorithm>
#include <array>
#include <deque>
#include <numeric>

namespace skelmetric::covering {

MetricGraph Covering::lift(const MetricGraph& base_metric) const {
    std::vector<Rational> lengths;
    lengths.reserve(total.edge_count());
    for (EdgeIndex e = 0; e < total.edge_count(); ++e)
        lengths.push_back(base_metric.length(edge_projection[e]));
    return MetricGraph(total, std::move(lengths));
}

namespace {

void require_no_cusps(const Graph& g) {
    if (g.cusp_count() != 0)
        throw Error("covering", "CuspsPresent", "coverings are built for graphs without cusps");
}

}  // namespace

std::vector<EdgeIndex> gauge_edges(const Graph& g) {
    std::vector<bool> tree_edge(g.edge_count(), false);
    std::vector<bool> seen(g.vertex_count(), false);
    for (VertexIndex root = 0; root < g.vertex_count(); ++root) {
        if (seen[root])
            continue;
        seen[root] = true;
        std::deque<VertexIndex> queue{root};
        while (!queue.empty()) {
            const VertexIndex x = queue.front();
            queue.pop_front();
            for (const auto& oe : g.out_edges(x)) {
                const VertexIndex y = g.head(oe);
                if (!seen[y]) {
                    seen[y] = true;
                    tree_edge[oe.edge] = true;
                    queue.push_back(y);
                }
            }
        }
    }
    std::vector<EdgeIndex> out;
    for (EdgeIndex e = 0; e < g.edge_count(); ++e)
        if (!tree_edge[e])
            out.push_back(e);
    return out;
}

Covering build_permutation_cover(const Graph& g, std::span<const Permutation> voltage) {
    require_no_cusps(g);
    if (voltage.size() != g.edge_count())
        throw Error("covering", "InvalidVoltage", "voltage must be given on every edge");
    const std::size_t degree = voltage.empty() ? 1 : voltage.front().size();
    Permutation identity(degree);
    std::iota(identity.begin(), identity.end(), std::uint8_t{0});
    for (const auto& perm : voltage) {
        Permutation sorted = perm;
        std::sort(sorted.begin(), sorted.end());
        if (sorted != identity)
            throw Error("covering", "InvalidVoltage", "voltage entries must be permutations of one degree");
    }
    Covering c;
    c.base = g;
    c.degree = degree;
    c.voltage.assign(voltage.begin(), voltage.end());
    for (VertexIndex v = 0; v < g.vertex_count(); ++v)
        for (std::size_t s = 0; s < degree; ++s) {
            c.total.add_vertex(g.vertices()[v] + "#" + std::to_string(s));
            c.vertex_projection.push_back(v);
        }
    for (EdgeIndex e = 0; e < g.edge_count(); ++e) {
        const Edge& edge = g.edge(e);
        for (std::size_t s = 0; s < degree; ++s) {
            c.total.add_edge(edge.id + "#" + std::to_string(s), edge.u * degree + s,
                             edge.v * degree + voltage[e][s]);
            c.edge_projection.push_back(e);
        }
    }
    return c;
}

Covering build_double_cover(const Graph& g, std::span<const int> voltage) {
    if (voltage.size() != g.edge_count())
        throw Error("covering", "InvalidVoltage", "voltage must be given on every edge");
    std::vector<Permutation> perms;
    perms.reserve(voltage.size());
    std::string word;
    for (int bit : voltage) {
        if (bit != 0 && bit != 1)
            throw Error("covering", "InvalidVoltage", "double-cover voltages must be 0 or 1");
        perms.push_back(bit ? Permutation{1, 0} : Permutation{0, 1});
        word.push_back(static_cast<char>('0' + bit));
    }
    Covering c = build_permutation_cover(g, perms);
    c.label = word;
    return c;
}

std::vector<Covering> enumerate_connected_double_covers(const Graph& g, const std::string& base_name) {
    require_no_cusps(g);
    if (!is_connected(g))
        throw Error("covering", "DisconnectedBase", "base graph must be connected");
    const auto gauge = gauge_edges(g);
    if (gauge.size() >= 31)
        throw Error("covering", "TooManyCovers", "first Betti number too large to enumerate covers");
    std::vector<Covering> out;
    const std::uint32_t classes = std::uint32_t{1} << gauge.size();
    out.reserve(classes - 1);
    for (std::uint32_t word = 1; word < classes; ++word) {
        std::vector<int> voltage(g.edge_count(), 0);
        std::string bits;
        for (std::size_t k = 0; k < gauge.size(); ++k) {
            const int bit = static_cast<int>((word >> (gauge.size() - 1 - k)) & 1U);
            voltage[gauge[k]] = bit;
            bits.push_back(static_cast<char>('0' + bit));
        }
        Covering c = build_double_cover(g, voltage);
        c.label = base_name + "." + bits;
        out.push_back(std::move(c));
    }
    return out;
}

std::size_t for_each_connected_triple_cover(const Graph& g, const std::function<bool(const Covering&)>& visit,
                                            const std::string& base_name) {
    require_no_cusps(g);
    if (!is_connected(g))
        throw Error("covering", "DisconnectedBase", "base graph must be connected");
    static const std::array<Permutation, 6> s3 = {Permutation{0, 1, 2}, Permutation{0, 2, 1}, Permutation{1, 0, 2},
                                                  Permutation{1, 2, 0}, Permutation{2, 0, 1}, Permutation{2, 1, 0}};
    const auto gauge = gauge_edges(g);
    std::vector<std::size_t> digits(gauge.size(), 0);
    std::size_t visited = 0;
    while (true) {
        // Advance the base-6 counter; the all-identity word is skipped.
        std::size_t k = gauge.size();
        while (k > 0) {
            --k;
            if (++digits[k] < 6)
                break;
            digits[k] = 0;
            if (k == 0)
                return visited;
        }
        if (gauge.empty())
            return visited;
        std::vector<Permutation> voltage(g.edge_count(), s3[0]);
        std::string word;
        for (std::size_t j = 0; j < gauge.size(); ++j) {
            voltage[gauge[j]] = s3[digits[j]];
            word.push_back(static_cast<char>('0' + digits[j]));
        }
        Covering c = build_permutation_cover(g, voltage);
        if (!c.connected())
            continue;
        c.label = base_name + ".s3." + word;
        ++visited;
        if (!visit(c))
            return visited;
    }
}

ConstraintRow push_loop(const Covering& cover, const Loop& loop) {
    try {
        validate_loop(cover.total, loop);
    } catch (const Error& e) {
        throw Error("covering", "LoopNotInTotal", e.what());
    }
    ConstraintRow row;
    row.coeffs.assign(cover.base.edge_count(), 0);
    for (const auto& step : loop.steps)
        ++row.coeffs[cover.edge_projection[step.edge]];
    return row;
}

Covering trivial_covering(const Graph& g, const std::string& base_name) {
    std::vector<Permutation> voltage(g.edge_count(), Permutation{0});
    Covering c = build_permutation_cover(g, voltage);
    c.label = base_name;
    return c;
}

}  // namespace skelmetric::covering
