#pragma once

// Finite topological coverings of a graph given by permutation voltages.
//
// A base edge e from u to v with voltage sigma lifts, for every sheet s, to an
// edge (u, s) -- (v, sigma(s)) named "<e>#<s>". Vertex (u, s) is "<u>#<s>".
// Degree-2 covers use voltages in Z/2 (0 = identity, 1 = swap).

#include "skelmetric/graph.hpp"

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

namespace skelmetric::covering {

using Permutation = std::vector<std::uint8_t>;

struct Covering {
    Graph base;
    Graph total;
    std::size_t degree = 0;
    std::vector<Permutation> voltage;               // per base edge
    std::vector<VertexIndex> vertex_projection;     // per total vertex
    std::vector<EdgeIndex> edge_projection;         // per total edge
    std::string label;                              // voltage word on the gauge edges

    bool connected() const { return is_connected(total); }
    /// Base lengths carried to both (all) lifts.
    MetricGraph lift(const MetricGraph& base_metric) const;
};

/// Coefficients indexed by base edge, and the measured length when known.
struct ConstraintRow {
    std::vector<int> coeffs;
    Rational rhs = 0;
};

/// Non-tree edges of the BFS spanning forest grown from the lowest vertex
/// index, in increasing edge order. Voltages on tree edges are fixed to the
/// identity, so voltage classes are words over these edges.
std::vector<EdgeIndex> gauge_edges(const Graph& g);

Covering build_permutation_cover(const Graph& g, std::span<const Permutation> voltage);

/// `voltage[e]` in {0, 1}. Throws covering::CuspsPresent / InvalidVoltage.
Covering build_double_cover(const Graph& g, std::span<const int> voltage);

/// All 2^b1 - 1 connected double covers, one per nonzero voltage word on the
/// gauge edges, ordered by the word read as a binary number with the first
/// gauge edge most significant. Label = base name + "." + word.
/// Throws covering::DisconnectedBase / CuspsPresent.
std::vector<Covering> enumerate_connected_double_covers(const Graph& g, const std::string& base_name = "G");

/// Visits connected degree-3 covers with voltages in S3 (gauge-fixed), in a
/// deterministic order, until `visit` returns false. Returns the number
/// visited.
std::size_t for_each_connected_triple_cover(const Graph& g, const std::function<bool(const Covering&)>& visit,
                                            const std::string& base_name = "G");

/// Coefficient of base edge e = number of lifts of e traversed by `loop`.
/// Throws covering::LoopNotInTotal.
ConstraintRow push_loop(const Covering& cover, const Loop& loop);

/// Identity covering of g (degree 1).
Covering trivial_covering(const Graph& g, const std::string& base_name = "G");

}  // namespace skelmetric::covering
