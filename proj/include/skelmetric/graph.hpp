#pragma once

#include "skelmetric/rational.hpp"

#include <compare>
#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace skelmetric {

using VertexIndex = std::size_t;
using EdgeIndex = std::size_t;

inline constexpr std::size_t kDefaultMaxLoops = 1'000'000;

struct Edge {
    std::string id;
    VertexIndex u = 0;
    VertexIndex v = 0;

    bool is_self_loop() const noexcept { return u == v; }
};

/// Half-edge with a single branch.
struct Cusp {
    std::string id;
    VertexIndex end = 0;
};

/// An edge traversed u -> v (forward) or v -> u.
struct OrientedEdge {
    EdgeIndex edge = 0;
    bool forward = true;

    OrientedEdge reversed() const noexcept { return {edge, !forward}; }
    friend auto operator<=>(const OrientedEdge&, const OrientedEdge&) = default;
};

/// Finite semigraph: multigraph with self-loops, parallel edges and cusps.
/// Elements are addressed by dense indices in insertion order; ids are opaque
/// strings used for I/O. Canonical orderings ("smallest edge") use the index.
class Graph {
public:
    VertexIndex add_vertex(std::string id);
    EdgeIndex add_edge(std::string id, VertexIndex u, VertexIndex v);
    EdgeIndex add_edge(std::string id, std::string_view u, std::string_view v);
    std::size_t add_cusp(std::string id, VertexIndex end);

    std::size_t vertex_count() const noexcept { return vertices_.size(); }
    std::size_t edge_count() const noexcept { return edges_.size(); }
    std::size_t cusp_count() const noexcept { return cusps_.size(); }

    const std::vector<std::string>& vertices() const noexcept { return vertices_; }
    const std::vector<Edge>& edges() const noexcept { return edges_; }
    const std::vector<Cusp>& cusps() const noexcept { return cusps_; }
    const Edge& edge(EdgeIndex e) const { return edges_.at(e); }

    std::optional<VertexIndex> find_vertex(std::string_view id) const;
    std::optional<EdgeIndex> find_edge(std::string_view id) const;
    VertexIndex vertex_index(std::string_view id) const;  // throws graph::UnknownVertex
    EdgeIndex edge_index(std::string_view id) const;      // throws graph::UnknownEdge

    VertexIndex tail(OrientedEdge oe) const { return oe.forward ? edges_[oe.edge].u : edges_[oe.edge].v; }
    VertexIndex head(OrientedEdge oe) const { return oe.forward ? edges_[oe.edge].v : edges_[oe.edge].u; }

    /// Oriented edges leaving v, ordered by edge index then forward first. A
    /// self-loop contributes both orientations.
    const std::vector<OrientedEdge>& out_edges(VertexIndex v) const { return out_.at(v); }

private:
    std::vector<std::string> vertices_;
    std::vector<Edge> edges_;
    std::vector<Cusp> cusps_;
    std::vector<std::vector<OrientedEdge>> out_;
    std::unordered_map<std::string, VertexIndex> vertex_lookup_;
    std::unordered_map<std::string, EdgeIndex> edge_lookup_;
};

/// Graph with a strictly positive exact length on every edge.
class MetricGraph {
public:
    MetricGraph() = default;
    MetricGraph(Graph graph, std::vector<Rational> lengths);

    const Graph& graph() const noexcept { return graph_; }
    const Rational& length(EdgeIndex e) const { return lengths_.at(e); }
    const std::vector<Rational>& lengths() const noexcept { return lengths_; }

private:
    Graph graph_;
    std::vector<Rational> lengths_;
};

/// Simple cycle: cyclic sequence of oriented edges, head of each step is the
/// tail of the next, no vertex and no unoriented edge repeated.
struct Loop {
    std::vector<OrientedEdge> steps;

    std::size_t size() const noexcept { return steps.size(); }
    /// Sorted edge indices.
    std::vector<EdgeIndex> edge_set() const;
    friend bool operator==(const Loop&, const Loop&) = default;
};

// -- queries -----------------------------------------------------------------

/// Branches abutting v; a self-loop counts twice, a cusp once.
std::size_t valency(const Graph& g, VertexIndex v);
std::size_t min_valency(const Graph& g);

/// Connected component label per vertex (labels 0..k-1 in order of first vertex).
std::vector<std::size_t> components(const Graph& g);
std::size_t component_count(const Graph& g);
bool is_connected(const Graph& g);

/// First Betti number |E| - |V| + #components; cusps are ignored.
std::size_t betti(const Graph& g);

/// Throws graph::InvalidLoop unless `loop` is a simple cycle of g.
void validate_loop(const Graph& g, const Loop& loop);

/// Rotation to the smallest edge index, orientation chosen so the first step is
/// least (forward before backward, then the second step decides).
Loop canonical_loop(const Graph& g, Loop loop);

/// All simple cycles, each once up to rotation and reversal, in canonical form,
/// sorted lexicographically by their sorted edge-index lists (ties by steps).
/// Throws graph::LoopLimit if more than `max_loops` exist.
std::vector<Loop> enumerate_loops(const Graph& g, std::size_t max_loops = kDefaultMaxLoops);

/// Sum of the lengths of the edges of `loop`.
Rational loop_length(const Loop& loop, const MetricGraph& m);

// -- surgeries ---------------------------------------------------------------

Graph delete_edge(const Graph& g, EdgeIndex e);
MetricGraph delete_edge(const MetricGraph& m, EdgeIndex e);

/// Contracts the connected subgraph spanned by `edges` to one vertex (keeping
/// the id of its smallest vertex). Edges outside the set whose ends both lie
/// in the subgraph become self-loops. Throws graph::DisconnectedSubgraph.
Graph contract_subgraph(const Graph& g, std::span<const EdgeIndex> edges);

/// Replaces edges a and b meeting at a valency-2 vertex by one edge "a+b";
/// the vertex is removed. Throws graph::NotConcatenable.
Graph concatenate_edges(const Graph& g, EdgeIndex a, EdgeIndex b);
/// As above; the new edge has length f(a) + f(b).
MetricGraph concatenate_edges(const MetricGraph& m, EdgeIndex a, EdgeIndex b);

/// Replaces edge e by a path e.0, e.1 through a new vertex (valency 2).
Graph subdivide_edge(const Graph& g, EdgeIndex e);

// -- export ------------------------------------------------------------------

std::string to_dot(const Graph& g, std::string_view name = "G");
std::string to_dot(const MetricGraph& m, std::string_view name = "G");

}  // namespace skelmetric
