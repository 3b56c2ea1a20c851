#pragma once

// Integer currents on graphs and on finite windows of the tree of the
// universal covering. A current is an antisymmetric integer flow on oriented
// edges obeying Kirchhoff's law at every interior vertex; boundary vertices
// (where a window was truncated) are exempt.

#include "skelmetric/graph.hpp"

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace skelmetric::currents {

/// Finite metric tree with marked truncation boundary and an optional marked
/// line (a simple path between two boundary vertices).
class TreeWindow {
public:
    TreeWindow(MetricGraph tree, std::vector<bool> boundary, std::vector<OrientedEdge> marked_line = {},
               VertexIndex line_start = 0);

    const MetricGraph& tree() const noexcept { return tree_; }
    const Graph& graph() const noexcept { return tree_.graph(); }
    bool is_boundary(VertexIndex v) const { return boundary_.at(v); }
    const std::vector<bool>& boundary() const noexcept { return boundary_; }
    const std::vector<OrientedEdge>& marked_line() const noexcept { return line_; }
    VertexIndex line_start() const noexcept { return line_start_; }

    /// Metric distances from `from` to every vertex.
    std::vector<Rational> distances_from(VertexIndex from) const;
    /// Distance from v to the nearest vertex of the marked line.
    Rational distance_to_line(VertexIndex v) const;
    /// True iff the closed ball of radius `radius` around v stays inside the
    /// window: no boundary vertex lies strictly closer than `radius`.
    bool ball_inside(VertexIndex v, const Rational& radius) const;

private:
    MetricGraph tree_;
    std::vector<bool> boundary_;
    std::vector<OrientedEdge> line_;
    VertexIndex line_start_;
};

class Current {
public:
    /// Zero current.
    Current(std::shared_ptr<const Graph> graph, std::vector<bool> boundary);
    /// Throws currents::KirchhoffViolation if some interior vertex has nonzero
    /// net outflow.
    Current(std::shared_ptr<const Graph> graph, std::vector<bool> boundary, std::vector<std::int64_t> flow);

    const Graph& graph() const noexcept { return *graph_; }
    const std::shared_ptr<const Graph>& graph_ptr() const noexcept { return graph_; }
    const std::vector<bool>& boundary() const noexcept { return boundary_; }
    /// Flow in the edge's u -> v direction.
    const std::vector<std::int64_t>& flow() const noexcept { return flow_; }
    std::int64_t flow(OrientedEdge oe) const { return oe.forward ? flow_.at(oe.edge) : -flow_.at(oe.edge); }

    /// Net outflow at v.
    std::int64_t divergence(VertexIndex v) const;
    bool satisfies_kirchhoff() const;

    friend Current operator+(const Current& a, const Current& b);
    friend bool operator==(const Current& a, const Current& b) { return a.flow_ == b.flow_; }

private:
    std::shared_ptr<const Graph> graph_;
    std::vector<bool> boundary_;
    std::vector<std::int64_t> flow_;
};

/// Window graph shared by currents built on it.
std::shared_ptr<const Graph> share_graph(const TreeWindow& window);

/// +1 along the walk's orientation, -1 against it, 0 elsewhere. The walk is a
/// loop or a path that never repeats a vertex or an edge. Throws
/// currents::NotSimple; KirchhoffViolation if an open path ends at an interior
/// vertex.
Current loop_current(std::shared_ptr<const Graph> graph, std::vector<bool> boundary, VertexIndex start,
                     const std::vector<OrientedEdge>& walk);
Current loop_current(const Graph& graph, const Loop& loop);
/// Current of the window's marked line.
Current line_current(const TreeWindow& window);

/// Partial vertex map of a window into itself; `image[v]` empty where the map
/// is undefined.
struct WindowMap {
    std::vector<std::optional<VertexIndex>> image;

    static WindowMap identity(std::size_t vertex_count);
};

/// Sum of the translates g . c0 ((g . c0)(g e) = c0(e)). Throws
/// currents::LeavesWindow when an edge carrying flow has no image edge.
Current translate_sum(const Current& c0, const std::vector<WindowMap>& translates);

/// True iff some edge at v carries flow not divisible by n. Throws
/// currents::BoundaryVertex for boundary vertices, currents::InvalidModulus
/// for n < 2.
bool star_residue_nonzero(const Current& c, VertexIndex v, std::int64_t n);

enum class SplitVerdict { Split, NotSplit, Unknown };
std::string to_string(SplitVerdict verdict);

/// Tri-state splitting of the Z/p^e torsor attached to c over vertex z:
///  Split    when c vanishes on every edge meeting the closed ball of radius
///           e + 1/(p-1) + margin around z;
///  NotSplit when the star of z carries flow nonzero modulo p^e;
///  Unknown  otherwise.
/// Throws currents::BoundaryVertex, currents::BallExitsWindow, InvalidMargin.
SplitVerdict split_by_vanishing(const TreeWindow& window, const Current& c, VertexIndex z, unsigned e, unsigned p,
                                const Rational& margin = 1);

/// Exact criterion for the line current: split iff d(z, line) > e + 1/(p-1).
bool line_current_splits(const TreeWindow& window, VertexIndex z, unsigned e, unsigned p);

/// Exponent of the bound |f(z') - 1| <= p^(d - lambda).
Rational deviation_bound_exponent(const Rational& d, const Rational& lambda);

std::string to_dot(const Current& c, std::string_view name = "C");

}  // namespace skelmetric::currents
