#include "skelmetric/currents.hpp"

#include "skelmetric/error.hpp"
#include "skelmetric/padic.hpp"

#include <limits>
#include <sstream>

namespace skelmetric::currents {

namespace {

// Windows are trees, so a plain traversal yields metric distances.
std::vector<std::optional<Rational>> tree_distances(const MetricGraph& m, const std::vector<VertexIndex>& sources) {
    const Graph& g = m.graph();
    std::vector<std::optional<Rational>> dist(g.vertex_count());
    std::vector<VertexIndex> stack;
    for (VertexIndex s : sources) {
        dist[s] = Rational(0);
        stack.push_back(s);
    }
    while (!stack.empty()) {
        const VertexIndex x = stack.back();
        stack.pop_back();
        for (const auto& oe : g.out_edges(x)) {
            const VertexIndex y = g.head(oe);
            if (dist[y])
                continue;
            dist[y] = *dist[x] + m.length(oe.edge);
            stack.push_back(y);
        }
    }
    return dist;
}

std::vector<bool> normalized_boundary(const Graph& g, std::vector<bool> boundary) {
    if (boundary.empty())
        boundary.assign(g.vertex_count(), false);
    if (boundary.size() != g.vertex_count())
        throw Error("currents", "ShapeMismatch", "boundary flags must cover every vertex");
    return boundary;
}

}  // namespace

// -- TreeWindow --------------------------------------------------------------

TreeWindow::TreeWindow(MetricGraph tree, std::vector<bool> boundary, std::vector<OrientedEdge> marked_line,
                       VertexIndex line_start)
    : tree_(std::move(tree)), boundary_(std::move(boundary)), line_(std::move(marked_line)), line_start_(line_start) {
    const Graph& g = tree_.graph();
    boundary_ = normalized_boundary(g, std::move(boundary_));
    if (g.vertex_count() == 0 || !is_connected(g) || g.edge_count() + 1 != g.vertex_count())
        throw Error("currents", "NotATree", "window must be a finite tree");
    if (!line_.empty()) {
        std::vector<bool> seen(g.vertex_count(), false);
        VertexIndex at = line_start_;
        seen[at] = true;
        for (const auto& step : line_) {
            if (g.tail(step) != at)
                throw Error("currents", "InvalidLine", "marked line steps are not consecutive");
            at = g.head(step);
            if (seen[at])
                throw Error("currents", "InvalidLine", "marked line is not a simple path");
            seen[at] = true;
        }
        if (!boundary_[line_start_] || !boundary_[at])
            throw Error("currents", "InvalidLine", "marked line must join two boundary vertices");
    }
}

std::vector<Rational> TreeWindow::distances_from(VertexIndex from) const {
    auto dist = tree_distances(tree_, {from});
    std::vector<Rational> out;
    out.reserve(dist.size());
    for (auto& d : dist)
        out.push_back(std::move(*d));
    return out;
}

Rational TreeWindow::distance_to_line(VertexIndex v) const {
    if (line_.empty())
        throw Error("currents", "InvalidLine", "window has no marked line");
    std::vector<VertexIndex> sources{line_start_};
    for (const auto& step : line_)
        sources.push_back(graph().head(step));
    return *tree_distances(tree_, sources).at(v);
}

bool TreeWindow::ball_inside(VertexIndex v, const Rational& radius) const {
    const auto dist = distances_from(v);
    for (VertexIndex b = 0; b < dist.size(); ++b)
        if (boundary_[b] && dist[b] < radius)
            return false;
    return true;
}

// -- Current -----------------------------------------------------------------

Current::Current(std::shared_ptr<const Graph> graph, std::vector<bool> boundary)
    : graph_(std::move(graph)), boundary_(normalized_boundary(*graph_, std::move(boundary))),
      flow_(graph_->edge_count(), 0) {}

Current::Current(std::shared_ptr<const Graph> graph, std::vector<bool> boundary, std::vector<std::int64_t> flow)
    : graph_(std::move(graph)), boundary_(normalized_boundary(*graph_, std::move(boundary))), flow_(std::move(flow)) {
    if (flow_.size() != graph_->edge_count())
        throw Error("currents", "ShapeMismatch", "flow must cover every edge");
    for (VertexIndex v = 0; v < graph_->vertex_count(); ++v)
        if (!boundary_[v] && divergence(v) != 0)
            throw Error("currents", "KirchhoffViolation",
                        "net outflow " + std::to_string(divergence(v)) + " at interior vertex '" +
                            graph_->vertices()[v] + "'");
}

std::int64_t Current::divergence(VertexIndex v) const {
    std::int64_t total = 0;
    for (const auto& oe : graph_->out_edges(v))
        total += flow(oe);
    return total;
}

bool Current::satisfies_kirchhoff() const {
    for (VertexIndex v = 0; v < graph_->vertex_count(); ++v)
        if (!boundary_[v] && divergence(v) != 0)
            return false;
    return true;
}

Current operator+(const Current& a, const Current& b) {
    if (a.graph_ != b.graph_ && a.graph_->edge_count() != b.graph_->edge_count())
        throw Error("currents", "ShapeMismatch", "currents live on different graphs");
    std::vector<std::int64_t> flow = a.flow_;
    for (EdgeIndex e = 0; e < flow.size(); ++e)
        flow[e] += b.flow_[e];
    return Current(a.graph_, a.boundary_, std::move(flow));
}

std::shared_ptr<const Graph> share_graph(const TreeWindow& window) {
    return std::make_shared<const Graph>(window.graph());
}

Current loop_current(std::shared_ptr<const Graph> graph, std::vector<bool> boundary, VertexIndex start,
                     const std::vector<OrientedEdge>& walk) {
    const Graph& g = *graph;
    std::vector<std::int64_t> flow(g.edge_count(), 0);
    std::vector<bool> seen_vertex(g.vertex_count(), false);
    std::vector<bool> seen_edge(g.edge_count(), false);
    VertexIndex at = start;
    if (at >= g.vertex_count())
        throw Error("currents", "NotSimple", "walk starts at an unknown vertex");
    seen_vertex[at] = true;
    for (std::size_t k = 0; k < walk.size(); ++k) {
        const auto& step = walk[k];
        if (step.edge >= g.edge_count() || g.tail(step) != at)
            throw Error("currents", "NotSimple", "walk steps are not consecutive");
        if (seen_edge[step.edge])
            throw Error("currents", "NotSimple", "walk repeats an edge");
        seen_edge[step.edge] = true;
        at = g.head(step);
        const bool closing = k + 1 == walk.size() && at == start;
        if (seen_vertex[at] && !closing)
            throw Error("currents", "NotSimple", "walk repeats a vertex");
        seen_vertex[at] = true;
        flow[step.edge] += step.forward ? 1 : -1;
    }
    return Current(std::move(graph), std::move(boundary), std::move(flow));
}

Current loop_current(const Graph& graph, const Loop& loop) {
    validate_loop(graph, loop);
    auto shared = std::make_shared<const Graph>(graph);
    std::vector<std::int64_t> flow(graph.edge_count(), 0);
    for (const auto& step : loop.steps)
        flow[step.edge] += step.forward ? 1 : -1;
    return Current(std::move(shared), {}, std::move(flow));
}

Current line_current(const TreeWindow& window) {
    return loop_current(share_graph(window), window.boundary(), window.line_start(), window.marked_line());
}

WindowMap WindowMap::identity(std::size_t vertex_count) {
    WindowMap m;
    for (VertexIndex v = 0; v < vertex_count; ++v)
        m.image.emplace_back(v);
    return m;
}

Current translate_sum(const Current& c0, const std::vector<WindowMap>& translates) {
    const Graph& g = c0.graph();
    // Edge lookup by unordered endpoint pair; windows are simple graphs.
    auto find_edge = [&](VertexIndex a, VertexIndex b) -> std::optional<OrientedEdge> {
        for (const auto& oe : g.out_edges(a))
            if (g.head(oe) == b)
                return oe;
        return std::nullopt;
    };
    std::vector<std::int64_t> total(g.edge_count(), 0);
    for (const auto& map : translates) {
        if (map.image.size() != g.vertex_count())
            throw Error("currents", "ShapeMismatch", "window map must list every vertex");
        for (EdgeIndex e = 0; e < g.edge_count(); ++e) {
            const std::int64_t f = c0.flow()[e];
            if (f == 0)
                continue;
            const auto& iu = map.image[g.edge(e).u];
            const auto& iv = map.image[g.edge(e).v];
            const auto image = (iu && iv) ? find_edge(*iu, *iv) : std::nullopt;
            if (!image)
                throw Error("currents", "LeavesWindow",
                            "translate of edge '" + g.edge(e).id + "' leaves the window");
            total[image->edge] += image->forward ? f : -f;
        }
    }
    return Current(c0.graph_ptr(), c0.boundary(), std::move(total));
}

bool star_residue_nonzero(const Current& c, VertexIndex v, std::int64_t n) {
    if (n < 2)
        throw Error("currents", "InvalidModulus", "modulus must be >= 2");
    if (v >= c.graph().vertex_count())
        throw Error("graph", "UnknownVertex", "vertex index out of range");
    if (c.boundary()[v])
        throw Error("currents", "BoundaryVertex", "star residue is only defined at interior vertices");
    for (const auto& oe : c.graph().out_edges(v))
        if (c.flow(oe) % n != 0)
            return true;
    return false;
}

std::string to_string(SplitVerdict verdict) {
    switch (verdict) {
    case SplitVerdict::Split:
        return "SPLIT";
    case SplitVerdict::NotSplit:
        return "NOT_SPLIT";
    case SplitVerdict::Unknown:
        return "UNKNOWN";
    }
    return "UNKNOWN";
}

SplitVerdict split_by_vanishing(const TreeWindow& window, const Current& c, VertexIndex z, unsigned e, unsigned p,
                                const Rational& margin) {
    if (margin <= 0)
        throw Error("currents", "InvalidMargin", "margin must be positive");
    if (window.is_boundary(z))
        throw Error("currents", "BoundaryVertex", "splitting is decided at interior vertices");
    const Rational radius = padic::split_threshold(p, e) + margin;
    if (!window.ball_inside(z, radius))
        throw Error("currents", "BallExitsWindow",
                    "ball of radius " + skelmetric::to_string(radius) + " leaves the window (truncation too shallow)");
    if (e == 0)
        return SplitVerdict::Split;
    const auto dist = window.distances_from(z);
    const Graph& g = window.graph();
    bool vanishes = true;
    for (EdgeIndex k = 0; k < g.edge_count() && vanishes; ++k) {
        const Edge& edge = g.edge(k);
        const bool meets_ball = dist[edge.u] <= radius || dist[edge.v] <= radius;
        if (meets_ball && c.flow()[k] != 0)
            vanishes = false;
    }
    if (vanishes)
        return SplitVerdict::Split;
    const Integer modulus = boost::multiprecision::pow(Integer(p), e);
    // Flows are int64, so beyond that range a flow is 0 mod p^e only when 0.
    const std::int64_t n = modulus > Integer(std::numeric_limits<std::int64_t>::max())
                               ? std::numeric_limits<std::int64_t>::max()
                               : modulus.convert_to<std::int64_t>();
    if (star_residue_nonzero(c, z, n))
        return SplitVerdict::NotSplit;
    return SplitVerdict::Unknown;
}

bool line_current_splits(const TreeWindow& window, VertexIndex z, unsigned e, unsigned p) {
    return window.distance_to_line(z) > padic::split_threshold(p, e);
}

Rational deviation_bound_exponent(const Rational& d, const Rational& lambda) {
    if (d < 0 || lambda <= 0)
        throw Error("currents", "InvalidArgument", "need d >= 0 and lambda > 0");
    return d - lambda;
}

std::string to_dot(const Current& c, std::string_view name) {
    const Graph& g = c.graph();
    std::ostringstream os;
    os << "digraph \"" << name << "\" {\n";
    for (VertexIndex v = 0; v < g.vertex_count(); ++v)
        os << "  \"" << g.vertices()[v] << "\"" << (c.boundary()[v] ? " [shape=box]" : "") << ";\n";
    for (EdgeIndex e = 0; e < g.edge_count(); ++e) {
        const Edge& edge = g.edge(e);
        os << "  \"" << g.vertices()[edge.u] << "\" -> \"" << g.vertices()[edge.v] << "\" [label=\"" << edge.id
           << ":" << (c.flow()[e] > 0 ? "+" : "") << c.flow()[e] << "\"];\n";
    }
    os << "}\n";
    return os.str();
}

}  // namespace skelmetric::currents
