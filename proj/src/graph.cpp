#include "skelmetric/graph.hpp"

#include "skelmetric/error.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

namespace skelmetric {

// -- Graph -------------------------------------------------------------------

VertexIndex Graph::add_vertex(std::string id) {
    if (vertex_lookup_.contains(id))
        throw Error("graph", "DuplicateId", "duplicate vertex id '" + id + "'");
    const VertexIndex index = vertices_.size();
    vertex_lookup_.emplace(id, index);
    vertices_.push_back(std::move(id));
    out_.emplace_back();
    return index;
}

EdgeIndex Graph::add_edge(std::string id, VertexIndex u, VertexIndex v) {
    if (u >= vertices_.size() || v >= vertices_.size())
        throw Error("graph", "UnknownVertex", "edge '" + id + "' has an undeclared endpoint");
    if (edge_lookup_.contains(id))
        throw Error("graph", "DuplicateId", "duplicate edge id '" + id + "'");
    for (const auto& c : cusps_)
        if (c.id == id)
            throw Error("graph", "DuplicateId", "edge id '" + id + "' clashes with a cusp");
    const EdgeIndex index = edges_.size();
    edge_lookup_.emplace(id, index);
    edges_.push_back({std::move(id), u, v});
    out_[u].push_back({index, true});
    out_[v].push_back({index, false});
    return index;
}

EdgeIndex Graph::add_edge(std::string id, std::string_view u, std::string_view v) {
    return add_edge(std::move(id), vertex_index(u), vertex_index(v));
}

std::size_t Graph::add_cusp(std::string id, VertexIndex end) {
    if (end >= vertices_.size())
        throw Error("graph", "UnknownVertex", "cusp '" + id + "' has an undeclared endpoint");
    if (edge_lookup_.contains(id))
        throw Error("graph", "DuplicateId", "cusp id '" + id + "' clashes with an edge");
    cusps_.push_back({std::move(id), end});
    return cusps_.size() - 1;
}

std::optional<VertexIndex> Graph::find_vertex(std::string_view id) const {
    const auto it = vertex_lookup_.find(std::string(id));
    if (it == vertex_lookup_.end())
        return std::nullopt;
    return it->second;
}

std::optional<EdgeIndex> Graph::find_edge(std::string_view id) const {
    const auto it = edge_lookup_.find(std::string(id));
    if (it == edge_lookup_.end())
        return std::nullopt;
    return it->second;
}

VertexIndex Graph::vertex_index(std::string_view id) const {
    if (auto v = find_vertex(id))
        return *v;
    throw Error("graph", "UnknownVertex", "unknown vertex '" + std::string(id) + "'");
}

EdgeIndex Graph::edge_index(std::string_view id) const {
    if (auto e = find_edge(id))
        return *e;
    throw Error("graph", "UnknownEdge", "unknown edge '" + std::string(id) + "'");
}

// -- MetricGraph -------------------------------------------------------------

MetricGraph::MetricGraph(Graph graph, std::vector<Rational> lengths)
    : graph_(std::move(graph)), lengths_(std::move(lengths)) {
    if (lengths_.size() != graph_.edge_count())
        throw Error("graph", "MissingLength", "every edge needs a length");
    for (EdgeIndex e = 0; e < lengths_.size(); ++e)
        if (lengths_[e] <= 0)
            throw Error("graph", "NonPositiveLength",
                        "edge '" + graph_.edge(e).id + "' has length " + to_string(lengths_[e]));
}

// -- Loop --------------------------------------------------------------------

std::vector<EdgeIndex> Loop::edge_set() const {
    std::vector<EdgeIndex> out;
    out.reserve(steps.size());
    for (const auto& s : steps)
        out.push_back(s.edge);
    std::sort(out.begin(), out.end());
    return out;
}

// -- queries -----------------------------------------------------------------

std::size_t valency(const Graph& g, VertexIndex v) {
    if (v >= g.vertex_count())
        throw Error("graph", "UnknownVertex", "vertex index " + std::to_string(v) + " out of range");
    std::size_t count = g.out_edges(v).size();
    for (const auto& c : g.cusps())
        if (c.end == v)
            ++count;
    return count;
}

std::size_t min_valency(const Graph& g) {
    std::size_t best = std::numeric_limits<std::size_t>::max();
    for (VertexIndex v = 0; v < g.vertex_count(); ++v)
        best = std::min(best, valency(g, v));
    return g.vertex_count() == 0 ? 0 : best;
}

std::vector<std::size_t> components(const Graph& g) {
    constexpr auto unset = std::numeric_limits<std::size_t>::max();
    std::vector<std::size_t> label(g.vertex_count(), unset);
    std::size_t next = 0;
    std::vector<VertexIndex> stack;
    for (VertexIndex s = 0; s < g.vertex_count(); ++s) {
        if (label[s] != unset)
            continue;
        label[s] = next;
        stack.push_back(s);
        while (!stack.empty()) {
            const VertexIndex x = stack.back();
            stack.pop_back();
            for (const auto& oe : g.out_edges(x)) {
                const VertexIndex y = g.head(oe);
                if (label[y] == unset) {
                    label[y] = next;
                    stack.push_back(y);
                }
            }
        }
        ++next;
    }
    return label;
}

std::size_t component_count(const Graph& g) {
    const auto label = components(g);
    return label.empty() ? 0 : *std::max_element(label.begin(), label.end()) + 1;
}

bool is_connected(const Graph& g) { return component_count(g) <= 1; }

std::size_t betti(const Graph& g) {
    return g.edge_count() + component_count(g) - g.vertex_count();
}

void validate_loop(const Graph& g, const Loop& loop) {
    if (loop.steps.empty())
        throw Error("graph", "InvalidLoop", "empty loop");
    std::vector<bool> seen_vertex(g.vertex_count(), false);
    std::vector<bool> seen_edge(g.edge_count(), false);
    for (std::size_t k = 0; k < loop.steps.size(); ++k) {
        const auto& step = loop.steps[k];
        if (step.edge >= g.edge_count())
            throw Error("graph", "InvalidLoop", "loop uses an unknown edge");
        if (seen_edge[step.edge])
            throw Error("graph", "InvalidLoop", "loop repeats edge '" + g.edge(step.edge).id + "'");
        seen_edge[step.edge] = true;
        const VertexIndex t = g.tail(step);
        if (seen_vertex[t])
            throw Error("graph", "InvalidLoop", "loop repeats vertex '" + g.vertices()[t] + "'");
        seen_vertex[t] = true;
        const auto& next = loop.steps[(k + 1) % loop.steps.size()];
        if (g.head(step) != g.tail(next))
            throw Error("graph", "InvalidLoop", "loop steps are not consecutive");
    }
}

Loop canonical_loop(const Graph& g, Loop loop) {
    if (loop.steps.empty())
        return loop;
    auto& s = loop.steps;
    auto smallest = std::min_element(s.begin(), s.end(),
                                     [](const auto& a, const auto& b) { return a.edge < b.edge; });
    std::rotate(s.begin(), smallest, s.end());
    if (!s.front().forward && !g.edge(s.front().edge).is_self_loop()) {
        // Reverse the cycle keeping the smallest edge in front.
        std::reverse(s.begin() + 1, s.end());
        for (auto& step : s)
            step = step.reversed();
    } else if (!s.front().forward) {
        s.front() = s.front().reversed();
    }
    return loop;
}

namespace {

class CycleSearch {
public:
    CycleSearch(const Graph& g, std::size_t max_loops)
        : g_(g), max_loops_(max_loops), on_path_(g.vertex_count(), false) {}

    std::vector<Loop> run() {
        for (EdgeIndex e = 0; e < g_.edge_count(); ++e)
            if (g_.edge(e).is_self_loop())
                emit(Loop{{OrientedEdge{e, true}}});
        for (VertexIndex s = 0; s < g_.vertex_count(); ++s) {
            start_ = s;
            on_path_[s] = true;
            extend(s);
            on_path_[s] = false;
        }
        return std::move(found_);
    }

private:
    void extend(VertexIndex x) {
        for (const auto& oe : g_.out_edges(x)) {
            const Edge& edge = g_.edge(oe.edge);
            if (edge.is_self_loop())
                continue;
            if (!path_.empty() && oe.edge == path_.back().edge)
                continue;
            const VertexIndex y = g_.head(oe);
            if (y == start_) {
                // Closing step. Each cycle is met in both directions; keep the
                // one whose first edge index is below the closing edge index.
                if (!path_.empty() && path_.front().edge < oe.edge) {
                    Loop loop{path_};
                    loop.steps.push_back(oe);
                    emit(std::move(loop));
                }
                continue;
            }
            if (y < start_ || on_path_[y])
                continue;
            on_path_[y] = true;
            path_.push_back(oe);
            extend(y);
            path_.pop_back();
            on_path_[y] = false;
        }
    }

    void emit(Loop loop) {
        if (found_.size() >= max_loops_)
            throw Error("graph", "LoopLimit",
                        "more than " + std::to_string(max_loops_) + " simple cycles");
        found_.push_back(canonical_loop(g_, std::move(loop)));
    }

    const Graph& g_;
    std::size_t max_loops_;
    VertexIndex start_ = 0;
    std::vector<bool> on_path_;
    std::vector<OrientedEdge> path_;
    std::vector<Loop> found_;
};

}  // namespace

std::vector<Loop> enumerate_loops(const Graph& g, std::size_t max_loops) {
    auto loops = CycleSearch(g, max_loops).run();
    std::vector<std::pair<std::vector<EdgeIndex>, Loop>> keyed;
    keyed.reserve(loops.size());
    for (auto& l : loops)
        keyed.emplace_back(l.edge_set(), std::move(l));
    std::sort(keyed.begin(), keyed.end(), [](const auto& a, const auto& b) {
        if (a.first != b.first)
            return a.first < b.first;
        return a.second.steps < b.second.steps;
    });
    std::vector<Loop> out;
    out.reserve(keyed.size());
    for (auto& [key, loop] : keyed)
        out.push_back(std::move(loop));
    return out;
}

Rational loop_length(const Loop& loop, const MetricGraph& m) {
    Rational total = 0;
    for (const auto& step : loop.steps) {
        if (step.edge >= m.graph().edge_count())
            throw Error("graph", "MissingLength", "loop edge has no length");
        total += m.length(step.edge);
    }
    return total;
}

// -- surgeries ---------------------------------------------------------------

namespace {

Graph copy_without(const Graph& g, const std::vector<bool>& drop_edge,
                   const std::vector<VertexIndex>& vertex_map, const std::vector<bool>& keep_vertex) {
    Graph out;
    std::vector<VertexIndex> renumber(g.vertex_count());
    for (VertexIndex v = 0; v < g.vertex_count(); ++v)
        if (keep_vertex[v])
            renumber[v] = out.add_vertex(g.vertices()[v]);
    for (EdgeIndex e = 0; e < g.edge_count(); ++e) {
        if (drop_edge[e])
            continue;
        const Edge& edge = g.edge(e);
        out.add_edge(edge.id, renumber[vertex_map[edge.u]], renumber[vertex_map[edge.v]]);
    }
    for (const auto& c : g.cusps())
        out.add_cusp(c.id, renumber[vertex_map[c.end]]);
    return out;
}

std::vector<VertexIndex> identity_map(std::size_t n) {
    std::vector<VertexIndex> m(n);
    std::iota(m.begin(), m.end(), VertexIndex{0});
    return m;
}

}  // namespace

Graph delete_edge(const Graph& g, EdgeIndex e) {
    if (e >= g.edge_count())
        throw Error("graph", "UnknownEdge", "edge index out of range");
    std::vector<bool> drop(g.edge_count(), false);
    drop[e] = true;
    return copy_without(g, drop, identity_map(g.vertex_count()), std::vector<bool>(g.vertex_count(), true));
}

MetricGraph delete_edge(const MetricGraph& m, EdgeIndex e) {
    Graph g = delete_edge(m.graph(), e);
    std::vector<Rational> lengths = m.lengths();
    lengths.erase(lengths.begin() + static_cast<std::ptrdiff_t>(e));
    return MetricGraph(std::move(g), std::move(lengths));
}

Graph contract_subgraph(const Graph& g, std::span<const EdgeIndex> edges) {
    std::vector<bool> drop(g.edge_count(), false);
    std::vector<bool> in_h(g.vertex_count(), false);
    for (EdgeIndex e : edges) {
        if (e >= g.edge_count())
            throw Error("graph", "UnknownEdge", "edge index out of range");
        drop[e] = true;
        in_h[g.edge(e).u] = in_h[g.edge(e).v] = true;
    }
    if (edges.empty())
        return g;
    // Connectivity of H using only its own edges.
    std::vector<VertexIndex> parent = identity_map(g.vertex_count());
    auto find = [&](VertexIndex x) {
        while (parent[x] != x)
            x = parent[x] = parent[parent[x]];
        return x;
    };
    for (EdgeIndex e : edges)
        parent[find(g.edge(e).u)] = find(g.edge(e).v);
    VertexIndex rep = g.vertex_count();
    for (VertexIndex v = 0; v < g.vertex_count(); ++v) {
        if (!in_h[v])
            continue;
        if (rep == g.vertex_count())
            rep = v;
        else if (find(v) != find(rep))
            throw Error("graph", "DisconnectedSubgraph", "contracted edges do not form a connected subgraph");
    }
    std::vector<VertexIndex> map = identity_map(g.vertex_count());
    std::vector<bool> keep(g.vertex_count(), true);
    for (VertexIndex v = 0; v < g.vertex_count(); ++v)
        if (in_h[v] && v != rep) {
            map[v] = rep;
            keep[v] = false;
        }
    return copy_without(g, drop, map, keep);
}

namespace {

struct Concatenation {
    VertexIndex shared;
    VertexIndex a_far;
    VertexIndex b_far;
};

Concatenation check_concatenation(const Graph& g, EdgeIndex a, EdgeIndex b) {
    if (a >= g.edge_count() || b >= g.edge_count())
        throw Error("graph", "UnknownEdge", "edge index out of range");
    const Edge& ea = g.edge(a);
    const Edge& eb = g.edge(b);
    if (a == b || ea.is_self_loop() || eb.is_self_loop())
        throw Error("graph", "NotConcatenable", "need two distinct non-loop edges");
    for (VertexIndex w : {ea.u, ea.v}) {
        if (w != eb.u && w != eb.v)
            continue;
        if (valency(g, w) != 2)
            continue;
        const VertexIndex a_far = ea.u == w ? ea.v : ea.u;
        const VertexIndex b_far = eb.u == w ? eb.v : eb.u;
        return {w, a_far, b_far};
    }
    throw Error("graph", "NotConcatenable",
                "edges '" + ea.id + "' and '" + eb.id + "' do not meet at a valency-2 vertex");
}

}  // namespace

Graph concatenate_edges(const Graph& g, EdgeIndex a, EdgeIndex b) {
    const auto c = check_concatenation(g, a, b);
    Graph out;
    std::vector<VertexIndex> renumber(g.vertex_count());
    for (VertexIndex v = 0; v < g.vertex_count(); ++v)
        if (v != c.shared)
            renumber[v] = out.add_vertex(g.vertices()[v]);
    for (EdgeIndex e = 0; e < g.edge_count(); ++e) {
        if (e == b)
            continue;
        if (e == a) {
            out.add_edge(g.edge(a).id + "+" + g.edge(b).id, renumber[c.a_far], renumber[c.b_far]);
            continue;
        }
        out.add_edge(g.edge(e).id, renumber[g.edge(e).u], renumber[g.edge(e).v]);
    }
    for (const auto& cusp : g.cusps())
        out.add_cusp(cusp.id, renumber[cusp.end]);
    return out;
}

MetricGraph concatenate_edges(const MetricGraph& m, EdgeIndex a, EdgeIndex b) {
    Graph g = concatenate_edges(m.graph(), a, b);
    std::vector<Rational> lengths;
    for (EdgeIndex e = 0; e < m.graph().edge_count(); ++e) {
        if (e == b)
            continue;
        lengths.push_back(e == a ? m.length(a) + m.length(b) : m.length(e));
    }
    return MetricGraph(std::move(g), std::move(lengths));
}

Graph subdivide_edge(const Graph& g, EdgeIndex e) {
    if (e >= g.edge_count())
        throw Error("graph", "UnknownEdge", "edge index out of range");
    Graph out;
    for (const auto& v : g.vertices())
        out.add_vertex(v);
    const VertexIndex mid = out.add_vertex(g.edge(e).id + ".mid");
    for (EdgeIndex f = 0; f < g.edge_count(); ++f) {
        const Edge& edge = g.edge(f);
        if (f == e) {
            out.add_edge(edge.id + ".0", edge.u, mid);
            out.add_edge(edge.id + ".1", mid, edge.v);
        } else {
            out.add_edge(edge.id, edge.u, edge.v);
        }
    }
    for (const auto& c : g.cusps())
        out.add_cusp(c.id, c.end);
    return out;
}

// -- export ------------------------------------------------------------------

namespace {

std::string dot_impl(const Graph& g, std::string_view name, const std::vector<Rational>* lengths) {
    std::ostringstream os;
    os << "graph \"" << name << "\" {\n";
    for (const auto& v : g.vertices())
        os << "  \"" << v << "\";\n";
    for (EdgeIndex e = 0; e < g.edge_count(); ++e) {
        const Edge& edge = g.edge(e);
        os << "  \"" << g.vertices()[edge.u] << "\" -- \"" << g.vertices()[edge.v] << "\" [id=\"" << edge.id
           << "\", label=\"" << edge.id;
        if (lengths)
            os << ":" << to_string((*lengths)[e]);
        os << "\"];\n";
    }
    for (const auto& c : g.cusps()) {
        os << "  \"" << c.id << "\" [shape=point];\n";
        os << "  \"" << g.vertices()[c.end] << "\" -- \"" << c.id << "\" [style=dashed];\n";
    }
    os << "}\n";
    return os.str();
}

}  // namespace

std::string to_dot(const Graph& g, std::string_view name) { return dot_impl(g, name, nullptr); }

std::string to_dot(const MetricGraph& m, std::string_view name) {
    return dot_impl(m.graph(), name, &m.lengths());
}

}  // namespace skelmetric
