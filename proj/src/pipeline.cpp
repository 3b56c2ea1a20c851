#include "skelmetric/pipeline.hpp"

#include "skelmetric/error.hpp"

#include <algorithm>
#include <deque>
#include <limits>
#include <set>

namespace skelmetric::pipeline {

void push_reduced(Walk& walk, OrientedEdge step) {
    if (!walk.empty() && walk.back() == step.reversed())
        walk.pop_back();
    else
        walk.push_back(step);
}

Walk reduce(const Walk& walk) {
    Walk out;
    for (const auto& step : walk)
        push_reduced(out, step);
    return out;
}

Walk inverse(const Walk& walk) {
    Walk out;
    out.reserve(walk.size());
    for (auto it = walk.rbegin(); it != walk.rend(); ++it)
        out.push_back(it->reversed());
    return out;
}

namespace {

void check_structure(const Graph& g, const char* what) {
    if (g.cusp_count() != 0)
        throw Error("pipeline", "InvalidStructure", std::string(what) + ": graph has cusps");
    if (g.vertex_count() == 0 || !is_connected(g))
        throw Error("pipeline", "InvalidStructure", std::string(what) + ": graph is not connected");
    if (min_valency(g) < 3)
        throw Error("pipeline", "InvalidStructure", std::string(what) + ": a vertex has valency below 3");
}

}  // namespace

// -- explicit window -------------------------------------------------------------

CoverWindow build_window(const MetricGraph& g, const Loop& loop, const Rational& depth, std::size_t max_vertices) {
    const Graph& base = g.graph();
    check_structure(base, "build_window");
    validate_loop(base, loop);
    if (depth <= 0)
        throw Error("pipeline", "InvalidDepth", "depth must be positive");
    const Rational period = loop_length(loop, g);
    if (depth < period)
        throw Error("pipeline", "InvalidDepth", "depth " + to_string(depth) + " does not reach z1 at " +
                                                    to_string(period));

    // Breadth-first growth over reduced walks from z0; the tree is the ball.
    struct Node {
        std::size_t parent;
        OrientedEdge step;
        Rational dist;
        VertexIndex at;  // base vertex under this node
    };
    const VertexIndex root_vertex = base.tail(loop.steps.front());
    std::vector<Node> nodes{{0, {}, 0, root_vertex}};
    std::vector<bool> truncated{false};
    for (std::size_t k = 0; k < nodes.size(); ++k) {
        for (const auto& step : base.out_edges(nodes[k].at)) {
            if (k != 0 && step == nodes[k].step.reversed())
                continue;
            Rational d = nodes[k].dist + g.length(step.edge);
            if (d > depth) {
                truncated[k] = true;
                continue;
            }
            if (nodes.size() >= max_vertices)
                throw Error("pipeline", "WindowTooLarge", "window exceeds " + std::to_string(max_vertices) + " vertices");
            nodes.push_back({k, step, std::move(d), base.head(step)});
            truncated.push_back(false);
        }
    }

    Graph tree;
    std::vector<Rational> lengths;
    for (std::size_t k = 0; k < nodes.size(); ++k)
        tree.add_vertex("w" + std::to_string(k));
    for (std::size_t k = 1; k < nodes.size(); ++k) {
        tree.add_edge("t" + std::to_string(k), nodes[k].parent, k);
        lengths.push_back(g.length(nodes[k].step.edge));
    }

    // Child lookup by (node, step) to walk the line.
    std::vector<std::vector<std::pair<OrientedEdge, std::size_t>>> children(nodes.size());
    for (std::size_t k = 1; k < nodes.size(); ++k)
        children[nodes[k].parent].push_back({nodes[k].step, k});
    auto child = [&](std::size_t k, OrientedEdge step) -> std::optional<std::size_t> {
        for (const auto& [s, c] : children[k])
            if (s == step)
                return c;
        return std::nullopt;
    };
    auto follow = [&](const Walk& period_walk, std::vector<std::size_t>& path) {
        std::size_t at = 0;
        for (std::size_t n = 0;; ++n) {
            auto next = child(at, period_walk[n % period_walk.size()]);
            if (!next)
                return;
            at = *next;
            path.push_back(at);
        }
    };
    std::vector<std::size_t> ahead, behind;
    follow(loop.steps, ahead);
    follow(inverse(loop.steps), behind);

    // Line runs from the far end behind z0, through z0, to the far end ahead.
    // Edge t<k> has index k - 1 and is oriented parent -> child.
    std::vector<OrientedEdge> line;
    const VertexIndex line_start = behind.empty() ? 0 : behind.back();
    for (auto it = behind.rbegin(); it != behind.rend(); ++it)
        line.push_back({*it - 1, false});
    for (std::size_t k : ahead)
        line.push_back({k - 1, true});
    CoverWindow out{currents::TreeWindow(MetricGraph(std::move(tree), std::move(lengths)), std::move(truncated),
                                         std::move(line), line_start),
                    g, loop, {}, 0, {}, depth};

    out.walks.resize(nodes.size());
    for (std::size_t k = 1; k < nodes.size(); ++k) {
        out.walks[k] = out.walks[nodes[k].parent];
        out.walks[k].push_back(nodes[k].step);
    }
    out.translates.push_back(0);
    for (std::size_t n = loop.size(); n <= ahead.size(); n += loop.size())
        out.translates.push_back(ahead[n - 1]);
    return out;
}

// -- implicit window ------------------------------------------------------------

Walk LoopUnrolling::vertex(std::size_t i) const {
    Walk w = inverse(connector);
    w.reserve(w.size() + (offset + i) * loop.size());
    for (std::size_t n = 0; n < offset + i; ++n)
        for (const auto& step : loop.steps)
            push_reduced(w, step);
    for (std::size_t k = 0; k < phase; ++k)
        push_reduced(w, loop.steps[k]);
    return w;
}

namespace {

Walk shortest_path(const Graph& g, VertexIndex from, VertexIndex to) {
    std::vector<std::optional<OrientedEdge>> via(g.vertex_count());
    std::vector<bool> seen(g.vertex_count(), false);
    std::deque<VertexIndex> queue{from};
    seen[from] = true;
    while (!queue.empty()) {
        const VertexIndex v = queue.front();
        queue.pop_front();
        for (const auto& step : g.out_edges(v)) {
            const VertexIndex w = g.head(step);
            if (!seen[w]) {
                seen[w] = true;
                via[w] = step;
                queue.push_back(w);
            }
        }
    }
    if (!seen[to])
        throw Error("pipeline", "InvalidStructure", "graph is not connected");
    Walk path;
    for (VertexIndex v = to; v != from; v = g.tail(*via[v]))
        path.push_back(*via[v]);
    std::reverse(path.begin(), path.end());
    return path;
}

// Length of the common prefix of w with the bi-infinite line of L read
// forward (L L L ...) or backward (L^-1 L^-1 ...) from its first vertex.
std::size_t line_prefix(const Walk& w, const Loop& line, bool forward) {
    const std::size_t n = line.size();
    std::size_t k = 0;
    for (; k < w.size(); ++k) {
        const OrientedEdge expected = forward ? line.steps[k % n] : line.steps[n - 1 - k % n].reversed();
        if (w[k] != expected)
            break;
    }
    return k;
}

}  // namespace

LoopUnrolling unroll_loop(const Graph& graph, const Loop& loop, const Loop& line_loop, std::size_t covering_id) {
    validate_loop(graph, loop);
    validate_loop(graph, line_loop);
    if (loop.edge_set() == line_loop.edge_set())
        throw Error("pipeline", "NoSecondLoop", "line loop must differ from the unrolled loop");
    LoopUnrolling out{covering_id, graph, loop, line_loop, {}, 0};
    out.connector = shortest_path(graph, graph.tail(loop.steps.front()), graph.tail(line_loop.steps.front()));

    // Past the offset, w_(n+1) = w_n C with no cancellation and w_n has already
    // left both rays of the line, so the distance grows by exactly lg(C).
    const std::size_t limit = 4 + out.connector.size() + loop.size() + line_loop.size();
    Walk w = inverse(out.connector);
    for (std::size_t n = 0; n <= limit; ++n) {
        Walk next = w;
        for (const auto& step : loop.steps)
            push_reduced(next, step);
        const bool clean = next.size() == w.size() + loop.size() && std::equal(w.begin(), w.end(), next.begin());
        if (clean && line_prefix(w, line_loop, true) < w.size() && line_prefix(w, line_loop, false) < w.size()) {
            out.offset = n;
            return out;
        }
        w = std::move(next);
    }
    throw Error("pipeline", "NoSecondLoop", "loop walk never leaves the line");
}

std::vector<LoopUnrolling> unrollings(const Graph& graph, const Loop& loop, const std::vector<Loop>& line_loops,
                                      std::size_t covering_id) {
    Loop reversed{inverse(loop.steps)};
    std::vector<LoopUnrolling> out;
    for (const auto& line : line_loops) {
        if (line.edge_set() == loop.edge_set())
            continue;
        for (const Loop* c : std::initializer_list<const Loop*>{&loop, &reversed}) {
            const auto base = unroll_loop(graph, *c, line, covering_id);
            for (std::size_t phase = 0; phase < c->size(); ++phase) {
                out.push_back(base);
                out.back().phase = phase;
            }
        }
    }
    return out;
}

LoopUnrolling unroll_loop(const Graph& graph, const Loop& loop, std::size_t covering_id, std::size_t max_loops) {
    for (const auto& candidate : enumerate_loops(graph, max_loops))
        if (candidate.edge_set() != loop.edge_set())
            return unroll_loop(graph, loop, candidate, covering_id);
    throw Error("pipeline", "NoSecondLoop", "graph has a single loop");
}

// -- oracle ---------------------------------------------------------------------

SplitOracle::SplitOracle(MetricGraph hidden, unsigned p) : p_(p) {
    if (p < 2)
        throw Error("pipeline", "InvalidArgument", "p must be at least 2");
    metrics_.push_back(std::move(hidden));
}

std::size_t SplitOracle::add_covering(const covering::Covering& cover) {
    if (cover.base.edge_count() != metrics_.front().graph().edge_count())
        throw Error("pipeline", "InvalidStructure", "covering base differs from the hidden graph");
    metrics_.push_back(cover.lift(metrics_.front()));
    return metrics_.size() - 1;
}

Rational SplitOracle::distance_to_line(const LoopUnrolling& window, const Walk& z) const {
    if (window.covering >= metrics_.size())
        throw Error("pipeline", "InvalidArgument", "unknown covering id " + std::to_string(window.covering));
    const MetricGraph& metric = metrics_[window.covering];
    if (metric.graph().edge_count() != window.graph.edge_count())
        throw Error("pipeline", "InvalidArgument", "window graph does not match covering " +
                                                       std::to_string(window.covering));
    const std::size_t shared =
        std::max(line_prefix(z, window.line_loop, true), line_prefix(z, window.line_loop, false));
    std::vector<long long> uses(metric.graph().edge_count(), 0);
    for (std::size_t k = shared; k < z.size(); ++k)
        ++uses[z[k].edge];
    Rational d = 0;
    for (std::size_t e = 0; e < uses.size(); ++e)
        if (uses[e] != 0)
            d += uses[e] * metric.length(e);
    return d;
}

bool SplitOracle::Probe::splits(unsigned e) const { return distance_ > e + Rational(1, p_ - 1); }

SplitOracle::Probe SplitOracle::probe(const LoopUnrolling& window, const Walk& z) const {
    return Probe(distance_to_line(window, z), p_);
}

bool SplitOracle::splits(const LoopUnrolling& window, const Walk& z, unsigned e) const {
    return probe(window, z).splits(e);
}

unsigned splitting_index(const std::function<bool(unsigned)>& split_at, unsigned e_max) {
    if (e_max == 0)
        throw Error("pipeline", "InvalidArgument", "e_max must be positive");
    unsigned e = 1;
    while (e <= e_max && split_at(e))
        ++e;
    if (e > e_max)
        throw Error("pipeline", "WindowTooShallow", "still split at e_max = " + std::to_string(e_max));
    return e;
}

unsigned splitting_index(const SplitOracle& oracle, const LoopUnrolling& window, std::size_t i, unsigned e_max) {
    const auto probe = oracle.probe(window, window.vertex(i));
    return splitting_index([&](unsigned e) { return probe.splits(e); }, e_max);
}

// -- slope recovery ----------------------------------------------------------------

bool SlopeInterval::contains(const Rational& x) const {
    if (lo_closed ? x < lo : x <= lo)
        return false;
    if (hi && (hi_closed ? x > *hi : x >= *hi))
        return false;
    return true;
}

namespace {

// Bounds on s = d(z_i) - 1/(p-1) - i*x, as "s > a - i*x" (or >=) and
// "s <= b - j*x", scaled by (p-1) so they stay integral.
struct Bound {
    long long i;
    long long value;  // scaled by (p-1)
    bool strict;
};

// a/b with b > 0.
struct Frac {
    long long num;
    long long den;
};

int compare(const Frac& a, const Frac& b) {
    const __int128 l = static_cast<__int128>(a.num) * b.den;
    const __int128 r = static_cast<__int128>(b.num) * a.den;
    return l < r ? -1 : (l > r ? 1 : 0);
}

}  // namespace

SlopeInterval feasible_slopes(const std::vector<Observation>& observations, unsigned p, unsigned e_max) {
    const long long k = static_cast<long long>(p) - 1;
    if (k < 1)
        throw Error("pipeline", "InvalidArgument", "p must be at least 2");
    std::vector<Bound> lower{{0, -1, false}};  // s >= -1/(p-1) since distances are >= 0
    std::vector<Bound> upper;
    for (const auto& o : observations) {
        const auto i = static_cast<long long>(o.i);
        if (o.saturated) {
            lower.push_back({i, static_cast<long long>(e_max) * k, true});
        } else if (o.index >= 2) {
            lower.push_back({i, (static_cast<long long>(o.index) - 1) * k, true});
            upper.push_back({i, static_cast<long long>(o.index) * k, false});
        } else {
            upper.push_back({i, k, false});
        }
    }

    Frac lo{0, 1};
    bool lo_closed = false;  // x > 0
    std::optional<Frac> hi;
    bool hi_closed = false;
    for (const auto& a : lower)
        for (const auto& b : upper) {
            // a.value - a.i x  (<|<=)  b.value - b.i x   <=>   (b.i - a.i) x  (<|<=)  b.value - a.value
            const long long di = b.i - a.i;
            const long long dv = b.value - a.value;
            if (di == 0) {
                if (a.strict ? dv <= 0 : dv < 0)
                    throw Error("pipeline", "Infeasible", "splitting indices are not consistent with any slope");
            } else if (di > 0) {
                const Frac bound{dv, di * k};
                const int c = hi ? compare(bound, *hi) : -1;
                if (c < 0 || (c == 0 && a.strict)) {
                    hi = bound;
                    hi_closed = !a.strict;
                }
            } else {
                const Frac bound{-dv, -di * k};
                const int c = compare(bound, lo);
                if (c > 0 || (c == 0 && a.strict)) {
                    lo = bound;
                    lo_closed = !a.strict;
                }
            }
        }
    SlopeInterval out;
    out.lo = Rational(lo.num, lo.den);
    out.lo_closed = lo_closed;
    if (hi) {
        out.hi = Rational(hi->num, hi->den);
        out.hi_closed = hi_closed;
        const int c = compare(*hi, lo);
        if (c < 0 || (c == 0 && !(lo_closed && hi_closed)))
            throw Error("pipeline", "Infeasible", "splitting indices are not consistent with any slope");
    }
    return out;
}

std::vector<Rational> bounded_rationals(const SlopeInterval& interval, long long denom_bound, std::size_t limit) {
    if (denom_bound < 1)
        throw Error("pipeline", "InvalidArgument", "denominator bound must be positive");
    if (!interval.hi)
        throw Error("pipeline", "Ambiguous", "slope is unbounded above");
    std::set<Rational> found;
    for (long long q = 1; q <= denom_bound; ++q) {
        const Rational lo = interval.lo * q;
        const Rational hi = *interval.hi * q;
        Integer a = interval.lo_closed ? ceil(lo) : floor(lo) + 1;
        const Integer b = interval.hi_closed ? floor(hi) : ceil(hi) - 1;
        for (; a <= b; ++a) {
            found.insert(Rational(a, q));
            if (found.size() > limit)
                throw Error("pipeline", "Ambiguous", "more than " + std::to_string(limit) +
                                                         " rationals fit the observations");
        }
    }
    return {found.begin(), found.end()};
}

Rational snap_rational(const SlopeInterval& interval, long long denom_bound) {
    try {
        const auto found = bounded_rationals(interval, denom_bound, 1);
        if (found.empty())
            throw Error("pipeline", "NoCandidate",
                        "no rational with denominator <= " + std::to_string(denom_bound) + " fits the observations");
        return found.front();
    } catch (const Error& err) {
        if (err.kind() != "Ambiguous" || !interval.hi)
            throw;
        const auto some = bounded_rationals(interval, denom_bound, std::numeric_limits<std::size_t>::max());
        throw Error("pipeline", "Ambiguous",
                    "both " + to_string(some.front()) + " and " + to_string(some.back()) + " fit the observations");
    }
}

std::vector<Observation> observe(const SplitOracle& oracle, const LoopUnrolling& window,
                                 const RecoveryOptions& options) {
    if (options.i_max == 0)
        throw Error("pipeline", "InvalidArgument", "i_max must be at least 1");
    std::vector<Observation> out;
    Walk trunk = window.vertex(0);
    trunk.resize(trunk.size() - window.phase);  // the phase steps never cancel
    const Walk tail(window.loop.steps.begin(), window.loop.steps.begin() + static_cast<std::ptrdiff_t>(window.phase));
    for (std::size_t i = 0; i <= options.i_max; ++i) {
        Walk z = trunk;
        z.insert(z.end(), tail.begin(), tail.end());
        const auto probe = oracle.probe(window, z);
        try {
            out.push_back({i, splitting_index([&](unsigned e) { return probe.splits(e); }, options.e_max), false});
        } catch (const Error& err) {
            if (err.kind() != "WindowTooShallow")
                throw;
            // Distances only grow along the walk: nothing further is observable.
            out.push_back({i, 0, true});
            break;
        }
        trunk.insert(trunk.end(), window.loop.steps.begin(), window.loop.steps.end());
    }
    return out;
}

SlopeInterval intersect(const SlopeInterval& a, const SlopeInterval& b) {
    SlopeInterval out = a;
    if (b.lo > out.lo || (b.lo == out.lo && !b.lo_closed)) {
        out.lo = b.lo;
        out.lo_closed = b.lo_closed;
    }
    if (b.hi && (!out.hi || *b.hi < *out.hi || (*b.hi == *out.hi && !b.hi_closed))) {
        out.hi = b.hi;
        out.hi_closed = b.hi_closed;
    }
    if (out.hi && (*out.hi < out.lo || (*out.hi == out.lo && !(out.lo_closed && out.hi_closed))))
        throw Error("pipeline", "Infeasible", "unrollings disagree on the loop length");
    return out;
}

namespace {

// Observes unrollings until one bounded rational is left (or they run out);
// `length` stays unset when still ambiguous.
struct Narrowed {
    SlopeInterval interval;
    std::vector<std::vector<Observation>> observations;
    std::optional<Rational> length;
};

Narrowed narrow(const SplitOracle& oracle, const std::vector<LoopUnrolling>& windows, const RecoveryOptions& options) {
    if (windows.empty())
        throw Error("pipeline", "InvalidArgument", "no unrolling to observe");
    Narrowed out;
    for (std::size_t k = 0; k < windows.size(); ++k) {
        out.observations.push_back(observe(oracle, windows[k], options));
        const auto slopes = feasible_slopes(out.observations.back(), oracle.prime(), options.e_max);
        out.interval = k == 0 ? slopes : intersect(out.interval, slopes);
        if (!out.interval.hi)
            continue;
        const auto found = bounded_rationals(out.interval, options.denom_bound, std::numeric_limits<std::size_t>::max());
        if (found.empty())
            throw Error("pipeline", "NoCandidate",
                        "no rational with denominator <= " + std::to_string(options.denom_bound) +
                            " fits the observations");
        if (found.size() == 1) {
            out.length = found.front();
            return out;
        }
    }
    return out;
}

}  // namespace

LoopRecovery recover_loop_length(const SplitOracle& oracle, const std::vector<LoopUnrolling>& windows,
                                 const RecoveryOptions& options) {
    auto narrowed = narrow(oracle, windows, options);
    LoopRecovery out;
    out.interval = narrowed.interval;
    out.observations = std::move(narrowed.observations);
    out.length = narrowed.length ? *narrowed.length : snap_rational(out.interval, options.denom_bound);
    return out;
}

LoopRecovery recover_loop_length(const SplitOracle& oracle, const LoopUnrolling& window,
                                 const RecoveryOptions& options) {
    return recover_loop_length(oracle, std::vector<LoopUnrolling>{window}, options);
}

// -- end to end -------------------------------------------------------------------

namespace {

std::vector<Loop> loops_by_size(const Graph& g, std::size_t max_loops) {
    auto loops = enumerate_loops(g, max_loops);
    std::stable_sort(loops.begin(), loops.end(), [](const Loop& a, const Loop& b) { return a.size() < b.size(); });
    return loops;
}

}  // namespace

RecoveryReport recover_all(const Graph& structure, SplitOracle& oracle, const RecoveryOptions& options) {
    check_structure(structure, "recover_all");
    const std::size_t columns = structure.edge_count();
    reconstruct::ConstraintSystem system;
    for (const auto& e : structure.edges())
        system.edge_order.push_back(e.id);
    reconstruct::Echelon echelon(columns);
    std::set<std::vector<int>> seen;
    RecoveryReport report;

    // Loops whose own observations leave several candidate lengths.
    struct Pending {
        covering::ConstraintRow row;
        SlopeInterval interval;
        reconstruct::RowSource source;
    };
    std::vector<Pending> pending;

    // Rows that would not raise the rank are never measured.
    auto harvest = [&](const covering::Covering& cover, std::size_t oracle_id) {
        const std::size_t system_id = system.coverings.size();
        system.coverings.push_back(cover);
        const auto loops = loops_by_size(cover.total, options.max_loops);
        bool used = false;
        for (const auto& loop : loops) {
            if (echelon.full_rank())
                break;
            auto row = covering::push_loop(cover, loop);
            if (!seen.insert(row.coeffs).second)
                continue;
            reconstruct::Echelon trial = echelon;
            if (!trial.add(row.coeffs))
                continue;
            std::vector<Loop> lines;
            for (const auto& other : loops) {
                if (lines.size() == options.line_loops)
                    break;
                if (other.edge_set() != loop.edge_set())
                    lines.push_back(other);
            }
            if (lines.empty())
                continue;
            ++report.loops_attempted;
            Narrowed narrowed;
            try {
                narrowed = narrow(oracle, unrollings(cover.total, loop, lines, oracle_id), options);
            } catch (const Error& err) {
                if (err.module() != "pipeline" || err.kind() == "InvalidArgument")
                    throw;
                ++report.loops_skipped;
                continue;
            }
            if (!narrowed.length) {
                ++report.loops_skipped;
                if (narrowed.interval.hi)
                    pending.push_back({std::move(row), std::move(narrowed.interval), {system_id, loop}});
                continue;
            }
            ++report.loops_recovered;
            row.rhs = *narrowed.length;
            echelon.add(row.coeffs, row.rhs);
            system.rows.push_back(std::move(row));
            system.sources.push_back({system_id, loop});
            used = true;
        }
        if (used) {
            ++report.coverings_used;
            report.degree_used = std::max(report.degree_used, static_cast<unsigned>(cover.degree));
        }
    };

    // Completes the rank with ambiguous rows, tries every combination of their
    // candidate lengths, and keeps metrics that are positive and agree with
    // every observed interval and the denominator bound. Succeeds only when
    // exactly one metric survives.
    auto resolve_jointly = [&]() -> bool {
        reconstruct::Echelon completed = echelon;
        std::vector<const Pending*> chosen;
        std::vector<std::vector<Rational>> candidates;
        std::size_t combinations = 1;
        for (const auto& p : pending) {
            if (completed.full_rank())
                break;
            std::vector<Rational> values;
            try {
                values = bounded_rationals(p.interval, options.denom_bound, options.max_candidates);
            } catch (const Error&) {
                continue;
            }
            if (!completed.add(p.row.coeffs))
                continue;
            combinations *= values.size();
            if (combinations > options.max_combinations)
                return false;
            chosen.push_back(&p);
            candidates.push_back(std::move(values));
        }
        if (!completed.full_rank())
            return false;
        std::set<std::vector<Rational>> fits;
        std::vector<std::size_t> pick(chosen.size(), 0);
        for (;;) {
            reconstruct::Echelon trial = echelon;
            for (std::size_t k = 0; k < chosen.size(); ++k)
                trial.add(chosen[k]->row.coeffs, candidates[k][pick[k]]);
            if (!trial.inconsistent() && trial.full_rank()) {
                auto f = trial.solution();
                bool ok = std::all_of(f.begin(), f.end(), [](const Rational& x) { return x > 0; });
                for (std::size_t k = 0; ok && k < pending.size(); ++k) {
                    Rational v = 0;
                    for (std::size_t c = 0; c < columns; ++c)
                        if (pending[k].row.coeffs[c] != 0)
                            v += pending[k].row.coeffs[c] * f[c];
                    ok = pending[k].interval.contains(v) && denominator(v) <= options.denom_bound;
                }
                if (ok)
                    fits.insert(std::move(f));
                if (fits.size() > 1)
                    return false;
            }
            std::size_t k = 0;
            for (; k < pick.size(); ++k) {
                if (++pick[k] < candidates[k].size())
                    break;
                pick[k] = 0;
            }
            if (k == pick.size())
                break;
        }
        if (fits.size() != 1)
            return false;
        const auto& f = *fits.begin();
        for (const auto* p : chosen) {
            auto row = p->row;
            row.rhs = 0;
            for (std::size_t c = 0; c < columns; ++c)
                if (row.coeffs[c] != 0)
                    row.rhs += row.coeffs[c] * f[c];
            echelon.add(row.coeffs, row.rhs);
            system.rows.push_back(std::move(row));
            system.sources.push_back(p->source);
            ++report.loops_resolved_jointly;
        }
        return true;
    };

    harvest(covering::trivial_covering(structure), 0);
    if (!echelon.full_rank() && options.max_degree >= 2)
        for (const auto& cover : covering::enumerate_connected_double_covers(structure)) {
            if (echelon.full_rank())
                break;
            harvest(cover, oracle.add_covering(cover));
        }
    if (!echelon.full_rank())
        resolve_jointly();
    if (!echelon.full_rank() && options.max_degree >= 3) {
        std::size_t budget = options.max_triple_covers;
        covering::for_each_connected_triple_cover(structure, [&](const covering::Covering& cover) {
            if (echelon.full_rank() || budget == 0)
                return false;
            --budget;
            harvest(cover, oracle.add_covering(cover));
            return true;
        });
        if (!echelon.full_rank())
            resolve_jointly();
    }
    if (!echelon.full_rank())
        throw reconstruct::RankDeficientError(echelon.rank(), echelon.null_space());

    report.rows_used = system.rows.size();
    report.recovered = MetricGraph(structure, reconstruct::solve_lengths(system));
    return report;
}

}  // namespace skelmetric::pipeline
