#pragma once

// Recovery of a hidden metric from splitting answers.
//
// Vertices of the universal covering tree of a graph are reduced walks from a
// base vertex. For a loop C and another loop L, the vertices z_i reached by
// walking C repeatedly sit at distance r + i*lg(C) from a lift of L. A split
// oracle only says whether d(z, L~) > e + 1/(p-1); the splitting index
// m(z) = max(1, ceil(d - 1/(p-1))) is read off by increasing e, and lg(C) is
// pinned down exactly from the sequence m(z_0), m(z_1), ... together with a
// bound on its denominator. Loop lengths of the base graph and of its double
// covers then determine every edge length.

#include "skelmetric/covering.hpp"
#include "skelmetric/currents.hpp"
#include "skelmetric/graph.hpp"
#include "skelmetric/reconstruct.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace skelmetric::pipeline {

using Walk = std::vector<OrientedEdge>;

/// Appends `step`, cancelling an immediate backtrack.
void push_reduced(Walk& walk, OrientedEdge step);
Walk reduce(const Walk& walk);
Walk inverse(const Walk& walk);

// -- explicit windows --------------------------------------------------------

/// Finite ball of the universal covering tree around the lift z0 of the first
/// vertex of `loop`, with the lift of the loop marked as the line.
struct CoverWindow {
    currents::TreeWindow window;
    MetricGraph base;
    Loop loop;
    std::vector<Walk> walks;               // window vertex -> reduced walk from z0
    VertexIndex z0 = 0;
    std::vector<VertexIndex> translates;   // z_0, z_1, ... (C walked i times) inside the window
    Rational depth;
};

/// Throws pipeline::InvalidDepth if depth <= 0 or the window would not reach
/// z_1, pipeline::WindowTooLarge past `max_vertices`.
CoverWindow build_window(const MetricGraph& g, const Loop& loop, const Rational& depth,
                         std::size_t max_vertices = 200'000);

// -- implicit windows used by the recovery ---------------------------------------

/// Combinatorial data locating z_i and the line L~ in the universal covering
/// of `graph`; no lengths involved. Walks are expressed from the lift of the
/// first vertex of `line_loop`, which lies on L~.
struct LoopUnrolling {
    std::size_t covering = 0;  // oracle covering id
    Graph graph;
    Loop loop;
    Loop line_loop;
    Walk connector;            // from the first vertex of `loop` to the first vertex of `line_loop`
    std::size_t offset = 0;    // z_i is C walked offset + i times,
    std::size_t phase = 0;     // then the first `phase` steps of C

    Walk vertex(std::size_t i) const;
};

/// Throws pipeline::NoSecondLoop when both loops share their edge set.
LoopUnrolling unroll_loop(const Graph& graph, const Loop& loop, const Loop& line_loop, std::size_t covering_id = 0);
/// Unrollings of `loop` and of its reverse, at every phase, against each of
/// the line loops (those with the loop's own edge set are skipped). They share
/// lg(C) but not the offset r, which sharpens the recovery.
std::vector<LoopUnrolling> unrollings(const Graph& graph, const Loop& loop, const std::vector<Loop>& line_loops,
                                      std::size_t covering_id = 0);
/// Chooses the line loop (the first loop of `graph` with a different edge set)
/// and the offset after which the distance to the line grows by lg(C) per
/// step. Throws pipeline::NoSecondLoop.
LoopUnrolling unroll_loop(const Graph& graph, const Loop& loop, std::size_t covering_id = 0,
                          std::size_t max_loops = kDefaultMaxLoops);

/// Answers "is the Z/p^e torsor attached to the line current split over z?"
/// from a concealed metric, by d(z, L~) > e + 1/(p-1).
class SplitOracle {
public:
    SplitOracle(MetricGraph hidden, unsigned p);

    unsigned prime() const noexcept { return p_; }
    /// Registers a covering of the hidden graph; returns its id. Id 0 is the
    /// graph itself.
    std::size_t add_covering(const covering::Covering& cover);

    bool splits(const LoopUnrolling& window, const Walk& z, unsigned e) const;

    /// Split answers for one vertex; the distance is computed once.
    class Probe {
    public:
        bool splits(unsigned e) const;

    private:
        friend class SplitOracle;
        Probe(Rational distance, unsigned p) : distance_(std::move(distance)), p_(p) {}
        Rational distance_;
        unsigned p_;
    };
    Probe probe(const LoopUnrolling& window, const Walk& z) const;

private:
    Rational distance_to_line(const LoopUnrolling& window, const Walk& z) const;

    unsigned p_;
    std::vector<MetricGraph> metrics_;
};

/// m(z) = 1 + max{e in [1, e_max] : split at e}, the max of an empty set being 0, assuming
/// answers are monotone in e. Throws pipeline::WindowTooShallow if still split
/// at e_max.
unsigned splitting_index(const std::function<bool(unsigned)>& split_at, unsigned e_max);
unsigned splitting_index(const SplitOracle& oracle, const LoopUnrolling& window, std::size_t i, unsigned e_max);

struct RecoveryOptions {
    unsigned e_max = 64;
    std::size_t i_max = 256;
    long long denom_bound = 16;
    unsigned max_degree = 3;
    std::size_t max_triple_covers = 200;
    std::size_t max_loops = kDefaultMaxLoops;
    std::size_t line_loops = 3;        // line loops tried per recovered loop
    std::size_t max_candidates = 16;   // per ambiguous loop in the joint resolution
    std::size_t max_combinations = 4096;
};

/// Interval of slopes x compatible with the observed indices; lo/hi open or
/// closed per flag, hi absent when unbounded.
struct SlopeInterval {
    Rational lo;
    bool lo_closed = false;
    std::optional<Rational> hi;
    bool hi_closed = false;

    bool contains(const Rational& x) const;
};

struct Observation {
    std::size_t i = 0;
    unsigned index = 0;      // m(z_i); meaningless when saturated
    bool saturated = false;  // still split at e_max
};

/// Slopes x > 0 for which some s >= -1/(p-1) gives
///   ceil(i*x + s) = m_i when m_i >= 2,  i*x + s <= 1 when m_i = 1,
///   i*x + s > e_max for a saturated observation.
/// Throws pipeline::Infeasible.
SlopeInterval feasible_slopes(const std::vector<Observation>& observations, unsigned p, unsigned e_max);

/// Rationals with denominator <= bound in the interval, ascending. Throws
/// pipeline::Ambiguous if unbounded or more than `limit` qualify.
std::vector<Rational> bounded_rationals(const SlopeInterval& interval, long long denom_bound, std::size_t limit);

/// The unique rational with denominator <= bound in the interval. Throws
/// pipeline::NoCandidate or pipeline::Ambiguous.
Rational snap_rational(const SlopeInterval& interval, long long denom_bound);

/// Indices m(z_0), m(z_1), ... of one unrolling up to i_max or the first
/// saturated vertex.
std::vector<Observation> observe(const SplitOracle& oracle, const LoopUnrolling& window, const RecoveryOptions& options);

/// Intersection; throws pipeline::Infeasible when empty.
SlopeInterval intersect(const SlopeInterval& a, const SlopeInterval& b);

struct LoopRecovery {
    Rational length;
    SlopeInterval interval;
    std::vector<std::vector<Observation>> observations;  // per unrolling used
};

/// Observes the unrollings in order, intersecting their slope intervals, and
/// stops as soon as one rational of bounded denominator remains.
/// Throws pipeline::InvalidArgument (i_max == 0, no unrolling), NoCandidate,
/// Ambiguous.
LoopRecovery recover_loop_length(const SplitOracle& oracle, const std::vector<LoopUnrolling>& windows,
                                 const RecoveryOptions& options = {});
LoopRecovery recover_loop_length(const SplitOracle& oracle, const LoopUnrolling& window,
                                 const RecoveryOptions& options = {});

struct RecoveryReport {
    MetricGraph recovered;
    std::size_t loops_attempted = 0;
    std::size_t loops_recovered = 0;
    std::size_t loops_skipped = 0;  // not pinned down on their own within e_max / i_max
    std::size_t loops_resolved_jointly = 0;  // skipped loops fixed by the other rows
    std::size_t rows_used = 0;
    std::size_t coverings_used = 0;
    unsigned degree_used = 1;
};

/// Recovers every edge length of `structure` from oracle answers alone. Loop
/// lengths pinned down on their own give exact rows; when those fall short of
/// full rank, ambiguous loops are settled jointly (the unique positive metric
/// consistent with all their observations), else RankDeficient.
/// Throws pipeline::InvalidStructure, reconstruct::RankDeficient /
/// Inconsistent.
RecoveryReport recover_all(const Graph& structure, SplitOracle& oracle, const RecoveryOptions& options = {});

}  // namespace skelmetric::pipeline
