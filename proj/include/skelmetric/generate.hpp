#pragma once

// Seeded random inputs for the CLI and the test suites. Draws use only the raw
// 64-bit output of std::mt19937_64, which the standard fixes, so a seed gives
// the same graph on every platform.

#include "skelmetric/graph.hpp"

#include <cstdint>
#include <random>

namespace skelmetric::generate {

class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}
    /// Uniform in [lo, hi].
    std::int64_t uniform(std::int64_t lo, std::int64_t hi);
    bool coin() { return uniform(0, 1) == 1; }
    /// num/den with 1 <= den <= max_den and lo <= value <= hi.
    Rational rational(const Rational& lo, const Rational& hi, std::int64_t max_den);

private:
    std::mt19937_64 engine_;
};

/// Connected multigraph (self-loops and parallel edges allowed), every vertex
/// of valency >= 3, at most `max_edges` edges (>= 2). Vertices v0.., edges e0..
Graph min_valency3_graph(Rng& rng, std::size_t max_edges);

/// Edge lengths in [1/max_den, 1] with denominators <= max_den.
MetricGraph with_random_lengths(Rng& rng, const Graph& g, std::int64_t max_den);

}  // namespace skelmetric::generate
