#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "skelmetric/currents.hpp"
#include "skelmetric/padic.hpp"
#include "support.hpp"

using namespace skelmetric;
using namespace skelmetric::currents;
using namespace testing;

namespace {

// Path x0 - x1 - ... - x{n-1}, unit lengths.
MetricGraph path_metric(std::size_t n) {
    Graph g = path_tree(n);
    return MetricGraph(g, std::vector<Rational>(g.edge_count(), Rational(1)));
}

std::vector<bool> flags(std::size_t n, std::initializer_list<VertexIndex> on) {
    std::vector<bool> out(n, false);
    for (auto v : on)
        out[v] = true;
    return out;
}

std::vector<OrientedEdge> forward_steps(EdgeIndex from, EdgeIndex to) {
    std::vector<OrientedEdge> out;
    for (EdgeIndex e = from; e < to; ++e)
        out.push_back({e, true});
    return out;
}

WindowMap shift(std::size_t n, std::size_t by) {
    WindowMap m;
    for (VertexIndex v = 0; v < n; ++v)
        m.image.push_back(v + by < n ? std::optional<VertexIndex>(v + by) : std::nullopt);
    return m;
}

}  // namespace

TEST_CASE("loop currents") {
    const Graph t = theta();
    const Loop ab{{{0, true}, {1, false}}};
    const Current c = loop_current(t, ab);
    CHECK(c.flow() == std::vector<std::int64_t>{1, -1, 0});
    CHECK(c.flow(OrientedEdge{1, true}) == -1);
    CHECK(c.flow(OrientedEdge{1, false}) == 1);
    CHECK(c.satisfies_kirchhoff());

    auto shared = std::make_shared<const Graph>(t);
    const Current empty = loop_current(shared, {}, 0, {});
    CHECK(empty.flow() == std::vector<std::int64_t>{0, 0, 0});

    const Loop twice{{{0, true}, {0, false}}};
    CHECK(error_name([&] { loop_current(t, twice); }) == "graph::InvalidLoop");
    CHECK(error_name([&] { loop_current(shared, {}, 0, {{0, true}, {0, false}}); }) == "currents::NotSimple");
    CHECK(error_name([&] { loop_current(shared, {}, 0, {{0, true}}); }) == "currents::KirchhoffViolation");
}

TEST_CASE("line current is supported on the marked line") {
    generate::Rng rng(2);
    const TreeWindow w = random_line_window(rng, 6, 3);
    const Current c = line_current(w);
    std::set<EdgeIndex> line;
    for (const auto& s : w.marked_line())
        line.insert(s.edge);
    for (EdgeIndex e = 0; e < w.graph().edge_count(); ++e)
        CHECK((c.flow()[e] != 0) == (line.count(e) == 1));
    CHECK(c.satisfies_kirchhoff());
}

TEST_CASE("translate sums") {
    const auto m = path_metric(7);
    const auto g = std::make_shared<const Graph>(m.graph());
    const auto boundary = flags(7, {0, 2, 4, 6});
    const Current c0 = loop_current(g, boundary, 0, forward_steps(0, 2));

    CHECK(translate_sum(c0, {WindowMap::identity(7)}) == c0);

    const Current both = translate_sum(c0, {WindowMap::identity(7), shift(7, 4)});
    CHECK(both.flow() == std::vector<std::int64_t>{1, 1, 0, 0, 1, 1});
    // On K' = {x0 x1, x1 x2} only the identity translate lands.
    CHECK(both.flow()[0] == c0.flow()[0]);
    CHECK(both.flow()[1] == c0.flow()[1]);

    const std::vector<WindowMap> a{WindowMap::identity(7), shift(7, 2)};
    const std::vector<WindowMap> b{shift(7, 4), shift(7, 2)};
    std::vector<WindowMap> ab = a;
    ab.insert(ab.end(), b.begin(), b.end());
    CHECK(translate_sum(c0, ab) == translate_sum(c0, a) + translate_sum(c0, b));
    CHECK(translate_sum(c0, ab).satisfies_kirchhoff());

    CHECK(error_name([&] { translate_sum(c0, {shift(7, 5)}); }) == "currents::LeavesWindow");
}

TEST_CASE("star residues") {
    const auto m = path_metric(3);
    const auto g = std::make_shared<const Graph>(m.graph());
    const auto boundary = flags(3, {0, 2});
    const Current one = loop_current(g, boundary, 0, forward_steps(0, 2));
    CHECK(star_residue_nonzero(one, 1, 2));
    const Current zero(g, boundary);
    for (std::int64_t n : {2, 3, 8})
        CHECK_FALSE(star_residue_nonzero(zero, 1, n));
    const Current two(g, boundary, {2, 2});
    CHECK_FALSE(star_residue_nonzero(two, 1, 2));
    CHECK(star_residue_nonzero(two, 1, 3));
    CHECK(error_name([&] { star_residue_nonzero(two, 0, 2); }) == "currents::BoundaryVertex");
    CHECK(error_name([&] { star_residue_nonzero(two, 1, 1); }) == "currents::InvalidModulus");
    CHECK(error_name([&] { Current(g, boundary, {1, 2}); }) == "currents::KirchhoffViolation");
}

TEST_CASE("splitting by vanishing on a path window") {
    // x0 .. x20 with the line along x0 .. x20 is degenerate, so hang a long
    // branch off x10 and read verdicts along it.
    Graph g = path_tree(21);
    VertexIndex prev = 10;
    for (int k = 0; k < 12; ++k) {
        const auto v = g.add_vertex("b" + std::to_string(k));
        g.add_edge("h" + std::to_string(k), prev, v);
        prev = v;
    }
    std::vector<bool> boundary(g.vertex_count(), false);
    boundary[0] = boundary[20] = boundary[prev] = true;
    const TreeWindow w(MetricGraph(g, std::vector<Rational>(g.edge_count(), Rational(1))), boundary,
                       forward_steps(0, 20), 0);
    const Current c = line_current(w);
    const Current zero(share_graph(w), boundary);

    CHECK(split_by_vanishing(w, zero, 10, 1, 2) == SplitVerdict::Split);
    CHECK(split_by_vanishing(w, c, 10, 1, 2) == SplitVerdict::NotSplit);  // flow +-1, p^e = 2
    // b_k sits at distance k + 1 from the line; threshold 2, margin 1.
    CHECK(split_by_vanishing(w, c, g.vertex_index("b1"), 1, 2) == SplitVerdict::Unknown);
    CHECK(split_by_vanishing(w, c, g.vertex_index("b2"), 1, 2) == SplitVerdict::Unknown);
    CHECK(split_by_vanishing(w, c, g.vertex_index("b3"), 1, 2) == SplitVerdict::Split);
    CHECK(line_current_splits(w, g.vertex_index("b2"), 1, 2));
    CHECK_FALSE(line_current_splits(w, g.vertex_index("b1"), 1, 2));
    CHECK(split_by_vanishing(w, c, g.vertex_index("b2"), 1, 2, Rational(1, 2)) == SplitVerdict::Split);

    CHECK(error_name([&] { split_by_vanishing(w, c, 0, 1, 2); }) == "currents::BoundaryVertex");
    CHECK(error_name([&] { split_by_vanishing(w, c, 2, 1, 2); }) == "currents::BallExitsWindow");
    CHECK(error_name([&] { split_by_vanishing(w, c, 10, 1, 2, 0); }) == "currents::InvalidMargin");
}

TEST_CASE("window validation") {
    const auto m = path_metric(4);
    CHECK(error_name([&] { TreeWindow(with_lengths(theta(), {1, 1, 1}), {}); }) == "currents::NotATree");
    CHECK(error_name([&] { TreeWindow(m, flags(4, {0}), forward_steps(0, 3), 0); }) == "currents::InvalidLine");
    CHECK(error_name([&] { TreeWindow(m, flags(4, {0, 3}), {{0, true}, {2, true}}, 0); }) == "currents::InvalidLine");
    const TreeWindow w(m, flags(4, {0, 3}), forward_steps(0, 3), 0);
    CHECK(w.distance_to_line(2) == 0);
    CHECK(w.ball_inside(1, 1));
    CHECK_FALSE(w.ball_inside(1, 2));
}

TEST_CASE("line currents on random windows") {
    generate::Rng rng(41);
    std::size_t decided = 0;
    for (int trial = 0; trial < 40; ++trial) {
        const TreeWindow w = random_line_window(rng, 12, 7);
        const Current c = line_current(w);
        REQUIRE(c.satisfies_kirchhoff());
        const unsigned p = rng.coin() ? 2 : 3;
        const auto e = static_cast<unsigned>(rng.uniform(0, 3));
        const Rational margin = rng.rational(Rational(1, 4), 1, 4);
        const Rational threshold = padic::split_threshold(p, e);
        for (VertexIndex z = 0; z < w.graph().vertex_count(); ++z) {
            if (w.is_boundary(z) || !w.ball_inside(z, threshold + margin))
                continue;
            ++decided;
            const auto verdict = split_by_vanishing(w, c, z, e, p, margin);
            const Rational d = w.distance_to_line(z);
            CHECK((verdict == SplitVerdict::Split) == (e == 0 || d > threshold + margin));
            if (verdict == SplitVerdict::Split && e > 0)
                CHECK_FALSE(star_residue_nonzero(c, z, static_cast<std::int64_t>(std::pow(p, e))));
            if (e > 0)
                CHECK((verdict == SplitVerdict::NotSplit) == (d == 0));
            CHECK(line_current_splits(w, z, e, p) == (d > threshold));
        }
    }
    CHECK(decided > 100);
}

TEST_CASE("deviation bound exponent") {
    CHECK(deviation_bound_exponent(0, 5) == -5);
    CHECK(deviation_bound_exponent(Rational(7, 3), Rational(7, 3)) == 0);
    CHECK(deviation_bound_exponent(3, 5) == -2);
    CHECK(error_name([] { deviation_bound_exponent(-1, 5); }) == "currents::InvalidArgument");
    CHECK(error_name([] { deviation_bound_exponent(1, 0); }) == "currents::InvalidArgument");
}

TEST_CASE("current dot export") {
    const Current c = loop_current(theta(), Loop{{{0, true}, {1, false}}});
    const auto dot = to_dot(c, "L");
    CHECK(dot.rfind("digraph \"L\" {", 0) == 0);
    CHECK(dot.find("a:+1") != std::string::npos);
    CHECK(dot.find("b:-1") != std::string::npos);
}
