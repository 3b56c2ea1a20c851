#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "skelmetric/reconstruct.hpp"
#include "support.hpp"

using namespace skelmetric;
using namespace testing;

namespace {

reconstruct::ConstraintSystem system_of(const Graph& g, std::vector<std::vector<int>> coeffs, std::vector<Rational> rhs) {
    reconstruct::ConstraintSystem s;
    for (const auto& e : g.edges())
        s.edge_order.push_back(e.id);
    for (std::size_t r = 0; r < coeffs.size(); ++r)
        s.rows.push_back({coeffs[r], rhs[r]});
    return s;
}

// Rank by plain fraction-free elimination on integer copies.
std::size_t rank_oracle(std::vector<std::vector<Rational>> a) {
    std::size_t rank = 0;
    const std::size_t cols = a.empty() ? 0 : a[0].size();
    for (std::size_t c = 0; c < cols && rank < a.size(); ++c) {
        std::size_t pivot = rank;
        while (pivot < a.size() && a[pivot][c] == 0)
            ++pivot;
        if (pivot == a.size())
            continue;
        std::swap(a[pivot], a[rank]);
        for (std::size_t r = 0; r < a.size(); ++r)
            if (r != rank && a[r][c] != 0) {
                const Rational f = a[r][c] / a[rank][c];
                for (std::size_t k = 0; k < cols; ++k)
                    a[r][k] -= f * a[rank][k];
            }
        ++rank;
    }
    return rank;
}

std::size_t rank_of(const reconstruct::ConstraintSystem& s) {
    std::vector<std::vector<Rational>> a;
    for (const auto& row : s.rows)
        a.emplace_back(row.coeffs.begin(), row.coeffs.end());
    return rank_oracle(a);
}

std::size_t base_rank(const Graph& g) {
    const auto s = reconstruct::constraint_matrix(g);
    reconstruct::ConstraintSystem base;
    for (std::size_t r = 0; r < s.rows.size(); ++r)
        if (s.sources[r].covering == 0)
            base.rows.push_back(s.rows[r]);
    return rank_of(base);
}

}  // namespace

TEST_CASE("constraint matrices of the small examples") {
    const auto t = reconstruct::constraint_matrix(theta());
    CHECK(t.coverings.size() == 4);
    REQUIRE(t.rows.size() >= 3);
    CHECK(t.rows[0].coeffs == std::vector<int>{1, 1, 0});
    CHECK(t.rows[1].coeffs == std::vector<int>{1, 0, 1});
    CHECK(t.rows[2].coeffs == std::vector<int>{0, 1, 1});
    CHECK(base_rank(theta()) == 3);

    CHECK(base_rank(dumbbell()) == 2);
    const auto d = reconstruct::constraint_matrix(dumbbell());
    CHECK(rank_of(d) == 3);
    bool bridge_row = false;
    for (std::size_t r = 0; r < d.rows.size(); ++r)
        if (d.sources[r].covering != 0 && d.rows[r].coeffs[1] == 2)
            bridge_row = true;
    CHECK(bridge_row);

    const auto tree = reconstruct::constraint_matrix(path_tree(4));
    CHECK(tree.rows.empty());
    CHECK(tree.columns() == 3);
}

TEST_CASE("solving the examples") {
    // Loops {a,b}, {b,c}, {a,c}.
    const auto t = system_of(theta(), {{1, 1, 0}, {0, 1, 1}, {1, 0, 1}}, {3, 5, 4});
    CHECK(reconstruct::solve_lengths(t) == std::vector<Rational>{1, 2, 3});

    const auto d = system_of(dumbbell(), {{1, 0, 0}, {0, 0, 1}, {1, 2, 1}}, {1, 1, 12});
    CHECK(reconstruct::solve_lengths(d) == std::vector<Rational>{1, 5, 1});

    const auto zero = system_of(theta(), {{1, 1, 0}, {0, 1, 1}, {1, 0, 1}}, {0, 0, 0});
    CHECK(reconstruct::solve_lengths(zero) == std::vector<Rational>{0, 0, 0});
}

TEST_CASE("solver errors") {
    const auto short_rank = system_of(theta(), {{1, 1, 0}, {2, 2, 0}}, {3, 6});
    try {
        reconstruct::solve_lengths(short_rank);
        FAIL("expected rank deficiency");
    } catch (const reconstruct::RankDeficientError& e) {
        CHECK(e.name() == "reconstruct::RankDeficient");
        CHECK(e.rank() == 1);
        CHECK(e.null_space().size() == 2);
    }

    const auto clash = system_of(theta(), {{1, 1, 0}, {0, 1, 1}, {1, 0, 1}, {1, 1, 0}}, {3, 5, 4, 7});
    try {
        reconstruct::solve_lengths(clash);
        FAIL("expected inconsistency");
    } catch (const reconstruct::InconsistentError& e) {
        CHECK(e.name() == "reconstruct::Inconsistent");
        CHECK(e.row() == 3);
    }
}

TEST_CASE("echelon form") {
    reconstruct::Echelon ech(3);
    CHECK(ech.add(std::vector<int>{0, 1, 1}, 5));
    CHECK_FALSE(ech.add(std::vector<int>{0, 2, 2}, 10));
    CHECK_FALSE(ech.inconsistent());
    CHECK(ech.rank() == 1);
    const auto kernel = ech.null_space();
    REQUIRE(kernel.size() == 2);
    for (const auto& k : kernel)
        CHECK(k[1] + k[2] == 0);
    CHECK(ech.add(std::vector<int>{1, 1, 0}, 3));
    CHECK(ech.add(std::vector<int>{1, 0, 1}, 4));
    CHECK(ech.full_rank());
    CHECK(ech.solution() == std::vector<Rational>{1, 2, 3});
    CHECK_FALSE(ech.add(std::vector<int>{1, 1, 1}, 7));
    CHECK(ech.inconsistent());
}

TEST_CASE("verify on the examples") {
    const auto k = reconstruct::verify_prop_a1(k4());
    CHECK(k.full_rank);
    CHECK(k.rank == 6);
    CHECK(base_rank(k4()) == 6);
    CHECK(reconstruct::verify_prop_a1(theta()).full_rank);
    CHECK(reconstruct::verify_prop_a1(dumbbell()).degree_used == 2);

    const Graph split = subdivide_edge(theta(), 0);
    const auto r = reconstruct::verify_prop_a1(split);
    CHECK_FALSE(r.full_rank);
    CHECK_FALSE(r.valency_hypothesis);
    CHECK(r.min_valency == 2);
    REQUIRE(r.null_space.size() == 1);
    // Only the sum of the two halves is constrained.
    CHECK(r.null_space[0][0] == -r.null_space[0][1]);
    CHECK(r.null_space[0][2] == 0);
}

TEST_CASE("full rank on random min-valency-3 graphs; subdividing breaks it") {
    generate::Rng rng(101);
    int needed_triple = 0;
    for (int trial = 0; trial < 100; ++trial) {
        const Graph g = generate::min_valency3_graph(rng, 10);
        REQUIRE(min_valency(g) >= 3);
        REQUIRE(g.edge_count() <= 10);
        const auto report = reconstruct::verify_prop_a1(g);
        CHECK(report.full_rank);
        if (report.degree_used == 3)
            ++needed_triple;
        if (trial % 10 == 0) {
            const auto e = static_cast<EdgeIndex>(rng.uniform(0, static_cast<std::int64_t>(g.edge_count()) - 1));
            CHECK_FALSE(reconstruct::verify_prop_a1(subdivide_edge(g, e)).full_rank);
        }
    }
    MESSAGE("graphs needing degree 3: " << needed_triple);
}

TEST_CASE("exact recovery from measured loop lengths") {
    generate::Rng rng(7);
    for (int trial = 0; trial < 30; ++trial) {
        const Graph g = generate::min_valency3_graph(rng, 8);
        const MetricGraph hidden = generate::with_random_lengths(rng, g, 12);
        auto system = reconstruct::constraint_matrix(g, reconstruct::VerifyOptions{});
        reconstruct::measure_rhs(system, hidden);
        CHECK(reconstruct::solve_lengths(system) == hidden.lengths());
        for (std::size_t r = 0; r < system.rows.size(); ++r) {
            int sum = 0;
            for (int c : system.rows[r].coeffs) {
                CHECK(c >= 0);
                CHECK(c <= static_cast<int>(system.coverings[system.sources[r].covering].degree));
                sum += c;
            }
            CHECK(sum == static_cast<int>(system.sources[r].loop.size()));
        }
    }
}

TEST_CASE("assembly errors") {
    Graph cusped = theta();
    cusped.add_cusp("z", 1);
    CHECK(error_name([&] { reconstruct::constraint_matrix(cusped); }) == "covering::CuspsPresent");
    CHECK(error_name([] { reconstruct::constraint_matrix(k4(), 3); }) == "graph::LoopLimit");
}
