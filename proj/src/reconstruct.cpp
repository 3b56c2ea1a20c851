#include "skelmetric/reconstruct.hpp"

#include <boost/multiprecision/number.hpp>

#include <algorithm>
#include <set>

namespace skelmetric::reconstruct {

using covering::ConstraintRow;
using covering::Covering;

// -- Echelon -----------------------------------------------------------------

Echelon::Echelon(std::size_t columns) : columns_(columns) {}

bool Echelon::add(const std::vector<int>& coeffs, const Rational& rhs) {
    std::vector<Rational> q(coeffs.begin(), coeffs.end());
    return add(q, rhs);
}

bool Echelon::add(const std::vector<Rational>& coeffs, const Rational& rhs) {
    if (coeffs.size() != columns_)
        throw Error("reconstruct", "ShapeMismatch", "row width does not match the number of edges");
    std::vector<Rational> row = coeffs;
    Rational b = rhs;
    for (const auto& pr : rows_) {
        if (row[pr.pivot] == 0)
            continue;
        const Rational factor = row[pr.pivot];
        for (std::size_t c = pr.pivot; c < columns_; ++c)
            if (pr.coeffs[c] != 0)
                row[c] -= factor * pr.coeffs[c];
        b -= factor * pr.rhs;
    }
    const auto lead = std::find_if(row.begin(), row.end(), [](const Rational& x) { return x != 0; });
    if (lead == row.end()) {
        if (b != 0)
            inconsistent_ = true;
        return false;
    }
    const std::size_t pivot = static_cast<std::size_t>(lead - row.begin());
    const Rational scale = row[pivot];
    for (std::size_t c = pivot; c < columns_; ++c)
        row[c] /= scale;
    b /= scale;
    // Keep the form reduced: clear the new pivot column from older rows.
    for (auto& pr : rows_) {
        if (pr.coeffs[pivot] == 0)
            continue;
        const Rational factor = pr.coeffs[pivot];
        for (std::size_t c = pivot; c < columns_; ++c)
            if (row[c] != 0)
                pr.coeffs[c] -= factor * row[c];
        pr.rhs -= factor * b;
    }
    const auto at = std::lower_bound(rows_.begin(), rows_.end(), pivot,
                                     [](const PivotRow& pr, std::size_t p) { return pr.pivot < p; });
    rows_.insert(at, PivotRow{pivot, std::move(row), std::move(b)});
    return true;
}

std::vector<Rational> Echelon::solution() const {
    if (!full_rank())
        throw Error("reconstruct", "RankDeficient", "system does not have full column rank");
    std::vector<Rational> x(columns_);
    for (const auto& pr : rows_)
        x[pr.pivot] = pr.rhs;
    return x;
}

std::vector<std::vector<Rational>> Echelon::null_space() const {
    std::vector<bool> is_pivot(columns_, false);
    for (const auto& pr : rows_)
        is_pivot[pr.pivot] = true;
    std::vector<std::vector<Rational>> basis;
    for (std::size_t free = 0; free < columns_; ++free) {
        if (is_pivot[free])
            continue;
        std::vector<Rational> v(columns_);
        v[free] = 1;
        for (const auto& pr : rows_)
            v[pr.pivot] = -pr.coeffs[free];
        basis.push_back(std::move(v));
    }
    return basis;
}

// -- errors ------------------------------------------------------------------

RankDeficientError::RankDeficientError(std::size_t rank, std::vector<std::vector<Rational>> null_space)
    : Error("reconstruct", "RankDeficient",
            "constraint system has rank " + std::to_string(rank) + ", kernel dimension " +
                std::to_string(null_space.size())),
      rank_(rank),
      null_space_(std::move(null_space)) {}

InconsistentError::InconsistentError(std::size_t row, Rational residual)
    : Error("reconstruct", "Inconsistent",
            "row " + std::to_string(row) + " has residual " + to_string(residual)),
      row_(row),
      residual_(std::move(residual)) {}

// -- assembly ----------------------------------------------------------------

namespace {

std::vector<std::string> edge_ids(const Graph& g) {
    std::vector<std::string> ids;
    for (const auto& e : g.edges())
        ids.push_back(e.id);
    return ids;
}

void require_graph(const Graph& g) {
    if (g.cusp_count() != 0)
        throw Error("covering", "CuspsPresent", "reconstruction needs a graph without cusps");
    if (!is_connected(g))
        throw Error("covering", "DisconnectedBase", "base graph must be connected");
}

void append_covering_rows(ConstraintSystem& system, Covering cover, std::size_t max_loops) {
    const std::size_t index = system.coverings.size();
    for (auto& loop : enumerate_loops(cover.total, max_loops)) {
        system.rows.push_back(covering::push_loop(cover, loop));
        system.sources.push_back(RowSource{index, std::move(loop)});
    }
    system.coverings.push_back(std::move(cover));
}

}  // namespace

ConstraintSystem constraint_matrix(const Graph& g, std::size_t max_loops, const std::string& base_name) {
    require_graph(g);
    ConstraintSystem system;
    system.edge_order = edge_ids(g);
    append_covering_rows(system, covering::trivial_covering(g, base_name), max_loops);
    for (auto& cover : covering::enumerate_connected_double_covers(g, base_name))
        append_covering_rows(system, std::move(cover), max_loops);
    return system;
}

ConstraintSystem constraint_matrix(const Graph& g, const VerifyOptions& options, const std::string& base_name) {
    ConstraintSystem system = constraint_matrix(g, options.max_loops, base_name);
    if (options.max_degree < 3 || options.max_triple_covers == 0)
        return system;
    Echelon echelon(system.columns());
    for (const auto& row : system.rows)
        echelon.add(row.coeffs);
    if (echelon.full_rank())
        return system;
    // Only triple covers that raise the rank contribute their rows.
    std::size_t budget = options.max_triple_covers;
    covering::for_each_connected_triple_cover(
        g,
        [&](const Covering& cover) {
            bool grew = false;
            for (const auto& loop : enumerate_loops(cover.total, options.max_loops))
                grew = echelon.add(covering::push_loop(cover, loop).coeffs) || grew;
            if (grew)
                append_covering_rows(system, cover, options.max_loops);
            return !echelon.full_rank() && --budget > 0;
        },
        base_name);
    return system;
}

void measure_rhs(ConstraintSystem& system, const MetricGraph& hidden) {
    std::vector<MetricGraph> lifted;
    lifted.reserve(system.coverings.size());
    for (const auto& c : system.coverings)
        lifted.push_back(c.lift(hidden));
    for (std::size_t r = 0; r < system.rows.size(); ++r)
        system.rows[r].rhs = loop_length(system.sources[r].loop, lifted[system.sources[r].covering]);
}

std::vector<Rational> solve_lengths(const ConstraintSystem& system) {
    Echelon echelon(system.columns());
    std::optional<std::size_t> first_bad;
    for (std::size_t r = 0; r < system.rows.size(); ++r) {
        const bool was_inconsistent = echelon.inconsistent();
        echelon.add(system.rows[r].coeffs, system.rows[r].rhs);
        if (!was_inconsistent && echelon.inconsistent())
            first_bad = r;
    }
    if (!echelon.full_rank()) {
        if (first_bad)
            throw InconsistentError(*first_bad, Rational(0));
        throw RankDeficientError(echelon.rank(), echelon.null_space());
    }
    auto x = echelon.solution();
    std::optional<std::size_t> worst;
    Rational worst_abs = 0;
    for (std::size_t r = 0; r < system.rows.size(); ++r) {
        Rational residual = system.rows[r].rhs;
        for (std::size_t c = 0; c < x.size(); ++c)
            if (system.rows[r].coeffs[c] != 0)
                residual -= system.rows[r].coeffs[c] * x[c];
        const Rational a = abs(residual);
        if (a > worst_abs) {
            worst_abs = a;
            worst = r;
        }
    }
    if (worst)
        throw InconsistentError(*worst, worst_abs);
    return x;
}

// -- verification ------------------------------------------------------------

RankReport verify_prop_a1(const Graph& g, const VerifyOptions& options) {
    require_graph(g);
    RankReport report;
    report.edges = g.edge_count();
    report.min_valency = min_valency(g);
    report.valency_hypothesis = report.min_valency >= 3;

    Echelon echelon(g.edge_count());
    std::set<std::vector<int>> seen;
    auto absorb = [&](const Covering& cover) {
        bool grew = false;
        for (const auto& loop : enumerate_loops(cover.total, options.max_loops)) {
            ++report.rows_examined;
            auto row = covering::push_loop(cover, loop);
            if (!seen.insert(row.coeffs).second)
                continue;
            grew = echelon.add(row.coeffs) || grew;
            if (echelon.full_rank())
                break;
        }
        if (grew)
            report.degree_used = std::max<unsigned>(report.degree_used, static_cast<unsigned>(cover.degree));
    };

    absorb(covering::trivial_covering(g));
    if (!echelon.full_rank() && options.max_degree >= 2) {
        for (const auto& cover : covering::enumerate_connected_double_covers(g)) {
            absorb(cover);
            if (echelon.full_rank())
                break;
        }
    }
    if (!echelon.full_rank() && options.max_degree >= 3 && options.max_triple_covers > 0) {
        std::size_t budget = options.max_triple_covers;
        report.triple_covers_examined = covering::for_each_connected_triple_cover(g, [&](const Covering& cover) {
            absorb(cover);
            return !echelon.full_rank() && --budget > 0;
        });
    }
    report.distinct_rows = seen.size();
    report.rank = echelon.rank();
    report.full_rank = echelon.full_rank();
    report.null_space = echelon.null_space();
    return report;
}

}  // namespace skelmetric::reconstruct
