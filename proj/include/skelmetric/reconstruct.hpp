#pragma once

// Edge lengths from loop lengths. Every loop of the base graph and of each of
// its connected double covers contributes one row (pushforward coefficients,
// measured length); the edge lengths are the unique exact solution when the
// rows have full column rank.

#include "skelmetric/covering.hpp"
#include "skelmetric/error.hpp"
#include "skelmetric/graph.hpp"

#include <optional>
#include <string>
#include <vector>

namespace skelmetric::reconstruct {

struct RowSource {
    std::size_t covering = 0;  // index into ConstraintSystem::coverings
    Loop loop;
};

struct ConstraintSystem {
    std::vector<std::string> edge_order;
    std::vector<covering::ConstraintRow> rows;
    std::vector<RowSource> sources;                 // parallel to rows
    std::vector<covering::Covering> coverings;      // [0] is the base itself

    std::size_t columns() const { return edge_order.size(); }
};

/// Incremental reduced row echelon form over the rationals. Pivots are taken
/// at the smallest column index with a nonzero entry.
class Echelon {
public:
    explicit Echelon(std::size_t columns);

    /// Adds a row; returns true iff the rank grew. A row that reduces to zero
    /// with a nonzero right-hand side marks the system inconsistent.
    bool add(const std::vector<Rational>& coeffs, const Rational& rhs = 0);
    bool add(const std::vector<int>& coeffs, const Rational& rhs = 0);

    std::size_t rank() const { return rows_.size(); }
    std::size_t columns() const { return columns_; }
    bool full_rank() const { return rows_.size() == columns_; }
    bool inconsistent() const { return inconsistent_; }

    /// Unique solution; requires full rank.
    std::vector<Rational> solution() const;
    /// Basis of the kernel of the coefficient matrix, one vector per free column.
    std::vector<std::vector<Rational>> null_space() const;

private:
    struct PivotRow {
        std::size_t pivot;
        std::vector<Rational> coeffs;
        Rational rhs;
    };
    std::size_t columns_;
    std::vector<PivotRow> rows_;  // sorted by pivot
    bool inconsistent_ = false;
};

class RankDeficientError : public Error {
public:
    RankDeficientError(std::size_t rank, std::vector<std::vector<Rational>> null_space);
    const std::vector<std::vector<Rational>>& null_space() const { return null_space_; }
    std::size_t rank() const { return rank_; }

private:
    std::size_t rank_;
    std::vector<std::vector<Rational>> null_space_;
};

class InconsistentError : public Error {
public:
    InconsistentError(std::size_t row, Rational residual);
    std::size_t row() const { return row_; }
    const Rational& residual() const { return residual_; }

private:
    std::size_t row_;
    Rational residual_;
};

/// Rows from every loop of g and of every connected double cover of g, base
/// rows first, then covers in enumeration order, loops in enumeration order.
/// Throws graph::LoopLimit, covering::DisconnectedBase, covering::CuspsPresent.
ConstraintSystem constraint_matrix(const Graph& g, std::size_t max_loops = kDefaultMaxLoops,
                                   const std::string& base_name = "G");

struct VerifyOptions;
/// As above, then rows of connected S3 covers (within the budget) that raise
/// the rank, when degree 2 leaves a kernel and max_degree >= 3.
ConstraintSystem constraint_matrix(const Graph& g, const VerifyOptions& options, const std::string& base_name = "G");
/// Fills every row's rhs with the length of its source loop, measured on the
/// covering carrying the lifted `hidden` metric.
void measure_rhs(ConstraintSystem& system, const MetricGraph& hidden);

/// Unique exact edge lengths. Throws RankDeficientError or InconsistentError
/// (reporting the row with the largest absolute residual).
std::vector<Rational> solve_lengths(const ConstraintSystem& system);

struct RankReport {
    bool full_rank = false;
    std::size_t rank = 0;
    std::size_t edges = 0;
    std::size_t rows_examined = 0;
    std::size_t distinct_rows = 0;
    std::size_t min_valency = 0;
    bool valency_hypothesis = false;  // min valency >= 3
    unsigned degree_used = 1;         // highest covering degree that contributed rows
    std::size_t triple_covers_examined = 0;
    std::vector<std::vector<Rational>> null_space;
};

struct VerifyOptions {
    unsigned max_degree = 3;
    std::size_t max_loops = kDefaultMaxLoops;
    std::size_t max_triple_covers = 200;
};

/// Rank of the base + double-cover loop system, escalating to connected S3
/// covers when degree 2 leaves a kernel and max_degree >= 3.
RankReport verify_prop_a1(const Graph& g, const VerifyOptions& options = {});

}  // namespace skelmetric::reconstruct
