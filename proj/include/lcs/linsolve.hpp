#pragma once

#include "lcs/symbolic.hpp"

#include <optional>
#include <vector>

namespace lcs {

using SymMatrix = std::vector<std::vector<ScalarExpr>>;

// Gauss-Jordan elimination over the fraction field of the expression ring.
// Pivots are validated by the probabilistic zero test: a candidate counts as
// nonzero only when its verdict is NonZero, and among candidates the one
// with the largest sample magnitude wins (symbolic partial pivoting).
struct Elimination {
    // Row-reduced matrix (pivot columns normalized to 1, eliminated both up
    // and down), with the same row operations applied to rhs when present.
    SymMatrix reduced;
    std::vector<ScalarExpr> rhs;
    std::vector<int> pivot_col; // per pivot row, the column index
    int rank = 0;

    bool is_pivot_col(int col) const;
};

Elimination eliminate(const SymMatrix& a, const std::vector<ScalarExpr>* rhs,
                      const SamplePlan& plan,
                      const std::vector<int>* column_order = nullptr);

struct LinearSolution {
    bool consistent = true;
    std::vector<ScalarExpr> x;   // particular solution, free variables set to 0
    int rank = 0;
    bool unique = false;         // rank == number of unknowns
    ZeroTier residual_tier = ZeroTier::ProvenZero; // worst tier over dropped rows
    std::optional<ScalarExpr> inconsistency;       // NonZero rhs of a zero row
};

LinearSolution solve_linear(const SymMatrix& a, const std::vector<ScalarExpr>& b,
                            const SamplePlan& plan,
                            const std::vector<int>* column_order = nullptr);

struct NullspaceBasis {
    int rank = 0;
    std::vector<std::vector<ScalarExpr>> basis; // denominator-cleared vectors
};

NullspaceBasis nullspace(const SymMatrix& a, const SamplePlan& plan,
                         const std::vector<int>* column_order = nullptr);

// Numeric rank of the matrix evaluated at each sample point (threshold-based
// Gaussian elimination on doubles). Singular evaluations at a point yield -1.
std::vector<int> numeric_rank_profile(const SymMatrix& a, std::span<const Point> pts,
                                      double tol);

} // namespace lcs
