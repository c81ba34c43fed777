#include "lcs/linsolve.hpp"

#include "lcs/errors.hpp"

#include <algorithm>
#include <cmath>

namespace lcs {

bool Elimination::is_pivot_col(int col) const {
    return std::find(pivot_col.begin(), pivot_col.end(), col) != pivot_col.end();
}

Elimination eliminate(const SymMatrix& a, const std::vector<ScalarExpr>* rhs,
                      const SamplePlan& plan, const std::vector<int>* column_order) {
    Elimination e;
    e.reduced = a;
    if (rhs) e.rhs = *rhs;
    const int m = static_cast<int>(a.size());
    const int n = m ? static_cast<int>(a[0].size()) : 0;

    std::vector<int> cols;
    if (column_order) {
        cols = *column_order;
    } else {
        cols.resize(static_cast<std::size_t>(n));
        for (int c = 0; c < n; ++c) cols[static_cast<std::size_t>(c)] = c;
    }

    auto& mat = e.reduced;
    int r = 0;
    for (int col : cols) {
        if (r >= m) break;
        // Collect candidate pivots in rows r..m-1.
        std::vector<ScalarExpr> entries;
        std::vector<int> rows;
        for (int i = r; i < m; ++i) {
            if (mat[i][col].syntactic_zero()) continue;
            entries.push_back(mat[i][col]);
            rows.push_back(i);
        }
        if (entries.empty()) continue;
        auto verdicts = is_zero_many(entries, plan);
        int best = -1;
        double best_mag = 0.0;
        for (std::size_t k = 0; k < rows.size(); ++k) {
            if (verdicts[k].tier != ZeroTier::NonZero) continue;
            if (best < 0 || verdicts[k].max_abs > best_mag) {
                best = rows[static_cast<std::size_t>(k)];
                best_mag = verdicts[k].max_abs;
            }
        }
        if (best < 0) continue; // no usable pivot; column is free

        std::swap(mat[static_cast<std::size_t>(r)], mat[static_cast<std::size_t>(best)]);
        if (rhs) std::swap(e.rhs[static_cast<std::size_t>(r)], e.rhs[static_cast<std::size_t>(best)]);

        // Normalize the pivot row.
        ScalarExpr pivot = mat[r][col];
        for (int c = 0; c < n; ++c)
            if (!mat[r][c].syntactic_zero()) mat[r][c] = mat[r][c] / pivot;
        if (rhs && !e.rhs[static_cast<std::size_t>(r)].syntactic_zero())
            e.rhs[static_cast<std::size_t>(r)] = e.rhs[static_cast<std::size_t>(r)] / pivot;

        // Eliminate the column everywhere else (Gauss-Jordan).
        for (int i = 0; i < m; ++i) {
            if (i == r || mat[i][col].syntactic_zero()) continue;
            ScalarExpr factor = mat[i][col];
            for (int c = 0; c < n; ++c) {
                if (mat[r][c].syntactic_zero()) continue;
                mat[i][c] = mat[i][c] - factor * mat[r][c];
            }
            if (rhs && !e.rhs[static_cast<std::size_t>(r)].syntactic_zero())
                e.rhs[static_cast<std::size_t>(i)] =
                    e.rhs[static_cast<std::size_t>(i)] - factor * e.rhs[static_cast<std::size_t>(r)];
        }
        e.pivot_col.push_back(col);
        ++r;
    }
    e.rank = r;
    return e;
}

LinearSolution solve_linear(const SymMatrix& a, const std::vector<ScalarExpr>& b,
                            const SamplePlan& plan, const std::vector<int>* column_order) {
    const int m = static_cast<int>(a.size());
    const int n = m ? static_cast<int>(a[0].size()) : 0;
    Elimination e = eliminate(a, &b, plan, column_order);

    LinearSolution sol;
    sol.rank = e.rank;
    sol.unique = e.rank == n;

    ChartPtr chart;
    for (const auto& row : a)
        for (const auto& entry : row)
            if (entry.chart()) chart = entry.chart();
    for (const auto& entry : b)
        if (entry.chart()) chart = entry.chart();

    // Zero rows must carry zero rhs.
    std::vector<ScalarExpr> dropped;
    for (int i = e.rank; i < m; ++i) dropped.push_back(e.rhs[static_cast<std::size_t>(i)]);
    auto verdicts = is_zero_many(dropped, plan);
    for (std::size_t k = 0; k < dropped.size(); ++k) {
        if (verdicts[k].tier == ZeroTier::NonZero) {
            sol.consistent = false;
            sol.inconsistency = dropped[k];
            return sol;
        }
        if (verdicts[k].tier == ZeroTier::ProbablyZero) sol.residual_tier = ZeroTier::ProbablyZero;
    }

    sol.x.assign(static_cast<std::size_t>(n), ScalarExpr::zero(chart));
    for (int r = 0; r < e.rank; ++r)
        sol.x[static_cast<std::size_t>(e.pivot_col[static_cast<std::size_t>(r)])] =
            e.rhs[static_cast<std::size_t>(r)];
    return sol;
}

NullspaceBasis nullspace(const SymMatrix& a, const SamplePlan& plan,
                         const std::vector<int>* column_order) {
    const int m = static_cast<int>(a.size());
    const int n = m ? static_cast<int>(a[0].size()) : 0;
    Elimination e = eliminate(a, nullptr, plan, column_order);

    ChartPtr chart;
    for (const auto& row : a)
        for (const auto& entry : row)
            if (entry.chart()) chart = entry.chart();

    NullspaceBasis ns;
    ns.rank = e.rank;
    for (int f = 0; f < n; ++f) {
        if (e.is_pivot_col(f)) continue;
        std::vector<ScalarExpr> v(static_cast<std::size_t>(n), ScalarExpr::zero(chart));
        v[static_cast<std::size_t>(f)] = ScalarExpr::one(chart);
        for (int r = 0; r < e.rank; ++r) {
            const ScalarExpr& entry = e.reduced[static_cast<std::size_t>(r)][static_cast<std::size_t>(f)];
            if (entry.syntactic_zero()) continue;
            v[static_cast<std::size_t>(e.pivot_col[static_cast<std::size_t>(r)])] = -entry;
        }
        // Clear denominators: multiply by the distinct denominator polynomials.
        std::vector<Poly> dens;
        for (const auto& entry : v) {
            if (entry.q().is_polynomial()) continue;
            bool seen = false;
            for (const auto& d : dens)
                if (cmp(d, entry.q().den()) == 0) seen = true;
            if (!seen) dens.push_back(entry.q().den());
        }
        for (const auto& d : dens) {
            ScalarExpr mult(chart, QExpr::from_poly(d));
            for (auto& entry : v) entry = entry * mult;
        }
        ns.basis.push_back(std::move(v));
    }
    return ns;
}

std::vector<int> numeric_rank_profile(const SymMatrix& a, std::span<const Point> pts,
                                      double tol) {
    const std::size_t m = a.size();
    const std::size_t n = m ? a[0].size() : 0;
    std::vector<int> ranks;
    ranks.reserve(pts.size());
    for (const auto& p : pts) {
        std::vector<std::vector<double>> mat(m, std::vector<double>(n, 0.0));
        bool singular = false;
        for (std::size_t i = 0; i < m && !singular; ++i)
            for (std::size_t j = 0; j < n && !singular; ++j) {
                if (a[i][j].syntactic_zero()) continue;
                try {
                    mat[i][j] = a[i][j].eval(p);
                } catch (const Error&) {
                    singular = true;
                }
            }
        if (singular) {
            ranks.push_back(-1);
            continue;
        }
        int rank = 0;
        std::size_t row = 0;
        for (std::size_t col = 0; col < n && row < m; ++col) {
            std::size_t best = row;
            for (std::size_t i = row + 1; i < m; ++i)
                if (std::fabs(mat[i][col]) > std::fabs(mat[best][col])) best = i;
            if (std::fabs(mat[best][col]) <= tol) continue;
            std::swap(mat[row], mat[best]);
            for (std::size_t i = 0; i < m; ++i) {
                if (i == row) continue;
                double f = mat[i][col] / mat[row][col];
                if (f == 0.0) continue;
                for (std::size_t j = col; j < n; ++j) mat[i][j] -= f * mat[row][j];
            }
            ++row;
            ++rank;
        }
        ranks.push_back(rank);
    }
    return ranks;
}

} // namespace lcs
