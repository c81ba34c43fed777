#pragma once

// Test-side oracles, deliberately independent of the implementation paths
// they check:
//   * numeric multilinear evaluation of forms (no wedge machinery),
//   * finite-difference Jacobians for the pullback law,
//   * the coordinate formula for the Lie derivative (no Cartan route),
//   * composite quadrature for the two scalar integrals.

#include "lcs/forms.hpp"

#include <cmath>
#include <functional>
#include <vector>

namespace oracles {

using namespace lcs;

// a(v_1, ..., v_p) at a point, by alternating-sum expansion of each
// coefficient against the chosen index rows.
inline double eval_form_on_vectors(const DifferentialForm& a, std::span<const double> at,
                                   const std::vector<std::vector<double>>& vecs) {
    const int p = a.degree();
    if (p == 0) return a.coeff(MultiIndex{}).eval(at);
    // permanent-style alternating expansion: det of the p x p minor per key
    std::function<double(const std::vector<std::vector<double>>&)> det =
        [&](const std::vector<std::vector<double>>& m) -> double {
        const std::size_t n = m.size();
        if (n == 1) return m[0][0];
        double sum = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            std::vector<std::vector<double>> minor;
            for (std::size_t r = 1; r < n; ++r) {
                std::vector<double> row;
                for (std::size_t c = 0; c < n; ++c)
                    if (c != j) row.push_back(m[r][c]);
                minor.push_back(std::move(row));
            }
            double term = m[0][j] * det(minor);
            sum += (j % 2 == 0) ? term : -term;
        }
        return sum;
    };
    double total = 0.0;
    for (const auto& [k, c] : a.coeffs()) {
        std::vector<std::vector<double>> minor(static_cast<std::size_t>(p),
                                               std::vector<double>(static_cast<std::size_t>(p)));
        for (int r = 0; r < p; ++r)
            for (int col = 0; col < p; ++col)
                minor[static_cast<std::size_t>(r)][static_cast<std::size_t>(col)] =
                    vecs[static_cast<std::size_t>(col)][static_cast<std::size_t>(k.idx[static_cast<std::size_t>(r)])];
        total += c.eval(at) * det(minor);
    }
    return total;
}

// Central-difference Jacobian column: d(phi)/d(x_j) at a point.
inline std::vector<double> fd_jacobian_column(const SmoothMap& map, std::span<const double> at,
                                              int j, double h = 1e-6) {
    std::vector<double> lo(at.begin(), at.end()), hi(at.begin(), at.end());
    lo[static_cast<std::size_t>(j)] -= h;
    hi[static_cast<std::size_t>(j)] += h;
    std::vector<double> out;
    for (const auto& comp : map.comps())
        out.push_back((comp.eval(hi) - comp.eval(lo)) / (2 * h));
    return out;
}

// Numeric check of (pullback(map, a))(v...) == a(Dphi v...) at one point.
inline double pullback_defect(const SmoothMap& map, const DifferentialForm& a,
                              const DifferentialForm& pulled, std::span<const double> at,
                              const std::vector<std::vector<double>>& vecs) {
    std::vector<double> image;
    for (const auto& comp : map.comps()) image.push_back(comp.eval(at));
    std::vector<std::vector<double>> pushed;
    const int p = a.degree();
    for (int col = 0; col < p; ++col) {
        std::vector<double> w(static_cast<std::size_t>(map.target()->dim()), 0.0);
        for (int j = 0; j < map.source()->dim(); ++j) {
            auto dcol = fd_jacobian_column(map, at, j);
            for (int i = 0; i < map.target()->dim(); ++i)
                w[static_cast<std::size_t>(i)] +=
                    dcol[static_cast<std::size_t>(i)] *
                    vecs[static_cast<std::size_t>(col)][static_cast<std::size_t>(j)];
        }
        pushed.push_back(std::move(w));
    }
    const double lhs = eval_form_on_vectors(pulled, at, vecs);
    const double rhs = eval_form_on_vectors(a, image, pushed);
    return lhs - rhs;
}

// Coordinate formula for the Lie derivative:
//   (L_X a)_K = X(a_K) + sum_j sum_m (dX^m / dx^{K_j}) a_{K[j -> m]},
// scattered over the stored coefficients: a_L with L_j = m contributes to the
// index L[j -> i] with weight dX^{L_j}/dx^i.
inline DifferentialForm lie_derivative_coordinate(const VectorField& x,
                                                  const DifferentialForm& a) {
    DifferentialForm out(a.chart(), a.degree());
    const int n = a.chart()->dim();
    for (const auto& [k, c] : a.coeffs()) {
        ScalarExpr xc = ScalarExpr::zero(a.chart());
        for (VarId v = 0; v < n; ++v)
            xc = xc + x.comps[static_cast<std::size_t>(v)] * c.derivative(v);
        out.add_term(k, xc);
        for (std::size_t j = 0; j < k.idx.size(); ++j) {
            const ScalarExpr& comp = x.comps[static_cast<std::size_t>(k.idx[j])];
            for (VarId i = 0; i < n; ++i) {
                ScalarExpr dx = comp.derivative(i);
                if (dx.syntactic_zero()) continue;
                std::vector<VarId> idx = k.idx;
                idx[j] = i;
                out.add_term(idx, dx * c);
            }
        }
    }
    return out;
}

// Composite Simpson quadrature of a 1-variable slice of e: other coordinates
// frozen at `at`, variable v swept over [lo, hi].
inline double quadrature(const ScalarExpr& e, std::span<const double> at, VarId v, double lo,
                         double hi, int intervals = 512) {
    std::vector<double> x(at.begin(), at.end());
    auto f = [&](double t) {
        x[static_cast<std::size_t>(v)] = t;
        return e.eval(x);
    };
    double h = (hi - lo) / intervals;
    double sum = f(lo) + f(hi);
    for (int i = 1; i < intervals; ++i) sum += f(lo + i * h) * (i % 2 ? 4.0 : 2.0);
    return sum * h / 3.0;
}

} // namespace oracles
