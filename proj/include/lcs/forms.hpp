#pragma once

#include "lcs/symbolic.hpp"

#include <map>
#include <span>
#include <string>
#include <vector>

namespace lcs {

// Strictly increasing tuple of coordinate positions; the basis bookkeeping
// for p-form components.
struct MultiIndex {
    std::vector<VarId> idx;

    int degree() const { return static_cast<int>(idx.size()); }
    bool contains(VarId v) const;
    std::string str(const Chart& chart) const; // "dx1^dy2"

    auto operator<=>(const MultiIndex&) const = default;
};

// Degree-p differential form: finite map from multi-indices to coefficients.
// Absent key means zero coefficient; syntactic zeros are dropped on insert.
class DifferentialForm {
public:
    DifferentialForm() = default;
    DifferentialForm(ChartPtr chart, int degree);

    static DifferentialForm zero(ChartPtr chart, int degree) {
        return DifferentialForm(std::move(chart), degree);
    }
    static DifferentialForm from_scalar(const ScalarExpr& f); // degree 0

    const ChartPtr& chart() const { return chart_; }
    int degree() const { return degree_; }
    const std::map<MultiIndex, ScalarExpr>& coeffs() const { return coeffs_; }
    bool syntactic_zero() const { return coeffs_.empty(); }

    // Adds c * dx_{indices}, sorting the indices and folding the permutation
    // sign into the coefficient. Repeated indices contribute nothing.
    void add_term(std::span<const VarId> indices, const ScalarExpr& c);
    void add_term(const MultiIndex& sorted, const ScalarExpr& c);

    ScalarExpr coeff(const MultiIndex& k) const; // zero when absent

    DifferentialForm operator+(const DifferentialForm& other) const;
    DifferentialForm operator-(const DifferentialForm& other) const;
    DifferentialForm operator-() const;
    DifferentialForm scaled(const ScalarExpr& f) const;

    std::string str() const;

private:
    ChartPtr chart_;
    int degree_ = 0;
    std::map<MultiIndex, ScalarExpr> coeffs_;
};

// Vector field: one component per coordinate of the owning chart.
struct VectorField {
    ChartPtr chart;
    std::vector<ScalarExpr> comps;

    static VectorField zero(const ChartPtr& chart);
    static VectorField basis(const ChartPtr& chart, VarId v); // d/dx_v
    std::string str() const;
};

// Smooth map between charts: one source-chart expression per target
// coordinate. The Jacobian d(target_i)/d(source_j) is cached.
class SmoothMap {
public:
    SmoothMap(ChartPtr source, ChartPtr target, std::vector<ScalarExpr> comps);

    static SmoothMap identity(const ChartPtr& chart);

    const ChartPtr& source() const { return source_; }
    const ChartPtr& target() const { return target_; }
    const std::vector<ScalarExpr>& comps() const { return comps_; }
    const ScalarExpr& jacobian(int target_coord, int source_coord) const;

    // Periodic target coordinates must be circle-consistent: crossing the
    // source seam theta -> theta + 2pi moves the component by a multiple of
    // 2pi. Checked numerically at the plan's sample points.
    void check_periodic_consistency(const SamplePlan& plan) const;

private:
    ChartPtr source_;
    ChartPtr target_;
    std::vector<ScalarExpr> comps_;
    std::vector<std::vector<ScalarExpr>> jac_; // [target][source]
};

// Graded-commutative wedge product; degrees beyond the chart dimension give
// the zero form of that degree.
DifferentialForm wedge(const DifferentialForm& a, const DifferentialForm& b);

// Exterior derivative; d o d = 0.
DifferentialForm exterior_derivative(const DifferentialForm& a);

// Interior product (contraction); errors on degree-0 input.
DifferentialForm interior_product(const VectorField& x, const DifferentialForm& a);

// Pullback along a smooth map: coefficient substitution plus Jacobian wedge.
DifferentialForm pullback(const SmoothMap& map, const DifferentialForm& a);

// Cartan formula: L_X a = d(X . a) + X . (d a); plain X(f) in degree 0.
DifferentialForm lie_derivative(const VectorField& x, const DifferentialForm& a);

// Commutator [X,Y] = (X.grad)Y - (Y.grad)X.
VectorField lie_bracket(const VectorField& x, const VectorField& y);

// Per-coefficient zero test of a whole form under one sample plan.
struct FormZeroEntry {
    MultiIndex index;
    ZeroVerdict verdict;
};
struct FormZeroReport {
    bool zero = true;
    ZeroTier worst = ZeroTier::ProvenZero;
    std::vector<FormZeroEntry> entries; // only non-ProvenZero coefficients

    const FormZeroEntry* first_nonzero() const;
};
FormZeroReport form_is_zero(const DifferentialForm& a, const SamplePlan& plan);

// Form literal parser: sums of `coeff * dxi^dxj^...` terms, `^` denoting
// wedge between differentials and integer power between scalars.
DifferentialForm parse_form(std::string_view text, const ChartPtr& chart);

} // namespace lcs
