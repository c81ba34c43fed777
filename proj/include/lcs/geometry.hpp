#pragma once

#include "lcs/forms.hpp"
#include "lcs/linsolve.hpp"

#include <vector>

namespace lcs {

// Parametrized submanifold iota: chart_Q -> chart_M, immersion-checked at
// the sample points of chart_Q.
class Embedding {
public:
    static Embedding make(SmoothMap map, const SamplePlan& plan);

    const SmoothMap& map() const { return map_; }
    const ChartPtr& chart_q() const { return map_.source(); }
    const ChartPtr& chart_m() const { return map_.target(); }

private:
    explicit Embedding(SmoothMap map) : map_(std::move(map)) {}
    SmoothMap map_;
};

// iota* Omega on chart_Q (Omega must be a 2-form on chart_M).
DifferentialForm restrict_form(const Embedding& iota, const DifferentialForm& omega);

// Skew coefficient matrix a[i][j] = omega(d/dx_i, d/dx_j) of a 2-form.
SymMatrix coefficient_matrix(const DifferentialForm& omega2);

// Frame spanning the kernel of iota*Omega inside TQ.
struct DistributionFrame {
    ChartPtr chart;
    std::vector<VectorField> fields;
    int rank() const { return static_cast<int>(fields.size()); }
};

// Symbolic null space of the coefficient matrix of iota*Omega; the pulled
// form must have constant rank over the sample set, otherwise
// RankNotConstant (with two witness points) is thrown.
DistributionFrame characteristic_distribution(const Embedding& iota,
                                              const DifferentialForm& omega,
                                              const SamplePlan& plan);

// Same computation for a form already living on the submanifold chart.
DistributionFrame kernel_frame(const DifferentialForm& pulled, const SamplePlan& plan);

// Pairwise involutivity: [X_i, X_j] contracted into the pulled form must lie
// in the kernel; every residual's verdict is reported.
struct InvolutivityPair {
    int i = 0;
    int j = 0;
    FormZeroReport residual; // ([X_i,X_j] . pulled) as a 1-form
};
struct InvolutivityReport {
    bool involutive = true;
    ZeroTier worst = ZeroTier::ProvenZero;
    std::vector<InvolutivityPair> pairs;
};
InvolutivityReport involutivity_check(const DistributionFrame& frame,
                                      const DifferentialForm& pulled,
                                      const SamplePlan& plan);

// True when the two frames span the same distribution at every sample point
// (mutual rank test).
bool same_span(const DistributionFrame& a, const DistributionFrame& b,
               const SamplePlan& plan);

} // namespace lcs
