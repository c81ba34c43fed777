#pragma once

#include "lcs/geometry.hpp"

#include <optional>
#include <string>

namespace lcs {

// Pfaffian of the skew coefficient matrix of a 2-form (recursive expansion).
// Nondegeneracy of the form is |Pf| > tol at every sample point.
ScalarExpr pfaffian(const DifferentialForm& omega2);

// Throws Degenerate naming a witness point when the Pfaffian dips below the
// tolerance at a sample; returns the minimum |Pf| over the sample set.
double check_nondegenerate(const DifferentialForm& omega2, const SamplePlan& plan);

// The unique 1-form omega with omega ^ Omega = d Omega (chart dim >= 4).
// Throws Degenerate (Pfaffian vanishes at a sample) or NotLcs (system
// inconsistent, or the solved omega is not closed).
DifferentialForm lee_form(const DifferentialForm& omega2, const SamplePlan& plan,
                          const std::vector<int>* equation_order = nullptr);

// Verified locally conformal symplectic data on a chart.
class LcsStructure {
public:
    // Validates: even dimension >= 4, nondegeneracy, d(Omega) = lee ^ Omega,
    // d(lee) = 0. When `lee` is absent it is solved for.
    static LcsStructure make(DifferentialForm omega2,
                             std::optional<DifferentialForm> lee, const SamplePlan& plan);

    const ChartPtr& chart() const { return omega_.chart(); }
    const DifferentialForm& omega() const { return omega_; }
    const DifferentialForm& lee() const { return lee_; }

    double min_pfaffian() const { return min_pfaffian_; }
    ZeroTier lcs_residual_tier() const { return lcs_tier_; }
    ZeroTier closed_residual_tier() const { return closed_tier_; }

private:
    LcsStructure() = default;
    DifferentialForm omega_;
    DifferentialForm lee_;
    double min_pfaffian_ = 0.0;
    ZeroTier lcs_tier_ = ZeroTier::ProvenZero;
    ZeroTier closed_tier_ = ZeroTier::ProvenZero;
};

// (f Omega, lee + d ln f); f must come in exp form (single positive-led
// monomial of exp factors) so ln f stays in class. Positivity is re-checked
// at samples (NonPositiveWitness).
LcsStructure conformal_rescale(const LcsStructure& s, const ScalarExpr& f,
                               const SamplePlan& plan);

struct ConformalVerdict {
    bool equivalent = false;
    ScalarExpr factor; // iota*Omega2 = factor * iota*Omega1 when equivalent
    ZeroTier residual_tier = ZeroTier::ProvenZero;
    std::string reason;                     // set when not equivalent
    std::optional<MultiIndex> witness_index;
    std::optional<Point> witness_point;
};

// Decides iota*Omega2 = f * iota*Omega1 for positive f. Throws ZeroPullback
// when iota*Omega1 vanishes (no candidate ratio).
ConformalVerdict conformal_equivalence_on(const Embedding& iota,
                                          const DifferentialForm& omega1,
                                          const DifferentialForm& omega2,
                                          const SamplePlan& plan);

} // namespace lcs
