#pragma once

#include "lcs/forms.hpp"

#include <optional>
#include <string>
#include <vector>

namespace lcs {

// Foliation in flattened coordinates: leaves are slices where the transverse
// coordinates are constant.
class FlattenedFoliation {
public:
    static FlattenedFoliation make(ChartPtr chart, std::vector<VarId> leaf_coords);
    static FlattenedFoliation make(const ChartPtr& chart, const std::string& leaf_names);

    const ChartPtr& chart() const { return chart_; }
    const std::vector<VarId>& leaves() const { return leaf_; }
    int leaf_dim() const { return static_cast<int>(leaf_.size()); }
    bool is_leaf(VarId v) const;
    std::vector<VarId> transverse() const;

private:
    ChartPtr chart_;
    std::vector<VarId> leaf_; // sorted
};

// Membership in the subcomplex of forms vanishing on leaf-tangent vectors:
// every coefficient indexed entirely inside the leaf coordinates is zero.
bool is_leafwise_vanishing(const DifferentialForm& a, const FlattenedFoliation& f,
                           const SamplePlan& plan);

// Zero-class decision for a 1-form in the first cohomology tangent to the
// foliation, with a leafwise primitive or an obstruction certificate.
struct TangentialClassReport {
    enum class Verdict { ZeroClass, Obstructed };
    Verdict verdict = Verdict::ZeroClass;

    ScalarExpr primitive; // g with dg = omega along leaves, g(origin) = 0

    // Obstruction certificate: either a nonzero circle mean over a periodic
    // leaf direction, or a compatibility failure of the primitive.
    std::string obstruction_kind; // "circle-mean" | "compatibility"
    std::optional<VarId> obstruction_coord;
    std::optional<ScalarExpr> obstruction_expr;
    std::optional<Point> obstruction_witness;

    // Per-leaf-coordinate residual dg/dt_j - omega_j.
    std::vector<std::pair<VarId, ZeroVerdict>> residuals;
    ZeroTier worst = ZeroTier::ProvenZero;

    bool zero_class() const { return verdict == Verdict::ZeroClass; }
};

// Decides [omega] = 0 by iterated antidifferentiation over the leaf
// coordinates; periodic leaf directions are decided by Fourier means.
// Precondition: d(omega) is leafwise-vanishing.
TangentialClassReport h1_class_decide(const DifferentialForm& omega1,
                                      const FlattenedFoliation& f, const SamplePlan& plan);

// Restricts omega and g to sampled leaves (transverse coordinates frozen at
// exact sample values) and compares omega|leaf with d(g|leaf).
bool leaf_restriction_check(const DifferentialForm& omega1, const FlattenedFoliation& f,
                            const TangentialClassReport& report, const SamplePlan& plan);

// Family F_t: Q -> Q contracting Q onto the slice S = {leaf coords = s} along
// the leaves. Components live on the extended chart (Q coords plus `t`).
class ContractionFamily {
public:
    static ContractionFamily make(FlattenedFoliation foliation,
                                  std::vector<ScalarExpr> comps_on_extended,
                                  std::vector<Rational> slice_values, const SamplePlan& plan);

    // Extended chart for a base chart: same coordinates plus trailing "t".
    static ChartPtr extended_chart(const ChartPtr& base);

    const FlattenedFoliation& foliation() const { return foliation_; }
    const ChartPtr& chart_q() const { return foliation_.chart(); }
    const ChartPtr& chart_ext() const { return ext_; }
    const std::vector<ScalarExpr>& comps() const { return comps_; }
    const std::vector<Rational>& slice() const { return slice_; }
    VarId t_var() const { return chart_q()->dim(); }

    // F_{t=value} as a self-map of chart_Q.
    SmoothMap at_time(const Rational& value) const;

    // The slice S as its own chart (the transverse coordinates), together
    // with F_0 viewed as a map into S and the inclusion of S back into Q.
    // The composite S -> Q -> S is the identity, so iota_S* o F_0* is the
    // identity on slice forms.
    ChartPtr slice_chart() const;
    SmoothMap projection_to_slice() const; // F_0: Q -> S
    SmoothMap slice_inclusion() const;     // iota_S: S -> Q

private:
    FlattenedFoliation foliation_;
    ChartPtr ext_;
    std::vector<ScalarExpr> comps_;
    std::vector<Rational> slice_;
};

// alpha = int_0^1 F_t*(V_t . omega) dt together with the verification that
// omega - F_0*(iota_S* omega) - d(alpha) is leafwise-vanishing. For p = 0 the
// identity degenerates to h - h(F_0) = alpha with zero residual.
struct HomotopyReport {
    DifferentialForm alpha;    // degree p-1 (degree 0 scalar when p = 0)
    DifferentialForm residual; // omega - F_0* omega - d(alpha)
    bool leafwise = false;     // residual lies in the subcomplex
    ZeroTier worst = ZeroTier::ProvenZero;
};

HomotopyReport homotopy_operator(const DifferentialForm& omega_p,
                                 const ContractionFamily& c, const SamplePlan& plan);

} // namespace lcs
