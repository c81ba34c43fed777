#include "lcs/reduction.hpp"

#include "lcs/errors.hpp"

#include <algorithm>

namespace lcs {

SmoothMap ReducedChart::projection() const {
    std::vector<ScalarExpr> comps;
    for (VarId v : transverse) comps.push_back(ScalarExpr::var(chart_q, v));
    return SmoothMap(chart_q, chart_n, std::move(comps));
}

ReducedChart make_reduced_chart(const FlattenedFoliation& f) {
    const ChartPtr& q = f.chart();
    ReducedChart rc;
    rc.chart_q = q;
    rc.transverse = f.transverse();
    const int dim_n = static_cast<int>(rc.transverse.size());
    if (dim_n <= 2)
        fail(ErrorCode::Precondition,
             "reduced manifold must have dimension greater than 2 (got " +
                 std::to_string(dim_n) + ")");
    std::vector<Coordinate> coords;
    for (VarId v : rc.transverse) coords.push_back(q->coord(v));
    rc.chart_n = Chart::make(q->name() + "/F", std::move(coords));
    return rc;
}

namespace {

void push_residual(ReductionReport& report, const std::string& name, const ZeroVerdict& v) {
    report.residuals.push_back(ReductionResidual{name, v.tier, v.max_abs});
    if (v.tier == ZeroTier::ProbablyZero && report.worst == ZeroTier::ProvenZero)
        report.worst = ZeroTier::ProbablyZero;
    if (v.tier == ZeroTier::NonZero) report.worst = ZeroTier::NonZero;
}

void push_residual(ReductionReport& report, const std::string& name,
                   const FormZeroReport& fz) {
    ZeroTier tier = fz.zero ? fz.worst : ZeroTier::NonZero;
    double mag = 0.0;
    for (const auto& e : fz.entries) mag = std::max(mag, e.verdict.max_abs);
    report.residuals.push_back(ReductionResidual{name, tier, mag});
    if (tier == ZeroTier::ProbablyZero && report.worst == ZeroTier::ProvenZero)
        report.worst = ZeroTier::ProbablyZero;
    if (tier == ZeroTier::NonZero) report.worst = ZeroTier::NonZero;
}

// The flattened foliation must span exactly the computed characteristic
// distribution of the pulled-back form.
void require_foliation_matches(const DifferentialForm& pulled, const FlattenedFoliation& f,
                               const SamplePlan& plan) {
    DistributionFrame computed = kernel_frame(pulled, plan);
    if (computed.rank() != f.leaf_dim())
        fail(ErrorCode::RankMismatch,
             "foliation leaf dimension " + std::to_string(f.leaf_dim()) +
                 " does not match the characteristic rank " + std::to_string(computed.rank()));
    DistributionFrame coordinate;
    coordinate.chart = f.chart();
    for (VarId v : f.leaves()) coordinate.fields.push_back(VectorField::basis(f.chart(), v));
    if (!same_span(computed, coordinate, plan))
        fail(ErrorCode::RankMismatch,
             "foliation does not span the characteristic distribution of iota* Omega");
}

// Transport a leaf-independent expression from chart_Q to chart_N.
ScalarExpr transport(const ScalarExpr& e, const ReducedChart& rc) {
    std::vector<ScalarExpr> images(static_cast<std::size_t>(rc.chart_q->dim()),
                                   ScalarExpr::zero(rc.chart_n));
    for (std::size_t i = 0; i < rc.transverse.size(); ++i)
        images[static_cast<std::size_t>(rc.transverse[i])] =
            ScalarExpr::var(rc.chart_n, static_cast<VarId>(i));
    return compose(e, rc.chart_n, images);
}

// Verifies every coefficient of `form` is leaf-coordinate independent and
// carries no leaf index, then rebuilds it on chart_N.
DifferentialForm transport_form(const DifferentialForm& form, const ReducedChart& rc,
                                const FlattenedFoliation& f, const SamplePlan& plan,
                                ReductionReport& report, const std::string& label) {
    std::vector<ScalarExpr> checks;
    std::vector<std::string> names;
    for (const auto& [k, c] : form.coeffs()) {
        for (VarId v : k.idx) {
            if (f.is_leaf(v)) {
                checks.push_back(c);
                names.push_back(label + " leaf-index coefficient " + k.str(*rc.chart_q));
            }
        }
        for (VarId t : f.leaves()) {
            ScalarExpr d = c.derivative(t);
            if (d.syntactic_zero()) continue;
            checks.push_back(d);
            names.push_back(label + " d/d" + rc.chart_q->coord_name(t) + " of " +
                            k.str(*rc.chart_q));
        }
    }
    auto verdicts = is_zero_many(checks, plan);
    for (std::size_t i = 0; i < verdicts.size(); ++i) {
        if (verdicts[i].tier == ZeroTier::NonZero)
            fail(ErrorCode::Internal,
                 label + " is not constant on leaves (" + names[i] +
                     "); this contradicts the reduction hypotheses");
        push_residual(report, names[i], verdicts[i]);
    }

    std::vector<int> position(static_cast<std::size_t>(rc.chart_q->dim()), -1);
    for (std::size_t i = 0; i < rc.transverse.size(); ++i)
        position[static_cast<std::size_t>(rc.transverse[i])] = static_cast<int>(i);

    DifferentialForm out(rc.chart_n, form.degree());
    for (const auto& [k, c] : form.coeffs()) {
        bool has_leaf_index = false;
        for (VarId v : k.idx)
            if (f.is_leaf(v)) has_leaf_index = true;
        if (has_leaf_index) continue; // verified ~zero above
        MultiIndex down;
        ScalarExpr coeff = c;
        // Leaf-free up to sampling: freeze any residual leaf dependence at 0.
        for (VarId t : f.leaves())
            if (coeff.depends_on(t))
                coeff = substitute_var(coeff, t, ScalarExpr::zero(rc.chart_q));
        for (VarId v : k.idx) down.idx.push_back(position[static_cast<std::size_t>(v)]);
        out.add_term(down, transport(coeff, rc));
    }
    return out;
}

// Shared tail: nondegeneracy of tau, d alpha = 0, d tau = alpha ^ tau, and
// the round trip pi* tau = target.
void certify_reduced(ReductionReport& report, const ReducedChart& rc,
                     const DifferentialForm& target_on_q, const SamplePlan& plan) {
    const DifferentialForm& tau = *report.tau;
    const DifferentialForm& alpha = *report.alpha;

    double min_pf = check_nondegenerate(tau, plan);
    report.residuals.push_back(
        ReductionResidual{"tau nondegenerate (min |Pf|)", ZeroTier::NonZero, min_pf});

    push_residual(report, "d(alpha)", form_is_zero(exterior_derivative(alpha), plan));
    push_residual(report, "d(tau) - alpha ^ tau",
                  form_is_zero(exterior_derivative(tau) - wedge(alpha, tau), plan));

    SmoothMap pi = rc.projection();
    push_residual(report, "pi* tau - reduced target",
                  form_is_zero(pullback(pi, tau) - target_on_q, plan));
}

} // namespace

ReductionReport reduce_form(const LcsStructure& s, const Embedding& iota,
                            const FlattenedFoliation& f, const SamplePlan& plan) {
    require_same_chart(iota.chart_m(), s.chart(), "reduce_form");
    require_same_chart(iota.chart_q(), f.chart(), "reduce_form");
    ReducedChart rc = make_reduced_chart(f);

    ReductionReport report;
    report.mode = ReductionReport::Mode::FormLevel;
    report.chart_q = rc.chart_q;
    report.chart_n = rc.chart_n;

    DifferentialForm pulled = restrict_form(iota, s.omega());
    require_foliation_matches(pulled, f, plan);

    DifferentialForm lee_q = pullback(iota.map(), s.lee());

    // Pairing test: iota*omega must vanish on every leaf direction.
    for (VarId t : f.leaves()) {
        ScalarExpr pairing = lee_q.coeff(MultiIndex{{t}});
        ZeroVerdict verdict = is_zero(pairing, plan);
        if (verdict.tier == ZeroTier::NonZero) {
            report.reduced = false;
            report.obstruction_kind = "lee-pairing";
            report.obstruction_coord = f.chart()->coord_name(t);
            report.certificate = pairing;
            report.certificate_witness = verdict.witness;
            return report;
        }
        push_residual(report, "iota*omega(d/d" + f.chart()->coord_name(t) + ")", verdict);
    }

    report.tau = transport_form(pulled, rc, f, plan, report, "iota*Omega");
    report.alpha = transport_form(lee_q, rc, f, plan, report, "iota*omega");
    certify_reduced(report, rc, pulled, plan);
    report.reduced = true;
    return report;
}

ReductionReport reduce_structure(const LcsStructure& s, const Embedding& iota,
                                 const FlattenedFoliation& f, const SamplePlan& plan) {
    require_same_chart(iota.chart_m(), s.chart(), "reduce_structure");
    require_same_chart(iota.chart_q(), f.chart(), "reduce_structure");
    ReducedChart rc = make_reduced_chart(f);

    ReductionReport report;
    report.mode = ReductionReport::Mode::StructureLevel;
    report.chart_q = rc.chart_q;
    report.chart_n = rc.chart_n;

    DifferentialForm pulled = restrict_form(iota, s.omega());
    require_foliation_matches(pulled, f, plan);

    DifferentialForm lee_q = pullback(iota.map(), s.lee());
    TangentialClassReport cls = h1_class_decide(lee_q, f, plan);
    if (!cls.zero_class()) {
        report.reduced = false;
        report.obstruction_kind = cls.obstruction_kind;
        if (cls.obstruction_coord)
            report.obstruction_coord = f.chart()->coord_name(*cls.obstruction_coord);
        report.certificate = cls.obstruction_expr;
        report.certificate_witness = cls.obstruction_witness;
        return report;
    }
    for (const auto& [t, verdict] : cls.residuals)
        push_residual(report, "dg/d" + f.chart()->coord_name(t) + " - iota*omega", verdict);

    const ScalarExpr& g = cls.primitive;
    DifferentialForm scaled = pulled.scaled(exp(-g));
    report.primitive = g;

    report.tau = transport_form(scaled, rc, f, plan, report, "exp(-g) iota*Omega");
    DifferentialForm alpha_q =
        lee_q - exterior_derivative(DifferentialForm::from_scalar(g));
    report.alpha = transport_form(alpha_q, rc, f, plan, report, "iota*omega - dg");
    certify_reduced(report, rc, scaled, plan);
    report.reduced = true;
    return report;
}

InvarianceReport verify_conformal_invariance(const LcsStructure& s1, const LcsStructure& s2,
                                             const Embedding& iota,
                                             const FlattenedFoliation& f,
                                             const SamplePlan& plan) {
    ConformalVerdict eq = conformal_equivalence_on(iota, s1.omega(), s2.omega(), plan);
    if (!eq.equivalent)
        fail(ErrorCode::Precondition,
             "structures are not conformally equivalent on the submanifold: " + eq.reason);

    InvarianceReport report;

    DistributionFrame f1 = kernel_frame(restrict_form(iota, s1.omega()), plan);
    DistributionFrame f2 = kernel_frame(restrict_form(iota, s2.omega()), plan);
    report.foliations_match = same_span(f1, f2, plan);

    // iota*omega_2 - iota*omega_1 - d(ln f) vanishes on leaf directions,
    // where iota*Omega_2 = f * iota*Omega_1.
    DifferentialForm lee1 = pullback(iota.map(), s1.lee());
    DifferentialForm lee2 = pullback(iota.map(), s2.lee());
    DifferentialForm d_ln_f = exterior_derivative(DifferentialForm::from_scalar(ln(eq.factor)));
    DifferentialForm diff = lee2 - lee1 - d_ln_f;
    for (VarId t : f.leaves()) {
        ZeroVerdict verdict = is_zero(diff.coeff(MultiIndex{{t}}), plan);
        if (verdict.tier == ZeroTier::NonZero) report.leafwise_ok = false;
        report.leafwise_residuals.emplace_back(t, verdict);
    }

    report.first = reduce_structure(s1, iota, f, plan);
    report.second = reduce_structure(s2, iota, f, plan);
    report.verdicts_agree = report.first.reduced == report.second.reduced;
    report.both_reduced = report.first.reduced && report.second.reduced;
    if (report.both_reduced) {
        Embedding id_n = Embedding::make(SmoothMap::identity(report.first.chart_n), plan);
        ConformalVerdict tau_eq =
            conformal_equivalence_on(id_n, *report.first.tau, *report.second.tau, plan);
        report.taus_equivalent = tau_eq.equivalent;
        if (tau_eq.equivalent) report.tau_factor = tau_eq.factor;
    }
    return report;
}

} // namespace lcs
