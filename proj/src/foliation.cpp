#include "lcs/foliation.hpp"

#include "lcs/errors.hpp"

#include <algorithm>
#include <sstream>

namespace lcs {

FlattenedFoliation FlattenedFoliation::make(ChartPtr chart, std::vector<VarId> leaf_coords) {
    std::sort(leaf_coords.begin(), leaf_coords.end());
    leaf_coords.erase(std::unique(leaf_coords.begin(), leaf_coords.end()), leaf_coords.end());
    const int k = static_cast<int>(leaf_coords.size());
    if (k < 1 || k >= chart->dim())
        fail(ErrorCode::Precondition,
             "foliation needs 1 <= leaf dimension < chart dimension");
    for (VarId v : leaf_coords)
        if (v < 0 || v >= chart->dim())
            fail(ErrorCode::Precondition, "leaf coordinate out of chart range");
    FlattenedFoliation f;
    f.chart_ = std::move(chart);
    f.leaf_ = std::move(leaf_coords);
    return f;
}

FlattenedFoliation FlattenedFoliation::make(const ChartPtr& chart,
                                            const std::string& leaf_names) {
    std::vector<VarId> ids;
    std::istringstream in(leaf_names);
    std::string tok;
    while (in >> tok) ids.push_back(chart->require(tok));
    return make(chart, std::move(ids));
}

bool FlattenedFoliation::is_leaf(VarId v) const {
    return std::binary_search(leaf_.begin(), leaf_.end(), v);
}

std::vector<VarId> FlattenedFoliation::transverse() const {
    std::vector<VarId> out;
    for (VarId v = 0; v < chart_->dim(); ++v)
        if (!is_leaf(v)) out.push_back(v);
    return out;
}

bool is_leafwise_vanishing(const DifferentialForm& a, const FlattenedFoliation& f,
                           const SamplePlan& plan) {
    require_same_chart(a.chart(), f.chart(), "is_leafwise_vanishing");
    std::vector<ScalarExpr> leaf_coeffs;
    for (const auto& [k, c] : a.coeffs()) {
        bool inside = true;
        for (VarId v : k.idx)
            if (!f.is_leaf(v)) inside = false;
        if (inside) leaf_coeffs.push_back(c);
    }
    for (const auto& verdict : is_zero_many(leaf_coeffs, plan))
        if (verdict.tier == ZeroTier::NonZero) return false;
    return true;
}

namespace {

ScalarExpr coeff_of(const DifferentialForm& omega1, VarId v) {
    return omega1.coeff(MultiIndex{{v}});
}

ScalarExpr value_at_origin(const ScalarExpr& g) {
    ScalarExpr out = g;
    for (VarId v = 0; v < g.chart()->dim(); ++v)
        if (out.depends_on(v)) out = substitute_var(out, v, ScalarExpr::zero(g.chart()));
    return out;
}

} // namespace

TangentialClassReport h1_class_decide(const DifferentialForm& omega1,
                                      const FlattenedFoliation& f, const SamplePlan& plan) {
    require_same_chart(omega1.chart(), f.chart(), "h1_class_decide");
    if (omega1.degree() != 1)
        fail(ErrorCode::DegreeError, "tangential class decision expects a 1-form");
    const ChartPtr& chart = f.chart();

    // Hypothesis: d(omega) vanishes on leaf-tangent pairs.
    {
        DifferentialForm d_omega = exterior_derivative(omega1);
        std::vector<ScalarExpr> bad;
        for (const auto& [k, c] : d_omega.coeffs()) {
            bool inside = true;
            for (VarId v : k.idx)
                if (!f.is_leaf(v)) inside = false;
            if (inside) bad.push_back(c);
        }
        for (const auto& verdict : is_zero_many(bad, plan))
            if (verdict.tier == ZeroTier::NonZero)
                fail(ErrorCode::Precondition,
                     "d(omega) is not leafwise-vanishing; the tangential class is undefined");
    }

    TangentialClassReport report;

    // Period obstructions: for each periodic leaf direction, the mean of the
    // matching component (averaged over the other leaf circles first).
    std::vector<VarId> periodic_leaves;
    for (VarId v : f.leaves())
        if (chart->is_periodic(v)) periodic_leaves.push_back(v);
    for (VarId theta : periodic_leaves) {
        ScalarExpr mean = coeff_of(omega1, theta);
        for (VarId phi : periodic_leaves)
            if (phi != theta && mean.depends_on(phi)) mean = circle_mean(mean, phi);
        mean = circle_mean(mean, theta);
        ZeroVerdict verdict = is_zero(mean, plan);
        if (verdict.tier == ZeroTier::NonZero) {
            report.verdict = TangentialClassReport::Verdict::Obstructed;
            report.obstruction_kind = "circle-mean";
            report.obstruction_coord = theta;
            report.obstruction_expr = mean;
            report.obstruction_witness = verdict.witness;
            return report;
        }
    }

    // Leafwise primitive by iterated antidifferentiation.
    ScalarExpr g = ScalarExpr::zero(chart);
    for (VarId t : f.leaves()) {
        ScalarExpr rest = coeff_of(omega1, t) - g.derivative(t);
        if (rest.syntactic_zero()) continue;
        if (chart->is_periodic(t)) {
            // Integrate only the oscillatory part; a surviving mean is a
            // (belt-and-braces) period obstruction.
            ScalarExpr mean = circle_mean(rest, t);
            ZeroVerdict verdict = is_zero(mean, plan);
            if (verdict.tier == ZeroTier::NonZero) {
                report.verdict = TangentialClassReport::Verdict::Obstructed;
                report.obstruction_kind = "circle-mean";
                report.obstruction_coord = t;
                report.obstruction_expr = mean;
                report.obstruction_witness = verdict.witness;
                return report;
            }
            rest = rest - mean;
        }
        g = g + antiderivative(rest, t);
    }

    // Deterministic representative: g vanishes at the chart origin.
    g = g - value_at_origin(g);

    // Residual certification.
    std::vector<ScalarExpr> residuals;
    for (VarId t : f.leaves()) residuals.push_back(g.derivative(t) - coeff_of(omega1, t));
    auto verdicts = is_zero_many(residuals, plan);
    for (std::size_t i = 0; i < verdicts.size(); ++i) {
        const VarId t = f.leaves()[i];
        if (verdicts[i].tier == ZeroTier::NonZero) {
            report.verdict = TangentialClassReport::Verdict::Obstructed;
            report.obstruction_kind = "compatibility";
            report.obstruction_coord = t;
            report.obstruction_expr = residuals[i];
            report.obstruction_witness = verdicts[i].witness;
            return report;
        }
        if (verdicts[i].tier == ZeroTier::ProbablyZero) report.worst = ZeroTier::ProbablyZero;
        report.residuals.emplace_back(t, verdicts[i]);
    }
    report.primitive = std::move(g);
    return report;
}

bool leaf_restriction_check(const DifferentialForm& omega1, const FlattenedFoliation& f,
                            const TangentialClassReport& report, const SamplePlan& plan) {
    if (!report.zero_class())
        fail(ErrorCode::Precondition, "leaf restriction check needs a ZeroClass report");
    const ChartPtr& chart = f.chart();
    const auto transverse = f.transverse();

    auto freeze = [&](const ScalarExpr& e, const Point& p) {
        ScalarExpr out = e;
        for (VarId v : transverse)
            if (out.depends_on(v))
                out = substitute_var(
                    out, v, ScalarExpr::constant(chart, p.x[static_cast<std::size_t>(v)]));
        return out;
    };

    for (const auto& p : draw_points(chart, plan)) {
        ScalarExpr g_leaf = freeze(report.primitive, p);
        for (VarId t : f.leaves()) {
            ScalarExpr omega_leaf = freeze(omega1.coeff(MultiIndex{{t}}), p);
            ZeroVerdict verdict = is_zero(g_leaf.derivative(t) - omega_leaf, plan);
            if (verdict.tier == ZeroTier::NonZero) return false;
        }
    }
    return true;
}

// --------------------------------------------------------------- contraction

ChartPtr ContractionFamily::extended_chart(const ChartPtr& base) {
    if (base->find("t"))
        fail(ErrorCode::Precondition,
             "chart already declares 't'; the contraction parameter needs it");
    std::vector<Coordinate> coords = base->coords();
    coords.push_back(Coordinate{"t", false, Rational(0), Rational(1)});
    return Chart::make(base->name() + "+t", std::move(coords));
}

ContractionFamily ContractionFamily::make(FlattenedFoliation foliation,
                                          std::vector<ScalarExpr> comps_on_extended,
                                          std::vector<Rational> slice_values,
                                          const SamplePlan& plan) {
    ChartPtr chart = foliation.chart();
    ChartPtr ext = extended_chart(chart);
    if (static_cast<int>(comps_on_extended.size()) != chart->dim())
        fail(ErrorCode::Precondition, "contraction needs one component per chart coordinate");
    for (const auto& c : comps_on_extended)
        require_same_chart(c.chart(), ext, "contraction component");
    if (slice_values.empty())
        slice_values.assign(foliation.leaves().size(), Rational(0));
    if (slice_values.size() != foliation.leaves().size())
        fail(ErrorCode::Precondition, "one slice value per leaf coordinate required");

    ContractionFamily c;
    c.foliation_ = std::move(foliation);
    c.ext_ = std::move(ext);
    c.comps_ = std::move(comps_on_extended);
    c.slice_ = std::move(slice_values);

    const VarId tv = c.t_var();

    // Leaf preservation in flattened coordinates: transverse components are
    // the coordinates themselves.
    std::vector<ScalarExpr> residuals;
    std::vector<std::string> names;
    for (VarId v : c.foliation_.transverse()) {
        residuals.push_back(c.comps_[static_cast<std::size_t>(v)] - ScalarExpr::var(c.ext_, v));
        names.push_back("transverse component " + chart->coord_name(v));
    }
    // F_1 = identity.
    for (VarId v = 0; v < chart->dim(); ++v) {
        ScalarExpr at1 = substitute_var(c.comps_[static_cast<std::size_t>(v)], tv,
                                        ScalarExpr::one(c.ext_));
        residuals.push_back(at1 - ScalarExpr::var(c.ext_, v));
        names.push_back("F_1 component " + chart->coord_name(v));
    }
    // F_0 lands in the slice.
    {
        std::size_t li = 0;
        for (VarId v : c.foliation_.leaves()) {
            ScalarExpr at0 = substitute_var(c.comps_[static_cast<std::size_t>(v)], tv,
                                            ScalarExpr::zero(c.ext_));
            residuals.push_back(at0 - ScalarExpr::constant(c.ext_, c.slice_[li]));
            names.push_back("F_0 leaf component " + chart->coord_name(v));
            ++li;
        }
    }
    auto verdicts = is_zero_many(residuals, plan);
    for (std::size_t i = 0; i < verdicts.size(); ++i)
        if (verdicts[i].tier == ZeroTier::NonZero)
            fail(ErrorCode::Precondition,
                 "not a contraction along the foliation: " + names[i] + " fails (" +
                     residuals[i].str() + ")");
    return c;
}

SmoothMap ContractionFamily::at_time(const Rational& value) const {
    const ChartPtr& chart = chart_q();
    std::vector<ScalarExpr> images;
    for (VarId v = 0; v < chart->dim(); ++v) images.push_back(ScalarExpr::var(chart, v));
    images.push_back(ScalarExpr::constant(chart, value));
    std::vector<ScalarExpr> comps;
    for (const auto& c : comps_) comps.push_back(compose(c, chart, images));
    return SmoothMap(chart, chart, std::move(comps));
}

ChartPtr ContractionFamily::slice_chart() const {
    std::vector<Coordinate> coords;
    for (VarId v : foliation_.transverse()) coords.push_back(chart_q()->coord(v));
    return Chart::make(chart_q()->name() + "|S", std::move(coords));
}

SmoothMap ContractionFamily::projection_to_slice() const {
    const ChartPtr& q = chart_q();
    std::vector<ScalarExpr> comps;
    for (VarId v : foliation_.transverse()) comps.push_back(ScalarExpr::var(q, v));
    return SmoothMap(q, slice_chart(), std::move(comps));
}

SmoothMap ContractionFamily::slice_inclusion() const {
    ChartPtr s = slice_chart();
    const ChartPtr& q = chart_q();
    std::vector<ScalarExpr> comps(static_cast<std::size_t>(q->dim()), ScalarExpr::zero(s));
    std::size_t li = 0;
    for (VarId v : foliation_.leaves())
        comps[static_cast<std::size_t>(v)] = ScalarExpr::constant(s, slice_[li++]);
    std::size_t ti = 0;
    for (VarId v : foliation_.transverse())
        comps[static_cast<std::size_t>(v)] = ScalarExpr::var(s, static_cast<VarId>(ti++));
    return SmoothMap(s, q, std::move(comps));
}

HomotopyReport homotopy_operator(const DifferentialForm& omega_p,
                                 const ContractionFamily& c, const SamplePlan& plan) {
    const ChartPtr& chart = c.chart_q();
    require_same_chart(omega_p.chart(), chart, "homotopy_operator");
    const int p = omega_p.degree();
    const int n = chart->dim();
    const ChartPtr& ext = c.chart_ext();
    const VarId tv = c.t_var();

    // Hypothesis of the homotopy identity: d(omega) in the subcomplex. At
    // p = 0 the identity is the plain fundamental theorem of calculus along
    // the contraction and needs no hypothesis (the residual is exactly zero).
    if (p >= 1 && !is_leafwise_vanishing(exterior_derivative(omega_p), c.foliation(), plan))
        fail(ErrorCode::Precondition,
             "d(omega) is not leafwise-vanishing; the homotopy operator does not apply");

    // Composition with F_t and time derivative, all on the extended chart.
    auto compose_ft = [&](const ScalarExpr& e) { return compose(e, ext, c.comps()); };
    std::vector<ScalarExpr> w; // dF/dt
    for (VarId v = 0; v < n; ++v)
        w.push_back(c.comps()[static_cast<std::size_t>(v)].derivative(tv));

    HomotopyReport report;
    SmoothMap f0 = c.at_time(Rational(0));

    auto project_down = [&](const ScalarExpr& e) {
        std::vector<ScalarExpr> images;
        for (VarId v = 0; v < n; ++v) images.push_back(ScalarExpr::var(chart, v));
        images.push_back(ScalarExpr::zero(chart)); // t is already integrated out
        return compose(e, chart, images);
    };

    if (p == 0) {
        // h - h(F_0) = int_0^1 (grad h)(F_t) . dF/dt dt, exactly.
        ScalarExpr h = omega_p.coeff(MultiIndex{});
        ScalarExpr integrand = ScalarExpr::zero(ext);
        for (VarId v = 0; v < n; ++v) {
            ScalarExpr dh = h.derivative(v);
            if (dh.syntactic_zero()) continue;
            integrand = integrand + compose_ft(dh) * w[static_cast<std::size_t>(v)];
        }
        ScalarExpr alpha0 = project_down(integrate_unit_interval(integrand, tv));
        report.alpha = DifferentialForm::from_scalar(alpha0);
        ScalarExpr h0 = compose(h, chart, f0.comps());
        report.residual = DifferentialForm::from_scalar(h - h0 - alpha0);
        auto rz = form_is_zero(report.residual, plan);
        report.leafwise = rz.zero;
        report.worst = rz.worst;
        return report;
    }

    // Integrand p-1 form on the extended chart:
    //   sum_K (omega_K o F_t) sum_a (-1)^{a-1} W_{k_a} dF_{k_1} ^ ...(hat a)... ^ dF_{k_p}
    // where dF_i only carries the space differentials.
    std::vector<DifferentialForm> df;
    for (VarId i = 0; i < n; ++i) {
        DifferentialForm one_form(ext, 1);
        for (VarId j = 0; j < n; ++j) {
            ScalarExpr entry = c.comps()[static_cast<std::size_t>(i)].derivative(j);
            if (entry.syntactic_zero()) continue;
            VarId key[1] = {j};
            one_form.add_term(key, entry);
        }
        df.push_back(std::move(one_form));
    }

    DifferentialForm integrand(ext, p - 1);
    for (const auto& [k, coeff] : omega_p.coeffs()) {
        ScalarExpr ck = compose_ft(coeff);
        for (std::size_t a = 0; a < k.idx.size(); ++a) {
            const ScalarExpr& wa = w[static_cast<std::size_t>(k.idx[a])];
            if (wa.syntactic_zero()) continue;
            ScalarExpr scale = ck * wa;
            if (a % 2 == 1) scale = -scale;
            DifferentialForm acc = DifferentialForm::from_scalar(scale);
            bool vanished = false;
            for (std::size_t b = 0; b < k.idx.size(); ++b) {
                if (b == a) continue;
                acc = wedge(acc, df[static_cast<std::size_t>(k.idx[b])]);
                if (acc.syntactic_zero()) {
                    vanished = true;
                    break;
                }
            }
            if (!vanished) integrand = integrand + acc;
        }
    }

    // Integrate t over [0,1] coefficient-wise and project to chart_Q.
    DifferentialForm alpha(chart, p - 1);
    for (const auto& [k, coeff] : integrand.coeffs()) {
        MultiIndex down = k; // extended chart shares the leading coordinates
        alpha.add_term(down, project_down(integrate_unit_interval(coeff, tv)));
    }
    report.alpha = std::move(alpha);

    DifferentialForm pulled_back = pullback(f0, omega_p);
    report.residual = omega_p - pulled_back - exterior_derivative(report.alpha);
    report.leafwise = is_leafwise_vanishing(report.residual, c.foliation(), plan);

    ZeroTier worst = ZeroTier::ProvenZero;
    std::vector<ScalarExpr> leaf_coeffs;
    for (const auto& [k, coeff] : report.residual.coeffs()) {
        bool inside = true;
        for (VarId v : k.idx)
            if (!c.foliation().is_leaf(v)) inside = false;
        if (inside) leaf_coeffs.push_back(coeff);
    }
    for (const auto& verdict : is_zero_many(leaf_coeffs, plan)) {
        if (verdict.tier == ZeroTier::NonZero) worst = ZeroTier::NonZero;
        else if (verdict.tier == ZeroTier::ProbablyZero && worst == ZeroTier::ProvenZero)
            worst = ZeroTier::ProbablyZero;
    }
    report.worst = worst;
    return report;
}

} // namespace lcs
