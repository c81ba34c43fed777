#include "lcs/lcs_structure.hpp"

#include "lcs/errors.hpp"

#include <algorithm>
#include <array>
#include <cmath>

namespace lcs {

namespace {

ScalarExpr pfaffian_rec(const SymMatrix& a, std::vector<int> active, const ChartPtr& chart) {
    const std::size_t n = active.size();
    if (n == 0) return ScalarExpr::one(chart);
    ScalarExpr out = ScalarExpr::zero(chart);
    const int first = active[0];
    for (std::size_t j = 1; j < n; ++j) {
        const ScalarExpr& entry = a[static_cast<std::size_t>(first)][static_cast<std::size_t>(active[j])];
        if (entry.syntactic_zero()) continue;
        std::vector<int> rest;
        rest.reserve(n - 2);
        for (std::size_t k = 1; k < n; ++k)
            if (k != j) rest.push_back(active[k]);
        ScalarExpr sub = pfaffian_rec(a, std::move(rest), chart);
        ScalarExpr piece = entry * sub;
        if (j % 2 == 0) piece = -piece; // sign (-1)^j with j counted from 1
        out = out + piece;
    }
    return out;
}

} // namespace

ScalarExpr pfaffian(const DifferentialForm& omega2) {
    const ChartPtr& chart = omega2.chart();
    const int n = chart->dim();
    if (n % 2 != 0)
        fail(ErrorCode::Precondition, "Pfaffian requires an even-dimensional chart");
    SymMatrix a = coefficient_matrix(omega2);
    std::vector<int> active(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) active[static_cast<std::size_t>(i)] = i;
    return pfaffian_rec(a, std::move(active), chart);
}

double check_nondegenerate(const DifferentialForm& omega2, const SamplePlan& plan) {
    ScalarExpr pf = pfaffian(omega2);
    if (pf.syntactic_zero())
        fail(ErrorCode::Degenerate, "degenerate 2-form: Pfaffian is identically zero");
    double min_abs = std::numeric_limits<double>::infinity();
    for (const auto& [p, v] : sample_values(pf, plan)) {
        double mag = std::fabs(v);
        if (mag <= plan.tol)
            fail(ErrorCode::Degenerate,
                 "degenerate 2-form: Pfaffian " + std::to_string(v) + " at " +
                     p.str(*omega2.chart()));
        min_abs = std::min(min_abs, mag);
    }
    return min_abs;
}

DifferentialForm lee_form(const DifferentialForm& omega2, const SamplePlan& plan,
                          const std::vector<int>* equation_order) {
    const ChartPtr& chart = omega2.chart();
    const int n = chart->dim();
    if (omega2.degree() != 2) fail(ErrorCode::DegreeError, "Lee form needs a 2-form");
    if (n % 2 != 0 || n < 4)
        fail(ErrorCode::Precondition,
             "Lee-form extraction requires even chart dimension greater than 2");
    check_nondegenerate(omega2, plan);

    DifferentialForm d_omega = exterior_derivative(omega2);
    DifferentialForm lee(chart, 1);
    if (d_omega.syntactic_zero()) return lee; // symplectic: Lee form is zero

    // Unknowns: the n coefficients of omega. One equation per 3-index
    // (a<b<c):  w_a O_{bc} - w_b O_{ac} + w_c O_{ab} = (dO)_{abc}.
    SymMatrix mat = coefficient_matrix(omega2);
    SymMatrix a;
    std::vector<ScalarExpr> b;
    std::vector<std::array<int, 3>> triples;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            for (int k = j + 1; k < n; ++k) triples.push_back({i, j, k});
    if (equation_order) {
        std::vector<std::array<int, 3>> reordered;
        reordered.reserve(triples.size());
        for (int idx : *equation_order)
            reordered.push_back(triples[static_cast<std::size_t>(idx)]);
        triples = std::move(reordered);
    }
    for (const auto& [i, j, k] : triples) {
        std::vector<ScalarExpr> row(static_cast<std::size_t>(n), ScalarExpr::zero(chart));
        row[static_cast<std::size_t>(i)] = mat[static_cast<std::size_t>(j)][static_cast<std::size_t>(k)];
        row[static_cast<std::size_t>(j)] = -mat[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)];
        row[static_cast<std::size_t>(k)] = mat[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
        bool all_zero = row[static_cast<std::size_t>(i)].syntactic_zero() &&
                        row[static_cast<std::size_t>(j)].syntactic_zero() &&
                        row[static_cast<std::size_t>(k)].syntactic_zero();
        MultiIndex key{{i, j, k}};
        ScalarExpr rhs = d_omega.coeff(key);
        if (all_zero && rhs.syntactic_zero()) continue;
        a.push_back(std::move(row));
        b.push_back(std::move(rhs));
    }

    LinearSolution sol = solve_linear(a, b, plan);
    if (!sol.consistent)
        fail(ErrorCode::NotLcs,
             "d(Omega) is not of the form omega ^ Omega (inconsistent system; residual " +
                 sol.inconsistency->str() + ")");

    for (int i = 0; i < n; ++i) {
        VarId one[1] = {i};
        lee.add_term(one, sol.x[static_cast<std::size_t>(i)]);
    }

    // Certify the answer independently of the solver path.
    auto residual = form_is_zero(d_omega - wedge(lee, omega2), plan);
    if (!residual.zero)
        fail(ErrorCode::NotLcs, "Lee-form residual d(Omega) - omega ^ Omega is nonzero");
    auto closed = form_is_zero(exterior_derivative(lee), plan);
    if (!closed.zero)
        fail(ErrorCode::NotLcs, "solved Lee form is not closed");
    return lee;
}

LcsStructure LcsStructure::make(DifferentialForm omega2, std::optional<DifferentialForm> lee,
                                const SamplePlan& plan) {
    const ChartPtr& chart = omega2.chart();
    if (omega2.degree() != 2) fail(ErrorCode::DegreeError, "LCS structure needs a 2-form");
    if (chart->dim() % 2 != 0 || chart->dim() < 4)
        fail(ErrorCode::Precondition,
             "LCS charts must have even dimension greater than 2 (got dim " +
                 std::to_string(chart->dim()) + ")");

    LcsStructure s;
    s.min_pfaffian_ = check_nondegenerate(omega2, plan);

    if (lee) {
        require_same_chart(lee->chart(), chart, "LCS Lee form");
        if (lee->degree() != 1) fail(ErrorCode::DegreeError, "Lee form must be a 1-form");
        auto residual = form_is_zero(exterior_derivative(omega2) - wedge(*lee, omega2), plan);
        if (!residual.zero)
            fail(ErrorCode::NotLcs,
                 "supplied Lee form fails d(Omega) = omega ^ Omega at " +
                     residual.first_nonzero()->index.str(*chart));
        s.lcs_tier_ = residual.worst;
        auto closed = form_is_zero(exterior_derivative(*lee), plan);
        if (!closed.zero) fail(ErrorCode::NotLcs, "supplied Lee form is not closed");
        s.closed_tier_ = closed.worst;
        s.lee_ = std::move(*lee);
    } else {
        s.lee_ = lee_form(omega2, plan);
        auto residual = form_is_zero(exterior_derivative(omega2) - wedge(s.lee_, omega2), plan);
        s.lcs_tier_ = residual.worst;
        auto closed = form_is_zero(exterior_derivative(s.lee_), plan);
        s.closed_tier_ = closed.worst;
    }
    s.omega_ = std::move(omega2);
    return s;
}

namespace {

// f must be a single monomial with positive rational coefficient whose
// factors are all exp atoms, so ln f is exact.
bool is_exp_form(const ScalarExpr& f) {
    if (!f.q().is_polynomial()) return false;
    const Term* t = f.q().num().single();
    if (!t || sgn(t->coeff) <= 0) return false;
    for (const auto& factor : t->mono.factors)
        if (factor.atom.kind() != AtomKind::Exp) return false;
    return true;
}

} // namespace

LcsStructure conformal_rescale(const LcsStructure& s, const ScalarExpr& f,
                               const SamplePlan& plan) {
    require_same_chart(s.chart(), f.chart(), "conformal_rescale");
    if (!is_exp_form(f))
        fail(ErrorCode::Precondition,
             "conformal factor must be supplied in exp form (c * exp(h), c > 0)");
    for (const auto& [p, v] : sample_values(f, plan))
        if (!(v > plan.tol))
            fail(ErrorCode::NonPositiveWitness,
                 "conformal factor is not positive at " + p.str(*s.chart()));

    DifferentialForm new_omega = s.omega().scaled(f);
    DifferentialForm d_ln_f = exterior_derivative(DifferentialForm::from_scalar(ln(f)));
    DifferentialForm new_lee = s.lee() + d_ln_f;
    return LcsStructure::make(std::move(new_omega), std::move(new_lee), plan);
}

ConformalVerdict conformal_equivalence_on(const Embedding& iota,
                                          const DifferentialForm& omega1,
                                          const DifferentialForm& omega2,
                                          const SamplePlan& plan) {
    DifferentialForm p1 = restrict_form(iota, omega1);
    DifferentialForm p2 = restrict_form(iota, omega2);

    // Candidate ratio from the first NonZero coefficient of p1.
    std::vector<MultiIndex> keys;
    std::vector<ScalarExpr> coeffs;
    for (const auto& [k, c] : p1.coeffs()) {
        keys.push_back(k);
        coeffs.push_back(c);
    }
    auto verdicts = is_zero_many(coeffs, plan);
    int pick = -1;
    for (std::size_t i = 0; i < keys.size(); ++i)
        if (verdicts[i].tier == ZeroTier::NonZero) {
            pick = static_cast<int>(i);
            break;
        }
    if (pick < 0)
        fail(ErrorCode::ZeroPullback,
             "iota* Omega_1 vanishes on the submanifold; no candidate conformal factor");

    ConformalVerdict out;
    const MultiIndex& key = keys[static_cast<std::size_t>(pick)];
    ScalarExpr denom = coeffs[static_cast<std::size_t>(pick)];
    ScalarExpr numer = p2.coeff(key);
    if (numer.syntactic_zero()) {
        out.reason = "matching coefficient of iota* Omega_2 vanishes at " + key.str(*p1.chart());
        out.witness_index = key;
        return out;
    }
    ScalarExpr f = divide_checked(numer, denom, plan);

    auto residual = form_is_zero(p2 - p1.scaled(f), plan);
    if (!residual.zero) {
        out.reason = "coefficient ratios disagree";
        out.witness_index = residual.first_nonzero()->index;
        out.witness_point = residual.first_nonzero()->verdict.witness;
        return out;
    }
    for (const auto& [p, v] : sample_values(f, plan)) {
        if (!(v > plan.tol)) {
            out.reason = "conformal factor is not positive";
            out.witness_point = p;
            return out;
        }
    }
    out.equivalent = true;
    out.factor = std::move(f);
    out.residual_tier = residual.worst;
    return out;
}

} // namespace lcs
