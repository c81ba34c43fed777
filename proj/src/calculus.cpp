#include "lcs/errors.hpp"
#include "lcs/symbolic.hpp"

#include <algorithm>
#include <cassert>

namespace lcs {

namespace {

// ------------------------------------------------------------- derivative

QExpr d_quotient(const QExpr& e, VarId v);

QExpr d_atom_full(const Atom& a, VarId v) {
    switch (a.kind()) {
    case AtomKind::Var:
        return a.var_id() == v ? QExpr::from_rational(1) : QExpr();
    case AtomKind::Exp: {
        QExpr da = d_quotient(a.arg(), v);
        if (da.is_zero()) return QExpr();
        return q_mul(da, q_exp(a.arg()));
    }
    case AtomKind::Ln: {
        QExpr da = d_quotient(a.arg(), v);
        if (da.is_zero()) return QExpr();
        return q_div(da, a.arg());
    }
    case AtomKind::Sin: {
        Rational c = a.lin().coeff_of(v);
        if (sgn(c) == 0) return QExpr();
        return q_mul(q_trig(AtomKind::Cos, a.lin()), c);
    }
    case AtomKind::Cos: {
        Rational c = a.lin().coeff_of(v);
        if (sgn(c) == 0) return QExpr();
        return q_mul(q_trig(AtomKind::Sin, a.lin()), -c);
    }
    }
    return QExpr();
}

QExpr d_poly(const Poly& p, VarId v) {
    QExpr out;
    for (const auto& t : p.terms()) {
        // Product rule across the factors of the monomial.
        for (std::size_t i = 0; i < t.mono.factors.size(); ++i) {
            const Factor& f = t.mono.factors[i];
            QExpr df = d_atom_full(f.atom, v);
            if (df.is_zero()) continue;
            std::vector<Factor> rest;
            rest.reserve(t.mono.factors.size());
            for (std::size_t j = 0; j < t.mono.factors.size(); ++j) {
                if (j == i) {
                    if (f.power > 1) rest.push_back(Factor{f.atom, f.power - 1});
                } else {
                    rest.push_back(t.mono.factors[j]);
                }
            }
            QExpr piece = QExpr::from_poly(
                Poly::from_term(Monomial{std::move(rest)}, t.coeff * f.power));
            out = q_add(out, q_mul(piece, df));
        }
    }
    return out;
}

QExpr d_quotient(const QExpr& e, VarId v) {
    QExpr dn = d_poly(e.num(), v);
    if (e.is_polynomial()) return dn;
    QExpr dd = d_poly(e.den(), v);
    // (n/d)' = (n' d - n d') / d^2
    QExpr n = QExpr::from_poly(e.num());
    QExpr d = QExpr::from_poly(e.den());
    return q_div(q_sub(q_mul(dn, d), q_mul(n, dd)), q_mul(d, d));
}

// ------------------------------------------------------------ substitution

using ImageFn = std::function<QExpr(VarId)>;

QExpr subst_quotient(const QExpr& e, const ImageFn& img);

QExpr subst_factor(const Factor& f, const ImageFn& img) {
    switch (f.atom.kind()) {
    case AtomKind::Var:
        return q_pow(img(f.atom.var_id()), f.power);
    case AtomKind::Exp:
        return q_pow(q_exp(subst_quotient(f.atom.arg(), img)), f.power);
    case AtomKind::Ln:
        return q_pow(q_ln(subst_quotient(f.atom.arg(), img)), f.power);
    case AtomKind::Sin:
    case AtomKind::Cos: {
        QExpr arg = QExpr::from_rational(f.atom.lin().cst);
        for (const auto& [v, c] : f.atom.lin().terms)
            arg = q_add(arg, q_mul(img(v), c));
        auto lin = as_linform(arg);
        if (!lin)
            fail(ErrorCode::NotInExpressionClass,
                 "substitution makes a trigonometric argument non-affine");
        return q_pow(q_trig(f.atom.kind(), std::move(*lin)), f.power);
    }
    }
    return QExpr();
}

QExpr subst_poly(const Poly& p, const ImageFn& img) {
    QExpr out;
    for (const auto& t : p.terms()) {
        QExpr piece = QExpr::from_rational(t.coeff);
        for (const auto& f : t.mono.factors) piece = q_mul(piece, subst_factor(f, img));
        out = q_add(out, piece);
    }
    return out;
}

QExpr subst_quotient(const QExpr& e, const ImageFn& img) {
    QExpr n = subst_poly(e.num(), img);
    if (e.is_polynomial()) return n;
    QExpr d = subst_poly(e.den(), img);
    if (d.is_zero())
        fail(ErrorCode::DivisionByZero, "substitution hits a pole (denominator becomes zero)");
    return q_div(n, d);
}

// ---------------------------------------------------------- antiderivative

struct TrigPart {
    AtomKind kind;  // Sin or Cos
    Rational c;     // coefficient of v in the argument
    LinForm rest;   // v-free remainder of the argument
};

QExpr trig_expr(const TrigPart& t, VarId v) {
    LinForm l = t.rest;
    l.terms.emplace_back(v, t.c);
    std::sort(l.terms.begin(), l.terms.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    return q_trig(t.kind, std::move(l));
}

QExpr exp_expr(const Rational& a, VarId v) {
    return q_exp(q_mul(QExpr::var(v), a));
}

QExpr v_power(VarId v, int k) { return q_pow(QExpr::var(v), k); }

// \int v^k * [exp(a v)] * [trig(c v + rest)] dv, closed-form with
// integration by parts on the power.
QExpr integ_unit(int k, bool has_exp, const Rational& a, bool has_trig, const TrigPart& trig,
                 VarId v) {
    if (!has_exp && !has_trig)
        return q_mul(v_power(v, k + 1), Rational(1) / Rational(k + 1));

    if (has_exp && !has_trig) {
        QExpr lead = q_mul(q_mul(v_power(v, k), exp_expr(a, v)), Rational(1) / a);
        if (k == 0) return lead;
        QExpr tail = integ_unit(k - 1, true, a, false, trig, v);
        return q_sub(lead, q_mul(tail, Rational(k) / a));
    }

    if (!has_exp && has_trig) {
        TrigPart other{trig.kind == AtomKind::Sin ? AtomKind::Cos : AtomKind::Sin, trig.c,
                       trig.rest};
        // primitive of sin is -cos/c, of cos is sin/c
        Rational s = Rational(1) / trig.c;
        if (trig.kind == AtomKind::Sin) s = -s;
        QExpr lead = q_mul(q_mul(v_power(v, k), trig_expr(other, v)), s);
        if (k == 0) return lead;
        QExpr tail = integ_unit(k - 1, false, a, true, other, v);
        return q_sub(lead, q_mul(tail, Rational(k) * s));
    }

    // exp * trig
    const Rational denom = a * a + trig.c * trig.c;
    TrigPart same = trig;
    TrigPart other{trig.kind == AtomKind::Sin ? AtomKind::Cos : AtomKind::Sin, trig.c, trig.rest};
    Rational cs, co;
    if (trig.kind == AtomKind::Sin) {
        cs = a / denom;        // coefficient of e^{av} sin
        co = -trig.c / denom;  // coefficient of e^{av} cos
    } else {
        cs = a / denom;       // coefficient of e^{av} cos
        co = trig.c / denom;  // coefficient of e^{av} sin
    }
    QExpr prim = q_add(q_mul(q_mul(exp_expr(a, v), trig_expr(same, v)), cs),
                       q_mul(q_mul(exp_expr(a, v), trig_expr(other, v)), co));
    QExpr lead = q_mul(v_power(v, k), prim);
    if (k == 0) return lead;
    QExpr t1 = integ_unit(k - 1, true, a, true, same, v);
    QExpr t2 = integ_unit(k - 1, true, a, true, other, v);
    return q_sub(lead, q_add(q_mul(t1, Rational(k) * cs), q_mul(t2, Rational(k) * co)));
}

[[noreturn]] void not_integrable(const std::string& what) {
    fail(ErrorCode::NotInIntegrableClass, "not in the integrable class: " + what);
}

// Splits exp argument A into c*v + A0 with rational c and v-free A0.
std::pair<Rational, QExpr> split_exp_arg(const QExpr& arg, VarId v, const VarNamer& name) {
    if (!arg.is_polynomial() || contains_var(arg.den(), v))
        not_integrable("exp(" + to_string(arg, name) + ") has v in a denominator");
    Rational c(0);
    std::vector<Term> rest;
    for (const auto& t : arg.num().terms()) {
        if (!contains_var(t.mono, v)) {
            rest.push_back(t);
            continue;
        }
        if (t.mono.factors.size() == 1 && t.mono.factors[0].atom.kind() == AtomKind::Var &&
            t.mono.factors[0].atom.var_id() == v && t.mono.factors[0].power == 1) {
            c += t.coeff;
        } else {
            not_integrable("exp argument " + to_string(arg, name) +
                           " is not linear in the integration variable");
        }
    }
    return {c, QExpr::from_poly(Poly::collect(std::move(rest)))};
}

QExpr integ_term(const Term& term, VarId v, const VarNamer& name) {
    std::vector<Factor> vfree;
    int k = 0;
    bool has_exp = false;
    Rational a(0);
    bool has_trig = false;
    TrigPart trig{AtomKind::Sin, Rational(0), LinForm{}};

    for (const auto& f : term.mono.factors) {
        switch (f.atom.kind()) {
        case AtomKind::Var:
            if (f.atom.var_id() == v)
                k = f.power;
            else
                vfree.push_back(f);
            break;
        case AtomKind::Exp: {
            if (!contains_var(f.atom.arg(), v)) {
                vfree.push_back(f);
                break;
            }
            auto [c, rest] = split_exp_arg(f.atom.arg(), v, name);
            if (f.power != 1) { c *= f.power; rest = q_mul(rest, Rational(f.power)); }
            a = c;
            has_exp = true;
            if (!rest.is_zero()) {
                QExpr e = q_exp(rest);
                const Term* s = e.num().single();
                assert(s && e.is_polynomial());
                for (const auto& rf : s->mono.factors) vfree.push_back(rf);
            }
            break;
        }
        case AtomKind::Ln:
            if (contains_var(f.atom.arg(), v))
                not_integrable("ln(...) depends on the integration variable");
            vfree.push_back(f);
            break;
        case AtomKind::Sin:
        case AtomKind::Cos: {
            Rational c = f.atom.lin().coeff_of(v);
            if (sgn(c) == 0) {
                vfree.push_back(f);
                break;
            }
            has_trig = true;
            trig.kind = f.atom.kind();
            trig.c = c;
            trig.rest = f.atom.lin();
            std::erase_if(trig.rest.terms, [v](const auto& p) { return p.first == v; });
            break;
        }
        }
    }

    QExpr core = integ_unit(k, has_exp, a, has_trig, trig, v);
    QExpr prefix = QExpr::from_poly(Poly::from_term(Monomial{std::move(vfree)}, term.coeff));
    return q_mul(prefix, core);
}

QExpr antiderivative_q(const QExpr& e, VarId v, const VarNamer& name) {
    if (contains_var(e.den(), v))
        not_integrable("denominator depends on the integration variable");
    QExpr out;
    for (const auto& t : e.num().terms()) out = q_add(out, integ_term(t, v, name));
    if (!e.den().is_one()) out = q_div(out, QExpr::from_poly(e.den()));
    return out;
}

} // namespace

// ----------------------------------------------------------- public layer

ScalarExpr ScalarExpr::var(const ChartPtr& chart, std::string_view name) {
    return ScalarExpr(chart, QExpr::var(chart->require(name)));
}

ScalarExpr ScalarExpr::derivative(VarId v) const { return {chart_, d_quotient(q_, v)}; }

ScalarExpr ScalarExpr::derivative(std::string_view coord) const {
    return derivative(chart_->require(coord));
}

ScalarExpr derivative(const ScalarExpr& e, VarId v) { return e.derivative(v); }

namespace {

ChartPtr unify(const ScalarExpr& a, const ScalarExpr& b, const char* where) {
    if (!a.chart()) return b.chart();
    if (!b.chart()) return a.chart();
    require_same_chart(a.chart(), b.chart(), where);
    return a.chart();
}

VarNamer namer(const ChartPtr& chart) {
    return [chart](VarId v) {
        if (chart && v >= 0 && v < chart->dim()) return chart->coord_name(v);
        return std::string("#") + std::to_string(v);
    };
}

} // namespace

ScalarExpr operator+(const ScalarExpr& a, const ScalarExpr& b) {
    return {unify(a, b, "+"), q_add(a.q(), b.q())};
}
ScalarExpr operator-(const ScalarExpr& a, const ScalarExpr& b) {
    return {unify(a, b, "-"), q_sub(a.q(), b.q())};
}
ScalarExpr operator*(const ScalarExpr& a, const ScalarExpr& b) {
    return {unify(a, b, "*"), q_mul(a.q(), b.q())};
}
ScalarExpr operator/(const ScalarExpr& a, const ScalarExpr& b) {
    return {unify(a, b, "/"), q_div(a.q(), b.q())};
}

ScalarExpr operator*(const Rational& c, const ScalarExpr& e) {
    return {e.chart(), q_mul(e.q(), c)};
}

ScalarExpr exp(const ScalarExpr& e) { return {e.chart(), q_exp(e.q())}; }
ScalarExpr ln(const ScalarExpr& e) { return {e.chart(), q_ln(e.q())}; }
ScalarExpr sin(const ScalarExpr& e) {
    ScalarExpr r{e.chart(), q_sin(e.q())};
    check_periodic_frequencies(r);
    return r;
}
ScalarExpr cos(const ScalarExpr& e) {
    ScalarExpr r{e.chart(), q_cos(e.q())};
    check_periodic_frequencies(r);
    return r;
}

std::string ScalarExpr::str() const { return to_string(q_, namer(chart_)); }

ScalarExpr antiderivative(const ScalarExpr& e, VarId v) {
    QExpr raw = antiderivative_q(e.q(), v, namer(e.chart()));
    // Normalize the integration constant: F(v=0) = 0.
    QExpr at0 = subst_quotient(raw, [&](VarId u) {
        return u == v ? QExpr() : QExpr::var(u);
    });
    return {e.chart(), q_sub(raw, at0)};
}

ScalarExpr integrate_unit_interval(const ScalarExpr& e, VarId v) {
    QExpr raw = antiderivative_q(e.q(), v, namer(e.chart()));
    QExpr at1 = subst_quotient(raw, [&](VarId u) {
        return u == v ? QExpr::from_rational(1) : QExpr::var(u);
    });
    QExpr at0 = subst_quotient(raw, [&](VarId u) {
        return u == v ? QExpr() : QExpr::var(u);
    });
    return {e.chart(), q_sub(at1, at0)};
}

ScalarExpr circle_mean(const ScalarExpr& e, VarId theta) {
    const QExpr& q = e.q();
    if (contains_var(q.den(), theta))
        fail(ErrorCode::NotTrigPolynomial,
             "denominator depends on the periodic coordinate");
    std::vector<Term> kept;
    for (const auto& t : q.num().terms()) {
        bool drop = false;
        for (const auto& f : t.mono.factors) {
            switch (f.atom.kind()) {
            case AtomKind::Var:
                if (f.atom.var_id() == theta)
                    fail(ErrorCode::NotTrigPolynomial,
                         "polynomial dependence on the periodic coordinate");
                break;
            case AtomKind::Exp:
            case AtomKind::Ln:
                if (contains_var(f.atom.arg(), theta))
                    fail(ErrorCode::NotTrigPolynomial,
                         "exp/ln dependence on the periodic coordinate");
                break;
            case AtomKind::Sin:
            case AtomKind::Cos: {
                Rational c = f.atom.lin().coeff_of(theta);
                if (sgn(c) == 0) break;
                if (!is_integer(c))
                    fail(ErrorCode::NotTrigPolynomial,
                         "non-integer frequency on the periodic coordinate");
                drop = true; // mean of sin/cos(k theta + ...) over a period is 0
                break;
            }
            }
        }
        if (!drop) kept.push_back(t);
    }
    QExpr mean = QExpr::from_poly(Poly::collect(std::move(kept)));
    if (!q.den().is_one()) mean = q_div(mean, QExpr::from_poly(q.den()));
    return {e.chart(), std::move(mean)};
}

ScalarExpr substitute_var(const ScalarExpr& e, VarId v, const ScalarExpr& image) {
    require_same_chart(e.chart(), image.chart(), "substitute_var");
    QExpr out = subst_quotient(e.q(), [&](VarId u) {
        return u == v ? image.q() : QExpr::var(u);
    });
    return {e.chart(), std::move(out)};
}

ScalarExpr compose(const ScalarExpr& e, const ChartPtr& source,
                   std::span<const ScalarExpr> images) {
    if (static_cast<int>(images.size()) != e.chart()->dim())
        fail(ErrorCode::ChartMismatch, "compose: one image per coordinate required");
    for (const auto& img : images) require_same_chart(img.chart(), source, "compose");
    QExpr out = subst_quotient(e.q(), [&](VarId u) -> QExpr {
        return images[static_cast<std::size_t>(u)].q();
    });
    ScalarExpr r{source, std::move(out)};
    check_periodic_frequencies(r);
    return r;
}

namespace {

void check_atom_frequencies(const Atom& a, const Chart& chart);

void check_poly_frequencies(const Poly& p, const Chart& chart) {
    for (const auto& t : p.terms())
        for (const auto& f : t.mono.factors) check_atom_frequencies(f.atom, chart);
}

void check_atom_frequencies(const Atom& a, const Chart& chart) {
    switch (a.kind()) {
    case AtomKind::Exp:
    case AtomKind::Ln:
        check_poly_frequencies(a.arg().num(), chart);
        check_poly_frequencies(a.arg().den(), chart);
        break;
    case AtomKind::Sin:
    case AtomKind::Cos:
        for (const auto& [v, c] : a.lin().terms) {
            if (v >= 0 && v < chart.dim() && chart.is_periodic(v) && !is_integer(c))
                fail(ErrorCode::NotInExpressionClass,
                     "non-integer trig frequency " + to_string(c) +
                         " on periodic coordinate " + chart.coord_name(v));
        }
        break;
    default:
        break;
    }
}

} // namespace

void check_periodic_frequencies(const ScalarExpr& e) {
    if (!e.chart()) return;
    check_poly_frequencies(e.q().num(), *e.chart());
    check_poly_frequencies(e.q().den(), *e.chart());
}

} // namespace lcs
