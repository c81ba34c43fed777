#include "lcs/expr.hpp"

#include "lcs/errors.hpp"

#include <algorithm>
#include <cassert>
#include <sstream>

namespace lcs {

// ---------------------------------------------------------------- LinForm

Rational LinForm::coeff_of(VarId v) const {
    for (const auto& [var, c] : terms)
        if (var == v) return c;
    return Rational(0);
}

bool LinForm::contains(VarId v) const {
    for (const auto& [var, c] : terms)
        if (var == v) return true;
    return false;
}

LinForm lin_neg(const LinForm& a) {
    LinForm r;
    r.cst = -a.cst;
    r.terms.reserve(a.terms.size());
    for (const auto& [v, c] : a.terms) r.terms.emplace_back(v, -c);
    return r;
}

LinForm lin_add(const LinForm& a, const LinForm& b) {
    LinForm r;
    r.cst = a.cst + b.cst;
    std::size_t i = 0, j = 0;
    while (i < a.terms.size() || j < b.terms.size()) {
        if (j == b.terms.size() || (i < a.terms.size() && a.terms[i].first < b.terms[j].first)) {
            r.terms.push_back(a.terms[i++]);
        } else if (i == a.terms.size() || b.terms[j].first < a.terms[i].first) {
            r.terms.push_back(b.terms[j++]);
        } else {
            Rational c = a.terms[i].second + b.terms[j].second;
            if (sgn(c) != 0) r.terms.emplace_back(a.terms[i].first, c);
            ++i, ++j;
        }
    }
    return r;
}

LinForm lin_scale(const LinForm& a, const Rational& c) {
    if (sgn(c) == 0) return LinForm{};
    LinForm r;
    r.cst = a.cst * c;
    r.terms.reserve(a.terms.size());
    for (const auto& [v, k] : a.terms) r.terms.emplace_back(v, k * c);
    return r;
}

int cmp(const LinForm& a, const LinForm& b) {
    const std::size_t n = std::min(a.terms.size(), b.terms.size());
    for (std::size_t i = 0; i < n; ++i) {
        if (a.terms[i].first != b.terms[i].first)
            return a.terms[i].first < b.terms[i].first ? -1 : 1;
        if (int c = cmp(a.terms[i].second, b.terms[i].second)) return c;
    }
    if (a.terms.size() != b.terms.size()) return a.terms.size() < b.terms.size() ? -1 : 1;
    return cmp(a.cst, b.cst);
}

// ------------------------------------------------------------------- Atom

Atom Atom::var(VarId v) {
    Atom a;
    a.kind_ = AtomKind::Var;
    a.var_ = v;
    return a;
}

Atom Atom::exp(QExpr arg) {
    assert(!arg.is_zero());
    Atom a;
    a.kind_ = AtomKind::Exp;
    a.arg_ = std::make_shared<const QExpr>(std::move(arg));
    return a;
}

Atom Atom::ln(QExpr arg) {
    Atom a;
    a.kind_ = AtomKind::Ln;
    a.arg_ = std::make_shared<const QExpr>(std::move(arg));
    return a;
}

Atom Atom::trig(AtomKind kind, LinForm lin) {
    assert(kind == AtomKind::Sin || kind == AtomKind::Cos);
    Atom a;
    a.kind_ = kind;
    a.lin_ = std::move(lin);
    return a;
}

int cmp(const Atom& a, const Atom& b) {
    if (a.kind() != b.kind())
        return static_cast<int>(a.kind()) < static_cast<int>(b.kind()) ? -1 : 1;
    switch (a.kind()) {
    case AtomKind::Var:
        if (a.var_id() != b.var_id()) return a.var_id() < b.var_id() ? -1 : 1;
        return 0;
    case AtomKind::Exp:
    case AtomKind::Ln:
        if (a.arg_ptr() == b.arg_ptr()) return 0;
        return cmp(a.arg(), b.arg());
    case AtomKind::Sin:
    case AtomKind::Cos:
        return cmp(a.lin(), b.lin());
    }
    return 0;
}

// --------------------------------------------------------------- Monomial

const Factor* Monomial::find_kind(AtomKind kind) const {
    for (const auto& f : factors)
        if (f.atom.kind() == kind) return &f;
    return nullptr;
}

// Graded order: higher total degree first, ties broken lexicographically
// with higher powers first (so x^3 precedes x^2*y precedes x*y^2).
int cmp(const Monomial& a, const Monomial& b) {
    long da = 0, db = 0;
    for (const auto& f : a.factors) da += f.power;
    for (const auto& f : b.factors) db += f.power;
    if (da != db) return da > db ? -1 : 1;
    const std::size_t n = std::min(a.factors.size(), b.factors.size());
    for (std::size_t i = 0; i < n; ++i) {
        if (int c = cmp(a.factors[i].atom, b.factors[i].atom)) return c;
        if (a.factors[i].power != b.factors[i].power)
            return a.factors[i].power > b.factors[i].power ? -1 : 1;
    }
    if (a.factors.size() != b.factors.size())
        return a.factors.size() < b.factors.size() ? -1 : 1;
    return 0;
}

// ------------------------------------------------------------------- Poly

Poly Poly::constant(Rational c) {
    Poly p;
    if (sgn(c) != 0) p.terms_.push_back(Term{Monomial{}, std::move(c)});
    return p;
}

Poly Poly::var(VarId v) {
    Poly p;
    p.terms_.push_back(Term{Monomial{{Factor{Atom::var(v), 1}}}, Rational(1)});
    return p;
}

Poly Poly::from_term(Monomial m, Rational c) {
    Poly p;
    if (sgn(c) != 0) p.terms_.push_back(Term{std::move(m), std::move(c)});
    return p;
}

bool Poly::is_one() const {
    return terms_.size() == 1 && terms_[0].mono.is_unit() && terms_[0].coeff == 1;
}

std::optional<Rational> Poly::as_rational() const {
    if (terms_.empty()) return Rational(0);
    if (terms_.size() == 1 && terms_[0].mono.is_unit()) return terms_[0].coeff;
    return std::nullopt;
}

Poly Poly::collect(std::vector<Term> terms) {
    std::erase_if(terms, [](const Term& t) { return sgn(t.coeff) == 0; });
    std::sort(terms.begin(), terms.end(),
              [](const Term& a, const Term& b) { return cmp(a.mono, b.mono) < 0; });
    Poly p;
    for (auto& t : terms) {
        if (!p.terms_.empty() && cmp(p.terms_.back().mono, t.mono) == 0) {
            p.terms_.back().coeff += t.coeff;
            if (sgn(p.terms_.back().coeff) == 0) p.terms_.pop_back();
        } else {
            p.terms_.push_back(std::move(t));
        }
    }
    return p;
}

Poly add(const Poly& a, const Poly& b) {
    std::vector<Term> out;
    out.reserve(a.terms().size() + b.terms().size());
    std::size_t i = 0, j = 0;
    while (i < a.terms().size() || j < b.terms().size()) {
        int c;
        if (i == a.terms().size())
            c = 1;
        else if (j == b.terms().size())
            c = -1;
        else
            c = cmp(a.terms()[i].mono, b.terms()[j].mono);
        if (c < 0) {
            out.push_back(a.terms()[i++]);
        } else if (c > 0) {
            out.push_back(b.terms()[j++]);
        } else {
            Rational s = a.terms()[i].coeff + b.terms()[j].coeff;
            if (sgn(s) != 0) out.push_back(Term{a.terms()[i].mono, std::move(s)});
            ++i, ++j;
        }
    }
    return Poly::collect(std::move(out));
}

Poly neg(const Poly& a) {
    std::vector<Term> out = a.terms();
    for (auto& t : out) t.coeff = -t.coeff;
    return Poly::collect(std::move(out));
}

Poly sub(const Poly& a, const Poly& b) { return add(a, neg(b)); }

Poly mul(const Poly& a, const Rational& c) {
    if (sgn(c) == 0) return Poly::zero();
    std::vector<Term> out = a.terms();
    for (auto& t : out) t.coeff *= c;
    return Poly::collect(std::move(out));
}

namespace {

struct TrigUnit {
    AtomKind kind; // Sin or Cos
    LinForm lin;
};

// Normalizes a trig factor: zero argument folds to 0/1, the argument sign is
// canonicalized (sin is odd, cos is even). Returns the atom, or nullopt when
// the factor reduces to a constant (coeff is updated in place; coeff becomes
// zero when the whole term vanishes).
std::optional<Atom> norm_trig(AtomKind kind, LinForm lin, Rational& coeff) {
    if (lin.is_zero()) {
        if (kind == AtomKind::Sin) coeff = 0;
        return std::nullopt;
    }
    int lead = lin.terms.empty() ? sgn(lin.cst) : sgn(lin.terms[0].second);
    if (lead < 0) {
        lin = lin_neg(lin);
        if (kind == AtomKind::Sin) coeff = -coeff;
    }
    return Atom::trig(kind, std::move(lin));
}

struct TrigPart {
    std::optional<Atom> trig;
    Rational coeff;
};

// Product-to-sum for two trig units; each output carries coefficient +-1/2.
std::vector<TrigPart> trig_product(const AtomKind ka, const LinForm& la, const AtomKind kb,
                                   const LinForm& lb, const Rational& c) {
    const LinForm sum = lin_add(la, lb);
    const LinForm diff = lin_add(la, lin_neg(lb));
    const Rational half = c / 2;
    std::vector<TrigPart> out;
    auto push = [&out](AtomKind k, LinForm l, Rational q) {
        if (sgn(q) == 0) return;
        auto at = norm_trig(k, std::move(l), q);
        if (sgn(q) != 0) out.push_back(TrigPart{std::move(at), std::move(q)});
    };
    if (ka == AtomKind::Sin && kb == AtomKind::Sin) {
        push(AtomKind::Cos, diff, half);
        push(AtomKind::Cos, sum, -half);
    } else if (ka == AtomKind::Cos && kb == AtomKind::Cos) {
        push(AtomKind::Cos, diff, half);
        push(AtomKind::Cos, sum, half);
    } else if (ka == AtomKind::Sin && kb == AtomKind::Cos) {
        push(AtomKind::Sin, sum, half);
        push(AtomKind::Sin, diff, half);
    } else { // cos * sin
        push(AtomKind::Sin, sum, half);
        push(AtomKind::Sin, diff, -half);
    }
    return out;
}

void insert_factor_sorted(std::vector<Factor>& factors, Factor f) {
    auto it = std::lower_bound(factors.begin(), factors.end(), f,
                               [](const Factor& x, const Factor& y) {
                                   return cmp(x.atom, y.atom) < 0;
                               });
    factors.insert(it, std::move(f));
}

// Multiplies two canonical monomials. Exp factors merge by argument addition;
// trig products expand via product-to-sum, so the result is a polynomial.
Poly mono_mul(const Monomial& a, const Monomial& b, const Rational& coeff) {
    // Merge-join the factor vectors.
    std::vector<Factor> merged;
    merged.reserve(a.factors.size() + b.factors.size());
    std::size_t i = 0, j = 0;
    while (i < a.factors.size() || j < b.factors.size()) {
        int c;
        if (i == a.factors.size())
            c = 1;
        else if (j == b.factors.size())
            c = -1;
        else
            c = cmp(a.factors[i].atom, b.factors[j].atom);
        if (c < 0)
            merged.push_back(a.factors[i++]);
        else if (c > 0)
            merged.push_back(b.factors[j++]);
        else {
            Factor f = a.factors[i];
            f.power += b.factors[j].power;
            merged.push_back(std::move(f));
            ++i, ++j;
        }
    }

    // Fold exp factors into a single atom.
    QExpr exp_arg;
    bool has_exp = false;
    std::vector<TrigUnit> trig_units;
    std::vector<Factor> rest;
    rest.reserve(merged.size());
    for (auto& f : merged) {
        switch (f.atom.kind()) {
        case AtomKind::Exp: {
            QExpr contrib = f.power == 1 ? f.atom.arg() : q_mul(f.atom.arg(), Rational(f.power));
            exp_arg = has_exp ? q_add(exp_arg, contrib) : std::move(contrib);
            has_exp = true;
            break;
        }
        case AtomKind::Sin:
        case AtomKind::Cos:
            for (int k = 0; k < f.power; ++k)
                trig_units.push_back(TrigUnit{f.atom.kind(), f.atom.lin()});
            break;
        default:
            rest.push_back(std::move(f));
        }
    }
    if (has_exp && !exp_arg.is_zero())
        insert_factor_sorted(rest, Factor{Atom::exp(std::move(exp_arg)), 1});

    if (trig_units.size() <= 1) {
        if (trig_units.size() == 1) {
            Rational c = coeff;
            auto at = norm_trig(trig_units[0].kind, trig_units[0].lin, c);
            if (sgn(c) == 0) return Poly::zero();
            if (at) insert_factor_sorted(rest, Factor{std::move(*at), 1});
            return Poly::from_term(Monomial{std::move(rest)}, std::move(c));
        }
        return Poly::from_term(Monomial{std::move(rest)}, coeff);
    }

    // Product-to-sum cascade over the trig units.
    std::vector<TrigPart> acc;
    acc.push_back(TrigPart{std::nullopt, coeff});
    for (const auto& unit : trig_units) {
        std::vector<TrigPart> next;
        for (auto& part : acc) {
            if (sgn(part.coeff) == 0) continue;
            if (!part.trig) {
                Rational c = part.coeff;
                auto at = norm_trig(unit.kind, unit.lin, c);
                if (sgn(c) != 0) next.push_back(TrigPart{std::move(at), std::move(c)});
            } else {
                auto parts = trig_product(part.trig->kind(), part.trig->lin(), unit.kind,
                                          unit.lin, part.coeff);
                for (auto& p : parts) next.push_back(std::move(p));
            }
        }
        acc = std::move(next);
    }

    std::vector<Term> out;
    out.reserve(acc.size());
    for (auto& part : acc) {
        std::vector<Factor> factors = rest;
        if (part.trig) insert_factor_sorted(factors, Factor{std::move(*part.trig), 1});
        out.push_back(Term{Monomial{std::move(factors)}, std::move(part.coeff)});
    }
    return Poly::collect(std::move(out));
}

} // namespace

Poly mul(const Poly& a, const Poly& b) {
    if (a.is_zero() || b.is_zero()) return Poly::zero();
    if (auto c = a.as_rational()) return mul(b, *c);
    if (auto c = b.as_rational()) return mul(a, *c);
    std::vector<Term> out;
    out.reserve(a.terms().size() * b.terms().size());
    for (const auto& ta : a.terms())
        for (const auto& tb : b.terms()) {
            Poly p = mono_mul(ta.mono, tb.mono, ta.coeff * tb.coeff);
            for (auto& t : p.terms()) out.push_back(t);
        }
    return Poly::collect(std::move(out));
}

Poly poly_pow(const Poly& a, unsigned k) {
    Poly r = Poly::one();
    Poly base = a;
    while (k) {
        if (k & 1u) r = mul(r, base);
        k >>= 1u;
        if (k) base = mul(base, base);
    }
    return r;
}

int cmp(const Poly& a, const Poly& b) {
    const std::size_t n = std::min(a.terms().size(), b.terms().size());
    for (std::size_t i = 0; i < n; ++i) {
        if (int c = cmp(a.terms()[i].mono, b.terms()[i].mono)) return c;
        if (int c = cmp(a.terms()[i].coeff, b.terms()[i].coeff)) return c;
    }
    if (a.terms().size() != b.terms().size())
        return a.terms().size() < b.terms().size() ? -1 : 1;
    return 0;
}

// ------------------------------------------------------------------ QExpr

namespace {

int power_of(const Monomial& m, const Atom& a) {
    for (const auto& f : m.factors)
        if (cmp(f.atom, a) == 0) return f.power;
    return 0;
}

// Atom-wise minimum power over every term of both polynomials.
std::vector<Factor> common_content(const Poly& num, const Poly& den) {
    std::vector<Factor> content = num.terms().front().mono.factors;
    auto intersect = [&content](const Monomial& m) {
        std::vector<Factor> next;
        for (const auto& f : content) {
            int p = power_of(m, f.atom);
            if (p > 0) next.push_back(Factor{f.atom, std::min(f.power, p)});
        }
        content = std::move(next);
    };
    for (const auto& t : num.terms()) {
        if (content.empty()) break;
        intersect(t.mono);
    }
    for (const auto& t : den.terms()) {
        if (content.empty()) break;
        intersect(t.mono);
    }
    return content;
}

Poly divide_content(const Poly& p, const std::vector<Factor>& content) {
    std::vector<Term> out;
    out.reserve(p.terms().size());
    for (const auto& t : p.terms()) {
        std::vector<Factor> factors;
        factors.reserve(t.mono.factors.size());
        for (const auto& f : t.mono.factors) {
            int drop = 0;
            for (const auto& c : content)
                if (cmp(c.atom, f.atom) == 0) drop = c.power;
            if (f.power > drop) factors.push_back(Factor{f.atom, f.power - drop});
        }
        out.push_back(Term{Monomial{std::move(factors)}, t.coeff});
    }
    return Poly::collect(std::move(out));
}

// Shifts exp(beta) out of a monomial denominator: num * exp(-beta).
Poly shift_exp(const Poly& p, const QExpr& beta) {
    Monomial shift{{Factor{Atom::exp(q_neg(beta)), 1}}};
    std::vector<Term> out;
    for (const auto& t : p.terms()) {
        Poly piece = mono_mul(t.mono, shift, t.coeff);
        for (auto& u : piece.terms()) out.push_back(u);
    }
    return Poly::collect(std::move(out));
}

} // namespace

QExpr QExpr::make(Poly num, Poly den) {
    if (den.is_zero()) fail(ErrorCode::DivisionByZero, "division by syntactic zero");
    if (num.is_zero()) return QExpr();

    auto content = common_content(num, den);
    if (!content.empty()) {
        num = divide_content(num, content);
        den = divide_content(den, content);
    }

    if (const Term* d = den.single()) {
        if (const Factor* ef = d->mono.find_kind(AtomKind::Exp)) {
            QExpr beta = ef->power == 1 ? ef->atom.arg() : q_mul(ef->atom.arg(), Rational(ef->power));
            std::vector<Factor> kept;
            for (const auto& f : d->mono.factors)
                if (f.atom.kind() != AtomKind::Exp) kept.push_back(f);
            den = Poly::from_term(Monomial{std::move(kept)}, d->coeff);
            num = shift_exp(num, beta);
        }
    }

    const Rational lead = den.terms().front().coeff;
    if (lead != 1) {
        Rational inv = Rational(1) / lead;
        num = mul(num, inv);
        den = mul(den, inv);
    }
    return QExpr(std::move(num), std::move(den), Canonical{});
}

QExpr QExpr::from_poly(Poly p) { return make(std::move(p), Poly::one()); }
QExpr QExpr::from_rational(Rational c) { return from_poly(Poly::constant(std::move(c))); }
QExpr QExpr::var(VarId v) { return from_poly(Poly::var(v)); }

std::optional<Rational> QExpr::as_rational() const {
    if (!den_.is_one()) return std::nullopt;
    return num_.as_rational();
}

QExpr q_add(const QExpr& a, const QExpr& b) {
    if (a.is_zero()) return b;
    if (b.is_zero()) return a;
    if (cmp(a.den(), b.den()) == 0)
        return QExpr::make(add(a.num(), b.num()), a.den());
    return QExpr::make(add(mul(a.num(), b.den()), mul(b.num(), a.den())),
                       mul(a.den(), b.den()));
}

QExpr q_neg(const QExpr& a) { return QExpr::make(neg(a.num()), a.den()); }

QExpr q_sub(const QExpr& a, const QExpr& b) { return q_add(a, q_neg(b)); }

QExpr q_mul(const QExpr& a, const QExpr& b) {
    if (a.is_zero() || b.is_zero()) return QExpr();
    return QExpr::make(mul(a.num(), b.num()), mul(a.den(), b.den()));
}

QExpr q_mul(const QExpr& a, const Rational& c) {
    return QExpr::make(mul(a.num(), c), a.den());
}

QExpr q_div(const QExpr& a, const QExpr& b) {
    if (b.is_zero()) fail(ErrorCode::DivisionByZero, "division by syntactic zero");
    if (a.is_zero()) return QExpr();
    return QExpr::make(mul(a.num(), b.den()), mul(a.den(), b.num()));
}

QExpr q_pow(const QExpr& a, int k) {
    if (k == 0) return QExpr::from_rational(1);
    if (a.is_zero()) {
        if (k < 0) fail(ErrorCode::DivisionByZero, "zero raised to a negative power");
        return QExpr();
    }
    const unsigned mag = static_cast<unsigned>(k < 0 ? -static_cast<long>(k) : k);
    Poly n = poly_pow(a.num(), mag);
    Poly d = poly_pow(a.den(), mag);
    if (k < 0) std::swap(n, d);
    return QExpr::make(std::move(n), std::move(d));
}

int cmp(const QExpr& a, const QExpr& b) {
    if (int c = cmp(a.num(), b.num())) return c;
    return cmp(a.den(), b.den());
}

QExpr q_exp(const QExpr& arg) {
    if (arg.is_zero()) return QExpr::from_rational(1);
    return QExpr::from_poly(
        Poly::from_term(Monomial{{Factor{Atom::exp(arg), 1}}}, Rational(1)));
}

namespace {

// ln of a single positive-led term: splits the rational coefficient and any
// exp factor (both have a definite sign); the residual monomial stays under ln.
std::optional<QExpr> ln_of_term(const Term& t) {
    if (sgn(t.coeff) <= 0) return std::nullopt;
    QExpr acc;
    if (!is_one(t.coeff))
        acc = QExpr::from_poly(Poly::from_term(
            Monomial{{Factor{Atom::ln(QExpr::from_rational(t.coeff)), 1}}}, Rational(1)));
    std::vector<Factor> rest;
    for (const auto& f : t.mono.factors) {
        if (f.atom.kind() == AtomKind::Exp) {
            QExpr h = f.power == 1 ? f.atom.arg() : q_mul(f.atom.arg(), Rational(f.power));
            acc = q_add(acc, h);
        } else {
            rest.push_back(f);
        }
    }
    if (!rest.empty()) {
        QExpr inner = QExpr::from_poly(Poly::from_term(Monomial{std::move(rest)}, Rational(1)));
        acc = q_add(acc, QExpr::from_poly(Poly::from_term(
                             Monomial{{Factor{Atom::ln(std::move(inner)), 1}}}, Rational(1))));
    }
    return acc;
}

} // namespace

QExpr q_ln(const QExpr& arg) {
    if (auto c = arg.as_rational()) {
        if (sgn(*c) <= 0)
            fail(ErrorCode::NotInExpressionClass, "ln of a non-positive constant");
        if (is_one(*c)) return QExpr();
        return QExpr::from_poly(
            Poly::from_term(Monomial{{Factor{Atom::ln(arg), 1}}}, Rational(1)));
    }
    const Term* n = arg.num().single();
    const Term* d = arg.den().single();
    if (n && d) {
        auto ln_n = ln_of_term(*n);
        auto ln_d = ln_of_term(*d);
        if (ln_n && ln_d) return q_sub(*ln_n, *ln_d);
    }
    return QExpr::from_poly(Poly::from_term(Monomial{{Factor{Atom::ln(arg), 1}}}, Rational(1)));
}

QExpr q_trig(AtomKind kind, LinForm lin) {
    Rational c(1);
    auto at = norm_trig(kind, std::move(lin), c);
    if (sgn(c) == 0) return QExpr();
    if (!at) return QExpr::from_rational(c);
    return QExpr::from_poly(Poly::from_term(Monomial{{Factor{std::move(*at), 1}}}, c));
}

QExpr q_sin(const QExpr& arg) {
    auto lin = as_linform(arg);
    if (!lin)
        fail(ErrorCode::NotInExpressionClass,
             "sin argument must be affine in the coordinates");
    return q_trig(AtomKind::Sin, std::move(*lin));
}

QExpr q_cos(const QExpr& arg) {
    auto lin = as_linform(arg);
    if (!lin)
        fail(ErrorCode::NotInExpressionClass,
             "cos argument must be affine in the coordinates");
    return q_trig(AtomKind::Cos, std::move(*lin));
}

bool contains_var(const Monomial& m, VarId v) {
    for (const auto& f : m.factors) {
        switch (f.atom.kind()) {
        case AtomKind::Var:
            if (f.atom.var_id() == v) return true;
            break;
        case AtomKind::Exp:
        case AtomKind::Ln:
            if (contains_var(f.atom.arg(), v)) return true;
            break;
        case AtomKind::Sin:
        case AtomKind::Cos:
            if (f.atom.lin().contains(v)) return true;
            break;
        }
    }
    return false;
}

bool contains_var(const Poly& p, VarId v) {
    for (const auto& t : p.terms())
        if (contains_var(t.mono, v)) return true;
    return false;
}

namespace {

void mono_collect_vars(const Monomial& m, std::vector<bool>& seen) {
    for (const auto& f : m.factors) {
        switch (f.atom.kind()) {
        case AtomKind::Var:
            if (f.atom.var_id() >= 0 && f.atom.var_id() < static_cast<VarId>(seen.size()))
                seen[static_cast<std::size_t>(f.atom.var_id())] = true;
            break;
        case AtomKind::Exp:
        case AtomKind::Ln:
            collect_vars(f.atom.arg(), seen);
            break;
        case AtomKind::Sin:
        case AtomKind::Cos:
            for (const auto& [v, c] : f.atom.lin().terms)
                if (v >= 0 && v < static_cast<VarId>(seen.size()))
                    seen[static_cast<std::size_t>(v)] = true;
            break;
        }
    }
}

} // namespace

bool contains_var(const QExpr& e, VarId v) {
    return contains_var(e.num(), v) || contains_var(e.den(), v);
}

void collect_vars(const QExpr& e, std::vector<bool>& seen) {
    for (const auto& t : e.num().terms()) mono_collect_vars(t.mono, seen);
    for (const auto& t : e.den().terms()) mono_collect_vars(t.mono, seen);
}

std::optional<LinForm> as_linform(const QExpr& e) {
    if (!e.is_polynomial()) return std::nullopt;
    LinForm l;
    std::vector<std::pair<VarId, Rational>> terms;
    for (const auto& t : e.num().terms()) {
        if (t.mono.is_unit()) {
            l.cst = t.coeff;
            continue;
        }
        if (t.mono.factors.size() != 1) return std::nullopt;
        const Factor& f = t.mono.factors[0];
        if (f.atom.kind() != AtomKind::Var || f.power != 1) return std::nullopt;
        terms.emplace_back(f.atom.var_id(), t.coeff);
    }
    std::sort(terms.begin(), terms.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    l.terms = std::move(terms);
    return l;
}

// --------------------------------------------------------------- printing

namespace {

std::string factor_str(const Factor& f, const VarNamer& name) {
    std::string base;
    switch (f.atom.kind()) {
    case AtomKind::Var:
        base = name(f.atom.var_id());
        break;
    case AtomKind::Exp:
        base = "exp(" + to_string(f.atom.arg(), name) + ")";
        break;
    case AtomKind::Ln:
        base = "ln(" + to_string(f.atom.arg(), name) + ")";
        break;
    case AtomKind::Sin:
        base = "sin(" + to_string(f.atom.lin(), name) + ")";
        break;
    case AtomKind::Cos:
        base = "cos(" + to_string(f.atom.lin(), name) + ")";
        break;
    }
    if (f.power != 1) base += "^" + std::to_string(f.power);
    return base;
}

std::string term_str(const Term& t, const VarNamer& name, bool& negative) {
    Rational c = t.coeff;
    negative = sgn(c) < 0;
    if (negative) c = -c;
    std::string factors;
    for (std::size_t i = 0; i < t.mono.factors.size(); ++i) {
        if (i) factors += "*";
        factors += factor_str(t.mono.factors[i], name);
    }
    if (factors.empty()) return to_string(c);
    if (is_one(c)) return factors;
    return to_string(c) + "*" + factors;
}

std::string poly_str(const Poly& p, const VarNamer& name) {
    if (p.is_zero()) return "0";
    std::string out;
    for (std::size_t i = 0; i < p.terms().size(); ++i) {
        bool negative = false;
        std::string s = term_str(p.terms()[i], name, negative);
        if (i == 0)
            out += negative ? "-" + s : s;
        else
            out += (negative ? " - " : " + ") + s;
    }
    return out;
}

} // namespace

std::string to_string(const LinForm& l, const VarNamer& name) {
    std::string out;
    bool first = true;
    for (const auto& [v, c] : l.terms) {
        Rational a = c;
        bool negative = sgn(a) < 0;
        if (negative) a = -a;
        std::string piece = is_one(a) ? name(v) : to_string(a) + "*" + name(v);
        if (first)
            out += (negative ? "-" : "") + piece;
        else
            out += (negative ? " - " : " + ") + piece;
        first = false;
    }
    if (sgn(l.cst) != 0 || first) {
        Rational a = l.cst;
        bool negative = sgn(a) < 0;
        if (negative) a = -a;
        if (first)
            out += (negative ? "-" : "") + to_string(a);
        else
            out += (negative ? " - " : " + ") + to_string(a);
    }
    return out;
}

std::string to_string(const QExpr& e, const VarNamer& name) {
    if (e.is_polynomial()) return poly_str(e.num(), name);
    std::string n = poly_str(e.num(), name);
    std::string d = poly_str(e.den(), name);
    return "(" + n + ")/(" + d + ")";
}

} // namespace lcs
