#pragma once

#include "lcs/chart.hpp"
#include "lcs/rational.hpp"

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace lcs {

class QExpr;
using QExprPtr = std::shared_ptr<const QExpr>;

// Rational affine combination of variables: sum c_v * x_v + cst.
// Canonical argument shape for sin/cos; keeps product-to-sum closed.
struct LinForm {
    std::vector<std::pair<VarId, Rational>> terms; // sorted by var, nonzero coeffs
    Rational cst = 0;

    bool is_constant() const { return terms.empty(); }
    bool is_zero() const { return terms.empty() && sgn(cst) == 0; }
    Rational coeff_of(VarId v) const;
    bool contains(VarId v) const;
};

LinForm lin_neg(const LinForm& a);
LinForm lin_add(const LinForm& a, const LinForm& b);
LinForm lin_scale(const LinForm& a, const Rational& c);
int cmp(const LinForm& a, const LinForm& b);

enum class AtomKind : std::uint8_t { Var = 0, Exp = 1, Ln = 2, Sin = 3, Cos = 4 };

// Multiplicative generator of the expression ring: a coordinate, exp(arg),
// ln(arg), or sin/cos of an affine form. Atoms are compared structurally.
class Atom {
public:
    static Atom var(VarId v);
    static Atom exp(QExpr arg); // arg != 0
    static Atom ln(QExpr arg);
    static Atom trig(AtomKind kind, LinForm lin); // Sin or Cos, lin sign-normalized

    AtomKind kind() const { return kind_; }
    VarId var_id() const { return var_; }
    const QExpr& arg() const { return *arg_; }
    const QExprPtr& arg_ptr() const { return arg_; }
    const LinForm& lin() const { return lin_; }

private:
    AtomKind kind_ = AtomKind::Var;
    VarId var_ = -1;
    QExprPtr arg_;
    LinForm lin_;
};

int cmp(const Atom& a, const Atom& b);

struct Factor {
    Atom atom;
    int power = 1; // >= 1; trig atoms always 1, at most one Exp per monomial
};

struct Monomial {
    std::vector<Factor> factors; // sorted by atom, unique atoms

    bool is_unit() const { return factors.empty(); }
    const Factor* find_kind(AtomKind kind) const; // first factor of that kind
};

int cmp(const Monomial& a, const Monomial& b);

struct Term {
    Monomial mono;
    Rational coeff;
};

// Expanded sum of products over atoms; the canonical additive layer.
class Poly {
public:
    Poly() = default;

    static Poly zero() { return Poly(); }
    static Poly one() { return constant(1); }
    static Poly constant(Rational c);
    static Poly var(VarId v);
    static Poly from_term(Monomial m, Rational c);

    const std::vector<Term>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    bool is_one() const;
    std::optional<Rational> as_rational() const; // set iff constant (incl. zero)
    // Single-term access; nullptr otherwise.
    const Term* single() const { return terms_.size() == 1 ? &terms_[0] : nullptr; }

    // Construction from unsorted/uncombined terms.
    static Poly collect(std::vector<Term> terms);

private:
    std::vector<Term> terms_; // sorted by monomial, nonzero coeffs
};

Poly add(const Poly& a, const Poly& b);
Poly sub(const Poly& a, const Poly& b);
Poly neg(const Poly& a);
Poly mul(const Poly& a, const Poly& b);
Poly mul(const Poly& a, const Rational& c);
Poly poly_pow(const Poly& a, unsigned k);
int cmp(const Poly& a, const Poly& b);

// Canonical quotient of polynomials. Invariants: denominator nonzero and
// monic in the leading coefficient; common monomial content cancelled;
// monomial denominators carry no exp factor (shifted into the numerator);
// zero is 0/1.
class QExpr {
public:
    QExpr() : QExpr(Poly::zero(), Poly::one(), Canonical{}) {}

    static QExpr make(Poly num, Poly den); // canonicalizes; den == 0 throws
    static QExpr from_poly(Poly p);
    static QExpr from_rational(Rational c);
    static QExpr var(VarId v);

    const Poly& num() const { return num_; }
    const Poly& den() const { return den_; }

    bool is_zero() const { return num_.is_zero(); }
    bool is_one() const { return den_.is_one() && num_.is_one(); }
    bool is_polynomial() const { return den_.is_one(); }
    std::optional<Rational> as_rational() const;

private:
    struct Canonical {};
    QExpr(Poly num, Poly den, Canonical) : num_(std::move(num)), den_(std::move(den)) {}

    Poly num_;
    Poly den_;
};

QExpr q_add(const QExpr& a, const QExpr& b);
QExpr q_sub(const QExpr& a, const QExpr& b);
QExpr q_neg(const QExpr& a);
QExpr q_mul(const QExpr& a, const QExpr& b);
QExpr q_mul(const QExpr& a, const Rational& c);
QExpr q_div(const QExpr& a, const QExpr& b); // b syntactically zero throws
QExpr q_pow(const QExpr& a, int k);
int cmp(const QExpr& a, const QExpr& b);

// Smart constructors for the function atoms (with exp(0)=1, ln(1)=0,
// ln(exp(h))=h, sin(0)=0, cos(0)=1 and sign normalization applied).
QExpr q_exp(const QExpr& arg);
QExpr q_ln(const QExpr& arg);  // throws on ln of a non-positive rational
QExpr q_sin(const QExpr& arg); // arg must be affine
QExpr q_cos(const QExpr& arg);
QExpr q_trig(AtomKind kind, LinForm lin);

bool contains_var(const Monomial& m, VarId v);
bool contains_var(const Poly& p, VarId v);
bool contains_var(const QExpr& e, VarId v);
void collect_vars(const QExpr& e, std::vector<bool>& seen);

// Affine extraction; nullopt when e is not affine with rational coefficients.
std::optional<LinForm> as_linform(const QExpr& e);

using VarNamer = std::function<std::string(VarId)>;
std::string to_string(const QExpr& e, const VarNamer& name);
std::string to_string(const LinForm& l, const VarNamer& name);

} // namespace lcs
