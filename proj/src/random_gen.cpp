#include "lcs/random_gen.hpp"

namespace lcs {

int ExprGen::uniform(int lo, int hi) {
    return lo + static_cast<int>(rng_() % static_cast<std::uint64_t>(hi - lo + 1));
}

Rational ExprGen::rational(bool nonzero) {
    long num = static_cast<long>(uniform(nonzero ? 1 : 0, static_cast<int>(cfg_.coeff_bound)));
    long den = static_cast<long>(uniform(1, static_cast<int>(cfg_.coeff_bound)));
    Rational q(num, den);
    q.canonicalize();
    if (uniform(0, 1)) q = -q;
    return q;
}

ScalarExpr ExprGen::atom_factor(bool poly_only) {
    const int dim = chart_->dim();
    const VarId v = uniform(0, dim - 1);
    ScalarExpr x = ScalarExpr::var(chart_, v);
    int kind = poly_only ? 0 : uniform(0, 3);
    if (kind >= 2 && !cfg_.allow_trig) kind = 0;
    if (kind == 1 && !cfg_.allow_exp) kind = 0;
    switch (kind) {
    case 1: {
        // exp of a small polynomial in affine coordinates
        if (chart_->is_periodic(v)) return x; // keep circle charts well-formed
        ScalarExpr arg = rational() * x;
        if (uniform(0, 1)) arg = arg * x;
        return exp(arg);
    }
    case 2:
    case 3: {
        // trig of an affine argument; integer frequency on periodic coords
        ScalarExpr arg = chart_->is_periodic(v)
                             ? Rational(uniform(1, 2)) * x
                             : rational(true) * x;
        if (uniform(0, 1)) arg = arg + ScalarExpr::constant(chart_, rational());
        return kind == 2 ? lcs::sin(arg) : lcs::cos(arg);
    }
    default:
        if (chart_->is_periodic(v)) return lcs::sin(x); // no bare periodic powers
        return x.pow(uniform(1, cfg_.max_power));
    }
}

ScalarExpr ExprGen::scalar() {
    ScalarExpr out = ScalarExpr::zero(chart_);
    const int terms = uniform(1, cfg_.max_terms);
    for (int t = 0; t < terms; ++t) {
        ScalarExpr term = ScalarExpr::constant(chart_, rational(true));
        const int nf = uniform(0, cfg_.max_factors);
        for (int f = 0; f < nf; ++f) term = term * atom_factor(false);
        out = out + term;
    }
    return out;
}

ScalarExpr ExprGen::polynomial() {
    ScalarExpr out = ScalarExpr::zero(chart_);
    const int terms = uniform(1, cfg_.max_terms);
    for (int t = 0; t < terms; ++t) {
        ScalarExpr term = ScalarExpr::constant(chart_, rational(true));
        const int nf = uniform(0, cfg_.max_factors);
        for (int f = 0; f < nf; ++f) term = term * atom_factor(true);
        out = out + term;
    }
    return out;
}

ScalarExpr ExprGen::poly_in_class_exp() {
    // Small degree-<=2 polynomial in affine coordinates. Kept tame (|h| <= 2
    // on the sampling box) so exp(n h) scalings of Pfaffians stay clear of
    // the zero tolerance at sample points.
    ScalarExpr out = ScalarExpr::zero(chart_);
    const int terms = uniform(1, 2);
    for (int t = 0; t < terms; ++t) {
        VarId v = uniform(0, chart_->dim() - 1);
        if (chart_->is_periodic(v)) continue;
        Rational c(uniform(0, 1) ? 1 : -1, uniform(0, 1) ? 1 : 2);
        ScalarExpr term = c * ScalarExpr::var(chart_, v);
        if (uniform(0, 1)) {
            VarId w = uniform(0, chart_->dim() - 1);
            if (!chart_->is_periodic(w)) term = term * ScalarExpr::var(chart_, w);
        }
        out = out + term;
    }
    return out;
}

DifferentialForm ExprGen::form(int degree, bool poly_coeffs) {
    DifferentialForm out(chart_, degree);
    if (degree > chart_->dim()) return out;
    const int terms = uniform(1, cfg_.max_terms);
    for (int t = 0; t < terms; ++t) {
        std::vector<VarId> idx;
        while (static_cast<int>(idx.size()) < degree) {
            VarId v = uniform(0, chart_->dim() - 1);
            bool dup = false;
            for (VarId u : idx)
                if (u == v) dup = true;
            if (!dup) idx.push_back(v);
        }
        out.add_term(idx, poly_coeffs ? polynomial() : scalar());
    }
    return out;
}

VectorField ExprGen::field(bool poly_coeffs) {
    VectorField x = VectorField::zero(chart_);
    const int nonzero = uniform(1, chart_->dim());
    for (int k = 0; k < nonzero; ++k) {
        VarId v = uniform(0, chart_->dim() - 1);
        x.comps[static_cast<std::size_t>(v)] = poly_coeffs ? polynomial() : scalar();
    }
    return x;
}

SmoothMap ExprGen::poly_self_map() {
    std::vector<ScalarExpr> comps;
    for (VarId v = 0; v < chart_->dim(); ++v) {
        ScalarExpr c = ScalarExpr::var(chart_, v);
        if (!chart_->is_periodic(v) && uniform(0, 1)) {
            VarId w = uniform(0, chart_->dim() - 1);
            if (!chart_->is_periodic(w)) {
                ScalarExpr extra = rational() * ScalarExpr::var(chart_, w);
                if (uniform(0, 1)) extra = extra * ScalarExpr::var(chart_, w);
                c = c + extra;
            }
        }
        comps.push_back(std::move(c));
    }
    return SmoothMap(chart_, chart_, std::move(comps));
}

} // namespace lcs
