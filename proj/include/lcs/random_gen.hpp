#pragma once

#include "lcs/forms.hpp"

#include <cstdint>
#include <random>

namespace lcs {

// Deterministic random scalars/forms/fields/maps for property tests and the
// benchmark. Same seed, same stream.
struct GenConfig {
    int max_terms = 3;
    int max_factors = 2;
    int max_power = 2;
    long coeff_bound = 4; // numerators and denominators drawn from [1, bound]
    bool allow_trig = true;
    bool allow_exp = true;
};

class ExprGen {
public:
    ExprGen(ChartPtr chart, std::uint64_t seed, GenConfig cfg = {})
        : chart_(std::move(chart)), rng_(seed), cfg_(cfg) {}

    const ChartPtr& chart() const { return chart_; }

    Rational rational(bool nonzero = false);
    ScalarExpr scalar();              // general in-class expression
    ScalarExpr polynomial();          // polynomial coefficients only
    ScalarExpr poly_in_class_exp();   // h for exp(h) rescalings
    DifferentialForm form(int degree, bool poly_coeffs = false);
    VectorField field(bool poly_coeffs = false);

    // Polynomial self-map of the chart (degree <= 2 components), suitable
    // for pullback of forms with polynomial coefficients.
    SmoothMap poly_self_map();

    std::uint64_t raw() { return rng_(); }
    int uniform(int lo, int hi); // inclusive

private:
    ScalarExpr atom_factor(bool poly_only);

    ChartPtr chart_;
    std::mt19937_64 rng_;
    GenConfig cfg_;
};

} // namespace lcs
