#pragma once

#include "lcs/chart.hpp"
#include "lcs/expr.hpp"

#include <optional>
#include <span>
#include <string>
#include <string_view>

namespace lcs {

// Chart-attached symbolic scalar field. Immutable; every operation returns a
// new canonicalized value, so instances are safe to share across threads.
class ScalarExpr {
public:
    ScalarExpr() = default; // detached zero; gains a chart on first combination

    ScalarExpr(ChartPtr chart, QExpr q) : chart_(std::move(chart)), q_(std::move(q)) {}

    static ScalarExpr zero(ChartPtr chart) { return {std::move(chart), QExpr()}; }
    static ScalarExpr one(ChartPtr chart) { return constant(std::move(chart), 1); }
    static ScalarExpr constant(ChartPtr chart, Rational c) {
        return {std::move(chart), QExpr::from_rational(std::move(c))};
    }
    static ScalarExpr var(const ChartPtr& chart, std::string_view name);
    static ScalarExpr var(ChartPtr chart, VarId v) { return {std::move(chart), QExpr::var(v)}; }

    const ChartPtr& chart() const { return chart_; }
    const QExpr& q() const { return q_; }

    bool syntactic_zero() const { return q_.is_zero(); }
    bool syntactic_one() const { return q_.is_one(); }
    std::optional<Rational> as_rational() const { return q_.as_rational(); }

    ScalarExpr operator-() const { return {chart_, q_neg(q_)}; }
    ScalarExpr pow(int k) const { return {chart_, q_pow(q_, k)}; }
    ScalarExpr derivative(VarId v) const;
    ScalarExpr derivative(std::string_view coord) const;

    bool depends_on(VarId v) const { return contains_var(q_, v); }

    std::string str() const;
    double eval(std::span<const double> coords) const; // throws EvalSingular
    double eval(const Point& p) const { return eval(p.xd); }

    friend ScalarExpr operator+(const ScalarExpr& a, const ScalarExpr& b);
    friend ScalarExpr operator-(const ScalarExpr& a, const ScalarExpr& b);
    friend ScalarExpr operator*(const ScalarExpr& a, const ScalarExpr& b);
    friend ScalarExpr operator/(const ScalarExpr& a, const ScalarExpr& b);

private:
    ChartPtr chart_;
    QExpr q_;
};

ScalarExpr operator*(const Rational& c, const ScalarExpr& e);

ScalarExpr exp(const ScalarExpr& e);
ScalarExpr ln(const ScalarExpr& e);
ScalarExpr sin(const ScalarExpr& e);
ScalarExpr cos(const ScalarExpr& e);

// Parses the expression grammar: identifiers, integer/ratio literals,
// + - * / ^ with the usual precedence, exp/ln/sin/cos, parentheses.
ScalarExpr parse_scalar(std::string_view text, const ChartPtr& chart);

// Exact partial derivative (same as ScalarExpr::derivative, free form).
ScalarExpr derivative(const ScalarExpr& e, VarId v);

// Exact antiderivative in v for the integrable subclass
// polynomial * {exp(c v), sin(c v + ...), cos(c v + ...)} with rational c,
// normalized so the result vanishes at v = 0. Throws NotInIntegrableClass.
ScalarExpr antiderivative(const ScalarExpr& e, VarId v);

// Definite integral over v in [0,1]; result is v-free.
ScalarExpr integrate_unit_interval(const ScalarExpr& e, VarId v);

// Fourier mean (1/2pi) \int_0^{2pi} e dtheta for trig polynomials in theta.
// Throws NotTrigPolynomial.
ScalarExpr circle_mean(const ScalarExpr& e, VarId theta);

// Substitution of a single variable by an expression on the same chart.
ScalarExpr substitute_var(const ScalarExpr& e, VarId v, const ScalarExpr& image);

// Full composition: rewrites e (on its own chart) through the given images,
// one per coordinate of e's chart, all living on `source`. Trig arguments
// must stay affine under the images; otherwise NotInExpressionClass.
ScalarExpr compose(const ScalarExpr& e, const ChartPtr& source,
                   std::span<const ScalarExpr> images);

// Structural circle-compatibility: trig frequencies on periodic coordinates
// must be integers. Called on parsed input; algebra preserves it.
void check_periodic_frequencies(const ScalarExpr& e);

// ------------------------------------------------------------- zero testing

enum class ZeroTier { ProvenZero, ProbablyZero, NonZero };

const char* tier_name(ZeroTier tier);

struct ZeroVerdict {
    ZeroTier tier = ZeroTier::ProvenZero;
    double max_abs = 0.0;        // largest |value| seen over the sample set
    std::optional<Point> witness; // set for NonZero
    double witness_value = 0.0;

    bool zero() const { return tier != ZeroTier::NonZero; }
    bool proven() const { return tier == ZeroTier::ProvenZero; }
};

// Two-tier decision: canonical zero is ProvenZero; otherwise the expression
// is sampled at plan.samples points (singular points are redrawn, hard error
// after 10x oversampling).
ZeroVerdict is_zero(const ScalarExpr& e, const SamplePlan& plan);

// Batch form over a shared sample set; data-parallel when the parallel
// kernel is enabled (identical results either way).
std::vector<ZeroVerdict> is_zero_many(std::span<const ScalarExpr> exprs,
                                      const SamplePlan& plan);

// Evaluates every expression at every point; result[i][j] = exprs[i] at
// pts[j]. NaN marks a singular evaluation. This is the data-parallel kernel;
// `parallel` selects the OpenMP path, the serial path is the reference.
std::vector<std::vector<double>> batch_eval(std::span<const ScalarExpr> exprs,
                                            std::span<const Point> pts, bool parallel);

// Process-wide kernel switch (default: parallel on).
bool parallel_kernels_enabled();
void set_parallel_kernels(bool on);

// Guarded division: numerator / denominator where the denominator must be
// NonZero under the plan; dividing by a Proven/ProbablyZero denominator is a
// hard error (DivisionByProbablyZero).
ScalarExpr divide_checked(const ScalarExpr& num, const ScalarExpr& den,
                          const SamplePlan& plan);

// Values of e over the plan's sample set (with singular-point redraw, same
// policy as is_zero).
std::vector<std::pair<Point, double>> sample_values(const ScalarExpr& e,
                                                    const SamplePlan& plan);

} // namespace lcs
