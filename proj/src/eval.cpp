#include "lcs/errors.hpp"
#include "lcs/symbolic.hpp"

#include <atomic>
#include <cmath>
#include <limits>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace lcs {

namespace {

// Internal signal for a bad sample point (pole, ln of a non-positive value,
// overflow). Batch kernels convert it to NaN; is_zero redraws the point.
struct SingularEval {};

double eval_quotient(const QExpr& e, std::span<const double> x);

double eval_atom(const Atom& a, std::span<const double> x) {
    switch (a.kind()) {
    case AtomKind::Var:
        return x[static_cast<std::size_t>(a.var_id())];
    case AtomKind::Exp: {
        double v = std::exp(eval_quotient(a.arg(), x));
        if (!std::isfinite(v)) throw SingularEval{};
        return v;
    }
    case AtomKind::Ln: {
        double v = eval_quotient(a.arg(), x);
        if (!(v > 0)) throw SingularEval{};
        return std::log(v);
    }
    case AtomKind::Sin:
    case AtomKind::Cos: {
        double arg = to_double(a.lin().cst);
        for (const auto& [var, c] : a.lin().terms)
            arg += to_double(c) * x[static_cast<std::size_t>(var)];
        return a.kind() == AtomKind::Sin ? std::sin(arg) : std::cos(arg);
    }
    }
    return 0.0;
}

double eval_poly(const Poly& p, std::span<const double> x) {
    double sum = 0.0;
    for (const auto& t : p.terms()) {
        double prod = to_double(t.coeff);
        for (const auto& f : t.mono.factors) {
            double base = eval_atom(f.atom, x);
            double powed = 1.0;
            for (int k = 0; k < f.power; ++k) powed *= base;
            prod *= powed;
        }
        sum += prod;
    }
    if (!std::isfinite(sum)) throw SingularEval{};
    return sum;
}

double eval_quotient(const QExpr& e, std::span<const double> x) {
    double n = eval_poly(e.num(), x);
    if (e.is_polynomial()) return n;
    double d = eval_poly(e.den(), x);
    if (std::fabs(d) < 1e-12) throw SingularEval{};
    return n / d;
}

bool parallel_on = true;

} // namespace

double ScalarExpr::eval(std::span<const double> coords) const {
    try {
        return eval_quotient(q_, coords);
    } catch (const SingularEval&) {
        fail(ErrorCode::EvalSingular, "singular evaluation (pole, ln domain, or overflow)");
    }
}

bool parallel_kernels_enabled() { return parallel_on; }
void set_parallel_kernels(bool on) { parallel_on = on; }

std::vector<std::vector<double>> batch_eval(std::span<const ScalarExpr> exprs,
                                            std::span<const Point> pts, bool parallel) {
    const std::size_t ne = exprs.size();
    const std::size_t np = pts.size();
    std::vector<std::vector<double>> out(ne);
    for (auto& row : out) row.assign(np, 0.0);

    auto slot = [&](std::size_t flat) {
        const std::size_t i = flat / np;
        const std::size_t j = flat % np;
        try {
            out[i][j] = eval_quotient(exprs[i].q(), pts[j].xd);
        } catch (const SingularEval&) {
            out[i][j] = std::numeric_limits<double>::quiet_NaN();
        }
    };

    const std::size_t total = ne * np;
    if (parallel) {
#pragma omp parallel for schedule(static)
        for (long long flat = 0; flat < static_cast<long long>(total); ++flat)
            slot(static_cast<std::size_t>(flat));
    } else {
        for (std::size_t flat = 0; flat < total; ++flat) slot(flat);
    }
    return out;
}

const char* tier_name(ZeroTier tier) {
    switch (tier) {
    case ZeroTier::ProvenZero: return "proven-zero";
    case ZeroTier::ProbablyZero: return "probably-zero";
    case ZeroTier::NonZero: return "non-zero";
    }
    return "?";
}

std::vector<ZeroVerdict> is_zero_many(std::span<const ScalarExpr> exprs,
                                      const SamplePlan& plan) {
    plan.validate();
    std::vector<ZeroVerdict> verdicts(exprs.size());

    ChartPtr chart;
    std::vector<std::size_t> active; // indices of non-syntactic-zero expressions
    for (std::size_t i = 0; i < exprs.size(); ++i) {
        if (exprs[i].syntactic_zero()) {
            verdicts[i] = ZeroVerdict{ZeroTier::ProvenZero, 0.0, std::nullopt, 0.0};
        } else {
            if (!chart) chart = exprs[i].chart();
            require_same_chart(chart, exprs[i].chart(), "is_zero_many");
            active.push_back(i);
        }
    }
    if (active.empty()) return verdicts;

    SampleStream stream(chart, plan);
    const std::size_t n = stream.base_count();
    std::vector<Point> base;
    base.reserve(n);
    for (std::size_t j = 0; j < n; ++j) base.push_back(stream.at(j));

    std::vector<ScalarExpr> live;
    live.reserve(active.size());
    for (auto i : active) live.push_back(exprs[i]);
    auto values = batch_eval(live, base, parallel_on);

    for (std::size_t a = 0; a < active.size(); ++a) {
        const std::size_t i = active[a];
        std::vector<double> row = values[a];
        std::vector<std::size_t> point_of(n);
        for (std::size_t j = 0; j < n; ++j) point_of[j] = j;

        // Redraw singular slots from the extension stream; hard error once a
        // single expression has consumed 10x the base sample budget.
        std::size_t draws = n;
        std::size_t ext = n;
        for (std::size_t j = 0; j < n; ++j) {
            while (std::isnan(row[j])) {
                if (draws >= 10 * n)
                    fail(ErrorCode::EvalSingular,
                         "sampling failed: 10x oversampling exhausted by singular points for " +
                             exprs[i].str());
                const Point& p = stream.at(ext);
                ++draws;
                point_of[j] = ext;
                ++ext;
                try {
                    row[j] = eval_quotient(exprs[i].q(), p.xd);
                } catch (const SingularEval&) {
                    row[j] = std::numeric_limits<double>::quiet_NaN();
                }
            }
        }

        ZeroVerdict v;
        v.tier = ZeroTier::ProbablyZero;
        std::size_t worst = 0;
        for (std::size_t j = 0; j < n; ++j) {
            double mag = std::fabs(row[j]);
            if (mag > v.max_abs) {
                v.max_abs = mag;
                worst = j;
            }
        }
        if (v.max_abs > plan.tol) {
            v.tier = ZeroTier::NonZero;
            v.witness = stream.at(point_of[worst]);
            v.witness_value = row[worst];
        }
        verdicts[i] = std::move(v);
    }
    return verdicts;
}

ZeroVerdict is_zero(const ScalarExpr& e, const SamplePlan& plan) {
    return is_zero_many(std::span<const ScalarExpr>(&e, 1), plan)[0];
}

std::vector<std::pair<Point, double>> sample_values(const ScalarExpr& e,
                                                    const SamplePlan& plan) {
    plan.validate();
    SampleStream stream(e.chart(), plan);
    const std::size_t n = stream.base_count();
    std::vector<std::pair<Point, double>> out;
    out.reserve(n);
    std::size_t draws = 0;
    std::size_t ext = n;
    for (std::size_t j = 0; j < n; ++j) {
        std::size_t at = j;
        for (;;) {
            ++draws;
            if (draws > 10 * n)
                fail(ErrorCode::EvalSingular,
                     "sampling failed: 10x oversampling exhausted by singular points for " +
                         e.str());
            const Point& p = stream.at(at);
            try {
                double v = eval_quotient(e.q(), p.xd);
                out.emplace_back(p, v);
                break;
            } catch (const SingularEval&) {
                at = ext++;
            }
        }
    }
    return out;
}

ScalarExpr divide_checked(const ScalarExpr& num, const ScalarExpr& den,
                          const SamplePlan& plan) {
    ZeroVerdict v = is_zero(den, plan);
    if (v.tier == ZeroTier::ProvenZero)
        fail(ErrorCode::DivisionByZero, "division by canonical zero");
    if (v.tier == ZeroTier::ProbablyZero)
        fail(ErrorCode::DivisionByProbablyZero,
             "division by a denominator that samples to zero: " + den.str());
    return num / den;
}

} // namespace lcs
