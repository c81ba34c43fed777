#include "lcs/rational.hpp"

#include "lcs/errors.hpp"

namespace lcs {

Rational rat_pow(const Rational& q, long k) {
    if (k == 0) return Rational(1);
    if (is_zero(q)) {
        if (k < 0) fail(ErrorCode::DivisionByZero, "zero raised to a negative power");
        return Rational(0);
    }
    Rational base = k < 0 ? Rational(1) / q : q;
    unsigned long mag = static_cast<unsigned long>(k < 0 ? -k : k);
    Rational r(1);
    while (mag) {
        if (mag & 1ul) r *= base;
        mag >>= 1ul;
        if (mag) base *= base;
    }
    return r;
}

const char* error_code_name(ErrorCode code) {
    switch (code) {
    case ErrorCode::Syntax: return "syntax";
    case ErrorCode::UndeclaredVariable: return "undeclared-variable";
    case ErrorCode::ChartMismatch: return "chart-mismatch";
    case ErrorCode::DegreeError: return "degree-error";
    case ErrorCode::DimensionCap: return "dimension-cap";
    case ErrorCode::NotInExpressionClass: return "not-in-expression-class";
    case ErrorCode::NotInIntegrableClass: return "not-in-integrable-class";
    case ErrorCode::NotTrigPolynomial: return "not-trig-polynomial";
    case ErrorCode::DivisionByZero: return "division-by-zero";
    case ErrorCode::DivisionByProbablyZero: return "division-by-probably-zero";
    case ErrorCode::EvalSingular: return "eval-singular";
    case ErrorCode::RankNotConstant: return "rank-not-constant";
    case ErrorCode::Degenerate: return "degenerate";
    case ErrorCode::NotLcs: return "not-lcs";
    case ErrorCode::NonPositiveWitness: return "non-positive-witness";
    case ErrorCode::ZeroPullback: return "zero-pullback";
    case ErrorCode::RankMismatch: return "rank-mismatch";
    case ErrorCode::Precondition: return "precondition";
    case ErrorCode::SceneError: return "scene-error";
    case ErrorCode::Internal: return "internal";
    }
    return "unknown";
}

} // namespace lcs
