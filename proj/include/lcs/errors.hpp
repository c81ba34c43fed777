#pragma once

#include <stdexcept>
#include <string>

namespace lcs {

// Machine-readable failure kinds; mirrored into JSON reports by the CLI.
enum class ErrorCode {
    Syntax,
    UndeclaredVariable,
    ChartMismatch,
    DegreeError,
    DimensionCap,
    NotInExpressionClass,
    NotInIntegrableClass,
    NotTrigPolynomial,
    DivisionByZero,
    DivisionByProbablyZero,
    EvalSingular,
    RankNotConstant,
    Degenerate,
    NotLcs,
    NonPositiveWitness,
    ZeroPullback,
    RankMismatch,
    Precondition,
    SceneError,
    Internal,
};

const char* error_code_name(ErrorCode code);

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, std::string message)
        : std::runtime_error(std::move(message)), code_(code) {}

    ErrorCode code() const { return code_; }

private:
    ErrorCode code_;
};

// Parse failures carry the byte offset into the input text.
class SyntaxError : public Error {
public:
    SyntaxError(std::size_t offset, const std::string& what)
        : Error(ErrorCode::Syntax,
                "syntax error at offset " + std::to_string(offset) + ": " + what),
          offset_(offset) {}

    std::size_t offset() const { return offset_; }

private:
    std::size_t offset_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& message) {
    throw Error(code, message);
}

} // namespace lcs
