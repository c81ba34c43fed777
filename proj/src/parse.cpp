#include "lcs/errors.hpp"
#include "lcs/symbolic.hpp"

#include <cctype>
#include <string>

namespace lcs {

namespace {

// Recursive-descent parser for the scalar expression grammar:
//   expr    := term (('+'|'-') term)*
//   term    := unary (('*'|'/') unary)*
//   unary   := '-' unary | power
//   power   := primary ('^' exponent)?
//   primary := integer | ident | func '(' expr ')' | '(' expr ')'
// Ratio literals (1/2) fall out of exact '/' on integers.
class Parser {
public:
    Parser(std::string_view text, const ChartPtr& chart) : text_(text), chart_(chart) {}

    QExpr run() {
        skip_ws();
        if (pos_ >= text_.size()) throw SyntaxError(pos_, "empty expression");
        QExpr e = expr();
        skip_ws();
        if (pos_ < text_.size())
            throw SyntaxError(pos_, "unexpected trailing input");
        return e;
    }

private:
    void skip_ws() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }

    bool peek(char c) {
        skip_ws();
        return pos_ < text_.size() && text_[pos_] == c;
    }

    bool accept(char c) {
        if (peek(c)) {
            ++pos_;
            return true;
        }
        return false;
    }

    void expect(char c, const char* what) {
        if (!accept(c)) throw SyntaxError(pos_, std::string("expected '") + c + "' " + what);
    }

    QExpr expr() {
        QExpr e = term();
        for (;;) {
            if (accept('+'))
                e = q_add(e, term());
            else if (accept('-'))
                e = q_sub(e, term());
            else
                return e;
        }
    }

    QExpr term() {
        QExpr e = unary();
        for (;;) {
            if (accept('*')) {
                e = q_mul(e, unary());
            } else if (accept('/')) {
                std::size_t at = pos_;
                QExpr d = unary();
                if (d.is_zero()) throw SyntaxError(at, "division by zero");
                e = q_div(e, d);
            } else {
                return e;
            }
        }
    }

    QExpr unary() {
        if (accept('-')) return q_neg(unary());
        return power();
    }

    QExpr power() {
        QExpr base = primary();
        if (accept('^')) {
            int k = exponent();
            if (k < 0 && base.is_zero())
                throw SyntaxError(pos_, "zero raised to a negative power");
            return q_pow(base, k);
        }
        return base;
    }

    int exponent() {
        skip_ws();
        bool parens = accept('(');
        bool negative = accept('-');
        skip_ws();
        std::size_t at = pos_;
        if (pos_ >= text_.size() || !std::isdigit(static_cast<unsigned char>(text_[pos_])))
            throw SyntaxError(at, "expected integer exponent");
        long k = 0;
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
            k = k * 10 + (text_[pos_] - '0');
            if (k > 64) throw SyntaxError(at, "exponent too large");
            ++pos_;
        }
        if (parens) expect(')', "after exponent");
        return static_cast<int>(negative ? -k : k);
    }

    QExpr primary() {
        skip_ws();
        if (pos_ >= text_.size()) throw SyntaxError(pos_, "unexpected end of input");
        char c = text_[pos_];
        if (c == '(') {
            ++pos_;
            QExpr e = expr();
            expect(')', "to close parenthesis");
            return e;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) return integer();
        if (std::isalpha(static_cast<unsigned char>(c))) return identifier();
        throw SyntaxError(pos_, std::string("unexpected character '") + c + "'");
    }

    QExpr integer() {
        std::size_t start = pos_;
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
        mpz_class value(std::string(text_.substr(start, pos_ - start)), 10);
        return QExpr::from_rational(Rational(value));
    }

    QExpr identifier() {
        std::size_t start = pos_;
        while (pos_ < text_.size() &&
               (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
            ++pos_;
        std::string name(text_.substr(start, pos_ - start));
        if (name == "exp" || name == "ln" || name == "sin" || name == "cos") {
            expect('(', "after function name");
            QExpr arg = expr();
            expect(')', "to close function argument");
            try {
                if (name == "exp") return q_exp(arg);
                if (name == "ln") return q_ln(arg);
                if (name == "sin") return q_sin(arg);
                return q_cos(arg);
            } catch (const Error& e) {
                if (e.code() == ErrorCode::NotInExpressionClass)
                    throw SyntaxError(start, e.what());
                throw;
            }
        }
        return QExpr::var(chart_->require(name));
    }

    std::string_view text_;
    const ChartPtr& chart_;
    std::size_t pos_ = 0;
};

} // namespace

ScalarExpr parse_scalar(std::string_view text, const ChartPtr& chart) {
    Parser p(text, chart);
    ScalarExpr e(chart, p.run());
    check_periodic_frequencies(e);
    return e;
}

} // namespace lcs
