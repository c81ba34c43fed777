#include "lcs/forms.hpp"

#include "lcs/errors.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <sstream>

namespace lcs {

bool MultiIndex::contains(VarId v) const {
    return std::binary_search(idx.begin(), idx.end(), v);
}

std::string MultiIndex::str(const Chart& chart) const {
    std::string out;
    for (std::size_t i = 0; i < idx.size(); ++i) {
        if (i) out += "^";
        out += "d" + chart.coord_name(idx[i]);
    }
    return out;
}

DifferentialForm::DifferentialForm(ChartPtr chart, int degree)
    : chart_(std::move(chart)), degree_(degree) {
    if (degree_ < 0) fail(ErrorCode::DegreeError, "negative form degree");
}

DifferentialForm DifferentialForm::from_scalar(const ScalarExpr& f) {
    DifferentialForm a(f.chart(), 0);
    a.add_term(MultiIndex{}, f);
    return a;
}

void DifferentialForm::add_term(std::span<const VarId> indices, const ScalarExpr& c) {
    if (static_cast<int>(indices.size()) != degree_)
        fail(ErrorCode::DegreeError, "multi-index degree does not match form degree");
    if (c.syntactic_zero()) return;

    // Insertion sort, tracking permutation parity.
    std::vector<VarId> sorted(indices.begin(), indices.end());
    bool negative = false;
    for (std::size_t i = 1; i < sorted.size(); ++i) {
        for (std::size_t j = i; j > 0 && sorted[j - 1] > sorted[j]; --j) {
            std::swap(sorted[j - 1], sorted[j]);
            negative = !negative;
        }
    }
    for (std::size_t i = 1; i < sorted.size(); ++i)
        if (sorted[i - 1] == sorted[i]) return; // repeated differential
    for (VarId v : sorted)
        if (v < 0 || v >= chart_->dim())
            fail(ErrorCode::DegreeError, "multi-index out of chart range");

    add_term(MultiIndex{std::move(sorted)}, negative ? -c : c);
}

void DifferentialForm::add_term(const MultiIndex& sorted, const ScalarExpr& c) {
    if (c.syntactic_zero()) return;
    auto it = coeffs_.find(sorted);
    if (it == coeffs_.end()) {
        coeffs_.emplace(sorted, c);
    } else {
        ScalarExpr s = it->second + c;
        if (s.syntactic_zero())
            coeffs_.erase(it);
        else
            it->second = std::move(s);
    }
}

ScalarExpr DifferentialForm::coeff(const MultiIndex& k) const {
    auto it = coeffs_.find(k);
    if (it != coeffs_.end()) return it->second;
    return ScalarExpr::zero(chart_);
}

DifferentialForm DifferentialForm::operator+(const DifferentialForm& other) const {
    require_same_chart(chart_, other.chart_, "form +");
    if (degree_ != other.degree_)
        fail(ErrorCode::DegreeError, "cannot add forms of different degree");
    DifferentialForm r = *this;
    for (const auto& [k, c] : other.coeffs_) r.add_term(k, c);
    return r;
}

DifferentialForm DifferentialForm::operator-() const {
    DifferentialForm r(chart_, degree_);
    for (const auto& [k, c] : coeffs_) r.coeffs_.emplace(k, -c);
    return r;
}

DifferentialForm DifferentialForm::operator-(const DifferentialForm& other) const {
    return *this + (-other);
}

DifferentialForm DifferentialForm::scaled(const ScalarExpr& f) const {
    DifferentialForm r(chart_, degree_);
    for (const auto& [k, c] : coeffs_) r.add_term(k, c * f);
    return r;
}

std::string DifferentialForm::str() const {
    if (coeffs_.empty()) return "0";
    std::ostringstream out;
    bool first = true;
    for (const auto& [k, c] : coeffs_) {
        std::string cs = c.str();
        if (!first) out << " + ";
        first = false;
        if (degree_ == 0) {
            out << cs;
            continue;
        }
        if (cs == "1") {
            out << k.str(*chart_);
        } else if (cs == "-1") {
            out << "-" << k.str(*chart_);
        } else {
            bool simple = c.q().is_polynomial() && c.q().num().terms().size() == 1 &&
                          sgn(c.q().num().terms()[0].coeff) > 0;
            if (simple)
                out << cs << "*" << k.str(*chart_);
            else
                out << "(" << cs << ")*" << k.str(*chart_);
        }
    }
    return out.str();
}

VectorField VectorField::zero(const ChartPtr& chart) {
    VectorField x{chart, {}};
    x.comps.assign(static_cast<std::size_t>(chart->dim()), ScalarExpr::zero(chart));
    return x;
}

VectorField VectorField::basis(const ChartPtr& chart, VarId v) {
    VectorField x = zero(chart);
    x.comps[static_cast<std::size_t>(v)] = ScalarExpr::one(chart);
    return x;
}

std::string VectorField::str() const {
    std::ostringstream out;
    bool first = true;
    for (int i = 0; i < chart->dim(); ++i) {
        const auto& c = comps[static_cast<std::size_t>(i)];
        if (c.syntactic_zero()) continue;
        if (!first) out << " + ";
        first = false;
        std::string cs = c.str();
        if (cs == "1")
            out << "d/d" << chart->coord_name(i);
        else
            out << "(" << cs << ")*d/d" << chart->coord_name(i);
    }
    if (first) out << "0";
    return out.str();
}

SmoothMap::SmoothMap(ChartPtr source, ChartPtr target, std::vector<ScalarExpr> comps)
    : source_(std::move(source)), target_(std::move(target)), comps_(std::move(comps)) {
    if (static_cast<int>(comps_.size()) != target_->dim())
        fail(ErrorCode::ChartMismatch, "smooth map needs one component per target coordinate");
    for (const auto& c : comps_) require_same_chart(c.chart(), source_, "smooth map component");
    jac_.resize(comps_.size());
    for (std::size_t i = 0; i < comps_.size(); ++i) {
        jac_[i].reserve(static_cast<std::size_t>(source_->dim()));
        for (int j = 0; j < source_->dim(); ++j) jac_[i].push_back(comps_[i].derivative(j));
    }
}

SmoothMap SmoothMap::identity(const ChartPtr& chart) {
    std::vector<ScalarExpr> comps;
    for (int i = 0; i < chart->dim(); ++i) comps.push_back(ScalarExpr::var(chart, i));
    return SmoothMap(chart, chart, std::move(comps));
}

const ScalarExpr& SmoothMap::jacobian(int target_coord, int source_coord) const {
    return jac_[static_cast<std::size_t>(target_coord)][static_cast<std::size_t>(source_coord)];
}

void SmoothMap::check_periodic_consistency(const SamplePlan& plan) const {
    bool has_periodic_target = false;
    for (int i = 0; i < target_->dim(); ++i)
        if (target_->is_periodic(i)) has_periodic_target = true;
    if (!has_periodic_target) return;
    bool has_periodic_source = false;
    for (int j = 0; j < source_->dim(); ++j)
        if (source_->is_periodic(j)) has_periodic_source = true;
    if (!has_periodic_source) return;

    constexpr double kTwoPi = 6.283185307179586;
    auto points = draw_points(source_, plan);
    for (int i = 0; i < target_->dim(); ++i) {
        if (!target_->is_periodic(i)) continue;
        const auto& comp = comps_[static_cast<std::size_t>(i)];
        for (int j = 0; j < source_->dim(); ++j) {
            if (!source_->is_periodic(j)) continue;
            for (const auto& p : points) {
                std::vector<double> lo = p.xd, hi = p.xd;
                lo[static_cast<std::size_t>(j)] = 0.0;
                hi[static_cast<std::size_t>(j)] = kTwoPi;
                double delta;
                try {
                    delta = comp.eval(hi) - comp.eval(lo);
                } catch (const Error&) {
                    continue; // singular probe points are not consistency witnesses
                }
                double frac = std::fabs(delta / kTwoPi - std::round(delta / kTwoPi));
                if (frac > 1e-6)
                    fail(ErrorCode::NotInExpressionClass,
                         "component for periodic coordinate '" + target_->coord_name(i) +
                             "' is not consistent modulo 2*pi across the '" +
                             source_->coord_name(j) + "' seam");
            }
        }
    }
}

// ------------------------------------------------------------- operations

DifferentialForm wedge(const DifferentialForm& a, const DifferentialForm& b) {
    require_same_chart(a.chart(), b.chart(), "wedge");
    const int degree = a.degree() + b.degree();
    DifferentialForm r(a.chart(), degree);
    if (degree > a.chart()->dim()) return r;
    std::vector<VarId> buf;
    for (const auto& [ka, ca] : a.coeffs()) {
        for (const auto& [kb, cb] : b.coeffs()) {
            buf.clear();
            buf.insert(buf.end(), ka.idx.begin(), ka.idx.end());
            buf.insert(buf.end(), kb.idx.begin(), kb.idx.end());
            r.add_term(buf, ca * cb);
        }
    }
    return r;
}

DifferentialForm exterior_derivative(const DifferentialForm& a) {
    DifferentialForm r(a.chart(), a.degree() + 1);
    if (a.degree() + 1 > a.chart()->dim()) return r;
    std::vector<VarId> buf;
    for (const auto& [k, c] : a.coeffs()) {
        for (VarId v = 0; v < a.chart()->dim(); ++v) {
            ScalarExpr dc = c.derivative(v);
            if (dc.syntactic_zero()) continue;
            buf.clear();
            buf.push_back(v);
            buf.insert(buf.end(), k.idx.begin(), k.idx.end());
            r.add_term(buf, dc);
        }
    }
    return r;
}

DifferentialForm interior_product(const VectorField& x, const DifferentialForm& a) {
    require_same_chart(x.chart, a.chart(), "interior product");
    if (a.degree() == 0)
        fail(ErrorCode::DegreeError, "interior product of a 0-form is undefined");
    DifferentialForm r(a.chart(), a.degree() - 1);
    for (const auto& [k, c] : a.coeffs()) {
        for (std::size_t j = 0; j < k.idx.size(); ++j) {
            const auto& xc = x.comps[static_cast<std::size_t>(k.idx[j])];
            if (xc.syntactic_zero()) continue;
            MultiIndex rest;
            rest.idx.reserve(k.idx.size() - 1);
            for (std::size_t i = 0; i < k.idx.size(); ++i)
                if (i != j) rest.idx.push_back(k.idx[i]);
            ScalarExpr piece = xc * c;
            if (j % 2 == 1) piece = -piece;
            r.add_term(rest, piece);
        }
    }
    return r;
}

DifferentialForm pullback(const SmoothMap& map, const DifferentialForm& a) {
    require_same_chart(map.target(), a.chart(), "pullback");
    DifferentialForm r(map.source(), a.degree());
    if (a.degree() > map.source()->dim()) return r;

    for (const auto& [k, c] : a.coeffs()) {
        ScalarExpr pc = compose(c, map.source(), map.comps());
        if (a.degree() == 0) {
            r.add_term(MultiIndex{}, pc);
            continue;
        }
        // d(phi_{k_1}) ^ ... ^ d(phi_{k_p}) assembled by repeated wedge.
        DifferentialForm acc = DifferentialForm::from_scalar(pc);
        bool vanished = false;
        for (VarId target_coord : k.idx) {
            DifferentialForm dphi(map.source(), 1);
            for (VarId j = 0; j < map.source()->dim(); ++j) {
                const ScalarExpr& entry = map.jacobian(target_coord, j);
                if (entry.syntactic_zero()) continue;
                VarId one[1] = {j};
                dphi.add_term(one, entry);
            }
            acc = wedge(acc, dphi);
            if (acc.syntactic_zero()) {
                vanished = true;
                break;
            }
        }
        if (!vanished) r = r + acc;
    }
    return r;
}

DifferentialForm lie_derivative(const VectorField& x, const DifferentialForm& a) {
    require_same_chart(x.chart, a.chart(), "Lie derivative");
    if (a.degree() == 0) {
        ScalarExpr out = ScalarExpr::zero(a.chart());
        ScalarExpr f = a.coeff(MultiIndex{});
        for (VarId v = 0; v < a.chart()->dim(); ++v)
            out = out + x.comps[static_cast<std::size_t>(v)] * f.derivative(v);
        return DifferentialForm::from_scalar(out);
    }
    DifferentialForm da = exterior_derivative(a);
    DifferentialForm term1 = exterior_derivative(interior_product(x, a));
    if (da.degree() > a.chart()->dim()) return term1;
    return term1 + interior_product(x, da);
}

VectorField lie_bracket(const VectorField& x, const VectorField& y) {
    require_same_chart(x.chart, y.chart, "Lie bracket");
    VectorField r = VectorField::zero(x.chart);
    for (VarId i = 0; i < x.chart->dim(); ++i) {
        ScalarExpr acc = ScalarExpr::zero(x.chart);
        for (VarId j = 0; j < x.chart->dim(); ++j) {
            acc = acc + x.comps[static_cast<std::size_t>(j)] *
                            y.comps[static_cast<std::size_t>(i)].derivative(j);
            acc = acc - y.comps[static_cast<std::size_t>(j)] *
                            x.comps[static_cast<std::size_t>(i)].derivative(j);
        }
        r.comps[static_cast<std::size_t>(i)] = std::move(acc);
    }
    return r;
}

const FormZeroEntry* FormZeroReport::first_nonzero() const {
    for (const auto& e : entries)
        if (e.verdict.tier == ZeroTier::NonZero) return &e;
    return nullptr;
}

FormZeroReport form_is_zero(const DifferentialForm& a, const SamplePlan& plan) {
    FormZeroReport report;
    std::vector<MultiIndex> keys;
    std::vector<ScalarExpr> exprs;
    for (const auto& [k, c] : a.coeffs()) {
        keys.push_back(k);
        exprs.push_back(c);
    }
    auto verdicts = is_zero_many(exprs, plan);
    for (std::size_t i = 0; i < keys.size(); ++i) {
        if (verdicts[i].tier == ZeroTier::ProvenZero) continue;
        if (verdicts[i].tier == ZeroTier::NonZero) {
            report.zero = false;
            report.worst = ZeroTier::NonZero;
        } else if (report.worst == ZeroTier::ProvenZero) {
            report.worst = ZeroTier::ProbablyZero;
        }
        report.entries.push_back(FormZeroEntry{keys[i], verdicts[i]});
    }
    return report;
}

// ------------------------------------------------------ form literal parser

namespace {

// Value-typed recursive descent: scalars and forms share the grammar; `^`
// wedges differentials and exponentiates scalars.
class FormParser {
public:
    FormParser(std::string_view text, const ChartPtr& chart) : text_(text), chart_(chart) {}

    DifferentialForm run() {
        skip_ws();
        if (pos_ >= text_.size()) throw SyntaxError(pos_, "empty form literal");
        Value v = expr();
        skip_ws();
        if (pos_ < text_.size()) throw SyntaxError(pos_, "unexpected trailing input");
        if (v.is_scalar) return DifferentialForm::from_scalar(v.scalar);
        return std::move(v.form);
    }

private:
    struct Value {
        bool is_scalar = true;
        ScalarExpr scalar;
        DifferentialForm form;

        static Value of(ScalarExpr s) { return Value{true, std::move(s), {}}; }
        static Value of(DifferentialForm f) { return Value{false, {}, std::move(f)}; }
    };

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

    Value expr() {
        Value v = term();
        for (;;) {
            if (accept('+'))
                v = add(std::move(v), term(), false);
            else if (accept('-'))
                v = add(std::move(v), term(), true);
            else
                return v;
        }
    }

    Value add(Value a, Value b, bool subtract) {
        if (a.is_scalar != b.is_scalar) {
            // allow mixing scalars with 0-forms
            if (a.is_scalar) a = Value::of(DifferentialForm::from_scalar(a.scalar));
            if (b.is_scalar) b = Value::of(DifferentialForm::from_scalar(b.scalar));
            if (a.form.degree() != b.form.degree())
                throw SyntaxError(pos_, "cannot add a scalar to a form of positive degree");
        }
        if (a.is_scalar)
            return Value::of(subtract ? a.scalar - b.scalar : a.scalar + b.scalar);
        if (a.form.degree() != b.form.degree())
            throw SyntaxError(pos_, "cannot add forms of different degree");
        return Value::of(subtract ? a.form - b.form : a.form + b.form);
    }

    Value term() {
        Value v = unary();
        for (;;) {
            if (accept('*')) {
                v = multiply(std::move(v), unary());
            } else if (accept('/')) {
                std::size_t at = pos_;
                Value d = unary();
                if (!d.is_scalar) throw SyntaxError(at, "cannot divide by a form");
                if (d.scalar.syntactic_zero()) throw SyntaxError(at, "division by zero");
                if (v.is_scalar)
                    v = Value::of(v.scalar / d.scalar);
                else
                    v = Value::of(v.form.scaled(ScalarExpr::one(chart_) / d.scalar));
            } else {
                return v;
            }
        }
    }

    Value multiply(Value a, Value b) {
        if (a.is_scalar && b.is_scalar) return Value::of(a.scalar * b.scalar);
        if (a.is_scalar) return Value::of(b.form.scaled(a.scalar));
        if (b.is_scalar) return Value::of(a.form.scaled(b.scalar));
        return Value::of(wedge(a.form, b.form));
    }

    Value unary() {
        if (accept('-')) {
            Value v = unary();
            if (v.is_scalar) return Value::of(-v.scalar);
            return Value::of(-v.form);
        }
        return power();
    }

    Value power() {
        Value base = primary();
        while (peek('^')) {
            std::size_t save = pos_;
            ++pos_;
            if (!base.is_scalar) {
                Value rhs = primary();
                if (rhs.is_scalar) throw SyntaxError(save, "'^' after a form must wedge a form");
                base = Value::of(wedge(base.form, rhs.form));
                continue;
            }
            int k = exponent();
            if (k < 0 && base.scalar.syntactic_zero())
                throw SyntaxError(save, "zero raised to a negative power");
            base = Value::of(base.scalar.pow(k));
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

    Value primary() {
        skip_ws();
        if (pos_ >= text_.size()) throw SyntaxError(pos_, "unexpected end of input");
        char c = text_[pos_];
        if (c == '(') {
            ++pos_;
            Value v = expr();
            expect(')', "to close parenthesis");
            return v;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) return Value::of(integer());
        if (std::isalpha(static_cast<unsigned char>(c))) return identifier();
        throw SyntaxError(pos_, std::string("unexpected character '") + c + "'");
    }

    ScalarExpr integer() {
        std::size_t start = pos_;
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
        mpz_class value(std::string(text_.substr(start, pos_ - start)), 10);
        return ScalarExpr::constant(chart_, Rational(value));
    }

    Value identifier() {
        std::size_t start = pos_;
        while (pos_ < text_.size() &&
               (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
            ++pos_;
        std::string name(text_.substr(start, pos_ - start));
        if (name == "exp" || name == "ln" || name == "sin" || name == "cos") {
            expect('(', "after function name");
            Value arg = expr();
            expect(')', "to close function argument");
            if (!arg.is_scalar) throw SyntaxError(start, "function of a form");
            try {
                if (name == "exp") return Value::of(lcs::exp(arg.scalar));
                if (name == "ln") return Value::of(lcs::ln(arg.scalar));
                if (name == "sin") return Value::of(lcs::sin(arg.scalar));
                return Value::of(lcs::cos(arg.scalar));
            } catch (const Error& e) {
                if (e.code() == ErrorCode::NotInExpressionClass)
                    throw SyntaxError(start, e.what());
                throw;
            }
        }
        // d<coord> is a basis differential
        if (name.size() > 1 && name[0] == 'd') {
            if (auto v = chart_->find(name.substr(1))) {
                DifferentialForm f(chart_, 1);
                VarId one[1] = {*v};
                f.add_term(one, ScalarExpr::one(chart_));
                return Value::of(std::move(f));
            }
        }
        return Value::of(ScalarExpr::var(chart_, chart_->require(name)));
    }

    std::string_view text_;
    const ChartPtr& chart_;
    std::size_t pos_ = 0;
};

} // namespace

DifferentialForm parse_form(std::string_view text, const ChartPtr& chart) {
    FormParser p(text, chart);
    DifferentialForm f = p.run();
    for (const auto& [k, c] : f.coeffs()) check_periodic_frequencies(c);
    return f;
}

} // namespace lcs
