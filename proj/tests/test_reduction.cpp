#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "lcs/errors.hpp"
#include "lcs/random_gen.hpp"
#include "lcs/reduction.hpp"

using namespace lcs;

namespace {

struct Model {
    ChartPtr m;
    Embedding iota;
    FlattenedFoliation fol;
};

// Darboux hypersurface model: M = R^6, Q = {x1 = 0}, leaves {y1}.
Model darboux6(const SamplePlan& plan) {
    auto m = Chart::make("M", "x1 y1 x2 y2 x3 y3");
    auto q = Chart::make("Q", "y1 x2 y2 x3 y3");
    std::vector<ScalarExpr> comps = {ScalarExpr::zero(q),      ScalarExpr::var(q, "y1"),
                                     ScalarExpr::var(q, "x2"), ScalarExpr::var(q, "y2"),
                                     ScalarExpr::var(q, "x3"), ScalarExpr::var(q, "y3")};
    return Model{m, Embedding::make(SmoothMap(q, m, comps), plan),
                 FlattenedFoliation::make(q, "y1")};
}

LcsStructure darboux_structure(const ChartPtr& m, const std::string& f_expr,
                               const SamplePlan& plan) {
    auto omega = parse_form("exp(" + f_expr + ")*(dx1^dy1 + dx2^dy2 + dx3^dy3)", m);
    return LcsStructure::make(omega, std::nullopt, plan);
}

const ReductionResidual* find_residual(const ReductionReport& report, const std::string& name) {
    for (const auto& r : report.residuals)
        if (r.name == name) return &r;
    return nullptr;
}

} // namespace

TEST_CASE("reduce_form: hypersurface model both branches, classical case") {
    SamplePlan plan;
    auto model = darboux6(plan);

    // f = f(x2): the form reduces; tau = exp(f(x2)) (dx2^dy2 + dx3^dy3)
    auto sa = darboux_structure(model.m, "x2", plan);
    auto ra = reduce_form(sa, model.iota, model.fol, plan);
    REQUIRE(ra.reduced);
    auto expected = parse_form("exp(x2)*(dx2^dy2 + dx3^dy3)", ra.chart_n);
    CHECK(form_is_zero(*ra.tau - expected, plan).zero);
    CHECK(form_is_zero(*ra.alpha - parse_form("dx2", ra.chart_n), plan).zero);

    // f = y1: obstructed with certificate iota*omega(d/dy1) = 1
    auto sb = darboux_structure(model.m, "y1", plan);
    auto rb = reduce_form(sb, model.iota, model.fol, plan);
    REQUIRE(!rb.reduced);
    CHECK(rb.obstruction_kind == "lee-pairing");
    CHECK(rb.obstruction_coord == "y1");
    CHECK(rb.certificate->as_rational().value() == 1);

    // classical symplectic reduction in R^8
    auto m8 = Chart::make("M8", "x1 y1 x2 y2 x3 y3 x4 y4");
    auto q8 = Chart::make("Q8", "y1 x2 y2 x3 y3 x4 y4");
    std::vector<ScalarExpr> comps = {ScalarExpr::zero(q8)};
    for (const char* n : {"y1", "x2", "y2", "x3", "y3", "x4", "y4"})
        comps.push_back(ScalarExpr::var(q8, n));
    auto iota8 = Embedding::make(SmoothMap(q8, m8, comps), plan);
    auto fol8 = FlattenedFoliation::make(q8, "y1");
    auto s8 = LcsStructure::make(parse_form("dx1^dy1 + dx2^dy2 + dx3^dy3 + dx4^dy4", m8),
                                 std::nullopt, plan);
    auto r8 = reduce_form(s8, iota8, fol8, plan);
    REQUIRE(r8.reduced);
    CHECK(r8.chart_n->dim() == 6);
    CHECK(form_is_zero(*r8.tau - parse_form("dx2^dy2 + dx3^dy3 + dx4^dy4", r8.chart_n), plan)
              .zero);
    CHECK(r8.alpha->syntactic_zero());
}

TEST_CASE("reduce_structure: where the form fails, the structure succeeds") {
    SamplePlan plan;
    auto model = darboux6(plan);

    // f = y1: form level fails, structure level succeeds with g = y1
    auto sb = darboux_structure(model.m, "y1", plan);
    REQUIRE(!reduce_form(sb, model.iota, model.fol, plan).reduced);
    auto rs = reduce_structure(sb, model.iota, model.fol, plan);
    REQUIRE(rs.reduced);
    REQUIRE(rs.primitive.has_value());
    CHECK((*rs.primitive - ScalarExpr::var(model.iota.chart_q(), "y1")).syntactic_zero());
    CHECK(form_is_zero(*rs.tau - parse_form("dx2^dy2 + dx3^dy3", rs.chart_n), plan).zero);

    // pi* tau = exp(-g) iota* Omega, verified coefficient-wise and recorded
    const auto* rt = find_residual(rs, "pi* tau - reduced target");
    REQUIRE(rt != nullptr);
    CHECK(rt->tier != ZeroTier::NonZero);
    ReducedChart rc = make_reduced_chart(model.fol);
    auto round_trip = pullback(rc.projection(), *rs.tau) -
                      restrict_form(model.iota, sb.omega()).scaled(exp(-*rs.primitive));
    CHECK(form_is_zero(round_trip, plan).zero);

    // symplectic case: g = 0 and the two modes agree
    auto s0 = LcsStructure::make(parse_form("dx1^dy1 + dx2^dy2 + dx3^dy3", model.m),
                                 std::nullopt, plan);
    auto rf0 = reduce_form(s0, model.iota, model.fol, plan);
    auto rs0 = reduce_structure(s0, model.iota, model.fol, plan);
    REQUIRE(rf0.reduced);
    REQUIRE(rs0.reduced);
    CHECK(rs0.primitive->syntactic_zero());
    CHECK(form_is_zero(*rf0.tau - *rs0.tau, plan).zero);
}

TEST_CASE("reduce_structure: periodic leaf with nonzero period is obstructed") {
    SamplePlan plan;
    auto m = Chart::make("M", "x1 y1 x2 y2 x3 y3");
    auto qp = Chart::make("Qp", "th x2 y2 x3 y3", "th");
    std::vector<ScalarExpr> comps = {ScalarExpr::zero(qp),      ScalarExpr::var(qp, "th"),
                                     ScalarExpr::var(qp, "x2"), ScalarExpr::var(qp, "y2"),
                                     ScalarExpr::var(qp, "x3"), ScalarExpr::var(qp, "y3")};
    auto iota = Embedding::make(SmoothMap(qp, m, comps), plan);
    auto fol = FlattenedFoliation::make(qp, "th");
    auto s = darboux_structure(m, "y1", plan);

    auto rep = reduce_structure(s, iota, fol, plan);
    REQUIRE(!rep.reduced);
    CHECK(rep.obstruction_kind == "circle-mean");
    CHECK(rep.obstruction_coord == "th");
    CHECK(rep.certificate->as_rational().value() == 1);

    // form level is obstructed as well (consistency of the two modes)
    CHECK(!reduce_form(s, iota, fol, plan).reduced);
}

TEST_CASE("reduced pair satisfies the LCS axioms on chart_N") {
    SamplePlan plan;
    auto model = darboux6(plan);
    auto s = darboux_structure(model.m, "y1 + x2*x2", plan);
    auto rep = reduce_structure(s, model.iota, model.fol, plan);
    REQUIRE(rep.reduced);
    CHECK_NOTHROW(LcsStructure::make(*rep.tau, *rep.alpha, plan));
}

TEST_CASE("whenever the form reduces, the structure reduces compatibly") {
    SamplePlan plan;
    auto model = darboux6(plan);
    for (const char* f : {"x2", "x3 + y3", "x2*x2"}) {
        auto s = darboux_structure(model.m, f, plan);
        auto rf = reduce_form(s, model.iota, model.fol, plan);
        REQUIRE(rf.reduced);
        auto rs = reduce_structure(s, model.iota, model.fol, plan);
        REQUIRE(rs.reduced);
        // g is constant on leaves (here identically zero), so the reduced
        // forms are conformally equivalent on chart_N
        for (VarId t : model.fol.leaves())
            CHECK(is_zero(rs.primitive->derivative(t), plan).zero());
        Embedding idn = Embedding::make(SmoothMap::identity(rf.chart_n), plan);
        auto eq = conformal_equivalence_on(idn, *rf.tau, *rs.tau, plan);
        CHECK(eq.equivalent);
    }
}

TEST_CASE("germ corollary: affine coisotropic fixtures always reduce at structure level") {
    SamplePlan plan;
    // coisotropic slices {x1..xr = 0} of (R^{2n}, e^h Omega0) for r = 1..3,
    // with conformal factors that do and do not depend on the leaf coords
    for (int n : {3, 4}) {
        std::string mnames;
        for (int i = 1; i <= n; ++i)
            mnames += "x" + std::to_string(i) + " y" + std::to_string(i) + " ";
        auto m = Chart::make("M", mnames);
        std::string omega_lit;
        for (int i = 1; i <= n; ++i) {
            if (i > 1) omega_lit += " + ";
            omega_lit += "dx" + std::to_string(i) + "^dy" + std::to_string(i);
        }
        for (int r = 1; r <= (n == 3 ? 2 : 3); ++r) {
            if (2 * n - 2 * r <= 2) continue; // dim N > 2 required
            std::string qnames, leaves;
            for (int i = 1; i <= r; ++i) {
                qnames += "y" + std::to_string(i) + " ";
                leaves += "y" + std::to_string(i) + " ";
            }
            for (int i = r + 1; i <= n; ++i)
                qnames += "x" + std::to_string(i) + " y" + std::to_string(i) + " ";
            auto q = Chart::make("Q", qnames);
            std::vector<ScalarExpr> comps;
            for (int i = 1; i <= n; ++i) {
                if (i <= r) {
                    comps.push_back(ScalarExpr::zero(q));
                    comps.push_back(ScalarExpr::var(q, "y" + std::to_string(i)));
                } else {
                    comps.push_back(ScalarExpr::var(q, "x" + std::to_string(i)));
                    comps.push_back(ScalarExpr::var(q, "y" + std::to_string(i)));
                }
            }
            auto iota = Embedding::make(SmoothMap(q, m, comps), plan);
            auto fol = FlattenedFoliation::make(q, leaves);
            for (const char* h : {"0", "y1", "y1*y1 + x2", "x2 + y1"}) {
                auto omega = parse_form("exp(" + std::string(h) + ")*(" + omega_lit + ")", m);
                auto s = LcsStructure::make(omega, std::nullopt, plan);
                auto rep = reduce_structure(s, iota, fol, plan);
                CHECK(rep.reduced); // an Obstructed verdict on an affine fixture is a failure
            }
        }
    }
}

TEST_CASE("foliation mismatch and small quotients are rejected") {
    SamplePlan plan;
    auto model = darboux6(plan);
    auto s = darboux_structure(model.m, "x2", plan);

    // wrong leaf coordinate: {x2} does not span the kernel
    auto wrong = FlattenedFoliation::make(model.iota.chart_q(), "x2");
    CHECK_THROWS_AS(reduce_form(s, model.iota, wrong, plan), Error);
    try {
        reduce_form(s, model.iota, wrong, plan);
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::RankMismatch);
    }

    // dim N = 2: R^4 hypersurface reduction is out of scope by hypothesis
    auto m4 = Chart::make("M4", "x1 y1 x2 y2");
    auto q4 = Chart::make("Q4", "y1 x2 y2");
    std::vector<ScalarExpr> comps = {ScalarExpr::zero(q4), ScalarExpr::var(q4, "y1"),
                                     ScalarExpr::var(q4, "x2"), ScalarExpr::var(q4, "y2")};
    auto iota4 = Embedding::make(SmoothMap(q4, m4, comps), plan);
    auto fol4 = FlattenedFoliation::make(q4, "y1");
    auto s4 = LcsStructure::make(parse_form("dx1^dy1 + dx2^dy2", m4), std::nullopt, plan);
    try {
        reduce_form(s4, iota4, fol4, plan);
        FAIL("expected dimension rejection");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::Precondition);
        CHECK(std::string(e.what()).find("greater than 2") != std::string::npos);
    }
}

TEST_CASE("conformal invariance verification") {
    SamplePlan plan;
    auto model = darboux6(plan);
    auto s1 = darboux_structure(model.m, "y1", plan);
    ExprGen gen(model.m, 808);

    for (int i = 0; i < 3; ++i) {
        auto h = gen.poly_in_class_exp();
        auto s2 = conformal_rescale(s1, exp(h), plan);
        auto rep = verify_conformal_invariance(s1, s2, model.iota, model.fol, plan);
        CHECK(rep.passed());
        CHECK(rep.foliations_match);
        CHECK(rep.leafwise_ok);
        CHECK(rep.verdicts_agree);
        CHECK(rep.both_reduced);
        CHECK(rep.taus_equivalent);
    }

    // f = 1 passes trivially
    auto same = verify_conformal_invariance(s1, s1, model.iota, model.fol, plan);
    CHECK(same.passed());

    // an inequivalent pair is rejected by the precondition
    auto other = LcsStructure::make(
        parse_form("dx1^dy1 + dx2^dy2 + dx3^dy3 + dx2^dy3", model.m), std::nullopt, plan);
    CHECK_THROWS_AS(verify_conformal_invariance(s1, other, model.iota, model.fol, plan), Error);
}
