#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "lcs/errors.hpp"
#include "lcs/geometry.hpp"
#include "lcs/random_gen.hpp"

using namespace lcs;

namespace {

ChartPtr r6() { return Chart::make("M", "x1 y1 x2 y2 x3 y3"); }

// iota: {x1 = 0} -> R^6
Embedding hypersurface_x1(const ChartPtr& m, const SamplePlan& plan) {
    auto q = Chart::make("Q", "y1 x2 y2 x3 y3");
    std::vector<ScalarExpr> comps = {ScalarExpr::zero(q),      ScalarExpr::var(q, "y1"),
                                     ScalarExpr::var(q, "x2"), ScalarExpr::var(q, "y2"),
                                     ScalarExpr::var(q, "x3"), ScalarExpr::var(q, "y3")};
    return Embedding::make(SmoothMap(q, m, comps), plan);
}

} // namespace

TEST_CASE("restrict: examples") {
    SamplePlan plan;
    auto m = r6();
    auto iota = hypersurface_x1(m, plan);
    auto omega0 = parse_form("dx1^dy1 + dx2^dy2 + dx3^dy3", m);

    auto pulled = restrict_form(iota, omega0);
    CHECK(form_is_zero(pulled - parse_form("dx2^dy2 + dx3^dy3", iota.chart_q()), plan).zero);

    auto idm = Embedding::make(SmoothMap::identity(m), plan);
    CHECK(form_is_zero(restrict_form(idm, omega0) - omega0, plan).zero);

    // Lagrangian-type slice {y = 0}: pullback of Omega0 vanishes
    auto l = Chart::make("L", "x1 x2 x3");
    std::vector<ScalarExpr> comps = {ScalarExpr::var(l, "x1"), ScalarExpr::zero(l),
                                     ScalarExpr::var(l, "x2"), ScalarExpr::zero(l),
                                     ScalarExpr::var(l, "x3"), ScalarExpr::zero(l)};
    auto lag = Embedding::make(SmoothMap(l, m, comps), plan);
    CHECK(restrict_form(lag, omega0).syntactic_zero());

    CHECK_THROWS_AS(restrict_form(iota, parse_form("dx1", m)), Error);
}

TEST_CASE("characteristic distribution: hypersurface, identity, rank-2 slice") {
    SamplePlan plan;
    auto m = r6();

    auto iota = hypersurface_x1(m, plan);
    auto ef = parse_form("exp(x2 + y3)*(dx1^dy1 + dx2^dy2 + dx3^dy3)", m);
    auto frame = characteristic_distribution(iota, ef, plan);
    REQUIRE(frame.rank() == 1);
    CHECK(frame.fields[0].str() == "d/dy1");

    auto omega0 = parse_form("dx1^dy1 + dx2^dy2 + dx3^dy3", m);
    auto idm = Embedding::make(SmoothMap::identity(m), plan);
    CHECK(characteristic_distribution(idm, omega0, plan).rank() == 0);

    // {x1 = x2 = 0}: null space of the explicit 4x4 block is {d/dy1, d/dy2}
    auto q2 = Chart::make("Q2", "y1 y2 x3 y3");
    std::vector<ScalarExpr> comps = {ScalarExpr::zero(q2),      ScalarExpr::var(q2, "y1"),
                                     ScalarExpr::zero(q2),      ScalarExpr::var(q2, "y2"),
                                     ScalarExpr::var(q2, "x3"), ScalarExpr::var(q2, "y3")};
    auto iota2 = Embedding::make(SmoothMap(q2, m, comps), plan);
    auto frame2 = characteristic_distribution(iota2, omega0, plan);
    REQUIRE(frame2.rank() == 2);
    DistributionFrame expected;
    expected.chart = q2;
    expected.fields.push_back(VectorField::basis(q2, 0));
    expected.fields.push_back(VectorField::basis(q2, 1));
    CHECK(same_span(frame2, expected, plan));
}

TEST_CASE("kernel frame fields annihilate the pulled form") {
    SamplePlan plan;
    auto m = r6();
    auto iota = hypersurface_x1(m, plan);
    for (const char* literal :
         {"exp(x2)*(dx1^dy1 + dx2^dy2 + dx3^dy3)",
          "exp(y1 + x3)*(dx1^dy1 + dx2^dy2 + dx3^dy3)"}) {
        auto pulled = restrict_form(iota, parse_form(literal, m));
        auto frame = kernel_frame(pulled, plan);
        for (const auto& x : frame.fields)
            CHECK(form_is_zero(interior_product(x, pulled), plan).zero);
    }
}

TEST_CASE("frame independence under permuted elimination order") {
    SamplePlan plan;
    auto m = r6();
    auto iota = hypersurface_x1(m, plan);
    auto pulled = restrict_form(iota, parse_form("exp(x2)*(dx1^dy1 + dx2^dy2 + dx3^dy3)", m));
    SymMatrix a = coefficient_matrix(pulled);

    auto ns1 = nullspace(a, plan);
    std::vector<int> order = {4, 3, 2, 1, 0};
    auto ns2 = nullspace(a, plan, &order);
    REQUIRE(ns1.rank == ns2.rank);
    REQUIRE(ns1.basis.size() == ns2.basis.size());

    DistributionFrame f1{pulled.chart(), {}};
    DistributionFrame f2{pulled.chart(), {}};
    for (auto& v : ns1.basis) f1.fields.push_back(VectorField{pulled.chart(), v});
    for (auto& v : ns2.basis) f2.fields.push_back(VectorField{pulled.chart(), v});
    CHECK(same_span(f1, f2, plan));
}

TEST_CASE("involutivity: rank-1 vacuous, coordinate slice, corrupted frame") {
    SamplePlan plan;
    auto m = r6();
    auto iota = hypersurface_x1(m, plan);

    auto pulled = restrict_form(iota, parse_form("exp(x2)*(dx1^dy1 + dx2^dy2 + dx3^dy3)", m));
    auto frame = kernel_frame(pulled, plan);
    auto rep = involutivity_check(frame, pulled, plan);
    CHECK(rep.involutive);
    CHECK(rep.pairs.empty()); // rank 1: vacuously involutive

    // rank-2 coordinate slice: all brackets of coordinate fields vanish
    auto q2 = Chart::make("Q2", "y1 y2 x3 y3");
    std::vector<ScalarExpr> comps = {ScalarExpr::zero(q2),      ScalarExpr::var(q2, "y1"),
                                     ScalarExpr::zero(q2),      ScalarExpr::var(q2, "y2"),
                                     ScalarExpr::var(q2, "x3"), ScalarExpr::var(q2, "y3")};
    auto iota2 = Embedding::make(SmoothMap(q2, m, comps), plan);
    auto omega0 = parse_form("dx1^dy1 + dx2^dy2 + dx3^dy3", m);
    auto pulled2 = restrict_form(iota2, omega0);
    auto frame2 = kernel_frame(pulled2, plan);
    auto rep2 = involutivity_check(frame2, pulled2, plan);
    CHECK(rep2.involutive);
    CHECK(rep2.pairs.size() == 1);

    // corrupted frame against a 2-form violating the LCS identity:
    // X1 = d/dy1, X2 = y1 d/dx3; [X1,X2] = d/dx3 pairs with dx3^dy3.
    auto q = iota.chart_q();
    DistributionFrame bad;
    bad.chart = q;
    bad.fields.push_back(VectorField::basis(q, 0)); // d/dy1
    VectorField mix = VectorField::zero(q);
    mix.comps[3] = ScalarExpr::var(q, "y1"); // y1 d/dx3
    bad.fields.push_back(mix);
    auto not_lcs = parse_form("dx2^dy2 + x2*dx3^dy3", q);
    auto rep3 = involutivity_check(bad, not_lcs, plan);
    CHECK(!rep3.involutive);
    REQUIRE(rep3.pairs.size() == 1);
    CHECK(!rep3.pairs[0].residual.zero);
}

TEST_CASE("rank jumps across the sample set are reported with witnesses") {
    SamplePlan plan;
    auto q = Chart::make("Q4", "x y u v");
    // exp(30x) drops below the tolerance on part of the box, so the sampled
    // rank is not constant: exactly the situation the error reports.
    auto pulled = parse_form("exp(30*x)*dx^dy + du^dv", q);
    try {
        kernel_frame(pulled, plan);
        FAIL("expected RankNotConstant");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::RankNotConstant);
        CHECK(std::string(e.what()).find("rank") != std::string::npos);
        CHECK(std::string(e.what()).find(" at (") != std::string::npos);
    }
}

TEST_CASE("immersion check rejects rank-deficient Jacobians") {
    SamplePlan plan;
    auto m = r6();
    auto l = Chart::make("L1", "s u");
    // second coordinate never enters the map: Jacobian rank 1 < 2
    std::vector<ScalarExpr> comps = {ScalarExpr::var(l, "s"),
                                     ScalarExpr::var(l, "s"),
                                     ScalarExpr::zero(l),
                                     ScalarExpr::zero(l),
                                     ScalarExpr::zero(l),
                                     ScalarExpr::zero(l)};
    CHECK_THROWS_AS(Embedding::make(SmoothMap(l, m, comps), plan), Error);
}
