#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "lcs/random_gen.hpp"

#include <cmath>

using namespace lcs;

// The OpenMP batch kernel must be bit-identical to the serial reference:
// every slot is computed independently, so scheduling cannot reorder any
// floating-point reduction.

TEST_CASE("batch_eval: parallel kernel matches the serial reference bitwise") {
    auto chart = Chart::make("B", "a b c d e");
    GenConfig cfg;
    cfg.max_terms = 5;
    cfg.max_factors = 3;
    ExprGen gen(chart, 0xfeedu, cfg);

    std::vector<ScalarExpr> exprs;
    for (int i = 0; i < 80; ++i) exprs.push_back(gen.scalar());
    exprs.push_back(ScalarExpr::one(chart) / ScalarExpr::var(chart, 0)); // singular slots
    SamplePlan plan;
    plan.samples = 200;
    auto pts = draw_points(chart, plan);

    auto serial = batch_eval(exprs, pts, false);
    auto parallel = batch_eval(exprs, pts, true);
    REQUIRE(serial.size() == parallel.size());
    for (std::size_t i = 0; i < serial.size(); ++i) {
        REQUIRE(serial[i].size() == parallel[i].size());
        for (std::size_t j = 0; j < serial[i].size(); ++j) {
            if (std::isnan(serial[i][j])) {
                CHECK(std::isnan(parallel[i][j]));
            } else {
                CHECK(serial[i][j] == parallel[i][j]);
            }
        }
    }
}

TEST_CASE("is_zero verdicts are identical under either kernel") {
    auto chart = Chart::make("B", "a b c d");
    ExprGen gen(chart, 0xbeefu);
    SamplePlan plan;

    std::vector<ScalarExpr> exprs;
    for (int i = 0; i < 40; ++i) {
        auto e = gen.scalar();
        exprs.push_back(e);
        exprs.push_back(e - e);
        auto f = gen.scalar();
        exprs.push_back(e * f - f * e);
    }

    set_parallel_kernels(true);
    auto with_parallel = is_zero_many(exprs, plan);
    set_parallel_kernels(false);
    auto with_serial = is_zero_many(exprs, plan);
    set_parallel_kernels(true);

    REQUIRE(with_parallel.size() == with_serial.size());
    for (std::size_t i = 0; i < with_parallel.size(); ++i) {
        CHECK(with_parallel[i].tier == with_serial[i].tier);
        CHECK(with_parallel[i].max_abs == with_serial[i].max_abs);
        CHECK(with_parallel[i].witness.has_value() == with_serial[i].witness.has_value());
        if (with_parallel[i].witness) {
            CHECK(with_parallel[i].witness_value == with_serial[i].witness_value);
            for (std::size_t k = 0; k < with_parallel[i].witness->x.size(); ++k)
                CHECK(with_parallel[i].witness->x[k] == with_serial[i].witness->x[k]);
        }
    }
}
