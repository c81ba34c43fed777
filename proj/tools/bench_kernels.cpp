// Benchmark comparing the serial reference evaluation kernel against the
// OpenMP batch kernel on residual-verification workloads, and checking that
// both produce identical bits.

#include "lcs/random_gen.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <vector>

using namespace lcs;

namespace {

double ms_since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
        .count();
}

struct Workload {
    std::vector<ScalarExpr> exprs;
    std::vector<Point> points;
};

Workload make_workload(int dim, int n_exprs, int n_points, std::uint64_t seed) {
    std::string coords;
    for (int i = 0; i < dim; ++i) coords += "x" + std::to_string(i) + " ";
    auto chart = Chart::make("bench" + std::to_string(dim), coords);
    GenConfig cfg;
    cfg.max_terms = 6;
    cfg.max_factors = 3;
    ExprGen gen(chart, seed, cfg);

    Workload w;
    for (int i = 0; i < n_exprs; ++i) {
        // d(d(omega)) coefficients: the kind of residual the suites verify
        auto a = gen.form(2);
        auto dd = exterior_derivative(exterior_derivative(a));
        for (const auto& [k, c] : dd.coeffs()) w.exprs.push_back(c);
        auto b = gen.scalar();
        w.exprs.push_back(b * b - b.pow(2)); // syntactic zero after canon
        w.exprs.push_back(gen.scalar());
    }
    SamplePlan plan;
    plan.samples = n_points;
    plan.seed = seed;
    w.points = draw_points(chart, plan);
    return w;
}

} // namespace

int main(int argc, char** argv) {
    const int repeats = argc > 1 ? std::atoi(argv[1]) : 5;
    std::printf("%-6s %-8s %-8s %10s %10s %8s %8s\n", "dim", "exprs", "points", "serial", "openmp",
                "speedup", "match");

    for (int dim : {4, 6, 8}) {
        Workload w = make_workload(dim, 60, 200, 0x9e3779b9u + static_cast<unsigned>(dim));

        // Warm both paths once, then time.
        auto ref = batch_eval(w.exprs, w.points, false);
        auto par = batch_eval(w.exprs, w.points, true);

        auto t0 = std::chrono::steady_clock::now();
        for (int r = 0; r < repeats; ++r) ref = batch_eval(w.exprs, w.points, false);
        double serial_ms = ms_since(t0) / repeats;

        t0 = std::chrono::steady_clock::now();
        for (int r = 0; r < repeats; ++r) par = batch_eval(w.exprs, w.points, true);
        double parallel_ms = ms_since(t0) / repeats;

        bool match = true;
        for (std::size_t i = 0; i < ref.size(); ++i)
            for (std::size_t j = 0; j < ref[i].size(); ++j) {
                const bool both_nan = std::isnan(ref[i][j]) && std::isnan(par[i][j]);
                if (!both_nan && ref[i][j] != par[i][j]) match = false;
            }

        std::printf("%-6d %-8zu %-8zu %8.2fms %8.2fms %7.2fx %8s\n", dim, w.exprs.size(),
                    w.points.size(), serial_ms, parallel_ms, serial_ms / parallel_ms,
                    match ? "yes" : "NO");
        if (!match) return 1;
    }
    return 0;
}
