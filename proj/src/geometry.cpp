#include "lcs/geometry.hpp"

#include "lcs/errors.hpp"

#include <algorithm>

namespace lcs {

Embedding Embedding::make(SmoothMap map, const SamplePlan& plan) {
    const int k = map.source()->dim();
    const int n = map.target()->dim();
    if (k > n)
        fail(ErrorCode::Precondition, "embedding source dimension exceeds target dimension");
    map.check_periodic_consistency(plan);

    // Immersion check: the Jacobian must have full column rank at samples.
    SymMatrix jac(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < k; ++j) jac[static_cast<std::size_t>(i)].push_back(map.jacobian(i, j));
    auto pts = draw_points(map.source(), plan);
    auto ranks = numeric_rank_profile(jac, pts, plan.tol);
    for (std::size_t s = 0; s < ranks.size(); ++s) {
        if (ranks[s] >= 0 && ranks[s] < k)
            fail(ErrorCode::Precondition,
                 "not an immersion: Jacobian rank " + std::to_string(ranks[s]) + " < " +
                     std::to_string(k) + " at " + pts[s].str(*map.source()));
    }
    return Embedding(std::move(map));
}

DifferentialForm restrict_form(const Embedding& iota, const DifferentialForm& omega) {
    if (omega.degree() != 2)
        fail(ErrorCode::DegreeError, "restrict expects a 2-form on the ambient chart");
    require_same_chart(omega.chart(), iota.chart_m(), "restrict");
    return pullback(iota.map(), omega);
}

SymMatrix coefficient_matrix(const DifferentialForm& omega2) {
    if (omega2.degree() != 2) fail(ErrorCode::DegreeError, "coefficient matrix needs a 2-form");
    const ChartPtr& chart = omega2.chart();
    const int n = chart->dim();
    SymMatrix a(static_cast<std::size_t>(n),
                std::vector<ScalarExpr>(static_cast<std::size_t>(n), ScalarExpr::zero(chart)));
    for (const auto& [k, c] : omega2.coeffs()) {
        const std::size_t i = static_cast<std::size_t>(k.idx[0]);
        const std::size_t j = static_cast<std::size_t>(k.idx[1]);
        a[i][j] = c;
        a[j][i] = -c;
    }
    return a;
}

DistributionFrame kernel_frame(const DifferentialForm& pulled, const SamplePlan& plan) {
    const ChartPtr& chart = pulled.chart();
    SymMatrix a = coefficient_matrix(pulled);

    // Constant-rank certification over the sample set.
    auto pts = draw_points(chart, plan);
    auto ranks = numeric_rank_profile(a, pts, plan.tol);
    int seen_rank = -1;
    std::size_t seen_at = 0;
    for (std::size_t s = 0; s < ranks.size(); ++s) {
        if (ranks[s] < 0) continue; // singular sample, not a rank witness
        if (seen_rank < 0) {
            seen_rank = ranks[s];
            seen_at = s;
        } else if (ranks[s] != seen_rank) {
            fail(ErrorCode::RankNotConstant,
                 "rank " + std::to_string(seen_rank) + " at " + pts[seen_at].str(*chart) +
                     " but rank " + std::to_string(ranks[s]) + " at " + pts[s].str(*chart));
        }
    }

    NullspaceBasis ns = nullspace(a, plan);
    if (seen_rank >= 0 && ns.rank != seen_rank)
        fail(ErrorCode::RankNotConstant,
             "symbolic rank " + std::to_string(ns.rank) + " disagrees with sampled rank " +
                 std::to_string(seen_rank));

    DistributionFrame frame;
    frame.chart = chart;
    for (auto& v : ns.basis) frame.fields.push_back(VectorField{chart, std::move(v)});

    // The frame must contract the form to zero; anything else means the
    // elimination produced garbage.
    for (const auto& x : frame.fields) {
        auto rep = form_is_zero(interior_product(x, pulled), plan);
        if (!rep.zero)
            fail(ErrorCode::Internal, "kernel frame fails to annihilate the pulled-back form");
    }
    return frame;
}

DistributionFrame characteristic_distribution(const Embedding& iota,
                                              const DifferentialForm& omega,
                                              const SamplePlan& plan) {
    return kernel_frame(restrict_form(iota, omega), plan);
}

InvolutivityReport involutivity_check(const DistributionFrame& frame,
                                      const DifferentialForm& pulled,
                                      const SamplePlan& plan) {
    InvolutivityReport report;
    for (std::size_t i = 0; i < frame.fields.size(); ++i) {
        for (std::size_t j = i + 1; j < frame.fields.size(); ++j) {
            VectorField bracket = lie_bracket(frame.fields[i], frame.fields[j]);
            auto residual = form_is_zero(interior_product(bracket, pulled), plan);
            if (!residual.zero) {
                report.involutive = false;
                report.worst = ZeroTier::NonZero;
            } else if (residual.worst == ZeroTier::ProbablyZero &&
                       report.worst == ZeroTier::ProvenZero) {
                report.worst = ZeroTier::ProbablyZero;
            }
            report.pairs.push_back(
                InvolutivityPair{static_cast<int>(i), static_cast<int>(j), std::move(residual)});
        }
    }
    return report;
}

bool same_span(const DistributionFrame& a, const DistributionFrame& b,
               const SamplePlan& plan) {
    if (!same_chart(a.chart, b.chart) || a.rank() != b.rank()) return false;
    if (a.rank() == 0) return true;
    const int n = a.chart->dim();

    // Stacked matrix [A; B] must keep rank r at every sample point.
    SymMatrix stacked;
    auto push_fields = [&](const DistributionFrame& f) {
        for (const auto& x : f.fields) {
            std::vector<ScalarExpr> row;
            for (int c = 0; c < n; ++c) row.push_back(x.comps[static_cast<std::size_t>(c)]);
            stacked.push_back(std::move(row));
        }
    };
    push_fields(a);
    push_fields(b);

    auto pts = draw_points(a.chart, plan);
    auto ranks = numeric_rank_profile(stacked, pts, plan.tol);
    for (int r : ranks)
        if (r >= 0 && r != a.rank()) return false;
    return true;
}

} // namespace lcs
