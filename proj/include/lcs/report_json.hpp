#pragma once

#include "lcs/foliation.hpp"
#include "lcs/geometry.hpp"
#include "lcs/lcs_structure.hpp"
#include "lcs/reduction.hpp"

#include <json.hpp>

namespace lcs {

// JSON report assembly shared by the CLI and the acceptance suite. Uses
// ordered_json so field order (and hence the serialized bytes) is stable.
using Json = nlohmann::ordered_json;

inline Json json_plan(const SamplePlan& plan) {
    return Json{{"samples", plan.samples}, {"seed", plan.seed}, {"tol", plan.tol}};
}

inline Json json_zero(const ZeroVerdict& v, const ChartPtr& chart) {
    Json j{{"tier", tier_name(v.tier)}, {"max_abs", v.max_abs}};
    if (v.witness && chart) {
        j["witness"] = v.witness->str(*chart);
        j["witness_value"] = v.witness_value;
    }
    return j;
}

inline Json json_residuals(const std::vector<ReductionResidual>& residuals) {
    Json arr = Json::array();
    for (const auto& r : residuals)
        arr.push_back(Json{{"name", r.name}, {"tier", tier_name(r.tier)}, {"max_abs", r.max_abs}});
    return arr;
}

inline Json json_reduction(const ReductionReport& report) {
    Json j;
    j["mode"] = report.mode == ReductionReport::Mode::FormLevel ? "form-level" : "structure-level";
    j["verdict"] = report.reduced ? "reduced" : "obstructed";
    if (report.reduced) {
        j["chart_n"] = report.chart_n ? report.chart_n->name() : "";
        j["tau"] = report.tau->str();
        j["alpha"] = report.alpha->str();
        if (report.primitive) j["primitive"] = report.primitive->str();
    } else {
        Json cert;
        cert["kind"] = report.obstruction_kind;
        if (!report.obstruction_coord.empty()) cert["coordinate"] = report.obstruction_coord;
        if (report.certificate) cert["expression"] = report.certificate->str();
        if (report.certificate_witness && report.chart_q)
            cert["witness"] = report.certificate_witness->str(*report.chart_q);
        j["certificate"] = cert;
    }
    j["residuals"] = json_residuals(report.residuals);
    j["worst_tier"] = tier_name(report.worst);
    return j;
}

inline Json json_tangential(const TangentialClassReport& report, const ChartPtr& chart) {
    Json j;
    j["verdict"] = report.zero_class() ? "zero-class" : "obstructed";
    if (report.zero_class()) {
        j["primitive"] = report.primitive.str();
        Json arr = Json::array();
        for (const auto& [v, verdict] : report.residuals) {
            Json e = json_zero(verdict, chart);
            e["leaf_coordinate"] = chart->coord_name(v);
            arr.push_back(e);
        }
        j["residuals"] = arr;
    } else {
        Json cert;
        cert["kind"] = report.obstruction_kind;
        if (report.obstruction_coord) cert["coordinate"] = chart->coord_name(*report.obstruction_coord);
        if (report.obstruction_expr) cert["expression"] = report.obstruction_expr->str();
        if (report.obstruction_witness) cert["witness"] = report.obstruction_witness->str(*chart);
        j["certificate"] = cert;
    }
    j["worst_tier"] = tier_name(report.worst);
    return j;
}

inline Json json_frame(const DistributionFrame& frame) {
    Json j;
    j["rank"] = frame.rank();
    j["rank_certified_on"] = "sample-set"; // constant rank is a sampled claim
    Json fields = Json::array();
    for (const auto& x : frame.fields) fields.push_back(x.str());
    j["frame"] = fields;
    return j;
}

inline Json json_involutivity(const InvolutivityReport& report) {
    Json j;
    j["involutive"] = report.involutive;
    j["worst_tier"] = tier_name(report.worst);
    Json pairs = Json::array();
    for (const auto& p : report.pairs) {
        Json e{{"i", p.i}, {"j", p.j}};
        e["zero"] = p.residual.zero;
        e["tier"] = tier_name(p.residual.zero ? p.residual.worst : ZeroTier::NonZero);
        pairs.push_back(e);
    }
    j["pairs"] = pairs;
    return j;
}

inline Json json_invariance(const InvarianceReport& report, const ChartPtr& chart_q) {
    Json j;
    j["verdict"] = report.passed() ? "pass" : "fail";
    j["foliations_match"] = report.foliations_match;
    Json lr = Json::array();
    for (const auto& [v, verdict] : report.leafwise_residuals) {
        Json e = json_zero(verdict, chart_q);
        e["leaf_coordinate"] = chart_q->coord_name(v);
        lr.push_back(e);
    }
    j["leafwise_residuals"] = lr;
    j["verdicts_agree"] = report.verdicts_agree;
    j["both_reduced"] = report.both_reduced;
    if (report.both_reduced) {
        j["taus_equivalent"] = report.taus_equivalent;
        if (report.tau_factor) j["tau_factor"] = report.tau_factor->str();
    }
    j["first"] = json_reduction(report.first);
    j["second"] = json_reduction(report.second);
    return j;
}

inline Json json_homotopy(const HomotopyReport& report) {
    Json j;
    j["verdict"] = report.leafwise ? "pass" : "fail";
    j["alpha"] = report.alpha.str();
    j["residual"] = report.residual.str();
    j["residual_leafwise"] = report.leafwise;
    j["worst_tier"] = tier_name(report.worst);
    return j;
}

} // namespace lcs
