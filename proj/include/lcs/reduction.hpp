#pragma once

#include "lcs/foliation.hpp"
#include "lcs/lcs_structure.hpp"

#include <optional>
#include <string>
#include <vector>

namespace lcs {

// Quotient chart realized by deleting the leaf coordinates of a flattened
// foliation; the projection is the coordinate-deletion map.
struct ReducedChart {
    ChartPtr chart_q;
    ChartPtr chart_n;
    std::vector<VarId> transverse; // chart_N position -> chart_Q coordinate

    SmoothMap projection() const; // pi: Q -> N
};

// Throws when dim N = dim Q - k is not greater than 2.
ReducedChart make_reduced_chart(const FlattenedFoliation& f);

struct ReductionResidual {
    std::string name;
    ZeroTier tier = ZeroTier::ProvenZero;
    double max_abs = 0.0;
};

struct ReductionReport {
    enum class Mode { FormLevel, StructureLevel };
    Mode mode = Mode::FormLevel;
    bool reduced = false;

    // Reduced payload (on chart_N).
    std::optional<DifferentialForm> tau;
    std::optional<DifferentialForm> alpha;
    std::optional<ScalarExpr> primitive; // g; absent in form mode

    // Obstruction payload.
    std::string obstruction_kind; // "lee-pairing" | "circle-mean" | "compatibility"
    std::string obstruction_coord;
    std::optional<ScalarExpr> certificate;
    std::optional<Point> certificate_witness;

    std::vector<ReductionResidual> residuals;
    ZeroTier worst = ZeroTier::ProvenZero;
    ChartPtr chart_q;
    ChartPtr chart_n;
};

// Form-level reduction: tau with pi* tau = iota* Omega exists iff iota*omega
// kills the characteristic directions. The foliation must match the computed
// characteristic distribution (RankMismatch otherwise).
ReductionReport reduce_form(const LcsStructure& s, const Embedding& iota,
                            const FlattenedFoliation& f, const SamplePlan& plan);

// Structure-level reduction: pi* tau = exp(-g) iota* Omega exists iff the
// tangential class of iota*omega vanishes; the obstruction certificate is
// forwarded from the class decision.
ReductionReport reduce_structure(const LcsStructure& s, const Embedding& iota,
                                 const FlattenedFoliation& f, const SamplePlan& plan);

// Conformal-invariance verification: same characteristic foliation, leafwise
// residual of the Lee forms, and matching reduction verdicts with
// conformally equivalent reduced forms.
struct InvarianceReport {
    bool foliations_match = false;
    std::vector<std::pair<VarId, ZeroVerdict>> leafwise_residuals; // Lee difference on leaves
    bool leafwise_ok = true;
    bool verdicts_agree = false;
    bool both_reduced = false;
    bool taus_equivalent = false;
    std::optional<ScalarExpr> tau_factor;
    ReductionReport first;
    ReductionReport second;

    bool passed() const {
        return foliations_match && leafwise_ok && verdicts_agree &&
               (!both_reduced || taus_equivalent);
    }
};

InvarianceReport verify_conformal_invariance(const LcsStructure& s1, const LcsStructure& s2,
                                             const Embedding& iota,
                                             const FlattenedFoliation& f,
                                             const SamplePlan& plan);

} // namespace lcs
