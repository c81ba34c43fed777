#pragma once

#include "lcs/reduction.hpp"

#include <map>
#include <string>

namespace lcs {

// Parsed and eagerly validated scene file: named charts, LCS structures,
// embeddings, foliations, contractions, standalone forms, plus sample-plan
// overrides. Validation errors carry the line they came from.
struct Scene {
    SamplePlan plan;
    std::map<std::string, ChartPtr> charts;
    std::map<std::string, LcsStructure> lcs;
    std::map<std::string, Embedding> submanifolds;
    std::map<std::string, FlattenedFoliation> foliations;
    std::map<std::string, ContractionFamily> contractions;
    std::map<std::string, DifferentialForm> forms;

    const ChartPtr& chart(const std::string& name) const;
    const LcsStructure& lcs_structure(const std::string& name) const;
    const Embedding& submanifold(const std::string& name) const;
    const FlattenedFoliation& foliation(const std::string& name) const;
    const ContractionFamily& contraction(const std::string& name) const;
    const DifferentialForm& form(const std::string& name) const;
};

// Sampling overrides applied after the scene's own [plan] section (the CLI
// maps its flags here); `base` seeds the defaults (e.g. from LCSREDUCE_SEED).
struct PlanOverrides {
    std::optional<int> samples;
    std::optional<std::uint64_t> seed;
    std::optional<double> tol;
};

// Sectioned plain-text scene format: `[kind]` headers followed by
// `key = value` lines; `#` starts a comment.
Scene load_scene_text(const std::string& text, const SamplePlan& base = SamplePlan{},
                      const PlanOverrides* overrides = nullptr);
Scene load_scene(const std::string& path, const SamplePlan& base = SamplePlan{},
                 const PlanOverrides* overrides = nullptr);

} // namespace lcs
