#include "lcs/scene.hpp"

#include "lcs/errors.hpp"

#include <fstream>
#include <optional>
#include <sstream>
#include <vector>

namespace lcs {

namespace {

struct Section {
    std::string kind;
    int line = 0;
    std::vector<std::pair<std::string, std::string>> entries;
    std::vector<int> entry_lines;

    bool has(const std::string& key) const {
        for (const auto& [k, v] : entries)
            if (k == key) return true;
        return false;
    }
    std::string get(const std::string& key, const std::string& fallback = "") const {
        for (const auto& [k, v] : entries)
            if (k == key) return v;
        return fallback;
    }
    std::string require(const std::string& key) const {
        for (const auto& [k, v] : entries)
            if (k == key) return v;
        fail(ErrorCode::SceneError, "[" + kind + "] block at line " + std::to_string(line) +
                                        " is missing '" + key + "'");
    }
};

[[noreturn]] void scene_fail(int line, const std::string& what) {
    fail(ErrorCode::SceneError, "scene line " + std::to_string(line) + ": " + what);
}

std::string trim(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    std::size_t b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

std::vector<Section> tokenize(const std::string& text) {
    std::vector<Section> sections;
    std::istringstream in(text);
    std::string raw;
    int line = 0;
    while (std::getline(in, raw)) {
        ++line;
        std::string s = raw;
        if (auto hash = s.find('#'); hash != std::string::npos) s = s.substr(0, hash);
        s = trim(s);
        if (s.empty()) continue;
        if (s.front() == '[') {
            if (s.back() != ']') scene_fail(line, "unterminated section header");
            Section sec;
            sec.kind = trim(s.substr(1, s.size() - 2));
            sec.line = line;
            sections.push_back(std::move(sec));
            continue;
        }
        auto eq = s.find('=');
        if (eq == std::string::npos) scene_fail(line, "expected 'key = value'");
        if (sections.empty()) scene_fail(line, "entry before any section header");
        sections.back().entries.emplace_back(trim(s.substr(0, eq)), trim(s.substr(eq + 1)));
        sections.back().entry_lines.push_back(line);
    }
    return sections;
}

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::string cur;
    int depth = 0;
    for (char c : s) {
        if (c == '(') ++depth;
        if (c == ')') --depth;
        if (c == ',' && depth == 0) {
            out.push_back(trim(cur));
            cur.clear();
        } else {
            cur += c;
        }
    }
    if (!trim(cur).empty() || !out.empty()) out.push_back(trim(cur));
    return out;
}

Rational parse_rational(const std::string& s, int line) {
    try {
        auto slash = s.find('/');
        if (slash == std::string::npos) {
            Rational q(mpz_class(s, 10));
            return q;
        }
        Rational q(mpz_class(trim(s.substr(0, slash)), 10),
                   mpz_class(trim(s.substr(slash + 1)), 10));
        q.canonicalize();
        return q;
    } catch (const std::exception&) {
        scene_fail(line, "malformed rational literal '" + s + "'");
    }
}

template <typename Fn>
auto with_line(int line, Fn&& fn) {
    try {
        return fn();
    } catch (const Error& e) {
        if (e.code() == ErrorCode::SceneError) throw;
        fail(ErrorCode::SceneError,
             "scene line " + std::to_string(line) + ": " + e.what());
    }
}

} // namespace

const ChartPtr& Scene::chart(const std::string& name) const {
    auto it = charts.find(name);
    if (it == charts.end()) fail(ErrorCode::SceneError, "no chart named '" + name + "'");
    return it->second;
}
const LcsStructure& Scene::lcs_structure(const std::string& name) const {
    auto it = lcs.find(name);
    if (it == lcs.end()) fail(ErrorCode::SceneError, "no [lcs] named '" + name + "'");
    return it->second;
}
const Embedding& Scene::submanifold(const std::string& name) const {
    auto it = submanifolds.find(name);
    if (it == submanifolds.end())
        fail(ErrorCode::SceneError, "no [submanifold] named '" + name + "'");
    return it->second;
}
const FlattenedFoliation& Scene::foliation(const std::string& name) const {
    auto it = foliations.find(name);
    if (it == foliations.end())
        fail(ErrorCode::SceneError, "no [foliation] named '" + name + "'");
    return it->second;
}
const ContractionFamily& Scene::contraction(const std::string& name) const {
    auto it = contractions.find(name);
    if (it == contractions.end())
        fail(ErrorCode::SceneError, "no [contraction] named '" + name + "'");
    return it->second;
}
const DifferentialForm& Scene::form(const std::string& name) const {
    auto it = forms.find(name);
    if (it == forms.end()) fail(ErrorCode::SceneError, "no [form] named '" + name + "'");
    return it->second;
}

Scene load_scene_text(const std::string& text, const SamplePlan& base,
                      const PlanOverrides* overrides) {
    auto sections = tokenize(text);
    if (sections.empty())
        fail(ErrorCode::SceneError, "scene parse error: empty scene (no sections)");

    Scene scene;
    scene.plan = base;

    // Plan first so every validation below uses the configured sampling.
    for (const auto& sec : sections) {
        if (sec.kind != "plan") continue;
        if (sec.has("samples")) scene.plan.samples = std::stoi(sec.get("samples"));
        if (sec.has("seed")) scene.plan.seed = std::stoull(sec.get("seed"));
        if (sec.has("tol")) scene.plan.tol = std::stod(sec.get("tol"));
    }
    if (overrides) {
        if (overrides->samples) scene.plan.samples = *overrides->samples;
        if (overrides->seed) scene.plan.seed = *overrides->seed;
        if (overrides->tol) scene.plan.tol = *overrides->tol;
    }
    scene.plan.validate();
    const SamplePlan& plan = scene.plan;

    auto add_chart = [&scene](const std::string& name, ChartPtr chart, int line) {
        if (!scene.charts.emplace(name, std::move(chart)).second)
            scene_fail(line, "duplicate chart name '" + name + "'");
    };

    for (const auto& sec : sections) {
        if (sec.kind != "chart") continue;
        std::string name = sec.require("name");
        with_line(sec.line, [&] {
            add_chart(name, Chart::make(name, sec.require("coords"), sec.get("periodic")),
                      sec.line);
            return 0;
        });
    }

    for (const auto& sec : sections) {
        if (sec.kind != "submanifold") continue;
        std::string name = sec.require("name");
        with_line(sec.line, [&] {
            ChartPtr target = scene.chart(sec.require("into"));
            ChartPtr source = Chart::make(name, sec.require("coords"), sec.get("periodic"));
            add_chart(name, source, sec.line);
            auto pieces = split_list(sec.require("map"));
            if (static_cast<int>(pieces.size()) != target->dim())
                scene_fail(sec.line, "map needs one expression per coordinate of '" +
                                         target->name() + "' (in chart order)");
            std::vector<ScalarExpr> comps;
            for (const auto& piece : pieces) comps.push_back(parse_scalar(piece, source));
            scene.submanifolds.emplace(name,
                                       Embedding::make(SmoothMap(source, target, comps), plan));
            return 0;
        });
    }

    for (const auto& sec : sections) {
        if (sec.kind != "foliation") continue;
        std::string name = sec.require("name");
        with_line(sec.line, [&] {
            const ChartPtr& chart = scene.chart(sec.require("on"));
            auto f = FlattenedFoliation::make(chart, sec.require("leaves"));
            if (!scene.foliations.emplace(name, std::move(f)).second)
                scene_fail(sec.line, "duplicate foliation '" + name + "'");
            return 0;
        });
    }

    for (const auto& sec : sections) {
        if (sec.kind != "lcs") continue;
        std::string name = sec.require("name");
        with_line(sec.line, [&] {
            const ChartPtr& chart = scene.chart(sec.require("chart"));
            DifferentialForm omega = parse_form(sec.require("omega"), chart);
            std::optional<DifferentialForm> lee;
            if (sec.has("lee")) lee = parse_form(sec.get("lee"), chart);
            auto s = LcsStructure::make(std::move(omega), std::move(lee), plan);
            if (!scene.lcs.emplace(name, std::move(s)).second)
                scene_fail(sec.line, "duplicate lcs '" + name + "'");
            return 0;
        });
    }

    for (const auto& sec : sections) {
        if (sec.kind != "form") continue;
        std::string name = sec.require("name");
        with_line(sec.line, [&] {
            const ChartPtr& chart = scene.chart(sec.require("chart"));
            auto f = parse_form(sec.require("value"), chart);
            if (!scene.forms.emplace(name, std::move(f)).second)
                scene_fail(sec.line, "duplicate form '" + name + "'");
            return 0;
        });
    }

    for (const auto& sec : sections) {
        if (sec.kind != "contraction") continue;
        std::string name = sec.require("name");
        with_line(sec.line, [&] {
            const FlattenedFoliation& fol = scene.foliation(sec.require("foliation"));
            ChartPtr ext = ContractionFamily::extended_chart(fol.chart());
            auto pieces = split_list(sec.require("map"));
            if (static_cast<int>(pieces.size()) != fol.chart()->dim())
                scene_fail(sec.line, "map needs one expression per coordinate of '" +
                                         fol.chart()->name() + "'");
            std::vector<ScalarExpr> comps;
            for (const auto& piece : pieces) comps.push_back(parse_scalar(piece, ext));
            std::vector<Rational> slice;
            if (sec.has("slice")) {
                for (const auto& piece : split_list(sec.get("slice")))
                    slice.push_back(parse_rational(piece, sec.line));
            }
            auto c = ContractionFamily::make(fol, std::move(comps), std::move(slice), plan);
            if (!scene.contractions.emplace(name, std::move(c)).second)
                scene_fail(sec.line, "duplicate contraction '" + name + "'");
            return 0;
        });
    }

    for (const auto& sec : sections) {
        if (sec.kind == "plan" || sec.kind == "chart" || sec.kind == "submanifold" ||
            sec.kind == "foliation" || sec.kind == "lcs" || sec.kind == "form" ||
            sec.kind == "contraction")
            continue;
        scene_fail(sec.line, "unknown section '[" + sec.kind + "]'");
    }
    return scene;
}

Scene load_scene(const std::string& path, const SamplePlan& base,
                 const PlanOverrides* overrides) {
    std::ifstream in(path);
    if (!in) fail(ErrorCode::SceneError, "cannot open scene file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return load_scene_text(buf.str(), base, overrides);
}

} // namespace lcs
