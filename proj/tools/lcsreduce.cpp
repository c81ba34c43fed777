#include "lcs/errors.hpp"
#include "lcs/report_json.hpp"
#include "lcs/scene.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cstdlib>
#include <iostream>
#include <string>

namespace {

using lcs::Json;

struct Options {
    std::string scene_path;
    std::string lcs_name;
    std::string lcs2_name;
    std::string sub_name;
    std::string fol_name;
    std::string contraction_name;
    std::string form_name;
    std::optional<std::uint64_t> seed;
    std::optional<int> samples;
    std::optional<double> tol;
    bool json = false;
    bool pretty = false;
    bool serial = false;
};

void add_common(CLI::App* cmd, Options& opt) {
    cmd->add_option("scene", opt.scene_path, "scene file")->required();
    cmd->add_option("--lcs", opt.lcs_name, "name of the [lcs] block");
    cmd->add_option("--lcs2", opt.lcs2_name, "second [lcs] block (invariance)");
    cmd->add_option("--sub", opt.sub_name, "name of the [submanifold] block");
    cmd->add_option("--fol", opt.fol_name, "name of the [foliation] block");
    cmd->add_option("--contraction", opt.contraction_name, "name of the [contraction] block");
    cmd->add_option("--form", opt.form_name, "name of the [form] block");
    cmd->add_option("--seed", opt.seed, "sampling seed override");
    cmd->add_option("--samples", opt.samples, "sample count override");
    cmd->add_option("--tol", opt.tol, "zero tolerance override");
    cmd->add_flag("--json", opt.json, "compact JSON output (default)");
    cmd->add_flag("--pretty", opt.pretty, "indented JSON output");
    cmd->add_flag("--serial", opt.serial, "disable the parallel evaluation kernel");
}

lcs::Scene load(const Options& opt) {
    lcs::SamplePlan base;
    if (const char* env = std::getenv("LCSREDUCE_SEED"))
        base.seed = std::strtoull(env, nullptr, 10);
    lcs::PlanOverrides over;
    over.samples = opt.samples;
    over.seed = opt.seed;
    over.tol = opt.tol;
    return lcs::load_scene(opt.scene_path, base, &over);
}

const std::string& require_name(const std::string& name, const char* flag) {
    if (name.empty())
        lcs::fail(lcs::ErrorCode::SceneError,
                  std::string("this command requires ") + flag + " NAME");
    return name;
}

int emit(Json j, const Options& opt, int exit_class,
         std::chrono::steady_clock::time_point start) {
    j["exit_class"] = exit_class;
    j["timing_ms"] =
        std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - start)
            .count();
    std::cout << (opt.pretty ? j.dump(2) : j.dump()) << "\n";
    return exit_class;
}

Json header(const std::string& command, const Options& opt, const lcs::Scene& scene) {
    Json j;
    j["tool"] = "lcsreduce";
    j["report_version"] = 1;
    j["command"] = command;
    j["scene"] = opt.scene_path;
    Json objects = Json::object();
    if (!opt.lcs_name.empty()) objects["lcs"] = opt.lcs_name;
    if (!opt.lcs2_name.empty()) objects["lcs2"] = opt.lcs2_name;
    if (!opt.sub_name.empty()) objects["submanifold"] = opt.sub_name;
    if (!opt.fol_name.empty()) objects["foliation"] = opt.fol_name;
    if (!opt.contraction_name.empty()) objects["contraction"] = opt.contraction_name;
    if (!opt.form_name.empty()) objects["form"] = opt.form_name;
    j["objects"] = objects;
    j["plan"] = lcs::json_plan(scene.plan);
    return j;
}

int run_command(const std::string& command, const Options& opt) {
    const auto start = std::chrono::steady_clock::now();
    if (opt.serial) lcs::set_parallel_kernels(false);

    lcs::Scene scene;
    try {
        scene = load(opt);
    } catch (const lcs::Error& e) {
        Json j;
        j["tool"] = "lcsreduce";
        j["report_version"] = 1;
        j["command"] = command;
        j["scene"] = opt.scene_path;
        j["error"] = {{"code", lcs::error_code_name(e.code())}, {"message", e.what()}};
        return emit(std::move(j), opt, 1, start);
    }

    Json j = header(command, opt, scene);
    const lcs::SamplePlan& plan = scene.plan;
    try {
        if (command == "check-lcs") {
            const auto& s = scene.lcs_structure(require_name(opt.lcs_name, "--lcs"));
            j["verdict"] = "pass";
            j["chart"] = s.chart()->name();
            j["dim"] = s.chart()->dim();
            j["omega"] = s.omega().str();
            j["lee"] = s.lee().str();
            j["min_pfaffian_abs"] = s.min_pfaffian();
            j["lcs_residual_tier"] = lcs::tier_name(s.lcs_residual_tier());
            j["lee_closed_tier"] = lcs::tier_name(s.closed_residual_tier());
            return emit(std::move(j), opt, 0, start);
        }
        if (command == "lee-form") {
            const auto& s = scene.lcs_structure(require_name(opt.lcs_name, "--lcs"));
            auto lee = lcs::lee_form(s.omega(), plan);
            j["verdict"] = "pass";
            j["lee"] = lee.str();
            return emit(std::move(j), opt, 0, start);
        }
        if (command == "char-dist") {
            const auto& s = scene.lcs_structure(require_name(opt.lcs_name, "--lcs"));
            const auto& iota = scene.submanifold(require_name(opt.sub_name, "--sub"));
            auto frame = lcs::characteristic_distribution(iota, s.omega(), plan);
            j["verdict"] = "pass";
            j.update(lcs::json_frame(frame));
            return emit(std::move(j), opt, 0, start);
        }
        if (command == "involutive") {
            const auto& s = scene.lcs_structure(require_name(opt.lcs_name, "--lcs"));
            const auto& iota = scene.submanifold(require_name(opt.sub_name, "--sub"));
            auto pulled = lcs::restrict_form(iota, s.omega());
            auto frame = lcs::kernel_frame(pulled, plan);
            auto report = lcs::involutivity_check(frame, pulled, plan);
            j.update(lcs::json_frame(frame));
            j.update(lcs::json_involutivity(report));
            j["verdict"] = report.involutive ? "pass" : "fail";
            return emit(std::move(j), opt, report.involutive ? 0 : 2, start);
        }
        if (command == "tangential-class") {
            const auto& s = scene.lcs_structure(require_name(opt.lcs_name, "--lcs"));
            const auto& iota = scene.submanifold(require_name(opt.sub_name, "--sub"));
            const auto& fol = scene.foliation(require_name(opt.fol_name, "--fol"));
            auto lee_q = lcs::pullback(iota.map(), s.lee());
            auto report = lcs::h1_class_decide(lee_q, fol, plan);
            j["iota_lee"] = lee_q.str();
            j.update(lcs::json_tangential(report, fol.chart()));
            return emit(std::move(j), opt, report.zero_class() ? 0 : 2, start);
        }
        if (command == "homotopy") {
            const auto& c = scene.contraction(require_name(opt.contraction_name, "--contraction"));
            const auto& w = scene.form(require_name(opt.form_name, "--form"));
            auto report = lcs::homotopy_operator(w, c, plan);
            j.update(lcs::json_homotopy(report));
            return emit(std::move(j), opt, report.leafwise ? 0 : 2, start);
        }
        if (command == "reduce-form" || command == "reduce-structure") {
            const auto& s = scene.lcs_structure(require_name(opt.lcs_name, "--lcs"));
            const auto& iota = scene.submanifold(require_name(opt.sub_name, "--sub"));
            const auto& fol = scene.foliation(require_name(opt.fol_name, "--fol"));
            auto report = command == "reduce-form" ? lcs::reduce_form(s, iota, fol, plan)
                                                   : lcs::reduce_structure(s, iota, fol, plan);
            j.update(lcs::json_reduction(report));
            return emit(std::move(j), opt, report.reduced ? 0 : 2, start);
        }
        if (command == "invariance") {
            const auto& s1 = scene.lcs_structure(require_name(opt.lcs_name, "--lcs"));
            const auto& s2 = scene.lcs_structure(require_name(opt.lcs2_name, "--lcs2"));
            const auto& iota = scene.submanifold(require_name(opt.sub_name, "--sub"));
            const auto& fol = scene.foliation(require_name(opt.fol_name, "--fol"));
            auto report = lcs::verify_conformal_invariance(s1, s2, iota, fol, plan);
            j.update(lcs::json_invariance(report, fol.chart()));
            return emit(std::move(j), opt, report.passed() ? 0 : 2, start);
        }
        lcs::fail(lcs::ErrorCode::SceneError, "unknown command '" + command + "'");
    } catch (const lcs::Error& e) {
        j["error"] = {{"code", lcs::error_code_name(e.code())}, {"message", e.what()}};
        return emit(std::move(j), opt, 1, start);
    }
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"lcsreduce - locally conformal symplectic reduction on coordinate charts"};
    app.require_subcommand(1);

    const std::vector<std::string> commands = {
        "check-lcs",   "lee-form", "char-dist",   "involutive",       "tangential-class",
        "homotopy",    "reduce-form", "reduce-structure", "invariance"};
    const std::vector<std::string> descriptions = {
        "validate an [lcs] block and report its residuals",
        "solve for the Lee form of an [lcs] block",
        "characteristic distribution of a submanifold",
        "involutivity residuals of the characteristic frame",
        "decide the tangential cohomology class of iota*omega",
        "apply the homotopy operator of a contraction to a form",
        "form-level reduction (pi* tau = iota* Omega)",
        "structure-level reduction (pi* tau = exp(-g) iota* Omega)",
        "conformal-invariance verification for two structures"};

    std::vector<Options> opts(commands.size());
    for (std::size_t i = 0; i < commands.size(); ++i)
        add_common(app.add_subcommand(commands[i], descriptions[i]), opts[i]);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        Json j;
        j["tool"] = "lcsreduce";
        j["report_version"] = 1;
        j["error"] = {{"code", "usage"}, {"message", e.what()}};
        j["exit_class"] = 1;
        std::cout << j.dump() << "\n";
        return 1;
    }

    for (std::size_t i = 0; i < commands.size(); ++i)
        if (app.get_subcommand(commands[i])->parsed()) return run_command(commands[i], opts[i]);
    return 1;
}
