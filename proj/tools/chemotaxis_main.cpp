#include "chemotaxis/aplimit.hpp"
#include "chemotaxis/config.hpp"
#include "chemotaxis/experiment.hpp"
#include "chemotaxis/io.hpp"
#include "chemotaxis/stationary.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

using namespace chemotaxis;
namespace fs = std::filesystem;

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;

struct CommonOptions {
    std::string config_path;
    std::string preset_name;
    std::optional<std::string> model, gamma, dx, tend, flux, reconstruction, damping;
    std::vector<std::string> settings;
    std::string out = "out";
};

void add_common(CLI::App* app, CommonOptions& o)
{
    app->add_option("--config", o.config_path, "flat key = value configuration file");
    app->add_option("--preset", o.preset_name, "start from a named preset instead of the defaults");
    app->add_option("--model", o.model, "hyperbolic or parabolic");
    app->add_option("--gamma", o.gamma, "pressure exponent");
    app->add_option("--dx", o.dx, "cell width; must divide the domain length");
    app->add_option("--tend", o.tend, "final time");
    app->add_option("--flux", o.flux, "hll, hll-roe or suliciu");
    app->add_option("--reconstruction", o.reconstruction, "E or P");
    app->add_option("--damping", o.damping, "explicit or implicit");
    app->add_option("--set", o.settings, "extra key=value override, repeatable");
    app->add_option("--out", o.out, "output directory")->capture_default_str();
}

ExperimentConfig build_config(const CommonOptions& o)
{
    ExperimentConfig cfg;
    if (!o.config_path.empty()) {
        if (!o.preset_name.empty()) throw ConfigError("--preset and --config are exclusive; put preset in the file");
        cfg = load_config(o.config_path);
    } else if (!o.preset_name.empty()) {
        cfg = preset(o.preset_name);
    }
    auto apply = [&](const char* key, const std::optional<std::string>& v) {
        if (v) apply_setting(cfg, key, *v);
    };
    apply("model", o.model);
    apply("gamma", o.gamma);
    apply("t_end", o.tend);
    apply("flux", o.flux);
    apply("reconstruction", o.reconstruction);
    apply("damping", o.damping);
    for (const std::string& s : o.settings) {
        const auto eq = s.find('=');
        if (eq == std::string::npos) throw ConfigError("--set expects key=value, got '" + s + "'");
        apply_setting(cfg, s.substr(0, eq), s.substr(eq + 1));
    }
    apply("dx", o.dx);
    cfg.validate();
    return cfg;
}

std::vector<double> parse_list(const std::string& text, const char* what)
{
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            std::size_t used = 0;
            out.push_back(std::stod(item, &used));
            if (used != item.size()) throw std::invalid_argument(item);
        } catch (const std::exception&) {
            throw ConfigError(std::string("bad number in ") + what + ": '" + item + "'");
        }
    }
    if (out.empty()) throw ConfigError(std::string(what) + " is empty");
    return out;
}

void print_run_summary(const char* label, const RunReport& r)
{
    const BumpCount b = r.final_bumps();
    std::printf("%s: t=%g steps=%zu bumps=%zu (wall %zu) residual=%.3e mass_drift=%.3e min_rho=%.3e %s\n", label,
                r.final_state.t, r.steps, b.count, b.wall_touching, r.series.empty() ? 0.0 : r.series.back().residual,
                r.max_mass_drift, r.min_rho, r.converged ? "converged" : "");
}

int cmd_run(const CommonOptions& o)
{
    const RunReport r = run(build_config(o));
    write_run(o.out, "", r);
    print_run_summary(to_string(r.config.model).c_str(), r);
    return 0;
}

int cmd_sweep(const CommonOptions& o, const std::string& dx_list, double tol)
{
    const ExperimentConfig base = build_config(o);
    const auto t0 = std::chrono::steady_clock::now();
    const MeshStudy study = mesh_refinement_study(base, parse_list(dx_list, "--dx-list"), tol);
    const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    for (std::size_t k = 0; k < study.reports.size(); ++k) {
        write_run(o.out, "mesh" + std::to_string(k) + "_", study.reports[k]);
        char label[64];
        std::snprintf(label, sizeof label, "dx=%g", study.dx[k]);
        print_run_summary(label, study.reports[k]);
    }
    write_mesh_table_csv(fs::path(o.out) / "mesh.csv", study);
    KeyValues meta = config_entries(base);
    meta.emplace_back("code_version", code_version());
    meta.emplace_back("wall_seconds", format_number(wall));
    meta.emplace_back("dx_list", dx_list);
    meta.emplace_back("profile_tol", format_number(tol));
    meta.emplace_back("verdict_dx", study.verdict ? format_number(study.dx[*study.verdict]) : "none");
    write_key_values(fs::path(o.out) / "mesh_meta.txt", meta);
    std::printf("verdict: %s\n", study.verdict ? ("stable from dx=" + format_number(study.dx[*study.verdict])).c_str()
                                               : "no stable mesh in the list");
    return 0;
}

std::string transitions_text(const std::vector<Transition>& ts)
{
    std::string s;
    for (const Transition& t : ts) {
        if (!s.empty()) s += ' ';
        s += format_number(t.t) + ":" + std::to_string(t.from) + "->" + std::to_string(t.to);
    }
    return s.empty() ? "none" : s;
}

int cmd_compare(const CommonOptions& o, double tol)
{
    const ExperimentConfig cfg = build_config(o);
    const auto t0 = std::chrono::steady_clock::now();
    const ModelComparison c = compare_models(cfg, tol);
    const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    write_run(o.out, "hyperbolic_", c.hyperbolic);
    write_run(o.out, "parabolic_", c.parabolic);
    KeyValues meta = config_entries(cfg);
    meta.emplace_back("code_version", code_version());
    meta.emplace_back("wall_seconds", format_number(wall));
    meta.emplace_back("hyperbolic_transitions", transitions_text(c.hyperbolic_transitions));
    meta.emplace_back("parabolic_transitions", transitions_text(c.parabolic_transitions));
    meta.emplace_back("profile_distance", format_number(c.profile_distance));
    meta.emplace_back("same_asymptotic_state", c.same_asymptotic_state ? "true" : "false");
    write_key_values(fs::path(o.out) / "compare_meta.txt", meta);
    print_run_summary("hyperbolic", c.hyperbolic);
    print_run_summary("parabolic", c.parabolic);
    std::printf("transitions hyperbolic: %s\ntransitions parabolic: %s\n",
                transitions_text(c.hyperbolic_transitions).c_str(), transitions_text(c.parabolic_transitions).c_str());
    std::printf("profile distance %.3e: %s asymptotic state\n", c.profile_distance,
                c.same_asymptotic_state ? "same" : "different");
    return 0;
}

int cmd_ap_probe(const CommonOptions& o, const std::string& eps_list)
{
    const ExperimentConfig cfg = build_config(o);
    const std::vector<double> eps = parse_list(eps_list, "--eps-list");
    const auto t0 = std::chrono::steady_clock::now();
    const ApProfile prof = sinusoidal_probe_profile(cfg.grid(), cfg.params);
    KeyValues meta = config_entries(cfg);
    for (ReconstructionKind kind : {ReconstructionKind::P, ReconstructionKind::E}) {
        const ApProbeResult res =
            ap_flux_probe(prof.r, prof.v, prof.phi, cfg.params, eps, kind, cfg.scheme.flux, cfg.execution);
        const std::string name = to_string(kind);
        write_ap_table_csv(fs::path(o.out) / ("ap_" + name + ".csv"), res);
        meta.emplace_back(name + "_interfaces_used", std::to_string(res.interfaces_used));
        meta.emplace_back(name + "_interfaces_excluded", std::to_string(res.interfaces_excluded));
        meta.emplace_back(name + "_strongly_consistent", res.strongly_consistent ? "true" : "false");
        meta.emplace_back("closed_form_gap", format_number(res.closed_form_gap));
        meta.emplace_back("nonconservative_floor", format_number(res.nonconservative_floor));
        std::printf("%s-reconstruction (%zu interfaces, floor %.3e)\n", name.c_str(), res.interfaces_used,
                    res.nonconservative_floor);
        for (const ApProbeRow& r : res.rows)
            std::printf("  eps=%-8g |F-eps G|=%.3e  |F-eps H|=%.3e\n", r.eps, r.error_conservative,
                        r.error_nonconservative);
    }
    meta.emplace_back("eps_list", eps_list);
    meta.emplace_back("code_version", code_version());
    meta.emplace_back("wall_seconds",
                      format_number(std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count()));
    write_key_values(fs::path(o.out) / "ap_meta.txt", meta);
    return 0;
}

int cmd_stationary(const CommonOptions& o)
{
    const ExperimentConfig cfg = build_config(o);
    const auto t0 = std::chrono::steady_clock::now();
    const Snapshot s = initial_state(cfg);
    KeyValues meta = config_entries(cfg);
    const ModelParams& p = cfg.params;
    meta.emplace_back("omega", format_number((p.a * p.chi / (2.0 * p.kappa) - p.b) / p.D));
    auto describe = [&](const std::string& tag, const StationaryProfile& prof) {
        meta.emplace_back(tag + "xbar", format_number(prof.xbar()));
        meta.emplace_back(tag + "K", format_number(prof.K()));
        meta.emplace_back(tag + "orientation", to_string(prof.orientation()));
        meta.emplace_back(tag + "mass", format_number(prof.mass()));
    };
    switch (cfg.initial) {
    case InitialKind::HalfBump:
        describe("", half_bump(cfg.length, cfg.mass, p, Orientation::LeftAnchored));
        break;
    case InitialKind::CentralBump:
        describe("", central_bump(cfg.length, cfg.mass, p));
        break;
    case InitialKind::TwoBumps:
        describe("left_", half_bump(cfg.bump_length, cfg.mass_left, p, Orientation::LeftAnchored));
        describe("right_", half_bump(cfg.bump_length, cfg.mass_right, p, Orientation::RightAnchored));
        break;
    case InitialKind::Constant:
        describe("", constant_state(cfg.length, cfg.rho_mean * cfg.length, p));
        break;
    case InitialKind::Sinusoid:
        throw ConfigError("stationary needs initial = constant, half-bump, central-bump or two-bumps");
    }
    meta.emplace_back("sampled_mass", format_number(total_mass(s.rho)));
    meta.emplace_back("code_version", code_version());
    meta.emplace_back("wall_seconds",
                      format_number(std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count()));
    write_snapshot_csv(fs::path(o.out) / "profile.csv", s);
    write_key_values(fs::path(o.out) / "profile_meta.txt", meta);
    for (const auto& [k, v] : meta)
        if (k == "omega" || k.find("xbar") != std::string::npos || k.ends_with("K") || k == "sampled_mass")
            std::printf("%s = %s\n", k.c_str(), v.c_str());
    return 0;
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"One-dimensional chemotaxis simulations: hyperbolic and parabolic models"};
    app.require_subcommand(1);
    app.set_version_flag("--version", code_version());

    CommonOptions run_o, sweep_o, cmp_o, ap_o, st_o;
    std::string dx_list = "5e-2,2.5e-2,1e-2,5e-3";
    std::string eps_list = "1e-1,1e-2,1e-3";
    double sweep_tol = 0.05, cmp_tol = 0.05;

    auto* run_cmd = app.add_subcommand("run", "single time evolution");
    add_common(run_cmd, run_o);
    auto* sweep_cmd = app.add_subcommand("sweep-mesh", "repeat a run on a sequence of meshes");
    add_common(sweep_cmd, sweep_o);
    sweep_cmd->add_option("--dx-list", dx_list, "comma separated, decreasing")->capture_default_str();
    sweep_cmd->add_option("--tol", sweep_tol, "relative profile distance accepted as agreement")
        ->capture_default_str();
    auto* cmp_cmd = app.add_subcommand("compare", "hyperbolic and parabolic runs from the same data");
    add_common(cmp_cmd, cmp_o);
    cmp_cmd->add_option("--tol", cmp_tol, "relative profile distance accepted as agreement")->capture_default_str();
    auto* ap_cmd = app.add_subcommand("ap-probe", "interface mass flux against the diffusive limit fluxes");
    add_common(ap_cmd, ap_o);
    ap_cmd->add_option("--eps-list", eps_list, "comma separated")->capture_default_str();
    auto* st_cmd = app.add_subcommand("stationary", "sample an analytic stationary profile");
    add_common(st_cmd, st_o);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitConfig;
    }

    try {
        if (*run_cmd) return cmd_run(run_o);
        if (*sweep_cmd) return cmd_sweep(sweep_o, dx_list, sweep_tol);
        if (*cmp_cmd) return cmd_compare(cmp_o, cmp_tol);
        if (*ap_cmd) return cmd_ap_probe(ap_o, eps_list);
        if (*st_cmd) return cmd_stationary(st_o);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const NoHalfBump& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const NumericalFailure& e) {
        std::cerr << "numerical failure: " << e.what() << '\n';
        return kExitNumerical;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 1;
}
