#include "chemotaxis/aplimit.hpp"
#include "chemotaxis/config.hpp"
#include "chemotaxis/experiment.hpp"
#include "chemotaxis/hyperbolic.hpp"
#include "chemotaxis/io.hpp"
#include "chemotaxis/riemann.hpp"
#include "chemotaxis/stationary.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <map>
#include <numbers>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

using namespace chemotaxis;
namespace fs = std::filesystem;

namespace {

struct Verdict {
    bool pass = false;
    std::string detail;
};

struct Options {
    fs::path out = "acceptance_out";
    double parabolic_dx = 2e-2;
    double long_dx = 1e-2;
    bool long_runs = false;
};

std::string fmt(const char* format, auto... args)
{
    char buf[512];
    std::snprintf(buf, sizeof buf, format, args...);
    return buf;
}

std::vector<double> log_grid(double lo, double hi, int n)
{
    std::vector<double> g(n);
    for (int k = 0; k < n; ++k) g[k] = lo * std::pow(hi / lo, static_cast<double>(k) / (n - 1));
    return g;
}

std::string dx_text(double dx) { return fmt("%.17g", dx); }

/// Runs collected for the conservation check.
std::vector<std::pair<std::string, RunReport>> g_reports;

void keep(const std::string& label, const RunReport& r) { g_reports.emplace_back(label, r); }

Verdict well_balanced()
{
    const Grid g(1.0, 100);
    const ModelParams p{1.0, 2.0, 5.0, 1.0, 1.0, 1.0, 1.0, 1};
    const CellField phi = CellField::sample(g, [](double x) { return std::atan(6.0 * x - 2.0) + 0.5 * x * x; });
    CellField rho(g);
    rho[0] = 0.5;
    for (std::size_t i = 1; i < g.size(); ++i) rho[i] = rho[i - 1] + p.chi / (2.0 * p.kappa) * (phi[i] - phi[i - 1]);
    SchemeConfig scheme;
    scheme.flux = {FluxType::SuliciuVacuum, 0.0};
    scheme.reconstruction = ReconstructionKind::P;
    HydroState s(rho, CellField(g));
    double worst = 0.0;
    for (int step = 0; step < 1000; ++step) {
        const double dt = cfl_dt(interface_fluxes(s, phi, p, scheme), g.dx(), scheme);
        s = hyperbolic_step(s, phi, p, dt, scheme);
        worst = std::max(worst, max_abs_diff(s.rho.values(), rho.values()));
    }
    return {worst <= 1e-12, fmt("max |rho^n - rho^0| over 1000 steps = %.3e (tol 1e-12)", worst)};
}

double roe_closed_form(double r, double R, const PressureLaw& law)
{
    const double cbar = std::sqrt((std::sqrt(R) * law.dpressure(R) + std::sqrt(r) * law.dpressure(r)) /
                                  (std::sqrt(R) + std::sqrt(r)));
    if (R > r) {
        const double cR = std::sqrt(law.dpressure(R));
        return (cR * law.pressure(r) + cbar * law.pressure(R)) / (cR + cbar);
    }
    const double cr = std::sqrt(law.dpressure(r));
    return (cbar * law.pressure(r) + cr * law.pressure(R)) / (cbar + cr);
}

double suliciu_closed_form(double r, double R, const PressureLaw& law, double alpha)
{
    const double pr = law.pressure(r), pR = law.pressure(R);
    const double sr = std::sqrt(law.dpressure(r)), sR = std::sqrt(law.dpressure(R));
    if (r < R) {
        const double c1 = r * sr + alpha * r * (pR - pr) / (R * sR);
        const double c2 = R * sR;
        return (c2 * pr + c1 * pR) / (c1 + c2) +
               R * c2 / (c1 + c2) * (pr - pR) * (pr - pR) / (c2 * (c1 + c2) + R * (pR - pr));
    }
    const double c1 = r * sr;
    const double c2 = R * sR + alpha * R * (pr - pR) / (r * sr);
    return (c2 * pr + c1 * pR) / (c1 + c2) +
           r * c1 / (c1 + c2) * (pr - pR) * (pr - pR) / (c1 * (c1 + c2) + r * (pr - pR));
}

Verdict flux_oracles()
{
    const auto grid = log_grid(1e-3, 10.0, 50);
    double hll = 0.0, roe = 0.0, sul = 0.0;
    for (double gamma : {2.0, 3.0}) {
        const PressureLaw law(1.0, gamma);
        const double alpha = 0.5 * (gamma + 1.0);
        for (double r : grid)
            for (double R : grid) {
                const double mean = 0.5 * (law.pressure(r) + law.pressure(R));
                const double scale = std::max(1.0, std::max(law.pressure(r), law.pressure(R)));
                hll = std::max(hll, std::abs(hll_flux({r, 0.0}, {R, 0.0}, law).f_mom - mean) / std::max(1.0, mean));
                roe = std::max(roe, std::abs(hll_roe_flux({r, 0.0}, {R, 0.0}, law).f_mom - roe_closed_form(r, R, law)) / scale);
                sul = std::max(sul, std::abs(suliciu_vacuum_flux({r, 0.0}, {R, 0.0}, law, alpha).f_mom -
                                             suliciu_closed_form(r, R, law, alpha)) /
                                        scale);
            }
    }
    return {hll <= 1e-14 && roe <= 1e-12 && sul <= 1e-12,
            fmt("HLL %.2e (tol 1e-14), HLL-Roe %.2e, Suliciu %.2e (tol 1e-12) on 50x50, gamma 2 and 3", hll, roe, sul)};
}

Verdict strong_consistency()
{
    const auto grid = log_grid(1e-3, 10.0, 50);
    bool pass = true;
    std::string detail;
    for (FluxType t : {FluxType::HLL, FluxType::HLLRoe, FluxType::SuliciuVacuum})
        for (double gamma : {2.0, 3.0}) {
            const StrongConsistencyReport rep = strong_consistency_probe({t, 0.0}, PressureLaw(1.0, gamma), grid, grid, 1e-10);
            pass = pass && rep.passed;
            detail += fmt("%s/g%g: %zu violations, min sep %.1e; ", to_string(t).c_str(), gamma, rep.violations,
                          rep.worst_separation);
        }
    return {pass, detail};
}

Verdict ap_probe()
{
    const ModelParams p{1.0, 2.0, 1.0, 1.0, 1.0, 1.0, 1.0, 1};
    const ApProfile prof = sinusoidal_probe_profile(Grid(1.0, 1000), p);
    const std::vector<double> eps{1e-1, 1e-2, 1e-3};
    const ApProbeResult P = ap_flux_probe(prof.r, prof.v, prof.phi, p, eps, ReconstructionKind::P);
    const ApProbeResult E = ap_flux_probe(prof.r, prof.v, prof.phi, p, {1e-1, 1e-2, 1e-3, 1e-5, 1e-6},
                                          ReconstructionKind::E);
    bool pass = P.interfaces_used > 0 && E.nonconservative_floor > 0.0;
    std::string detail = fmt("dx 1e-3, %zu interfaces; P decade ratios", P.interfaces_used);
    for (std::size_t k = 0; k + 1 < P.rows.size(); ++k) {
        const double q = P.rows[k].error_conservative / P.rows[k + 1].error_conservative;
        pass = pass && q >= 5.0 && q <= 20.0;
        detail += fmt(" %.2f", q);
    }
    const double floor = E.nonconservative_floor;
    for (const ApProbeRow& row : E.rows) pass = pass && row.error_conservative > floor * 0.5;
    const double e5 = E.rows[3].error_conservative, e6 = E.rows[4].error_conservative;
    const bool stagnant = e5 / e6 < 2.0 && e6 >= 0.5 * floor;
    pass = pass && stagnant;
    detail += fmt("; E error %.2e %.2e %.2e at eps 1e-1..1e-3, %.2e %.2e at eps 1e-5, 1e-6 (%.2f, %.2f x floor %.2e)",
                  E.rows[0].error_conservative, E.rows[1].error_conservative, E.rows[2].error_conservative, e5, e6,
                  e5 / floor, e6 / floor, floor);
    return {pass, detail};
}

Verdict stationary_solver()
{
    struct Set {
        ModelParams p;
        double L;
    };
    std::vector<Set> sets{{{1.0, 2.0, 10.0, 1.0, 0.1, 20.0, 10.0, 1}, 1.0}, {{1.0, 2.0, 50.0, 1.0, 1.0, 1.0, 1.0, 1}, 1.0}};
    std::mt19937 rng(2718);
    std::uniform_real_distribution<double> chi(2.0, 60.0), D(0.05, 2.0), a(0.5, 20.0), b(0.5, 10.0), kappa(0.5, 2.0),
        stretch(1.05, 4.0);
    while (sets.size() < 20) {
        const ModelParams p{kappa(rng), 2.0, chi(rng), 1.0, D(rng), a(rng), b(rng), 1};
        if (!(p.omega() > 1.0)) continue;
        sets.push_back({p, stretch(rng) * std::numbers::pi / std::sqrt(p.omega())});
    }
    bool pass = true;
    double worst_res = 0.0;
    for (const Set& s : sets) {
        const double x = solve_xbar(s.p, s.L);
        const double sw = std::sqrt(s.p.omega());
        const double res = std::abs(xbar_residual(s.p, s.L, x));
        worst_res = std::max(worst_res, res);
        pass = pass && res <= 1e-12 && x > 0.5 * std::numbers::pi / sw && x < std::numbers::pi / sw;
    }
    // domain lengths placing the free boundary on a cell face of every grid below
    const ModelParams fig{1.0, 2.0, 10.0, 1.0, 0.1, 20.0, 10.0, 1};
    const StationaryProfile prof = half_bump(1.00935833856711, 10.0, fig, Orientation::LeftAnchored);
    std::vector<double> err;
    for (std::size_t n = 64; n <= 1024; n *= 2)
        err.push_back(std::abs(total_mass(prof.sample_rho(Grid(prof.length(), n))) - 10.0));
    std::string ratios;
    for (std::size_t k = 0; k + 1 < err.size(); ++k) {
        const double q = err[k] / err[k + 1];
        pass = pass && q >= 3.0 && q <= 5.0;
        ratios += fmt(" %.3f", q);
    }
    return {pass, fmt("20 sets (omega 900, 24 and 18 random), max |residual| %.2e; mass error ratios%s", worst_res,
                      ratios.c_str())};
}

std::size_t wall_bumps_at(const RunReport& r, double t)
{
    for (const SeriesPoint& p : r.series)
        if (p.t >= t * (1.0 - 1e-12)) return p.bumps;
    return r.series.back().bumps;
}

Verdict model_comparison(const Options& o)
{
    ExperimentConfig h = preset("two-bumps");
    h.model = ModelKind::Hyperbolic;
    ExperimentConfig p = h;
    p.model = ModelKind::Parabolic;
    apply_setting(p, "dx", dx_text(o.parabolic_dx));
    std::vector<RunReport> reports(2);
    const ExperimentConfig cfgs[2] = {h, p};
#pragma omp parallel for schedule(dynamic, 1)
    for (int k = 0; k < 2; ++k) reports[k] = run(cfgs[k]);
    const RunReport& hr = reports[0];
    const RunReport& pr = reports[1];
    write_run(o.out / "two-bumps", "hyperbolic_", hr);
    write_run(o.out / "two-bumps", "parabolic_", pr);
    keep("two-bumps/hyperbolic", hr);
    keep("two-bumps/parabolic", pr);
    const double h_res = hr.series.back().residual;
    const std::size_t h_bumps = wall_bumps_at(hr, 150.0);
    const std::size_t p_bumps = wall_bumps_at(pr, 150.0);
    std::optional<double> merge;
    for (const Transition& t : bump_transitions(pr))
        if (t.from == 2 && t.to == 1) merge = t.t;
    const bool pass = h_bumps == 2 && h_res < 1e-8 && p_bumps == 1 && merge && *merge >= 5.0 && *merge <= 20.0;
    return {pass, fmt("hyperbolic dx 1e-2: %zu bumps at t=150, residual %.2e; parabolic dx %g: %zu bump(s), 2->1 at t=%s",
                      h_bumps, h_res, o.parabolic_dx, p_bumps, merge ? fmt("%.1f", *merge).c_str() : "none")};
}

Verdict damping_modes(const Options& o)
{
    ExperimentConfig base = preset("unit-box");
    base.params.gamma = 3.0;
    base.stop_count = 0;
    std::vector<RunReport> reports(2);
    const DampingMode modes[2] = {DampingMode::ImplicitUpdate, DampingMode::ExplicitInReconstruction};
#pragma omp parallel for schedule(dynamic, 1)
    for (int k = 0; k < 2; ++k) {
        ExperimentConfig c = base;
        c.scheme.damping = modes[k];
        reports[k] = run(c);
    }
    write_run(o.out / "damping", "implicit_", reports[0]);
    write_run(o.out / "damping", "explicit_", reports[1]);
    keep("unit-box/gamma3/implicit", reports[0]);
    keep("unit-box/gamma3/explicit", reports[1]);
    const double mi = reports[0].final_momentum_max(), me = reports[1].final_momentum_max();
    const double ratio = me / mi;
    return {ratio >= 1e4, fmt("max |rho u| at T=300: implicit %.2e, explicit %.2e, ratio %.2e (need >= 1e4)", mi, me, ratio)};
}

Verdict mesh_verdicts(const Options& o)
{
    const std::vector<double> dx{5e-2, 2.5e-2, 1e-2, 5e-3};
    const MeshStudy g3 = mesh_refinement_study(preset("metastable"), dx);
    const MeshStudy g2 = mesh_refinement_study(preset("wide-box"), dx);
    write_mesh_table_csv(o.out / "mesh" / "gamma3.csv", g3);
    write_mesh_table_csv(o.out / "mesh" / "gamma2.csv", g2);
    for (std::size_t k = 0; k < dx.size(); ++k) {
        keep("metastable/dx=" + dx_text(dx[k]), g3.reports[k]);
        keep("wide-box/dx=" + dx_text(dx[k]), g2.reports[k]);
        write_run(o.out / "mesh", fmt("gamma3_%zu_", k), g3.reports[k]);
        write_run(o.out / "mesh", fmt("gamma2_%zu_", k), g2.reports[k]);
    }
    const bool g3_stable = g3.bumps[1] == g3.bumps[2] && g3.bumps[2] == g3.bumps[3];
    bool g2_changes = false;
    for (std::size_t k = 0; k + 1 < dx.size(); ++k) g2_changes = g2_changes || g2.bumps[k] != g2.bumps[k + 1];
    auto list = [](const MeshStudy& s) {
        std::string t;
        for (std::size_t b : s.bumps) t += fmt(" %zu", b);
        return t;
    };
    return {g3_stable && g2_changes, fmt("bumps at dx 5e-2 2.5e-2 1e-2 5e-3: gamma 3%s, gamma 2%s", list(g3).c_str(),
                                         list(g2).c_str())};
}

Verdict conservation(const Options&)
{
    std::map<std::string, bool> presets;
    for (const std::string& name : preset_names()) presets[name] = false;
    ExperimentConfig unit = preset("unit-box");
    keep("unit-box", run(unit));
    double worst = 0.0;
    double min_rho = 0.0;
    bool pass = true;
    for (const auto& [label, r] : g_reports) {
        presets[r.config.preset] = true;
        double drift = 0.0;
        for (const SeriesPoint& s : r.series) {
            drift = std::max(drift, std::abs(s.mass - r.initial_mass) / r.initial_mass);
            min_rho = std::min(min_rho, s.min_rho);
        }
        worst = std::max(worst, drift);
        pass = pass && drift <= 1e-10 && r.min_rho >= 0.0;
    }
    std::string missing;
    for (const auto& [name, seen] : presets)
        if (!seen) missing += " " + name;
    pass = pass && missing.empty();
    return {pass, fmt("%zu runs over all presets: max relative mass drift %.2e (tol 1e-10), min rho %.2e%s%s",
                      g_reports.size(), worst, min_rho, missing.empty() ? "" : "; not run:", missing.c_str())};
}

Verdict metastability(const Options& o)
{
    ExperimentConfig h = preset("metastable");
    h.stop_count = 0;
    apply_setting(h, "dx", dx_text(o.long_dx));
    ExperimentConfig p = h;
    p.model = ModelKind::Parabolic;
    std::vector<RunReport> reports(2);
    const ExperimentConfig cfgs[2] = {h, p};
#pragma omp parallel for schedule(dynamic, 1)
    for (int k = 0; k < 2; ++k) reports[k] = run(cfgs[k]);
    write_run(o.out / "metastable", "hyperbolic_", reports[0]);
    write_run(o.out / "metastable", "parabolic_", reports[1]);
    const auto pt = bump_transitions(reports[1]);
    double worst_late = 0.0;
    for (const SeriesPoint& s : reports[0].series)
        if (s.t > 30.0) worst_late = std::max(worst_late, s.residual);
    const std::size_t regions = reports[0].final_bumps().count;
    const bool pass = pt.size() >= 2 && pt.back().t > 250.0 && worst_late < 1e-10 && regions == 3;
    return {pass, fmt("parabolic: %zu transitions, last at t=%.1f; hyperbolic: max residual after t=30 %.2e, %zu regions",
                      pt.size(), pt.empty() ? 0.0 : pt.back().t, worst_late, regions)};
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Acceptance checks for the chemotaxis solvers"};
    Options o;
    std::string out = o.out.string();
    std::vector<int> only;
    app.add_option("--out", out, "directory for run outputs")->capture_default_str();
    app.add_option("--only", only, "criteria to run, e.g. --only 1,2,3")->delimiter(',');
    app.add_option("--parabolic-dx", o.parabolic_dx, "mesh of the parabolic two-bumps run")->capture_default_str();
    app.add_flag("--long", o.long_runs, "also run the metastability check (hours)");
    app.add_option("--long-dx", o.long_dx, "mesh of the metastability runs")->capture_default_str();
    CLI11_PARSE(app, argc, argv);
    o.out = out;

    const std::vector<std::pair<int, std::function<Verdict()>>> checks{
        {1, well_balanced},
        {2, flux_oracles},
        {3, strong_consistency},
        {4, ap_probe},
        {5, stationary_solver},
        {6, [&] { return model_comparison(o); }},
        {7, [&] { return damping_modes(o); }},
        {9, [&] { return mesh_verdicts(o); }},
        {8, [&] { return conservation(o); }},
        {10, [&] { return metastability(o); }},
    };
    const std::set<int> selected(only.begin(), only.end());
    if (selected.count(8) && !(selected.count(6) && selected.count(7) && selected.count(9)))
        std::fprintf(stderr, "note: criterion 8 checks the runs of criteria 6, 7 and 9 as well\n");

    std::map<int, std::string> lines;
    bool all = true;
    for (const auto& [id, check] : checks) {
        if (!selected.empty() && !selected.count(id)) continue;
        if (id == 10 && !o.long_runs) {
            lines[id] = "criterion 10: SKIP (long-running; enable with --long)";
            continue;
        }
        std::fprintf(stderr, "running criterion %d ...\n", id);
        const auto start = std::chrono::steady_clock::now();
        Verdict v;
        try {
            v = check();
        } catch (const std::exception& e) {
            v = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        all = all && v.pass;
        lines[id] = fmt("criterion %d: %s  %s [%.1f s]", id, v.pass ? "PASS" : "FAIL", v.detail.c_str(), secs);
        std::fprintf(stderr, "  %s after %.1f s\n", v.pass ? "PASS" : "FAIL", secs);
    }
    for (const auto& [id, line] : lines) std::printf("%s\n", line.c_str());
    return all ? 0 : 1;
}
