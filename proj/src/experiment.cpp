#include "chemotaxis/experiment.hpp"

#include "chemotaxis/chemo.hpp"
#include "chemotaxis/hyperbolic.hpp"
#include "chemotaxis/parabolic.hpp"
#include "chemotaxis/stationary.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <numbers>

namespace chemotaxis {

double residual(const CellField& rho_next, const CellField& rho)
{
    return max_abs_diff(rho_next.values(), rho.values());
}

BumpCount count_bumps(const CellField& rho, double rel_threshold)
{
    if (!(rel_threshold > 0.0 && rel_threshold < 1.0)) throw std::invalid_argument("rel_threshold must lie in (0, 1)");
    BumpCount out;
    const double peak = rho.max();
    if (!(peak > 0.0)) return out;
    const double cut = rel_threshold * peak;
    const std::size_t n = rho.size();
    std::size_t i = 0;
    while (i < n) {
        if (!(rho[i] > cut)) {
            ++i;
            continue;
        }
        BumpRun run{i, i, false};
        while (run.last + 1 < n && rho[run.last + 1] > cut) ++run.last;
        run.touches_wall = run.first == 0 || run.last + 1 == n;
        out.runs.push_back(run);
        i = run.last + 1;
    }
    out.count = out.runs.size();
    out.wall_touching = static_cast<std::size_t>(
        std::count_if(out.runs.begin(), out.runs.end(), [](const BumpRun& r) { return r.touches_wall; }));
    return out;
}

double RunReport::final_momentum_max() const
{
    double m = 0.0;
    for (std::size_t i = 0; i < final_state.rho.size(); ++i)
        m = std::max(m, std::abs(final_state.rho[i] * final_state.u[i]));
    return m;
}

BumpCount RunReport::final_bumps() const { return count_bumps(final_state.rho, config.bump_threshold); }

Snapshot initial_state(const ExperimentConfig& cfg)
{
    cfg.validate();
    const Grid grid = cfg.grid();
    const ModelParams& p = cfg.params;
    Snapshot s{0.0, CellField(grid), CellField(grid), CellField(grid)};
    switch (cfg.initial) {
    case InitialKind::Sinusoid: {
        const double L = cfg.length;
        s.rho = CellField::sample(grid, [&](double x) {
            return std::max(0.0, cfg.rho_mean + std::sin(4.0 * std::numbers::pi * std::abs(x - 0.25 * L)));
        });
        break;
    }
    case InitialKind::Constant:
        s.rho = CellField(grid, cfg.rho_mean);
        s.phi = CellField(grid, p.a * cfg.rho_mean / p.b);
        break;
    case InitialKind::TwoBumps: {
        const double w = cfg.bump_length;
        std::vector<Placement> pieces{
            {half_bump(w, cfg.mass_left, p, Orientation::LeftAnchored), 0.0},
            {half_bump(w, cfg.mass_right, p, Orientation::RightAnchored), cfg.length - w},
        };
        auto [rho, phi] = concatenate(pieces, grid);
        s.rho = std::move(rho);
        s.phi = std::move(phi);
        break;
    }
    case InitialKind::HalfBump: {
        const StationaryProfile prof = half_bump(cfg.length, cfg.mass, p, Orientation::LeftAnchored);
        s.rho = prof.sample_rho(grid);
        s.phi = prof.sample_phi(grid);
        break;
    }
    case InitialKind::CentralBump: {
        const StationaryProfile prof = central_bump(cfg.length, cfg.mass, p);
        s.rho = prof.sample_rho(grid);
        s.phi = prof.sample_phi(grid);
        break;
    }
    }
    return s;
}

namespace {

/// Output bookkeeping shared by both time loops.
class Recorder {
public:
    Recorder(const ExperimentConfig& cfg, RunReport& report) : cfg_(cfg), report_(report) {}

    void start(const Snapshot& s)
    {
        report_.initial_mass = total_mass(s.rho);
        report_.min_rho = s.rho.min();
        record(s.t, 0.0, s.rho);
    }

    bool output_due(double t, bool last) const { return last || t >= next_output() * (1.0 - 1e-12); }
    bool snapshot_due(double t) const
    {
        return cfg_.snapshot_interval > 0.0 &&
               t >= static_cast<double>(snapshots_ + 1) * cfg_.snapshot_interval * (1.0 - 1e-12);
    }

    /// Returns true when the residual stop rule fires.
    bool output(double t, double res, const CellField& rho)
    {
        record(t, res, rho);
        while (next_output() * (1.0 - 1e-12) <= t) ++outputs_;
        if (cfg_.stop_count == 0) return false;
        below_ = res < cfg_.stop_threshold ? below_ + 1 : 0;
        return below_ >= cfg_.stop_count;
    }

    void snapshot(Snapshot s)
    {
        report_.snapshots.push_back(std::move(s));
        while (static_cast<double>(snapshots_ + 1) * cfg_.snapshot_interval * (1.0 - 1e-12) <= report_.snapshots.back().t)
            ++snapshots_;
    }

private:
    double next_output() const { return static_cast<double>(outputs_ + 1) * cfg_.output_interval; }

    void record(double t, double res, const CellField& rho)
    {
        const BumpCount b = count_bumps(rho, cfg_.bump_threshold);
        SeriesPoint p{t, res, total_mass(rho), b.count, b.wall_touching, rho.min()};
        report_.min_rho = std::min(report_.min_rho, p.min_rho);
        if (report_.initial_mass > 0.0)
            report_.max_mass_drift =
                std::max(report_.max_mass_drift, std::abs(p.mass - report_.initial_mass) / report_.initial_mass);
        report_.series.push_back(p);
    }

    const ExperimentConfig& cfg_;
    RunReport& report_;
    std::size_t outputs_ = 0;
    std::size_t snapshots_ = 0;
    int below_ = 0;
};

/// Shortens the step to land on t_end; returns true for the final step.
bool clip_to_end(double t, double t_end, double& dt)
{
    if (t + dt >= t_end * (1.0 - 1e-14)) {
        dt = t_end - t;
        return true;
    }
    return false;
}

void run_hyperbolic(const ExperimentConfig& cfg, Snapshot s, RunReport& report)
{
    Recorder rec(cfg, report);
    rec.start(s);
    const double dx = cfg.dx();
    CellField mom(s.rho.grid());
    for (std::size_t i = 0; i < mom.size(); ++i) mom[i] = s.rho[i] * s.u[i];
    HydroState state(s.rho, std::move(mom));
    state.enforce_vacuum();
    CellField phi = s.phi;
    double t = 0.0;
    while (t < cfg.t_end) {
        const InterfaceFluxes fluxes = interface_fluxes(state, phi, cfg.params, cfg.scheme, cfg.execution);
        double dt = cfl_dt(fluxes, dx, cfg.scheme);
        const bool last = clip_to_end(t, cfg.t_end, dt);
        HydroState next = apply_update(state, fluxes, cfg.params, dt, cfg.scheme.damping, cfg.execution);
        phi = chemo_update(phi, state.rho, cfg.params, dt);
        const double res = residual(next.rho, state.rho);
        state = std::move(next);
        t = last ? cfg.t_end : t + dt;
        ++report.steps;
        if (!last && rec.snapshot_due(t)) rec.snapshot({t, state.rho, state.velocity(), phi});
        if (rec.output_due(t, last) && rec.output(t, res, state.rho) && !last) {
            report.converged = true;
            break;
        }
    }
    report.final_state = {t, state.rho, state.velocity(), phi};
}

void run_parabolic(const ExperimentConfig& cfg, Snapshot s, RunReport& report)
{
    Recorder rec(cfg, report);
    rec.start(s);
    const Grid grid = s.rho.grid();
    std::vector<double> rho = s.rho.vector();
    std::vector<double> phi = s.phi.vector();
    ParabolicStepper stepper(grid, cfg.params, cfg.beta, cfg.safety, cfg.execution);
    const CellField zero(grid);
    double t = 0.0;
    while (t < cfg.t_end) {
        const double remaining = cfg.t_end - t;
        const ParabolicStepResult step = stepper.step(rho, phi, remaining);
        const bool last = step.dt >= remaining * (1.0 - 1e-14);
        t = last ? cfg.t_end : t + step.dt;
        ++report.steps;
        const bool snap = !last && rec.snapshot_due(t);
        const bool out = rec.output_due(t, last);
        if (!snap && !out) continue;
        const CellField density(grid, rho);
        if (snap) rec.snapshot({t, density, zero, CellField(grid, phi)});
        if (out && rec.output(t, step.residual, density) && !last) {
            report.converged = true;
            break;
        }
    }
    report.final_state = {t, CellField(grid, rho), zero, CellField(grid, phi)};
}

}  // namespace

RunReport run(const ExperimentConfig& cfg)
{
    const auto start = std::chrono::steady_clock::now();
    RunReport report;
    report.config = cfg;
    Snapshot s = initial_state(cfg);
    if (cfg.model == ModelKind::Hyperbolic)
        run_hyperbolic(cfg, std::move(s), report);
    else
        run_parabolic(cfg, std::move(s), report);
    report.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return report;
}

std::vector<Transition> bump_transitions(const RunReport& report)
{
    std::vector<Transition> out;
    for (std::size_t k = 1; k < report.series.size(); ++k) {
        const SeriesPoint& a = report.series[k - 1];
        const SeriesPoint& b = report.series[k];
        if (a.bumps != b.bumps) out.push_back({b.t, a.bumps, b.bumps});
    }
    return out;
}

double profile_distance(const CellField& a, const CellField& b)
{
    const CellField& coarse = a.size() <= b.size() ? a : b;
    const CellField& fine = a.size() <= b.size() ? b : a;
    const Grid& gc = coarse.grid();
    const Grid& gf = fine.grid();
    if (std::abs(gc.length() - gf.length()) > 1e-12 * gc.length())
        throw std::invalid_argument("profiles live on different domains");
    const double scale = std::max(coarse.max(), fine.max());
    if (!(scale > 0.0)) return 0.0;
    double d = 0.0;
    const double hf = gf.dx();
    for (std::size_t i = 0; i < coarse.size(); ++i) {
        const double s = gc.center(i) / hf - 0.5;
        double value;
        if (s <= 0.0) {
            value = fine[0];
        } else if (s >= static_cast<double>(fine.size() - 1)) {
            value = fine[fine.size() - 1];
        } else {
            const auto j = static_cast<std::size_t>(s);
            const double w = s - static_cast<double>(j);
            value = (1.0 - w) * fine[j] + w * fine[j + 1];
        }
        d = std::max(d, std::abs(coarse[i] - value));
    }
    return d / scale;
}

namespace {

/// Runs every configuration; each run owns its state. The first failure is rethrown.
std::vector<RunReport> run_all(const std::vector<ExperimentConfig>& configs)
{
    std::vector<RunReport> reports(configs.size());
    std::vector<std::exception_ptr> errors(configs.size());
    const auto n = static_cast<std::ptrdiff_t>(configs.size());
#pragma omp parallel for schedule(dynamic, 1)
    for (std::ptrdiff_t k = 0; k < n; ++k) {
        try {
            ExperimentConfig c = configs[static_cast<std::size_t>(k)];
            c.execution = Execution::Serial;
            reports[static_cast<std::size_t>(k)] = run(c);
        } catch (...) {
            errors[static_cast<std::size_t>(k)] = std::current_exception();
        }
    }
    for (const auto& e : errors)
        if (e) std::rethrow_exception(e);
    return reports;
}

}  // namespace

MeshStudy mesh_refinement_study(const ExperimentConfig& base, const std::vector<double>& dx_list, double profile_tol)
{
    if (dx_list.empty()) throw std::invalid_argument("dx_list must not be empty");
    for (std::size_t k = 1; k < dx_list.size(); ++k)
        if (!(dx_list[k] < dx_list[k - 1])) throw std::invalid_argument("dx_list must be decreasing");
    std::vector<ExperimentConfig> configs;
    for (double dx : dx_list) {
        ExperimentConfig c = base;
        char text[32];
        std::snprintf(text, sizeof text, "%.17g", dx);
        apply_setting(c, "dx", text);
        configs.push_back(c);
    }
    MeshStudy study;
    study.dx = dx_list;
    study.reports = run_all(configs);
    for (const RunReport& r : study.reports) study.bumps.push_back(r.final_bumps().count);
    for (std::size_t k = 0; k + 1 < study.reports.size(); ++k) {
        const double d = profile_distance(study.reports[k].final_state.rho, study.reports[k + 1].final_state.rho);
        study.distance_to_next.push_back(d);
        if (!study.verdict && study.bumps[k] == study.bumps[k + 1] && d <= profile_tol) study.verdict = k;
    }
    if (study.reports.size() == 1) study.verdict = 0;
    return study;
}

ModelComparison compare_models(const ExperimentConfig& cfg, double profile_tol)
{
    ExperimentConfig h = cfg;
    h.model = ModelKind::Hyperbolic;
    ExperimentConfig p = cfg;
    p.model = ModelKind::Parabolic;
    std::vector<RunReport> reports = run_all({h, p});
    ModelComparison out;
    out.hyperbolic = std::move(reports[0]);
    out.parabolic = std::move(reports[1]);
    out.hyperbolic_transitions = bump_transitions(out.hyperbolic);
    out.parabolic_transitions = bump_transitions(out.parabolic);
    out.profile_distance = profile_distance(out.hyperbolic.final_state.rho, out.parabolic.final_state.rho);
    out.same_asymptotic_state = out.hyperbolic.final_bumps().count == out.parabolic.final_bumps().count &&
                                out.profile_distance <= profile_tol;
    return out;
}

}  // namespace chemotaxis
