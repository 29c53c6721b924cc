#include "chemotaxis/hyperbolic.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace chemotaxis {

namespace {

struct CellValues {
    double rho, u, phi;
};

struct PairReconstruction {
    double rho_minus, rho_plus;
};

double positive(double x) { return x > 0.0 ? x : 0.0; }
double negative(double x) { return x < 0.0 ? x : 0.0; }

/// Interface densities between a left cell and a right cell.
PairReconstruction reconstruct_pair(const CellValues& l, const CellValues& r, const ModelParams& params,
                                    const PressureLaw& law, double dx, ReconstructionKind kind,
                                    DampingMode mode)
{
    const double phi_min = std::min(l.phi, r.phi);
    const bool explicit_damping = mode == DampingMode::ExplicitInReconstruction;
    if (kind == ReconstructionKind::E) {
        double left = law.enthalpy(l.rho) + params.chi * (phi_min - l.phi);
        double right = law.enthalpy(r.rho) + params.chi * (phi_min - r.phi);
        if (explicit_damping) {
            left -= params.alpha * positive(l.u) * dx;
            right += params.alpha * negative(r.u) * dx;
        }
        return {law.inverse_enthalpy(positive(left)), law.inverse_enthalpy(positive(right))};
    }
    const double rho_bar = 0.5 * (l.rho + r.rho);
    double left = law.pressure(l.rho) + params.chi * rho_bar * (phi_min - l.phi);
    double right = law.pressure(r.rho) + params.chi * rho_bar * (phi_min - r.phi);
    if (explicit_damping) {
        left -= params.alpha * l.rho * positive(l.u) * dx;
        right += params.alpha * r.rho * negative(r.u) * dx;
    }
    return {law.inverse_pressure(positive(left)), law.inverse_pressure(positive(right))};
}

void check_inputs(const HydroState& state, const CellField& phi)
{
    if (phi.size() != state.size()) throw std::invalid_argument("phi and state sizes differ");
    if (state.size() < 2) throw std::invalid_argument("hyperbolic scheme needs at least two cells");
    if (state.rho.min() < 0.0) throw DomainError("negative density passed to the hyperbolic scheme");
}

/// Cell values with mirrored ghosts: index -1 and N reflect cells 0 and N - 1
/// with negated velocity.
CellValues cell_with_ghosts(const HydroState& state, const CellField& phi, std::span<const double> u,
                            std::ptrdiff_t i)
{
    const auto n = static_cast<std::ptrdiff_t>(state.size());
    if (i < 0) return {state.rho[0], -u[0], phi[0]};
    if (i >= n) return {state.rho[n - 1], -u[n - 1], phi[n - 1]};
    const auto k = static_cast<std::size_t>(i);
    return {state.rho[k], u[k], phi[k]};
}

void cfl_check(double sigma_max, double dt, double dx)
{
    if (!(dt > 0.0) || !std::isfinite(dt)) throw CflViolation("time step must be positive and finite");
    if (sigma_max * dt > dx * (1.0 + 1e-12)) {
        std::ostringstream msg;
        msg << "CFL violation: sigma_max * dt = " << sigma_max * dt << " > dx = " << dx;
        throw CflViolation(msg.str());
    }
}

/// Clamps roundoff-level negative densities and zeroes vacuum momentum.
/// Throws NumericalFailure when the density is negative beyond roundoff.
void finish_state(HydroState& next)
{
    const double eps = vacuum_threshold(next.rho.values());
    for (std::size_t i = 0; i < next.size(); ++i) {
        double& r = next.rho[i];
        if (!std::isfinite(r) || !std::isfinite(next.mom[i]))
            throw NumericalFailure("non-finite state in cell " + std::to_string(i));
        if (r < 0.0) {
            if (r < -eps) throw NumericalFailure("density became negative in cell " + std::to_string(i));
            r = 0.0;
        }
        if (r < eps) next.mom[i] = 0.0;
    }
}

}  // namespace

std::string to_string(ReconstructionKind kind) { return kind == ReconstructionKind::E ? "E" : "P"; }

std::string to_string(DampingMode mode)
{
    return mode == DampingMode::ImplicitUpdate ? "implicit" : "explicit";
}

ReconstructionKind reconstruction_from_string(const std::string& name)
{
    if (name == "E" || name == "e") return ReconstructionKind::E;
    if (name == "P" || name == "p") return ReconstructionKind::P;
    throw std::invalid_argument("unknown reconstruction '" + name + "' (expected E or P)");
}

DampingMode damping_from_string(const std::string& name)
{
    if (name == "implicit") return DampingMode::ImplicitUpdate;
    if (name == "explicit") return DampingMode::ExplicitInReconstruction;
    throw std::invalid_argument("unknown damping mode '" + name + "' (expected implicit or explicit)");
}

InterfaceStates reconstruct(const HydroState& state, const CellField& phi, const ModelParams& params,
                            ReconstructionKind kind, DampingMode mode, Execution exec)
{
    check_inputs(state, phi);
    const PressureLaw law = params.law();
    const CellField u = state.velocity();
    const double dx = state.grid().dx();
    const std::size_t interfaces = state.size() + 1;
    InterfaceStates out(interfaces);
    for_each_index(exec, interfaces, [&](std::size_t k) {
        const auto i = static_cast<std::ptrdiff_t>(k);
        const CellValues l = cell_with_ghosts(state, phi, u.values(), i - 1);
        const CellValues r = cell_with_ghosts(state, phi, u.values(), i);
        const PairReconstruction rec = reconstruct_pair(l, r, params, law, dx, kind, mode);
        out.rho_minus[k] = rec.rho_minus;
        out.rho_plus[k] = rec.rho_plus;
        out.u_minus[k] = l.u;
        out.u_plus[k] = r.u;
    });
    return out;
}

CellField upwinded_source(const InterfaceStates& iface, const Grid& grid, const PressureLaw& law)
{
    if (iface.size() != grid.size() + 1) throw std::invalid_argument("interface count must be N + 1");
    CellField s(grid);
    for (std::size_t i = 0; i < grid.size(); ++i)
        s[i] = law.pressure(iface.rho_minus[i + 1]) - law.pressure(iface.rho_plus[i]);
    return s;
}

InterfaceFluxes interface_fluxes(const HydroState& state, const CellField& phi,
                                 const ModelParams& params, const SchemeConfig& scheme, Execution exec)
{
    InterfaceFluxes out{reconstruct(state, phi, params, scheme.reconstruction, scheme.damping, exec), {}, 0.0};
    const PressureLaw law = params.law();
    const std::size_t interfaces = out.states.size();
    out.flux.resize(interfaces);
    const InterfaceStates& st = out.states;
    for_each_index(exec, interfaces, [&](std::size_t k) {
        out.flux[k] = numerical_flux(scheme.flux, {st.rho_minus[k], st.u_minus[k]},
                                     {st.rho_plus[k], st.u_plus[k]}, law);
    });
    out.flux.front().f_rho = 0.0;
    out.flux.back().f_rho = 0.0;
    for (const FluxValue& f : out.flux) out.sigma_max = std::max(out.sigma_max, f.sigma);
    return out;
}

double cfl_dt(std::span<const FluxValue> flux, double dx, double cfl_factor, double dt_max)
{
    if (!(cfl_factor > 0.0 && cfl_factor <= 1.0)) throw std::invalid_argument("cfl_factor must lie in (0, 1]");
    double sigma = 0.0;
    for (const FluxValue& f : flux) sigma = std::max(sigma, f.sigma);
    if (sigma == 0.0) return dt_max > 0.0 ? dt_max : dx;
    return cfl_factor * dx / sigma;
}

double cfl_dt(const InterfaceFluxes& fluxes, double dx, const SchemeConfig& scheme)
{
    return cfl_dt(fluxes.flux, dx, scheme.cfl_factor, scheme.dt_max);
}

HydroState apply_update(const HydroState& state, const InterfaceFluxes& fluxes, const ModelParams& params,
                        double dt, DampingMode mode, Execution exec)
{
    const double dx = state.grid().dx();
    cfl_check(fluxes.sigma_max, dt, dx);
    const PressureLaw law = params.law();
    const double ratio = dt / dx;
    const double damping = mode == DampingMode::ImplicitUpdate ? 1.0 / (1.0 + params.alpha * dt) : 1.0;
    HydroState next(state.grid());
    const auto& f = fluxes.flux;
    const auto& st = fluxes.states;
    for_each_index(exec, state.size(), [&](std::size_t i) {
        const double source = law.pressure(st.rho_minus[i + 1]) - law.pressure(st.rho_plus[i]);
        next.rho[i] = state.rho[i] - ratio * (f[i + 1].f_rho - f[i].f_rho);
        next.mom[i] = (state.mom[i] - ratio * (f[i + 1].f_mom - f[i].f_mom) + ratio * source) * damping;
    });
    finish_state(next);
    return next;
}

HydroState hyperbolic_step(const HydroState& state, const CellField& phi, const ModelParams& params,
                           double dt, const SchemeConfig& scheme, Execution exec)
{
    const InterfaceFluxes fluxes = interface_fluxes(state, phi, params, scheme, exec);
    return apply_update(state, fluxes, params, dt, scheme.damping, exec);
}

namespace reference {

HydroState hyperbolic_step(const HydroState& state, const CellField& phi, const ModelParams& params,
                           double dt, const SchemeConfig& scheme)
{
    check_inputs(state, phi);
    const PressureLaw law = params.law();
    const Grid& grid = state.grid();
    const double dx = grid.dx();
    const std::size_t n = state.size();
    const CellField u = state.velocity();

    struct Face {
        PairReconstruction rec;
        FluxValue flux;
    };
    auto face = [&](std::ptrdiff_t left_cell) {
        const CellValues l = cell_with_ghosts(state, phi, u.values(), left_cell);
        const CellValues r = cell_with_ghosts(state, phi, u.values(), left_cell + 1);
        Face out;
        out.rec = reconstruct_pair(l, r, params, law, dx, scheme.reconstruction, scheme.damping);
        out.flux = numerical_flux(scheme.flux, {out.rec.rho_minus, l.u}, {out.rec.rho_plus, r.u}, law);
        if (left_cell < 0 || left_cell + 1 >= static_cast<std::ptrdiff_t>(n)) out.flux.f_rho = 0.0;
        return out;
    };

    double sigma_max = 0.0;
    for (std::ptrdiff_t k = -1; k < static_cast<std::ptrdiff_t>(n); ++k)
        sigma_max = std::max(sigma_max, face(k).flux.sigma);
    cfl_check(sigma_max, dt, dx);

    HydroState next(grid);
    for (std::size_t i = 0; i < n; ++i) {
        const auto c = static_cast<std::ptrdiff_t>(i);
        const Face west = face(c - 1);
        const Face east = face(c);
        double mom = state.mom[i] - dt / dx * (east.flux.f_mom - west.flux.f_mom) +
                     dt / dx * (law.pressure(east.rec.rho_minus) - law.pressure(west.rec.rho_plus));
        if (scheme.damping == DampingMode::ImplicitUpdate) mom *= 1.0 / (1.0 + params.alpha * dt);
        next.rho[i] = state.rho[i] - dt / dx * (east.flux.f_rho - west.flux.f_rho);
        next.mom[i] = mom;
    }
    finish_state(next);
    return next;
}

}  // namespace reference

}  // namespace chemotaxis
