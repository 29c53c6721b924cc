#include "chemotaxis/aplimit.hpp"

#include "chemotaxis/chemo.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <utility>

namespace chemotaxis {

namespace {

constexpr double kBalanceTol = 1e-12;

double positive(double x) { return x > 0.0 ? x : 0.0; }
double negative(double x) { return x < 0.0 ? x : 0.0; }

void check_eps(double eps)
{
    if (!(eps > 0.0) || !std::isfinite(eps)) throw std::invalid_argument("eps must be positive and finite");
}

/// Mismatch of the pressure-form balance at interior interface k.
double balance_residual(const CellField& r, const CellField& v, const std::vector<double>& G, std::size_t k)
{
    return r[k - 1] * positive(v[k - 1]) + r[k] * negative(v[k]) - G[k];
}

std::vector<double> log_grid(double lo, double hi, std::size_t n)
{
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i)
        out[i] = lo * std::pow(hi / lo, static_cast<double>(i) / static_cast<double>(n - 1));
    return out;
}

}  // namespace

RescaledState::RescaledState(double epsilon, CellField density, CellField velocity, CellField concentration,
                             double time)
    : eps(epsilon), tau(time), rho(std::move(density)), v(std::move(velocity)), phi(std::move(concentration))
{
    check_eps(eps);
    if (rho.size() != v.size() || rho.size() != phi.size())
        throw std::invalid_argument("rescaled fields must share one grid");
}

HydroState RescaledState::physical() const
{
    CellField mom(rho.grid());
    for (std::size_t i = 0; i < rho.size(); ++i) mom[i] = rho[i] * eps * v[i];
    return HydroState(rho, std::move(mom));
}

RescaledState RescaledState::from_physical(double epsilon, const HydroState& state, const CellField& phi,
                                           double time)
{
    check_eps(epsilon);
    CellField v = state.velocity();
    for (double& x : v.values()) x /= epsilon;
    return RescaledState(epsilon, state.rho, std::move(v), phi, epsilon * time);
}

ModelParams damped_params(const ModelParams& params, double eps)
{
    check_eps(eps);
    ModelParams p = params;
    p.alpha = 1.0 / eps;
    return p;
}

double rescaled_cfl_dt(const RescaledState& rs, const ModelParams& params, const SchemeConfig& scheme)
{
    const ModelParams p = damped_params(params, rs.eps);
    const InterfaceFluxes f = interface_fluxes(rs.physical(), rs.phi, p, scheme);
    return rs.eps * cfl_dt(f, rs.rho.grid().dx(), scheme);
}

RescaledState rescaled_step(const RescaledState& rs, const ModelParams& params, double dt_tau,
                            const SchemeConfig& scheme, Execution exec)
{
    if (!(dt_tau > 0.0)) throw std::invalid_argument("dt_tau must be positive");
    const ModelParams p = damped_params(params, rs.eps);
    const double dt = dt_tau / rs.eps;
    const HydroState next = hyperbolic_step(rs.physical(), rs.phi, p, dt, scheme, exec);
    const CellField phi = chemo_update(rs.phi, rs.rho, p, dt);
    RescaledState out = RescaledState::from_physical(rs.eps, next, phi, 0.0);
    out.tau = rs.tau + dt_tau;
    return out;
}

std::vector<double> conservative_limit_flux(const CellField& r, const CellField& phi, const ModelParams& params)
{
    const PressureLaw law = params.law();
    const double dx = r.grid().dx();
    std::vector<double> G(r.size() + 1, 0.0);
    for (std::size_t k = 1; k < r.size(); ++k) {
        const double rbar = 0.5 * (r[k - 1] + r[k]);
        G[k] = -(law.pressure(r[k]) - law.pressure(r[k - 1]) + params.chi * rbar * (phi[k - 1] - phi[k])) / dx;
    }
    return G;
}

std::vector<double> nonconservative_limit_flux(const CellField& r, const CellField& phi,
                                               const ModelParams& params)
{
    const PressureLaw law = params.law();
    const double dx = r.grid().dx();
    std::vector<double> H(r.size() + 1, 0.0);
    for (std::size_t k = 1; k < r.size(); ++k)
        H[k] = -r[k - 1] * (law.enthalpy(r[k]) - law.enthalpy(r[k - 1]) + params.chi * (phi[k - 1] - phi[k])) / dx;
    return H;
}

CellField darcy_velocity(const CellField& r, const CellField& phi, const ModelParams& params)
{
    const std::vector<double> G = conservative_limit_flux(r, phi, params);
    const std::size_t n = r.size();
    CellField v(r.grid());
    for (std::size_t i = 0; i < n; ++i) {
        if (!(r[i] > 0.0)) continue;
        const double east = G[i + 1];
        const double west = G[i];
        if (east > 0.0)
            v[i] = east / r[i];
        else if (west < 0.0)
            v[i] = west / r[i];
    }
    return v;
}

ApProfile sinusoidal_probe_profile(const Grid& grid, const ModelParams& params)
{
    const double k = 2.0 * std::numbers::pi / grid.length();
    CellField r = CellField::sample(grid, [k](double x) { return 2.0 + std::sin(k * x); });
    CellField phi = CellField::sample(grid, [k](double x) { return std::cos(k * x); });
    CellField v = darcy_velocity(r, phi, params);
    return ApProfile{std::move(r), std::move(v), std::move(phi)};
}

ApProbeResult ap_flux_probe(const CellField& r, const CellField& v, const CellField& phi,
                            const ModelParams& params, const std::vector<double>& eps_list,
                            ReconstructionKind kind, const FluxKind& flux, Execution exec)
{
    if (r.size() != v.size() || r.size() != phi.size()) throw std::invalid_argument("probe fields must share one grid");
    if (r.min() <= 0.0) throw DomainError("probe density must be positive");
    const PressureLaw law = params.law();
    const std::size_t n = r.size();
    const double dx = r.grid().dx();

    ApProbeResult result;
    result.kind = kind;
    const std::vector<double> probe_densities = log_grid(r.min(), r.max() > r.min() ? r.max() : 2.0 * r.min(), 24);
    result.strongly_consistent = strong_consistency_probe(flux, law, probe_densities, probe_densities).passed;

    const std::vector<double> G = conservative_limit_flux(r, phi, params);
    const std::vector<double> H = nonconservative_limit_flux(r, phi, params);
    std::vector<char> used(n + 1, 0);
    for (std::size_t k = 1; k < n; ++k) {
        const double res = balance_residual(r, v, G, k);
        const bool same_direction = v[k - 1] * v[k] > 0.0 || (v[k - 1] == 0.0 && v[k] == 0.0);
        used[k] = same_direction && std::abs(res) <= kBalanceTol * (1.0 + std::abs(G[k]));
        if (used[k]) {
            ++result.interfaces_used;
            result.closed_form_gap = std::max(result.closed_form_gap, std::abs(G[k] - H[k]));
            const double r_up = G[k] >= 0.0 ? r[k - 1] : r[k];
            const double jump = dx * (G[k] / r_up - H[k] / r[k - 1]);
            const double floor = r[k - 1] * std::abs(jump) / (2.0 * law.sound_speed(r[k - 1]));
            result.nonconservative_floor = std::max(result.nonconservative_floor, floor);
        } else {
            ++result.interfaces_excluded;
        }
    }

    SchemeConfig scheme;
    scheme.flux = flux;
    scheme.reconstruction = kind;
    scheme.damping = DampingMode::ExplicitInReconstruction;
    for (double eps : eps_list) {
        const RescaledState rs(eps, r, v, phi);
        const InterfaceFluxes f = interface_fluxes(rs.physical(), phi, damped_params(params, eps), scheme, exec);
        ApProbeRow row;
        row.eps = eps;
        for (std::size_t k = 1; k < n; ++k) {
            if (!used[k]) continue;
            row.error_conservative = std::max(row.error_conservative, std::abs(f.flux[k].f_rho - eps * G[k]));
            row.error_nonconservative = std::max(row.error_nonconservative, std::abs(f.flux[k].f_rho - eps * H[k]));
        }
        result.rows.push_back(row);
    }
    return result;
}

}  // namespace chemotaxis
