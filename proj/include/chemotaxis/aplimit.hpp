#pragma once

#include "chemotaxis/core.hpp"
#include "chemotaxis/hyperbolic.hpp"

#include <vector>

namespace chemotaxis {

/// Large-time large-damping variables: eps = 1/alpha, tau = eps t, v = u / eps.
struct RescaledState {
    double eps = 1.0;
    double tau = 0.0;
    CellField rho;
    CellField v;
    CellField phi;

    RescaledState(double epsilon, CellField density, CellField velocity, CellField concentration,
                  double time = 0.0);

    HydroState physical() const;
    static RescaledState from_physical(double epsilon, const HydroState& state, const CellField& phi,
                                       double time);
};

/// Model parameters with alpha replaced by 1 / eps.
ModelParams damped_params(const ModelParams& params, double eps);

/// Largest stable rescaled step: cfl_factor eps dx / sigma_max.
double rescaled_cfl_dt(const RescaledState& rs, const ModelParams& params, const SchemeConfig& scheme);

/// One step in rescaled time: physical step dt = dt_tau / eps with alpha = 1 / eps,
/// followed by the chemoattractant update over the same physical interval.
RescaledState rescaled_step(const RescaledState& rs, const ModelParams& params, double dt_tau,
                            const SchemeConfig& scheme, Execution exec = Execution::Parallel);

/// Interface k (1 <= k <= N - 1) separates cells k - 1 and k.
///   conservative:     G_k = -(P(r_k) - P(r_{k-1}) + chi rbar (phi_{k-1} - phi_k)) / dx
///   non-conservative: H_k = -r_{k-1} (Psi(r_k) - Psi(r_{k-1}) + chi (phi_{k-1} - phi_k)) / dx
/// Both vectors have N + 1 entries with zero walls.
std::vector<double> conservative_limit_flux(const CellField& r, const CellField& phi, const ModelParams& params);
std::vector<double> nonconservative_limit_flux(const CellField& r, const CellField& phi,
                                               const ModelParams& params);

/// Upwinded rescaled velocity that balances the pressure-form reconstruction:
/// r_{k-1} (v_{k-1})_+ + r_k (v_k)_- = G_k wherever the flow does not diverge from a cell.
CellField darcy_velocity(const CellField& r, const CellField& phi, const ModelParams& params);

struct ApProfile {
    CellField r;
    CellField v;
    CellField phi;
};

/// Smooth probe data r = 2 + sin(2 pi x / L), phi = cos(2 pi x / L), v = darcy_velocity.
ApProfile sinusoidal_probe_profile(const Grid& grid, const ModelParams& params);

struct ApProbeRow {
    double eps = 0.0;
    double error_conservative = 0.0;     ///< max |F^rho - eps G|
    double error_nonconservative = 0.0;  ///< max |F^rho - eps H|
};

struct ApProbeResult {
    ReconstructionKind kind = ReconstructionKind::P;
    std::vector<ApProbeRow> rows;
    std::size_t interfaces_used = 0;
    /// Interior interfaces where v does not balance G, or where v changes sign or
    /// stagnates so that u_k - u_{k-1} is not O(eps dx).
    std::size_t interfaces_excluded = 0;
    double closed_form_gap = 0.0;         ///< max |G - H|
    /// Leading-order mass flux left by the enthalpy-form mismatch at eps -> 0,
    /// max r |dx (G / r_up - H / r_{k-1})| / (2 sqrt(P'(r))), from G and H only.
    double nonconservative_floor = 0.0;
    bool strongly_consistent = false;
};

/// Evaluates the interface mass flux of the hyperbolic scheme on rho = r, u = eps v
/// with alpha = 1 / eps and damping inside the reconstruction, for every eps.
/// Errors are maxima over interior interfaces at which v balances G and keeps one sign.
ApProbeResult ap_flux_probe(const CellField& r, const CellField& v, const CellField& phi,
                            const ModelParams& params, const std::vector<double>& eps_list,
                            ReconstructionKind kind, const FluxKind& flux = {},
                            Execution exec = Execution::Parallel);

}  // namespace chemotaxis
