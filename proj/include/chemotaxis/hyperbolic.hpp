#pragma once

#include "chemotaxis/core.hpp"
#include "chemotaxis/parallel.hpp"
#include "chemotaxis/riemann.hpp"

#include <string>
#include <vector>

namespace chemotaxis {

/// E integrates the equilibrium relation in enthalpy form (Psi - chi phi)_x = -alpha u,
/// P integrates it in pressure form P(rho)_x = chi rho phi_x - alpha rho u.
enum class ReconstructionKind { E, P };

/// Where the damping term -alpha rho u enters: inside the interface
/// reconstruction, or as an implicit factor 1 / (1 + alpha dt) on the momentum update.
enum class DampingMode { ExplicitInReconstruction, ImplicitUpdate };

std::string to_string(ReconstructionKind kind);
std::string to_string(DampingMode mode);
ReconstructionKind reconstruction_from_string(const std::string& name);
DampingMode damping_from_string(const std::string& name);

struct SchemeConfig {
    FluxKind flux{};
    ReconstructionKind reconstruction = ReconstructionKind::P;
    DampingMode damping = DampingMode::ImplicitUpdate;
    double cfl_factor = 0.5;
    /// Step used when every interface is at rest in vacuum; non-positive means dx.
    double dt_max = 0.0;
};

/// Reconstructed states at the N + 1 interfaces. Interface k separates cell k - 1
/// (left, "-") from cell k (right, "+"); interfaces 0 and N face the mirrored
/// ghost cells at the walls.
struct InterfaceStates {
    std::vector<double> rho_minus, u_minus, rho_plus, u_plus;

    explicit InterfaceStates(std::size_t interfaces = 0)
        : rho_minus(interfaces), u_minus(interfaces), rho_plus(interfaces), u_plus(interfaces)
    {
    }
    std::size_t size() const { return rho_minus.size(); }
};

struct InterfaceFluxes {
    InterfaceStates states;
    std::vector<FluxValue> flux;
    double sigma_max = 0.0;
};

InterfaceStates reconstruct(const HydroState& state, const CellField& phi, const ModelParams& params,
                            ReconstructionKind kind, DampingMode mode,
                            Execution exec = Execution::Parallel);

/// Momentum source per cell, S_i = P(rho^-_{i+1/2}) - P(rho^+_{i-1/2}).
CellField upwinded_source(const InterfaceStates& iface, const Grid& grid, const PressureLaw& law);

/// Reconstruction plus one flux evaluation per interface. The wall mass fluxes are zero.
InterfaceFluxes interface_fluxes(const HydroState& state, const CellField& phi,
                                 const ModelParams& params, const SchemeConfig& scheme,
                                 Execution exec = Execution::Parallel);

/// cfl_factor dx / max sigma, or dt_max when every sigma vanishes.
double cfl_dt(std::span<const FluxValue> flux, double dx, double cfl_factor, double dt_max);
double cfl_dt(const InterfaceFluxes& fluxes, double dx, const SchemeConfig& scheme);

/// Applies the finite-volume update with precomputed interface fluxes.
/// Throws CflViolation when sigma_max dt > dx.
HydroState apply_update(const HydroState& state, const InterfaceFluxes& fluxes,
                        const ModelParams& params, double dt, DampingMode mode,
                        Execution exec = Execution::Parallel);

/// One forward-Euler step of the well-balanced scheme.
HydroState hyperbolic_step(const HydroState& state, const CellField& phi, const ModelParams& params,
                           double dt, const SchemeConfig& scheme,
                           Execution exec = Execution::Parallel);

namespace reference {

/// Cell-by-cell transcription of the scheme: every cell evaluates both of its
/// interface fluxes itself. Kept as the serial baseline for the interface kernels.
HydroState hyperbolic_step(const HydroState& state, const CellField& phi, const ModelParams& params,
                           double dt, const SchemeConfig& scheme);

}  // namespace reference

}  // namespace chemotaxis
