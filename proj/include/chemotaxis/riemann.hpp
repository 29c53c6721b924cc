#pragma once

#include "chemotaxis/core.hpp"

#include <span>
#include <string>

namespace chemotaxis {

/// Primitive state of the isentropic Euler system at one side of an interface.
struct FluidState {
    double rho = 0.0;
    double u = 0.0;
};

/// Numerical flux across one interface together with the solver's speed bound.
struct FluxValue {
    double f_rho = 0.0;
    double f_mom = 0.0;
    double sigma = 0.0;  ///< max |wave speed|; stable when sigma dt <= dx
};

enum class FluxType { HLL, HLLRoe, SuliciuVacuum };

/// Choice of approximate Riemann solver. suliciu_alpha is the speed correction
/// factor of the relaxation solver; a non-positive value means (gamma + 1) / 2.
struct FluxKind {
    FluxType type = FluxType::SuliciuVacuum;
    double suliciu_alpha = 0.0;

    double correction(const PressureLaw& law) const
    {
        return suliciu_alpha > 0.0 ? suliciu_alpha : 0.5 * (law.gamma() + 1.0);
    }
};

std::string to_string(FluxType type);
FluxType flux_type_from_string(const std::string& name);

/// Physical flux F(U) = (rho u, rho u^2 + P(rho)).
FluxValue physical_flux(FluidState s, const PressureLaw& law);

FluxValue hll_flux(FluidState left, FluidState right, const PressureLaw& law);

/// HLL with Roe-averaged wave speed estimates: the averaged sound speed
/// cbar = sqrt((sqrt(R) P'(R) + sqrt(r) P'(r)) / (sqrt(R) + sqrt(r)))
/// and Roe-averaged velocity, which keeps the scheme positive at vacuum.
FluxValue hll_roe_flux(FluidState left, FluidState right, const PressureLaw& law);

/// Suliciu relaxation solver with the vacuum-adapted choice of relaxation
/// speeds (Lagrangian speeds c_l, c_r with the one-sided correction
/// proportional to alpha_s). Vacuum on either side is handled by the
/// c = 0 limit of the intermediate states.
FluxValue suliciu_vacuum_flux(FluidState left, FluidState right, const PressureLaw& law,
                              double alpha_s);

FluxValue numerical_flux(const FluxKind& kind, FluidState left, FluidState right,
                         const PressureLaw& law);

struct StrongConsistencyReport {
    bool passed = true;
    std::size_t pairs_checked = 0;
    std::size_t violations = 0;
    /// Smallest relative separation min(|F - P(r)|, |F - P(R)|) / max(P(r), P(R)) over r != R.
    double worst_separation = 0.0;
    /// Largest relative deviation |F - P(r)| / P(r) over the diagonal r = R.
    double worst_diagonal_error = 0.0;
};

/// Checks that the zero-velocity momentum flux F(r, 0, R, 0) equals neither
/// P(r) nor P(R) when r != R, and equals both when r = R.
StrongConsistencyReport strong_consistency_probe(const FluxKind& kind, const PressureLaw& law,
                                                 std::span<const double> r_grid,
                                                 std::span<const double> R_grid,
                                                 double separation_tol = 1e-10);

}  // namespace chemotaxis
