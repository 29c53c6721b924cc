#pragma once

#include "chemotaxis/chemo.hpp"
#include "chemotaxis/core.hpp"
#include "chemotaxis/parallel.hpp"

#include <algorithm>
#include <vector>

namespace chemotaxis {

/// Relaxation parameters of the diffusive BGK scheme.
struct BgkParameters {
    double theta = 0.0;  ///< bound on sqrt(P'(rho) / (1 - beta))
    double lambda = 0.0; ///< kinetic velocity, >= chi max|phi_x| / beta
    double beta = 0.95;
};

inline constexpr double kLambdaFloor = 1e-8;

/// theta and lambda from the current maxima of P'(rho) and |phi_x|.
/// theta never drops below sqrt(P'(eps_vac) / (1 - beta)), lambda never below kLambdaFloor.
BgkParameters bgk_parameters(const CellField& rho, const CellField& phi, const ModelParams& params,
                             double beta = 0.95);

/// safety * min(dx / lambda, dx^2 / (2 theta^2))
double parabolic_cfl(const BgkParameters& bgk, double dx, double safety);

/// Per-interface fluxes F_{i+1/2} for i = 0..N (walls at 0 and N are zero).
///   F = (1/dx - lambda/(2 theta^2)) (P_{i+1} - P_i) + lambda/2 (rho_{i+1} - rho_i)
///       - (A_i + A_{i+1}) / 2,     A_i = chi rho_i (phi_{i+1} - phi_{i-1}) / (2 dx)
/// Throws NumericalFailure when the pressure coefficient is negative, unless lambda
/// is at its floor, in which case the coefficient is taken as 0.
std::vector<double> bgk_fluxes(const CellField& rho, const CellField& phi, const ModelParams& params,
                               const BgkParameters& bgk, Execution exec = Execution::Parallel);

/// rho^{n+1}_i = rho^n_i + dt/dx (F_{i+1/2} - F_{i-1/2}).
/// Throws CflViolation when dt exceeds min(dx / lambda, dx^2 / (2 theta^2)).
CellField bgk_step(const CellField& rho, const CellField& phi, const ModelParams& params,
                   const BgkParameters& bgk, double dt, Execution exec = Execution::Parallel);

struct ParabolicStepResult {
    double dt = 0.0;
    double residual = 0.0;  ///< max |rho^{n+1} - rho^n|
};

/// Fused BGK density step and Crank-Nicolson (or elliptic) chemoattractant
/// update with buffers reused across steps. theta and lambda are recomputed
/// from the current state every step.
class ParabolicStepper {
public:
    ParabolicStepper(const Grid& grid, const ModelParams& params, double beta, double safety,
                     Execution exec = Execution::Serial);

    /// Advances rho and phi in place by min(dt_cap, d), where d is safety times the
    /// stable step rounded down to a power of 2^(1/32).
    /// Density updates are compensated: the rounding error of each cell update is
    /// carried into the next step, so mass is conserved to roundoff over any number
    /// of steps. Call reset_carry() before stepping an unrelated state.
    ParabolicStepResult step(std::vector<double>& rho, std::vector<double>& phi, double dt_cap);

    void reset_carry() { std::fill(carry_.begin(), carry_.end(), 0.0); }

    const BgkParameters& last_parameters() const { return bgk_; }

private:
    Grid grid_;
    ModelParams params_;
    PressureLaw law_;
    double beta_, safety_;
    Execution exec_;
    CrankNicolsonSolver cn_;
    BgkParameters bgk_{};
    std::vector<double> pressure_, chem_, flux_, next_, carry_;
};

namespace reference {

/// Expanded per-cell form of bgk_step: three-point stencils, no flux array.
CellField bgk_step(const CellField& rho, const CellField& phi, const ModelParams& params,
                   const BgkParameters& bgk, double dt);

}  // namespace reference

}  // namespace chemotaxis
