#pragma once

#include "chemotaxis/core.hpp"

#include <span>
#include <vector>

namespace chemotaxis {

/// sub[i] x[i-1] + main[i] x[i] + super[i] x[i+1] = rhs[i]; sub[0] and super[N-1] are unused.
struct TridiagonalSystem {
    std::vector<double> sub, main, super, rhs;

    explicit TridiagonalSystem(std::size_t n = 0) : sub(n), main(n), super(n), rhs(n) {}
    std::size_t size() const { return main.size(); }

    bool diagonally_dominant() const;
    /// Thomas elimination. Throws std::runtime_error on a zero pivot.
    std::vector<double> solve() const;
};

/// Crank-Nicolson step of phi_t = D phi_xx + a rho - b phi with Neumann walls.
/// Diffusion and decay are averaged between t_n and t_{n+1}; production a rho
/// is taken at t_n.
CellField chemo_step_cn(const CellField& phi, const CellField& rho, const ModelParams& params, double dt);

/// Crank-Nicolson stepper with reusable buffers. The elimination coefficients
/// are kept between calls with the same dt.
class CrankNicolsonSolver {
public:
    CrankNicolsonSolver(const Grid& grid, const ModelParams& params);

    /// Same update as chemo_step_cn, in place. When the off-diagonal coupling is
    /// weak enough for a few Jacobi sweeps to reach roundoff, the system is solved
    /// by sweeps instead of elimination.
    void advance(std::span<double> phi, std::span<const double> rho, double dt);

    /// Jacobi sweeps used for the current dt; 0 means Thomas elimination.
    int sweeps() const { return sweeps_; }

private:
    void factor(double dt);

    std::size_t n_;
    double D_, a_, b_, inv_dx2_;
    double dt_ = -1.0;
    double off_ = 0.0;
    int sweeps_ = 0;
    std::vector<double> cprime_, inv_pivot_, inv_main_, rhs_, work_;
};

/// Steady problem D phi_xx - b phi = -a rho with Neumann walls.
CellField chemo_solve_elliptic(const CellField& rho, const ModelParams& params);

/// Either a Crank-Nicolson step (delta = 1) or the elliptic solve (delta = 0).
CellField chemo_update(const CellField& phi, const CellField& rho, const ModelParams& params, double dt);

/// Centered difference (phi_{i+1} - phi_{i-1}) / (2 dx) with mirrored ghosts.
CellField phi_gradient(const CellField& phi);

/// D (phi_{i+1} - 2 phi_i + phi_{i-1}) / dx^2 + a rho_i - b phi_i with mirrored ghosts.
CellField chemo_residual(const CellField& phi, const CellField& rho, const ModelParams& params);

}  // namespace chemotaxis
