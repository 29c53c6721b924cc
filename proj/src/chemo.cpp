#include "chemotaxis/chemo.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace chemotaxis {

namespace {

constexpr double kSweepTolerance = 0x1p-53;
constexpr int kMaxSweeps = 8;

/// Second difference with mirrored ghosts.
double laplacian(const CellField& phi, std::size_t i, double inv_dx2)
{
    const std::size_t n = phi.size();
    const double left = i == 0 ? phi[0] : phi[i - 1];
    const double right = i + 1 == n ? phi[n - 1] : phi[i + 1];
    return (left - 2.0 * phi[i] + right) * inv_dx2;
}

/// Fills the matrix of (I - scale * A) where A = D Laplacian - b I.
void fill_operator(TridiagonalSystem& sys, double D, double b, double scale, double inv_dx2)
{
    const std::size_t n = sys.size();
    const double off = -scale * D * inv_dx2;
    for (std::size_t i = 0; i < n; ++i) {
        const double neighbours = (i > 0 ? 1.0 : 0.0) + (i + 1 < n ? 1.0 : 0.0);
        sys.sub[i] = i > 0 ? off : 0.0;
        sys.super[i] = i + 1 < n ? off : 0.0;
        sys.main[i] = 1.0 + scale * (neighbours * D * inv_dx2 + b);
    }
}

}  // namespace

bool TridiagonalSystem::diagonally_dominant() const
{
    for (std::size_t i = 0; i < size(); ++i)
        if (std::abs(main[i]) < std::abs(sub[i]) + std::abs(super[i])) return false;
    return true;
}

std::vector<double> TridiagonalSystem::solve() const
{
    const std::size_t n = size();
    if (n == 0) return {};
    std::vector<double> c(n), d(n);
    double pivot = main[0];
    if (pivot == 0.0) throw std::runtime_error("tridiagonal solve: zero pivot");
    c[0] = super[0] / pivot;
    d[0] = rhs[0] / pivot;
    for (std::size_t i = 1; i < n; ++i) {
        pivot = main[i] - sub[i] * c[i - 1];
        if (pivot == 0.0) throw std::runtime_error("tridiagonal solve: zero pivot");
        c[i] = super[i] / pivot;
        d[i] = (rhs[i] - sub[i] * d[i - 1]) / pivot;
    }
    std::vector<double> x(n);
    x[n - 1] = d[n - 1];
    for (std::size_t i = n - 1; i-- > 0;) x[i] = d[i] - c[i] * x[i + 1];
    return x;
}

CellField chemo_step_cn(const CellField& phi, const CellField& rho, const ModelParams& params, double dt)
{
    if (!(dt > 0.0)) throw std::invalid_argument("chemo_step_cn: dt must be positive");
    if (phi.size() != rho.size()) throw std::invalid_argument("chemo_step_cn: size mismatch");
    const double dx = phi.grid().dx();
    const double inv_dx2 = 1.0 / (dx * dx);
    const double half = 0.5 * dt;

    TridiagonalSystem sys(phi.size());
    fill_operator(sys, params.D, params.b, half, inv_dx2);
    for (std::size_t i = 0; i < phi.size(); ++i) {
        const double a_phi = params.D * laplacian(phi, i, inv_dx2) - params.b * phi[i];
        sys.rhs[i] = phi[i] + half * a_phi + dt * params.a * rho[i];
    }
    return CellField(phi.grid(), sys.solve());
}

CrankNicolsonSolver::CrankNicolsonSolver(const Grid& grid, const ModelParams& params)
    : n_(grid.size()), D_(params.D), a_(params.a), b_(params.b), inv_dx2_(1.0 / (grid.dx() * grid.dx())),
      cprime_(grid.size()), inv_pivot_(grid.size()), inv_main_(grid.size()), rhs_(grid.size()),
      work_(grid.size())
{
}

void CrankNicolsonSolver::factor(double dt)
{
    const double half = 0.5 * dt;
    off_ = -half * D_ * inv_dx2_;
    double c_prev = 0.0;
    double min_main = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n_; ++i) {
        const double neighbours = (i > 0 ? 1.0 : 0.0) + (i + 1 < n_ ? 1.0 : 0.0);
        const double main = 1.0 + half * (neighbours * D_ * inv_dx2_ + b_);
        min_main = std::min(min_main, main);
        inv_main_[i] = 1.0 / main;
        const double pivot = main - (i > 0 ? off_ * c_prev : 0.0);
        inv_pivot_[i] = 1.0 / pivot;
        cprime_[i] = i + 1 < n_ ? off_ * inv_pivot_[i] : 0.0;
        c_prev = cprime_[i];
    }
    // The Jacobi error contracts by q per sweep; the first guess is already off by q.
    const double q = 2.0 * std::abs(off_) / min_main;
    sweeps_ = 0;
    if (n_ > 2 && q > 0.0 && q < 1.0) {
        const int needed = static_cast<int>(std::ceil(std::log(kSweepTolerance) / std::log(q)));
        if (needed <= kMaxSweeps) sweeps_ = std::max(needed, 1);
    }
    dt_ = dt;
}

void CrankNicolsonSolver::advance(std::span<double> phi, std::span<const double> rho, double dt)
{
    if (!(dt > 0.0)) throw std::invalid_argument("CrankNicolsonSolver: dt must be positive");
    if (phi.size() != n_ || rho.size() != n_) throw std::invalid_argument("CrankNicolsonSolver: size mismatch");
    if (dt != dt_) factor(dt);
    const double half = 0.5 * dt;
    const double source = dt * a_;
    const double diag = 1.0 - half * b_;
    const double hd = half * D_ * inv_dx2_;
    if (n_ == 1) {
        rhs_[0] = diag * phi[0] + source * rho[0];
    } else {
        rhs_[0] = diag * phi[0] + hd * (phi[1] - phi[0]) + source * rho[0];
        for (std::size_t i = 1; i + 1 < n_; ++i)
            rhs_[i] = diag * phi[i] + hd * (phi[i - 1] - 2.0 * phi[i] + phi[i + 1]) + source * rho[i];
        rhs_[n_ - 1] = diag * phi[n_ - 1] + hd * (phi[n_ - 2] - phi[n_ - 1]) + source * rho[n_ - 1];
    }

    if (sweeps_ > 0) {
        double* x = phi.data();
        double* y = work_.data();
        for (std::size_t i = 0; i < n_; ++i) x[i] = rhs_[i] * inv_main_[i];
        for (int s = 0; s < sweeps_; ++s) {
            y[0] = (rhs_[0] - off_ * x[1]) * inv_main_[0];
            for (std::size_t i = 1; i + 1 < n_; ++i) y[i] = (rhs_[i] - off_ * (x[i - 1] + x[i + 1])) * inv_main_[i];
            y[n_ - 1] = (rhs_[n_ - 1] - off_ * x[n_ - 2]) * inv_main_[n_ - 1];
            std::swap(x, y);
        }
        if (x != phi.data()) std::copy(x, x + n_, phi.data());
        return;
    }

    rhs_[0] *= inv_pivot_[0];
    for (std::size_t i = 1; i < n_; ++i) rhs_[i] = (rhs_[i] - off_ * rhs_[i - 1]) * inv_pivot_[i];
    phi[n_ - 1] = rhs_[n_ - 1];
    for (std::size_t i = n_ - 1; i-- > 0;) phi[i] = rhs_[i] - cprime_[i] * phi[i + 1];
}

CellField chemo_solve_elliptic(const CellField& rho, const ModelParams& params)
{
    if (!(params.b > 0.0)) throw std::invalid_argument("elliptic chemoattractant solve needs b > 0");
    const double dx = rho.grid().dx();
    const double inv_dx2 = 1.0 / (dx * dx);
    TridiagonalSystem sys(rho.size());
    // -D phi_xx + b phi = a rho, scaled by 1/b so the matrix has the (I - A/b) form.
    fill_operator(sys, params.D, params.b, 1.0 / params.b, inv_dx2);
    for (std::size_t i = 0; i < rho.size(); ++i) {
        sys.main[i] -= 1.0;
        sys.rhs[i] = params.a * rho[i] / params.b;
    }
    return CellField(rho.grid(), sys.solve());
}

CellField chemo_update(const CellField& phi, const CellField& rho, const ModelParams& params, double dt)
{
    return params.delta == 1 ? chemo_step_cn(phi, rho, params, dt) : chemo_solve_elliptic(rho, params);
}

CellField phi_gradient(const CellField& phi)
{
    const std::size_t n = phi.size();
    if (n < 2) throw std::invalid_argument("phi_gradient needs at least two cells");
    const double inv = 1.0 / (2.0 * phi.grid().dx());
    CellField g(phi.grid());
    for (std::size_t i = 0; i < n; ++i) {
        const double left = i == 0 ? phi[0] : phi[i - 1];
        const double right = i + 1 == n ? phi[n - 1] : phi[i + 1];
        g[i] = (right - left) * inv;
    }
    return g;
}

CellField chemo_residual(const CellField& phi, const CellField& rho, const ModelParams& params)
{
    const double dx = phi.grid().dx();
    const double inv_dx2 = 1.0 / (dx * dx);
    CellField r(phi.grid());
    for (std::size_t i = 0; i < phi.size(); ++i)
        r[i] = params.D * laplacian(phi, i, inv_dx2) + params.a * rho[i] - params.b * phi[i];
    return r;
}

}  // namespace chemotaxis
