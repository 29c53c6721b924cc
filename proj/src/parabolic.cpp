#include "chemotaxis/parabolic.hpp"

#include "chemotaxis/chemo.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace chemotaxis {

namespace {

constexpr double kLadderSteps = 32.0;

double pressure_coefficient(const BgkParameters& bgk, double dx)
{
    const double coeff = 1.0 / dx - bgk.lambda / (2.0 * bgk.theta * bgk.theta);
    // With a flat phi and a density at roundoff level both lambda and theta sit at
    // their floors; the ratio of the floors carries no information.
    if (coeff < 0.0 && bgk.lambda <= kLambdaFloor) return 0.0;
    if (coeff < 0.0) {
        std::ostringstream msg;
        msg << "BGK pressure coefficient 1/dx - lambda/(2 theta^2) = " << coeff
            << " is negative (dx = " << dx << ", lambda = " << bgk.lambda << ", theta = " << bgk.theta << ")";
        throw NumericalFailure(msg.str());
    }
    return coeff;
}

void check_dt(const BgkParameters& bgk, double dx, double dt)
{
    const double bound = std::min(dx / bgk.lambda, dx * dx / (2.0 * bgk.theta * bgk.theta));
    if (!(dt > 0.0) || dt > bound * (1.0 + 1e-12)) {
        std::ostringstream msg;
        msg << "BGK CFL violation: dt = " << dt << " exceeds " << bound;
        throw CflViolation(msg.str());
    }
}

void check_inputs(const CellField& rho, const CellField& phi)
{
    if (rho.size() != phi.size()) throw std::invalid_argument("rho and phi sizes differ");
    if (rho.size() < 2) throw std::invalid_argument("BGK scheme needs at least two cells");
    if (rho.min() < 0.0) throw DomainError("negative density passed to the BGK scheme");
}

CellField finish(CellField next)
{
    const double eps = vacuum_threshold(next.values());
    for (std::size_t i = 0; i < next.size(); ++i) {
        double& r = next[i];
        if (!std::isfinite(r)) throw NumericalFailure("non-finite density in cell " + std::to_string(i));
        if (r < 0.0) {
            if (r < -eps) throw NumericalFailure("density became negative in cell " + std::to_string(i));
            r = 0.0;
        }
    }
    return next;
}

}  // namespace

BgkParameters bgk_parameters(const CellField& rho, const CellField& phi, const ModelParams& params,
                             double beta)
{
    if (!(beta > 0.0 && beta < 1.0)) throw std::invalid_argument("beta must lie in (0, 1)");
    const PressureLaw law = params.law();
    const double eps = vacuum_threshold(rho.values());
    double dp_max = law.dpressure(eps);
    for (double r : rho.values()) dp_max = std::max(dp_max, law.dpressure(r));
    double grad_max = 0.0;
    const CellField grad = phi_gradient(phi);
    for (double g : grad.values()) grad_max = std::max(grad_max, std::abs(g));
    BgkParameters out;
    out.beta = beta;
    out.theta = std::sqrt(dp_max / (1.0 - beta));
    out.lambda = std::max(params.chi * grad_max / beta, kLambdaFloor);
    return out;
}

double parabolic_cfl(const BgkParameters& bgk, double dx, double safety)
{
    if (!(safety > 0.0 && safety <= 1.0)) throw std::invalid_argument("safety must lie in (0, 1]");
    return safety * std::min(dx / bgk.lambda, dx * dx / (2.0 * bgk.theta * bgk.theta));
}

std::vector<double> bgk_fluxes(const CellField& rho, const CellField& phi, const ModelParams& params,
                               const BgkParameters& bgk, Execution exec)
{
    check_inputs(rho, phi);
    const std::size_t n = rho.size();
    const double dx = rho.grid().dx();
    const double c_pressure = pressure_coefficient(bgk, dx);
    const double c_density = 0.5 * bgk.lambda;
    const PressureLaw law = params.law();

    std::vector<double> pressure(n), chem(n);
    const double inv2dx = 1.0 / (2.0 * dx);
    for_each_index(exec, n, [&](std::size_t i) {
        const double left = i == 0 ? phi[0] : phi[i - 1];
        const double right = i + 1 == n ? phi[n - 1] : phi[i + 1];
        pressure[i] = law.pressure(rho[i]);
        chem[i] = params.chi * rho[i] * (right - left) * inv2dx;
    });

    std::vector<double> flux(n + 1, 0.0);
    for_each_index(exec, n - 1, [&](std::size_t i) {
        flux[i + 1] = c_pressure * (pressure[i + 1] - pressure[i]) + c_density * (rho[i + 1] - rho[i]) -
                      0.5 * (chem[i] + chem[i + 1]);
    });
    return flux;
}

CellField bgk_step(const CellField& rho, const CellField& phi, const ModelParams& params,
                   const BgkParameters& bgk, double dt, Execution exec)
{
    const double dx = rho.grid().dx();
    check_dt(bgk, dx, dt);
    const std::vector<double> flux = bgk_fluxes(rho, phi, params, bgk, exec);
    const double ratio = dt / dx;
    CellField next(rho.grid());
    for_each_index(exec, rho.size(),
                   [&](std::size_t i) { next[i] = rho[i] + ratio * (flux[i + 1] - flux[i]); });
    return finish(std::move(next));
}

ParabolicStepper::ParabolicStepper(const Grid& grid, const ModelParams& params, double beta, double safety,
                                   Execution exec)
    : grid_(grid), params_(params), law_(params.law()), beta_(beta), safety_(safety), exec_(exec),
      cn_(grid, params), pressure_(grid.size()), chem_(grid.size()), flux_(grid.size() + 1, 0.0),
      next_(grid.size()), carry_(grid.size(), 0.0)
{
    if (!(beta > 0.0 && beta < 1.0)) throw std::invalid_argument("beta must lie in (0, 1)");
    if (!(safety > 0.0 && safety <= 1.0)) throw std::invalid_argument("safety must lie in (0, 1]");
    if (grid.size() < 2) throw std::invalid_argument("BGK scheme needs at least two cells");
}

namespace {

struct StepMaxima {
    double rho_max = 0.0;
    double grad_max = 0.0;
    bool negative = false;
};

StepMaxima scan_state(const std::vector<double>& rho, const std::vector<double>& phi, double inv2dx)
{
    const std::size_t n = rho.size();
    StepMaxima m;
    double rho_min = rho[0];
    for (std::size_t i = 0; i < n; ++i) {
        rho_min = std::min(rho_min, rho[i]);
        m.rho_max = std::max(m.rho_max, rho[i]);
    }
    if (n > 1) {
        m.grad_max = std::max(std::abs(phi[1] - phi[0]), std::abs(phi[n - 1] - phi[n - 2]));
        for (std::size_t i = 1; i + 1 < n; ++i) m.grad_max = std::max(m.grad_max, std::abs(phi[i + 1] - phi[i - 1]));
    }
    m.grad_max *= inv2dx;
    m.negative = !(rho_min >= 0.0);
    return m;
}

/// Returns a + b + carry rounded and leaves the rounding error in carry (TwoSum).
inline double compensated_add(double a, double b, double& carry)
{
    b += carry;
    const double s = a + b;
    const double bb = s - a;
    carry = (a - (s - bb)) + (b - bb);
    return s;
}

/// Flux, update and residual in one sweep with rolling interface values.
template <class Pressure>
double fused_update(const std::vector<double>& rho, const std::vector<double>& phi, std::vector<double>& next,
                    std::vector<double>& carry, Pressure pressure, double chi_half, double c_pressure,
                    double c_density, double ratio)
{
    const std::size_t n = rho.size();
    auto chem = [&](std::size_t i) {
        const double left = i == 0 ? phi[0] : phi[i - 1];
        const double right = i + 1 == n ? phi[n - 1] : phi[i + 1];
        return chi_half * rho[i] * (right - left);
    };
    double p_prev = pressure(rho[0]);
    double c_prev = chem(0);
    double f_prev = 0.0;
    for (std::size_t i = 0; i + 1 < n; ++i) {
        const double p = pressure(rho[i + 1]);
        const double c = i + 2 < n ? chi_half * rho[i + 1] * (phi[i + 2] - phi[i]) : chem(i + 1);
        const double f = c_pressure * (p - p_prev) + c_density * (rho[i + 1] - rho[i]) - 0.5 * (c_prev + c);
        next[i] = compensated_add(rho[i], ratio * (f - f_prev), carry[i]);
        p_prev = p;
        c_prev = c;
        f_prev = f;
    }
    next[n - 1] = compensated_add(rho[n - 1], -ratio * f_prev, carry[n - 1]);
    double res = 0.0;
    for (std::size_t i = 0; i < n; ++i) res = std::max(res, std::abs(next[i] - rho[i]));
    return res;
}

}  // namespace

ParabolicStepResult ParabolicStepper::step(std::vector<double>& rho, std::vector<double>& phi, double dt_cap)
{
    const std::size_t n = grid_.size();
    if (rho.size() != n || phi.size() != n) throw std::invalid_argument("ParabolicStepper: size mismatch");
    const double dx = grid_.dx();
    const double inv2dx = 1.0 / (2.0 * dx);

    const StepMaxima m = scan_state(rho, phi, inv2dx);
    if (m.negative) throw DomainError("negative density passed to the BGK scheme");
    const double eps = kVacuumFactor * std::max(1.0, m.rho_max);
    const double dp_max = std::max(law_.dpressure(eps), law_.dpressure(m.rho_max));
    bgk_.beta = beta_;
    bgk_.theta = std::sqrt(dp_max / (1.0 - beta_));
    bgk_.lambda = std::max(params_.chi * m.grad_max / beta_, kLambdaFloor);

    ParabolicStepResult out;
    // Rounding the stable step down to a fixed geometric ladder keeps dt, and with it
    // the Crank-Nicolson factorization, unchanged over long stretches.
    const double stable = parabolic_cfl(bgk_, dx, safety_);
    const double rung = std::exp2(std::floor(kLadderSteps * std::log2(stable)) / kLadderSteps);
    out.dt = std::min(dt_cap, std::min(rung, stable));
    check_dt(bgk_, dx, out.dt);
    const double c_pressure = pressure_coefficient(bgk_, dx);
    const double c_density = 0.5 * bgk_.lambda;
    const double ratio = out.dt / dx;

    if (exec_ == Execution::Serial && n > 1) {
        const double kappa = params_.kappa;
        const double chi_half = params_.chi * inv2dx;
        if (law_.gamma() == 2.0) {
            out.residual = fused_update(rho, phi, next_, carry_, [kappa](double r) { return kappa * r * r; }, chi_half,
                                        c_pressure, c_density, ratio);
        } else if (law_.gamma() == 3.0) {
            out.residual = fused_update(rho, phi, next_, carry_, [kappa](double r) { return kappa * r * r * r; },
                                        chi_half, c_pressure, c_density, ratio);
        } else {
            out.residual = fused_update(rho, phi, next_, carry_, [this](double r) { return law_.pressure(r); }, chi_half,
                                        c_pressure, c_density, ratio);
        }
    } else {
        for_each_index(exec_, n, [&](std::size_t i) {
            const double left = i == 0 ? phi[0] : phi[i - 1];
            const double right = i + 1 == n ? phi[n - 1] : phi[i + 1];
            pressure_[i] = law_.pressure(rho[i]);
            chem_[i] = params_.chi * rho[i] * (right - left) * inv2dx;
        });
        for_each_index(exec_, n - 1, [&](std::size_t i) {
            flux_[i + 1] = c_pressure * (pressure_[i + 1] - pressure_[i]) + c_density * (rho[i + 1] - rho[i]) -
                           0.5 * (chem_[i] + chem_[i + 1]);
        });
        for_each_index(exec_, n, [&](std::size_t i) {
            next_[i] = compensated_add(rho[i], ratio * (flux_[i + 1] - flux_[i]), carry_[i]);
        });
        double res = 0.0;
        for (std::size_t i = 0; i < n; ++i) res = std::max(res, std::abs(next_[i] - rho[i]));
        out.residual = res;
    }

    double next_min = next_[0];
    double next_max = 0.0;
    for (double r : next_) {
        next_min = std::min(next_min, r);
        next_max = std::max(next_max, r);
    }
    if (!(next_min >= 0.0) || !std::isfinite(next_max)) {
        const double next_eps = kVacuumFactor * std::max(1.0, next_max);
        for (std::size_t i = 0; i < n; ++i) {
            double& r = next_[i];
            if (!std::isfinite(r)) throw NumericalFailure("non-finite density in cell " + std::to_string(i));
            if (r < 0.0) {
                if (r < -next_eps) throw NumericalFailure("density became negative in cell " + std::to_string(i));
                r = 0.0;
                carry_[i] = 0.0;
            }
        }
        out.residual = 0.0;
        for (std::size_t i = 0; i < n; ++i) out.residual = std::max(out.residual, std::abs(next_[i] - rho[i]));
    }

    if (params_.delta == 1) {
        cn_.advance(phi, rho, out.dt);
    } else {
        const CellField updated = chemo_solve_elliptic(CellField(grid_, rho), params_);
        std::copy(updated.values().begin(), updated.values().end(), phi.begin());
    }
    rho.swap(next_);
    return out;
}

namespace reference {

CellField bgk_step(const CellField& rho, const CellField& phi, const ModelParams& params,
                   const BgkParameters& bgk, double dt)
{
    check_inputs(rho, phi);
    const double dx = rho.grid().dx();
    check_dt(bgk, dx, dt);
    const double c_pressure = pressure_coefficient(bgk, dx);
    const PressureLaw law = params.law();
    const std::size_t n = rho.size();
    const CellField grad = phi_gradient(phi);

    auto A = [&](std::size_t i) { return params.chi * rho[i] * grad[i]; };
    auto P = [&](std::size_t i) { return law.pressure(rho[i]); };
    auto face = [&](std::size_t left) {
        return c_pressure * (P(left + 1) - P(left)) + 0.5 * bgk.lambda * (rho[left + 1] - rho[left]) -
               0.5 * (A(left) + A(left + 1));
    };

    CellField next(rho.grid());
    for (std::size_t i = 0; i < n; ++i) {
        const double east = i + 1 < n ? face(i) : 0.0;
        const double west = i > 0 ? face(i - 1) : 0.0;
        next[i] = rho[i] + dt / dx * (east - west);
    }
    return finish(std::move(next));
}

}  // namespace reference

}  // namespace chemotaxis
