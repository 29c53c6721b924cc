#include "chemotaxis/stationary.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace chemotaxis {

namespace {

void require_positive(double v, const char* what)
{
    if (!(v > 0.0)) throw std::invalid_argument(std::string(what) + " must be positive");
}

void require_quadratic(const ModelParams& params)
{
    if (params.gamma != 2.0)
        throw std::invalid_argument("closed-form bumps exist only for gamma = 2");
}

}  // namespace

std::string to_string(Orientation o)
{
    switch (o) {
    case Orientation::Constant: return "constant";
    case Orientation::LeftAnchored: return "left";
    case Orientation::RightAnchored: return "right";
    case Orientation::Centered: return "centered";
    }
    return "unknown";
}

double StationaryProfile::fold(double x) const
{
    switch (orientation_) {
    case Orientation::RightAnchored: return length_ - x;
    case Orientation::Centered: return std::abs(x - 0.5 * length_);
    default: return x;
    }
}

double StationaryProfile::left_rho(double x) const
{
    if (x >= xbar_) return 0.0;
    const double sw = std::sqrt(params_.omega());
    const double scale = params_.b * K_ / (params_.omega() * params_.D);
    return std::max(0.0, scale * (std::cos(sw * x) / std::cos(sw * xbar_) - 1.0));
}

double StationaryProfile::left_phi(double x) const
{
    const ModelParams& p = params_;
    const double w = p.omega();
    if (x <= xbar_) {
        const double sw = std::sqrt(w);
        return 2.0 * p.kappa * p.b * K_ / (w * p.chi * p.D) * std::cos(sw * x) / std::cos(sw * xbar_) -
               p.a * K_ / (w * p.D);
    }
    const double s = std::sqrt(p.b / p.D);
    return -2.0 * p.kappa * K_ / p.chi * std::cosh(s * (x - block_length_)) /
           std::cosh(s * (xbar_ - block_length_));
}

double StationaryProfile::rho(double x) const
{
    if (orientation_ == Orientation::Constant) return mass_ / length_;
    return left_rho(fold(x));
}

double StationaryProfile::phi(double x) const
{
    if (orientation_ == Orientation::Constant) return params_.a * mass_ / (params_.b * length_);
    return left_phi(fold(x));
}

CellField StationaryProfile::sample_rho(const Grid& grid) const
{
    return CellField::sample(grid, [this](double x) { return rho(x); });
}

CellField StationaryProfile::sample_phi(const Grid& grid) const
{
    return CellField::sample(grid, [this](double x) { return phi(x); });
}

StationaryProfile constant_state(double L, double M, const ModelParams& params)
{
    require_positive(L, "domain length");
    require_positive(M, "mass");
    StationaryProfile s;
    s.params_ = params;
    s.length_ = L;
    s.block_length_ = L;
    s.mass_ = M;
    s.xbar_ = L;
    s.orientation_ = Orientation::Constant;
    return s;
}

double xbar_residual(const ModelParams& params, double L, double x)
{
    const double w = params.omega();
    return std::sqrt(params.b / (w * params.D)) * std::tan(std::sqrt(w) * x) -
           std::tanh(std::sqrt(params.b / params.D) * (x - L));
}

double solve_xbar(const ModelParams& params, double L)
{
    require_positive(L, "domain length");
    const double w = params.omega();
    if (!(w > 0.0)) throw NoHalfBump("there is no half bump solution: omega <= 0");
    const double sw = std::sqrt(w);
    if (L <= std::numbers::pi / sw) {
        std::ostringstream msg;
        msg << "there is no half bump solution: L = " << L << " <= pi / sqrt(omega) = " << std::numbers::pi / sw;
        throw NoHalfBump(msg.str());
    }
    const double width = 0.5 * std::numbers::pi / sw;
    double lo = 0.5 * std::numbers::pi / sw + 1e-12 * width;
    double hi = std::numbers::pi / sw;
    double g_lo = xbar_residual(params, L, lo);
    const double g_hi = xbar_residual(params, L, hi);
    if (!(g_lo < 0.0 && g_hi > 0.0)) throw NoHalfBump("free-boundary equation has no sign change on its bracket");
    for (int it = 0; it < 400; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid == lo || mid == hi) break;
        const double g = xbar_residual(params, L, mid);
        if (g == 0.0) return mid;
        if ((g < 0.0) == (g_lo < 0.0)) {
            lo = mid;
            g_lo = g;
        } else {
            hi = mid;
        }
    }
    const double r_lo = std::abs(xbar_residual(params, L, lo));
    const double r_hi = std::abs(xbar_residual(params, L, hi));
    return r_lo <= r_hi ? lo : hi;
}

StationaryProfile half_bump(double L, double M, const ModelParams& params, Orientation o)
{
    require_positive(M, "mass");
    require_quadratic(params);
    if (o != Orientation::LeftAnchored && o != Orientation::RightAnchored)
        throw std::invalid_argument("half_bump orientation must be left or right");
    const double xbar = solve_xbar(params, L);
    const double w = params.omega();
    const double sw = std::sqrt(w);
    const double denom = std::tan(sw * xbar) - sw * xbar;
    const double K = params.D / params.b * M * w * sw / denom;
    if (!(K < 0.0)) throw NumericalFailure("half bump constant K must be negative for a nonnegative profile");

    StationaryProfile s;
    s.params_ = params;
    s.length_ = L;
    s.block_length_ = L;
    s.mass_ = M;
    s.xbar_ = xbar;
    s.K_ = K;
    s.orientation_ = o;
    return s;
}

StationaryProfile central_bump(double L, double M, const ModelParams& params)
{
    require_positive(L, "domain length");
    const double w = params.omega();
    if (!(w > 0.0) || L <= 2.0 * std::numbers::pi / std::sqrt(w))
        throw NoHalfBump("there is no central bump: L <= 2 pi / sqrt(omega)");
    StationaryProfile s = half_bump(0.5 * L, 0.5 * M, params, Orientation::LeftAnchored);
    s.length_ = L;
    s.mass_ = M;
    s.orientation_ = Orientation::Centered;
    return s;
}

std::pair<CellField, CellField> concatenate(const std::vector<Placement>& pieces, const Grid& grid)
{
    std::vector<const Placement*> order;
    for (const Placement& p : pieces) order.push_back(&p);
    std::sort(order.begin(), order.end(), [](auto* a, auto* b) { return a->start < b->start; });

    const double L = grid.length();
    const double tol = 1e-12 * L;
    double end = 0.0;
    for (const Placement* p : order) {
        if (p->start < -tol || p->start + p->profile.length() > L + tol)
            throw std::invalid_argument("placement extends outside the domain");
        if (p->start < end - tol) throw std::invalid_argument("placements overlap");
        end = p->start + p->profile.length();
    }

    CellField rho(grid), phi(grid);
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double x = grid.center(i);
        for (const Placement* p : order) {
            if (x >= p->start && x < p->start + p->profile.length()) {
                rho[i] = p->profile.rho(x - p->start);
                phi[i] = p->profile.phi(x - p->start);
                break;
            }
        }
    }
    return {std::move(rho), std::move(phi)};
}

}  // namespace chemotaxis
