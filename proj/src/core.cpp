#include "chemotaxis/core.hpp"

#include <algorithm>
#include <numeric>

namespace chemotaxis {

Grid::Grid(double length, std::size_t cell_count)
    : length_(length), cells_(cell_count), dx_(length / static_cast<double>(cell_count))
{
    if (!(length > 0.0)) throw std::invalid_argument("grid length must be positive");
    if (cell_count == 0) throw std::invalid_argument("grid needs at least one cell");
}

std::vector<double> Grid::centers() const
{
    std::vector<double> x(cells_);
    for (std::size_t i = 0; i < cells_; ++i) x[i] = center(i);
    return x;
}

CellField::CellField(const Grid& grid, double value) : grid_(grid), values_(grid.size(), value) {}

CellField::CellField(const Grid& grid, std::vector<double> values)
    : grid_(grid), values_(std::move(values))
{
    if (values_.size() != grid_.size())
        throw std::invalid_argument("field length " + std::to_string(values_.size()) +
                                    " does not match grid size " + std::to_string(grid_.size()));
}

double CellField::max() const { return *std::max_element(values_.begin(), values_.end()); }
double CellField::min() const { return *std::min_element(values_.begin(), values_.end()); }

PressureLaw::PressureLaw(double kappa, double gamma) : kappa_(kappa), gamma_(gamma)
{
    if (!(kappa > 0.0)) throw std::invalid_argument("pressure law needs kappa > 0");
    if (!(gamma > 1.0)) throw std::invalid_argument("pressure law needs gamma > 1");
}

double PressureLaw::power(double rho, double exponent) const
{
    if (exponent == 1.0) return rho;
    if (exponent == 2.0) return rho * rho;
    if (exponent == 3.0) return rho * rho * rho;
    return std::pow(rho, exponent);
}

double PressureLaw::pressure(double rho) const
{
    if (rho < 0.0) throw DomainError("pressure of negative density");
    return kappa_ * power(rho, gamma_);
}

double PressureLaw::dpressure(double rho) const
{
    if (rho < 0.0) throw DomainError("pressure derivative of negative density");
    return kappa_ * gamma_ * power(rho, gamma_ - 1.0);
}

double PressureLaw::enthalpy(double rho) const
{
    if (rho < 0.0) throw DomainError("enthalpy of negative density");
    return kappa_ * gamma_ / (gamma_ - 1.0) * power(rho, gamma_ - 1.0);
}

double PressureLaw::internal_energy(double rho) const
{
    if (rho < 0.0) throw DomainError("internal energy of negative density");
    return kappa_ / (gamma_ - 1.0) * power(rho, gamma_ - 1.0);
}

double PressureLaw::inverse_pressure(double p) const
{
    if (p < 0.0) throw DomainError("inverse pressure of negative argument");
    const double y = p / kappa_;
    if (gamma_ == 2.0) return std::sqrt(y);
    if (gamma_ == 3.0) return std::cbrt(y);
    return std::pow(y, 1.0 / gamma_);
}

double PressureLaw::inverse_enthalpy(double psi) const
{
    if (psi < 0.0) throw DomainError("inverse enthalpy of negative argument");
    const double y = (gamma_ - 1.0) * psi / (kappa_ * gamma_);
    if (gamma_ == 2.0) return y;
    if (gamma_ == 3.0) return std::sqrt(y);
    return std::pow(y, 1.0 / (gamma_ - 1.0));
}

void ModelParams::validate() const
{
    // PressureLaw checks kappa and gamma.
    (void)law();
    if (!(chi > 0.0 && alpha > 0.0 && D > 0.0 && a > 0.0 && b > 0.0))
        throw std::invalid_argument("chi, alpha, D, a, b must all be positive");
    if (delta != 0 && delta != 1) throw std::invalid_argument("delta must be 0 or 1");
}

HydroState::HydroState(CellField density, CellField momentum)
    : rho(std::move(density)), mom(std::move(momentum))
{
    if (rho.size() != mom.size()) throw std::invalid_argument("density and momentum sizes differ");
}

CellField HydroState::velocity() const
{
    const double eps = vacuum_threshold(rho.values());
    CellField u(grid());
    for (std::size_t i = 0; i < size(); ++i) u[i] = rho[i] < eps ? 0.0 : mom[i] / rho[i];
    return u;
}

void HydroState::enforce_vacuum()
{
    const double eps = vacuum_threshold(rho.values());
    for (std::size_t i = 0; i < size(); ++i) {
        if (rho[i] < 0.0) throw DomainError("negative density in cell " + std::to_string(i));
        if (rho[i] < eps) mom[i] = 0.0;
    }
}

double vacuum_threshold(std::span<const double> rho)
{
    double m = 1.0;
    for (double r : rho) m = std::max(m, r);
    return kVacuumFactor * m;
}

double total_mass(const CellField& rho)
{
    const auto v = rho.values();
    return rho.grid().dx() * std::accumulate(v.begin(), v.end(), 0.0);
}

double max_abs_diff(std::span<const double> a, std::span<const double> b)
{
    if (a.size() != b.size()) throw std::invalid_argument("max_abs_diff: size mismatch");
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

}  // namespace chemotaxis
