#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace chemotaxis {

/// Raised when a function receives an argument outside its mathematical domain
/// (negative density, negative enthalpy, ...).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// A numerical failure of a solver: NaN, lost positivity, broken stability assumption.
class NumericalFailure : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Raised when a time step violates the stability bound of the scheme.
class CflViolation : public NumericalFailure {
public:
    using NumericalFailure::NumericalFailure;
};

/// Uniform partition of [0, L] into N cells of width dx.
class Grid {
public:
    Grid(double length, std::size_t cell_count);

    double length() const { return length_; }
    std::size_t size() const { return cells_; }
    double dx() const { return dx_; }

    /// Center of cell i, counted from 0: (i + 1/2) dx.
    double center(std::size_t i) const { return (static_cast<double>(i) + 0.5) * dx_; }
    std::vector<double> centers() const;

private:
    double length_;
    std::size_t cells_;
    double dx_;
};

/// Per-cell values on a grid.
class CellField {
public:
    explicit CellField(const Grid& grid, double value = 0.0);
    CellField(const Grid& grid, std::vector<double> values);

    const Grid& grid() const { return grid_; }
    std::size_t size() const { return values_.size(); }

    double& operator[](std::size_t i) { return values_[i]; }
    double operator[](std::size_t i) const { return values_[i]; }

    std::span<double> values() { return values_; }
    std::span<const double> values() const { return values_; }
    const std::vector<double>& vector() const { return values_; }

    double max() const;
    double min() const;

    template <class Fn>
    static CellField sample(const Grid& grid, Fn&& fn)
    {
        CellField field(grid);
        for (std::size_t i = 0; i < grid.size(); ++i) field[i] = fn(grid.center(i));
        return field;
    }

private:
    Grid grid_;
    std::vector<double> values_;
};

/// Isentropic pressure law P(rho) = kappa rho^gamma.
///
/// Integer exponents 2 and 3 are evaluated by multiplication; the
/// time loops call these functions once per interface and cell.
class PressureLaw {
public:
    PressureLaw(double kappa, double gamma);

    double kappa() const { return kappa_; }
    double gamma() const { return gamma_; }

    double pressure(double rho) const;
    /// dP/drho
    double dpressure(double rho) const;
    /// sqrt(P'(rho)), the sound speed.
    double sound_speed(double rho) const { return std::sqrt(dpressure(rho)); }
    /// Psi(rho) = kappa gamma / (gamma - 1) rho^(gamma - 1) = e(rho) + P(rho)/rho.
    double enthalpy(double rho) const;
    /// Internal energy e(rho) = kappa / (gamma - 1) rho^(gamma - 1), with e' = P / rho^2.
    double internal_energy(double rho) const;

    double inverse_pressure(double p) const;
    double inverse_enthalpy(double psi) const;

private:
    double power(double rho, double exponent) const;

    double kappa_;
    double gamma_;
};

/// Physical constants of both chemotaxis models.
struct ModelParams {
    double kappa = 1.0;
    double gamma = 2.0;
    double chi = 1.0;   ///< chemotactic sensitivity
    double alpha = 1.0; ///< damping rate
    double D = 1.0;     ///< chemoattractant diffusivity
    double a = 1.0;     ///< production rate
    double b = 1.0;     ///< degradation rate
    int delta = 1;      ///< 1: parabolic chemoattractant equation, 0: elliptic

    PressureLaw law() const { return PressureLaw(kappa, gamma); }

    /// (a chi / (2 kappa) - b) / D
    double omega() const { return (a * chi / (2.0 * kappa) - b) / D; }

    /// Throws std::invalid_argument on a non-positive rate or delta not in {0, 1}.
    void validate() const;
};

/// Density and momentum per cell.
struct HydroState {
    CellField rho;
    CellField mom;

    explicit HydroState(const Grid& grid) : rho(grid), mom(grid) {}
    HydroState(CellField density, CellField momentum);

    const Grid& grid() const { return rho.grid(); }
    std::size_t size() const { return rho.size(); }

    /// Velocity field; zero wherever the density is below the vacuum threshold.
    CellField velocity() const;

    /// Zeroes the momentum of vacuum cells. Throws DomainError on negative density.
    void enforce_vacuum();
};

/// Relative vacuum cutoff: rho is vacuum when rho < kVacuumFactor * max(1, max rho).
inline constexpr double kVacuumFactor = 1e-13;

double vacuum_threshold(std::span<const double> rho);

double total_mass(const CellField& rho);

/// L-infinity norm of a - b.
double max_abs_diff(std::span<const double> a, std::span<const double> b);

}  // namespace chemotaxis
