#pragma once

#include "chemotaxis/core.hpp"

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace chemotaxis {

/// The parameters admit no half bump on the requested domain.
class NoHalfBump : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

enum class Orientation { Constant, LeftAnchored, RightAnchored, Centered };

std::string to_string(Orientation o);

/// Closed-form stationary pair (rho, phi) with zero velocity, gamma = 2.
///
/// Half bumps are stored in left-anchored form on [0, xbar]; the other
/// orientations are obtained by reflection and gluing.
class StationaryProfile {
public:
    double length() const { return length_; }
    double mass() const { return mass_; }
    /// Support edge of the left-anchored half bump (on [0, L/2] for centered profiles).
    double xbar() const { return xbar_; }
    /// Constant in rho = chi / (2 kappa) phi + K on the support. Negative for bumps.
    double K() const { return K_; }
    Orientation orientation() const { return orientation_; }
    const ModelParams& params() const { return params_; }

    double rho(double x) const;
    double phi(double x) const;

    CellField sample_rho(const Grid& grid) const;
    CellField sample_phi(const Grid& grid) const;

    friend StationaryProfile constant_state(double L, double M, const ModelParams& params);
    friend StationaryProfile half_bump(double L, double M, const ModelParams& params, Orientation o);
    friend StationaryProfile central_bump(double L, double M, const ModelParams& params);

private:
    double left_rho(double x) const;
    double left_phi(double x) const;
    /// Maps x to the coordinate of the left-anchored building block.
    double fold(double x) const;

    ModelParams params_{};
    double length_ = 0.0;
    double mass_ = 0.0;
    double xbar_ = 0.0;
    double K_ = 0.0;
    double block_length_ = 0.0;
    Orientation orientation_ = Orientation::Constant;
};

/// rho = M / L, phi = a M / (b L).
StationaryProfile constant_state(double L, double M, const ModelParams& params);

/// Root of sqrt(b / (omega D)) tan(sqrt(omega) x) = tanh(sqrt(b / D) (x - L)) in
/// (pi/2, pi) / sqrt(omega), by bisection. Throws NoHalfBump when omega <= 0 or
/// L <= pi / sqrt(omega).
double solve_xbar(const ModelParams& params, double L);

/// Left-hand side minus right-hand side of the free-boundary equation.
double xbar_residual(const ModelParams& params, double L, double x);

StationaryProfile half_bump(double L, double M, const ModelParams& params, Orientation o);

/// Two right-anchored half bumps of mass M/2 on [0, L/2], reflected about L/2.
/// Throws NoHalfBump when L <= 2 pi / sqrt(omega).
StationaryProfile central_bump(double L, double M, const ModelParams& params);

struct Placement {
    StationaryProfile profile;
    double start = 0.0;  ///< profile occupies [start, start + profile.length())
};

/// Piecewise assembly on grid; cells covered by no profile are zero.
/// Throws std::invalid_argument on overlapping or out-of-range placements.
std::pair<CellField, CellField> concatenate(const std::vector<Placement>& pieces, const Grid& grid);

}  // namespace chemotaxis
