#pragma once

#include "chemotaxis/config.hpp"
#include "chemotaxis/core.hpp"

#include <optional>
#include <string>
#include <vector>

namespace chemotaxis {

/// L-infinity norm of rho_next - rho.
double residual(const CellField& rho_next, const CellField& rho);

struct BumpRun {
    std::size_t first = 0;  ///< first cell of the run
    std::size_t last = 0;   ///< last cell of the run, inclusive
    bool touches_wall = false;
};

struct BumpCount {
    std::size_t count = 0;
    std::size_t wall_touching = 0;
    std::vector<BumpRun> runs;
};

/// Maximal runs of cells with rho_i > rel_threshold * max rho. A field that is
/// identically zero has no bumps.
BumpCount count_bumps(const CellField& rho, double rel_threshold = 1e-3);

struct SeriesPoint {
    double t = 0.0;
    double residual = 0.0;  ///< density change of the last step before t
    double mass = 0.0;
    std::size_t bumps = 0;
    std::size_t wall_bumps = 0;
    double min_rho = 0.0;
};

struct Snapshot {
    double t = 0.0;
    CellField rho{Grid(1.0, 1)};
    CellField u{Grid(1.0, 1)};  ///< zero for the parabolic model
    CellField phi{Grid(1.0, 1)};
};

struct RunReport {
    ExperimentConfig config;
    std::vector<SeriesPoint> series;
    std::vector<Snapshot> snapshots;  ///< at snapshot_interval, excluding the final state
    Snapshot final_state;
    double initial_mass = 0.0;
    double max_mass_drift = 0.0;  ///< max |mass - initial_mass| / initial_mass over outputs
    double min_rho = 0.0;         ///< min over all outputs
    std::size_t steps = 0;
    bool converged = false;       ///< stopped by the residual rule before t_end
    double wall_seconds = 0.0;

    double final_momentum_max() const;
    BumpCount final_bumps() const;
};

/// Initial (rho, u, phi) for a configuration at t = 0.
Snapshot initial_state(const ExperimentConfig& cfg);

/// Time loop: density step, then the chemoattractant step over the same dt.
/// Outputs are recorded at the first step reaching each multiple of
/// output_interval. Throws NumericalFailure on CFL rejection, NaN or lost positivity.
RunReport run(const ExperimentConfig& cfg);

struct Transition {
    double t = 0.0;
    std::size_t from = 0;
    std::size_t to = 0;
};

/// Changes of the bump count between consecutive outputs.
std::vector<Transition> bump_transitions(const RunReport& report);

/// L-infinity distance of two density profiles relative to the larger maximum.
/// The finer profile is interpolated linearly onto the centers of the coarser one.
double profile_distance(const CellField& a, const CellField& b);

struct MeshStudy {
    std::vector<RunReport> reports;
    std::vector<double> dx;
    std::vector<std::size_t> bumps;
    std::vector<double> distance_to_next;  ///< profile distance between mesh k and k + 1
    /// First mesh whose bump count and profile agree with the next finer one.
    std::optional<std::size_t> verdict;
};

/// Runs the base configuration at every dx (decreasing); runs are independent
/// and execute concurrently.
MeshStudy mesh_refinement_study(const ExperimentConfig& base, const std::vector<double>& dx_list,
                                double profile_tol = 0.05);

struct ModelComparison {
    RunReport hyperbolic;
    RunReport parabolic;
    std::vector<Transition> hyperbolic_transitions;
    std::vector<Transition> parabolic_transitions;
    double profile_distance = 0.0;
    bool same_asymptotic_state = false;
};

/// Runs the configuration with both models concurrently and compares the final states.
ModelComparison compare_models(const ExperimentConfig& cfg, double profile_tol = 0.05);

}  // namespace chemotaxis
