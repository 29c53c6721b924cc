#pragma once

#include "chemotaxis/core.hpp"
#include "chemotaxis/hyperbolic.hpp"
#include "chemotaxis/parallel.hpp"

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace chemotaxis {

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class ModelKind { Hyperbolic, Parabolic };

/// sinusoid:     rho0 = rho_mean + sin(4 pi |x - L/4|), phi0 = 0
/// constant:     rho0 = rho_mean, phi0 = a rho_mean / b
/// two-bumps:    left half bump (mass_left) on [0, bump_length], right half bump
///               (mass_right) on [L - bump_length, L], vacuum between
/// half-bump:    left-anchored half bump of the given mass on [0, L]
/// central-bump: symmetric interior bump of the given mass on [0, L]
enum class InitialKind { Sinusoid, Constant, TwoBumps, HalfBump, CentralBump };

std::string to_string(ModelKind m);
std::string to_string(InitialKind k);

struct ExperimentConfig {
    std::string preset = "custom";
    ModelKind model = ModelKind::Hyperbolic;
    ModelParams params{};
    double length = 1.0;
    std::size_t cells = 100;
    SchemeConfig scheme{};
    double beta = 0.95;    ///< BGK monotonicity parameter
    double safety = 0.9;   ///< fraction of the BGK stability bound used as dt
    InitialKind initial = InitialKind::Sinusoid;
    double rho_mean = 1.0;
    double mass = 1.0;
    double mass_left = 1.0;
    double mass_right = 3.0;
    double bump_length = 1.0;
    double t_end = 300.0;
    double output_interval = 0.1;
    double stop_threshold = 1e-12;
    int stop_count = 10;  ///< consecutive outputs below stop_threshold; 0 disables
    double bump_threshold = 1e-3;
    double snapshot_interval = 0.0;  ///< 0 writes only the final state
    Execution execution = Execution::Serial;

    double dx() const { return length / static_cast<double>(cells); }
    Grid grid() const { return Grid(length, cells); }

    /// Throws ConfigError on an inconsistent configuration.
    void validate() const;
};

/// Named experiment setups:
///   unit-box    L = 1, chi = 50, other constants 1, sinusoid around 1, T = 300
///   wide-box    L = 3, chi = 10, D = 0.1, a = 20, b = 10, sinusoid around 1.5, T = 300
///   metastable  wide-box with gamma = 3 and T = 400
///   two-bumps   L = 4, unit-box constants, half bumps of mass 1 and 3 at the walls, T = 150
ExperimentConfig preset(const std::string& name);
std::vector<std::string> preset_names();

/// Sets one key. "dx" is converted to a cell count with the current length.
/// Throws ConfigError for unknown keys and unparsable values.
void apply_setting(ExperimentConfig& cfg, const std::string& key, const std::string& value);

/// Flat "key = value" text, '#' comments, blank lines ignored. A "preset" key is
/// applied before every other key; "dx" after "length".
ExperimentConfig parse_config(const std::string& text, const std::string& source = "<config>");
ExperimentConfig load_config(const std::string& path);

/// Every setting as key/value text, in a stable order; round-trips through parse_config.
std::vector<std::pair<std::string, std::string>> config_entries(const ExperimentConfig& cfg);
std::string format_config(const ExperimentConfig& cfg);

}  // namespace chemotaxis
