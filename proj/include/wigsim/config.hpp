#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "wigsim/diagnostics.hpp"
#include "wigsim/environment.hpp"
#include "wigsim/evolution.hpp"
#include "wigsim/grid.hpp"
#include "wigsim/potential.hpp"
#include "wigsim/wigner_field.hpp"

namespace wigsim {

/// Thrown on malformed run configs; the message carries the line and
/// field that failed.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct GridConfig {
    // layout = square: n points per axis, extents sqrt(2 pi hbar n),
    // centered on (x_center, p_center); otherwise explicit extents.
    bool square = true;
    std::size_t nx = 256;
    std::size_t np = 256;
    double x_center = 0.0;
    double p_center = 0.0;
    double x_min = 0.0, x_max = 0.0, p_min = 0.0, p_max = 0.0;
    double hbar = 1.0;

    PhaseSpaceGrid build() const;
};

struct StateConfig {
    enum class Kind { gaussian, cat };
    Kind kind = Kind::gaussian;
    GaussianSpec gaussian;
    double x_sep = 0.0;  // cat only

    WignerField build(const PhaseSpaceGrid& grid) const;
};

struct EnvironmentConfig {
    double gamma = 0.0;
    double temperature = 1.0;
    double mass = 1.0;
    std::optional<double> diffusion;  // direct-D override, needs gamma = 0

    EnvironmentParams build(double hbar) const;
};

struct DiagnosticsConfig {
    bool von_neumann = true;
    std::size_t snapshot_stride = 0;
    double lyapunov_reference = 0.0;
    ChaosVerdictConfig classifier;
};

struct LyapunovConfig {
    double x0 = 1.4142135623730951;  // separatrix tip of the double well
    double p0 = 0.0;
    double dt = 2e-3;
    double t_total = 4e3;
    std::size_t renorm_stride = 10;
};

struct OutputConfig {
    std::string directory = "runs/out";
    bool marginals = true;
};

struct RunConfig {
    GridConfig grid;
    StateConfig state;
    PotentialSpec potential;  // mass copied from environment
    EnvironmentConfig environment;
    EvolutionConfig evolution;
    DiagnosticsConfig diagnostics;
    LyapunovConfig lyapunov;
    OutputConfig output;
    std::string echo;         // the raw config text
    std::string preset_name;  // non-empty when expanded from a preset

    void validate() const;
};

/// Parses the structured plain-text run config. Unknown sections or keys
/// are rejected with line-attributed messages.
RunConfig parse_config(const std::string& text);

/// Named preset configs shipped with the tool.
std::vector<std::string> preset_names();
const std::string& preset_text(const std::string& name);
RunConfig load_preset(const std::string& name);

}  // namespace wigsim
