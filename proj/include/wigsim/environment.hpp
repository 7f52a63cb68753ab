#pragma once

#include <limits>
#include <optional>

#include "wigsim/grid.hpp"

namespace wigsim {

/// High-temperature environment coupling. The momentum-diffusion
/// coefficient is D = 2 m gamma k_B T; the reversible classical limit
/// (gamma -> 0 with D fixed) is entered by setting gamma = 0 and
/// supplying D directly.
class EnvironmentParams {
  public:
    EnvironmentParams(double gamma, double temperature, double mass, double hbar,
                      std::optional<double> diffusion_override = std::nullopt);

    double gamma() const { return gamma_; }
    double temperature() const { return temperature_; }
    double mass() const { return mass_; }
    double hbar() const { return hbar_; }

    /// Momentum diffusion coefficient (momentum^2 / time).
    double diffusion() const { return diffusion_; }
    /// Relaxation time 1/gamma; +infinity when gamma = 0.
    double relaxation_time() const {
        return gamma_ > 0.0 ? 1.0 / gamma_
                            : std::numeric_limits<double>::infinity();
    }
    /// Thermal de Broglie wavelength sqrt(hbar^2 / (2 m k_B T)).
    double de_broglie_wavelength() const;

    bool has_override() const { return override_.has_value(); }

  private:
    double gamma_, temperature_, mass_, hbar_, diffusion_;
    std::optional<double> override_;
};

}  // namespace wigsim
