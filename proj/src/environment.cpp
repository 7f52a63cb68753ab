#include "wigsim/environment.hpp"

#include <cmath>

namespace wigsim {

EnvironmentParams::EnvironmentParams(double gamma, double temperature,
                                     double mass, double hbar,
                                     std::optional<double> diffusion_override)
    : gamma_(gamma), temperature_(temperature), mass_(mass), hbar_(hbar),
      override_(diffusion_override) {
    if (gamma_ < 0.0) throw InvalidArgument("environment: gamma must be >= 0");
    if (!(temperature_ > 0.0))
        throw InvalidArgument("environment: temperature must be positive");
    if (!(mass_ > 0.0)) throw InvalidArgument("environment: mass must be positive");
    if (!(hbar_ > 0.0)) throw InvalidArgument("environment: hbar must be positive");
    if (override_) {
        if (gamma_ != 0.0)
            throw InvalidArgument("environment: a direct diffusion override is "
                                  "only meaningful in the reversible classical "
                                  "limit gamma = 0");
        if (*override_ < 0.0)
            throw InvalidArgument("environment: diffusion must be >= 0");
        diffusion_ = *override_;
    } else {
        diffusion_ = 2.0 * mass_ * gamma_ * temperature_;
    }
}

double EnvironmentParams::de_broglie_wavelength() const {
    return std::sqrt(hbar_ * hbar_ / (2.0 * mass_ * temperature_));
}

}  // namespace wigsim
