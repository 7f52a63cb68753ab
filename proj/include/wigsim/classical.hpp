#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <vector>

#include "wigsim/potential.hpp"
#include "wigsim/wigner_field.hpp"

namespace wigsim {

struct TrajectoryState {
    double x = 0.0;
    double p = 0.0;
    double t = 0.0;
};

/// Lyapunov exponents of the 1-D driven flow with convergence history.
/// For frictionless dynamics lambda_plus + lambda_minus = 0 up to the
/// reported convergence tolerance.
struct LyapunovSpectrum {
    double lambda_plus = 0.0;
    double lambda_minus = 0.0;
    double averaging_time = 0.0;
    bool converged = true;
    /// (t, running lambda_plus, running lambda_minus) at each
    /// re-orthonormalization.
    std::vector<std::array<double, 3>> history;
};

/// One velocity-Verlet step (kick-drift-kick); the drive inside the kicks
/// is evaluated at the step midpoint time.
TrajectoryState verlet_step(const TrajectoryState& s, const PotentialSpec& spec,
                            double dt);

/// Trajectory of n_steps + 1 states including the initial one.
std::vector<TrajectoryState> integrate(const TrajectoryState& initial,
                                       const PotentialSpec& spec, double dt,
                                       std::size_t n_steps);

/// Tangent-map update paired with verlet_step: the exact Jacobian of the
/// kick-drift-kick map, with V'' evaluated at the pre- and post-step
/// positions.
std::array<double, 2> tangent_step(const TrajectoryState& before,
                                   const TrajectoryState& after,
                                   const std::array<double, 2>& deviation,
                                   const PotentialSpec& spec, double dt);

/// Benettin/Gram-Schmidt estimate of the Lyapunov spectrum: evolves an
/// orthonormal deviation frame, accumulating log stretching factors at
/// each re-orthonormalization. Flags non-convergence when the running
/// lambda_plus wanders more than 10% (with an absolute floor of 1e-3)
/// over the final quarter of the averaging time.
LyapunovSpectrum benettin_spectrum(const TrajectoryState& initial,
                                   const PotentialSpec& spec, double dt,
                                   double t_total, std::size_t renorm_stride);

/// Covariance history of an evolving Gaussian sample cloud; deterministic
/// given the seed (internal Box-Muller on a fixed-layout generator).
struct EnsembleHistory {
    std::vector<double> times;
    std::vector<Moments> moments;
};

EnsembleHistory ensemble_spread(const GaussianSpec& initial_cloud,
                                const PotentialSpec& spec, double dt, double t,
                                std::size_t n_samples, std::uint64_t seed,
                                std::size_t sample_stride = 1);

}  // namespace wigsim
