#pragma once

#include <cstddef>
#include <vector>

#include "wigsim/grid.hpp"

namespace wigsim {

/// Time-dependent polynomial potential
///   V(x, t) = sum_k c_k x^k + A x cos(omega t).
/// Polynomial degree is capped at 12 so the quantum potential kernel's
/// chord expansion terminates at a fixed order.
struct PotentialSpec {
    std::vector<double> coefficients;  // c_0 .. c_K
    double drive_amplitude = 0.0;
    double drive_frequency = 0.0;
    double mass = 1.0;

    void validate() const;
    std::size_t degree() const {
        return coefficients.empty() ? 0 : coefficients.size() - 1;
    }
};

double potential_eval(const PotentialSpec& spec, double x, double t);

/// Exact analytic n-th spatial derivative (n >= 1); the drive contributes
/// only at order 1.
double potential_derivative(const PotentialSpec& spec, std::size_t order,
                            double x, double t);

/// Nonlinearity scale chi_n = |dV/dx / d^(2n+1)V/dx^(2n+1)|^(1/2n).
/// Returns +infinity when the (2n+1)-th derivative vanishes identically;
/// throws InvalidArgument at zero-gradient points.
double nonlinearity_scale(const PotentialSpec& spec, std::size_t n, double x,
                          double t);

/// Preset systems.
PotentialSpec harmonic_potential(double k = 1.0, double mass = 1.0);
/// V = -lambda^2 x^2 / 2: linear flow with stretching rate lambda.
PotentialSpec inverted_oscillator(double lambda = 1.0, double mass = 1.0);
/// V = x^4/4 - x^2/2 + A x cos(omega t); with A = 0.3, omega = 1 this is
/// the canonical chaotic scenario.
PotentialSpec driven_double_well(double drive_amplitude = 0.3,
                                 double drive_frequency = 1.0,
                                 double mass = 1.0);

}  // namespace wigsim
