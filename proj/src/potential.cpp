#include "wigsim/potential.hpp"

#include <cmath>
#include <limits>

namespace wigsim {

void PotentialSpec::validate() const {
    if (degree() > 12)
        throw InvalidArgument("potential: polynomial degree must be <= 12");
    for (double c : coefficients)
        if (!std::isfinite(c))
            throw InvalidArgument("potential: coefficients must be finite");
    if (!std::isfinite(drive_amplitude) || !std::isfinite(drive_frequency))
        throw InvalidArgument("potential: drive parameters must be finite");
    if (!(mass > 0.0)) throw InvalidArgument("potential: mass must be positive");
}

double potential_eval(const PotentialSpec& spec, double x, double t) {
    double v = 0.0;
    for (std::size_t k = spec.coefficients.size(); k-- > 0;)
        v = v * x + spec.coefficients[k];
    if (spec.drive_amplitude != 0.0)
        v += spec.drive_amplitude * x * std::cos(spec.drive_frequency * t);
    return v;
}

double potential_derivative(const PotentialSpec& spec, std::size_t order,
                            double x, double t) {
    if (order == 0) return potential_eval(spec, x, t);
    double v = 0.0;
    // d^n/dx^n sum c_k x^k = sum_{k>=n} c_k k!/(k-n)! x^(k-n), Horner form
    for (std::size_t k = spec.coefficients.size(); k-- > order;) {
        double fall = 1.0;
        for (std::size_t j = 0; j < order; ++j) fall *= static_cast<double>(k - j);
        v = v * x + spec.coefficients[k] * fall;
    }
    if (order == 1 && spec.drive_amplitude != 0.0)
        v += spec.drive_amplitude * std::cos(spec.drive_frequency * t);
    return v;
}

double nonlinearity_scale(const PotentialSpec& spec, std::size_t n, double x,
                          double t) {
    if (n < 1) throw InvalidArgument("nonlinearity_scale: n must be >= 1");
    const double grad = potential_derivative(spec, 1, x, t);
    if (grad == 0.0)
        throw InvalidArgument("nonlinearity_scale: undefined at a "
                              "zero-gradient point");
    if (2 * n + 1 > spec.degree())
        return std::numeric_limits<double>::infinity();
    const double high = potential_derivative(spec, 2 * n + 1, x, t);
    if (high == 0.0) return std::numeric_limits<double>::infinity();
    return std::pow(std::abs(grad / high), 1.0 / (2.0 * static_cast<double>(n)));
}

PotentialSpec harmonic_potential(double k, double mass) {
    PotentialSpec s;
    s.coefficients = {0.0, 0.0, 0.5 * k};
    s.mass = mass;
    return s;
}

PotentialSpec inverted_oscillator(double lambda, double mass) {
    PotentialSpec s;
    s.coefficients = {0.0, 0.0, -0.5 * lambda * lambda * mass};
    s.mass = mass;
    return s;
}

PotentialSpec driven_double_well(double drive_amplitude, double drive_frequency,
                                 double mass) {
    PotentialSpec s;
    s.coefficients = {0.0, 0.0, -0.5, 0.0, 0.25};
    s.drive_amplitude = drive_amplitude;
    s.drive_frequency = drive_frequency;
    s.mass = mass;
    return s;
}

}  // namespace wigsim
