#include "wigsim/grid.hpp"

#include <cmath>

namespace wigsim {

namespace {

bool power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

constexpr double kPi = 3.14159265358979323846;

}  // namespace

PhaseSpaceGrid::PhaseSpaceGrid(std::size_t nx, std::size_t np, double x_min,
                               double x_max, double p_min, double p_max,
                               double hbar)
    : nx_(nx), np_(np), x_min_(x_min), x_max_(x_max), p_min_(p_min),
      p_max_(p_max), hbar_(hbar) {
    if (!power_of_two(nx_) || nx_ < 32 || !power_of_two(np_) || np_ < 32)
        throw InvalidArgument("grid: nx and np must be powers of two >= 32");
    if (!(x_max_ > x_min_) || !(p_max_ > p_min_))
        throw InvalidArgument("grid: extents must satisfy max > min");
    if (!(hbar_ > 0.0))
        throw InvalidArgument("grid: hbar must be positive");
    // The chord grid must reach across the position extent, otherwise the
    // potential kernel V(x +/- y/2) probes chords the grid cannot carry.
    const double chord_span = static_cast<double>(nx_) * chord_spacing();
    if (chord_span < x_extent() * (1.0 - 1e-12))
        throw InvalidArgument(
            "grid: chord span nx*dy = " + std::to_string(chord_span) +
            " shorter than x extent " + std::to_string(x_extent()) +
            "; enlarge the momentum extent or refine the grid");
}

PhaseSpaceGrid PhaseSpaceGrid::square(std::size_t n, double hbar,
                                      double x_center, double p_center) {
    const double L = std::sqrt(2.0 * kPi * hbar * static_cast<double>(n));
    return PhaseSpaceGrid(n, n, x_center - L / 2, x_center + L / 2,
                          p_center - L / 2, p_center + L / 2, hbar);
}

double PhaseSpaceGrid::kx(std::size_t a) const {
    const auto n = static_cast<std::ptrdiff_t>(nx_);
    auto w = static_cast<std::ptrdiff_t>(a);
    if (w >= n / 2) w -= n;
    return 2.0 * kPi * static_cast<double>(w) / x_extent();
}

double PhaseSpaceGrid::chord_spacing() const {
    return 2.0 * kPi * hbar_ / p_extent();
}

double PhaseSpaceGrid::chord(std::size_t m) const {
    const auto n = static_cast<std::ptrdiff_t>(np_);
    auto w = static_cast<std::ptrdiff_t>(m);
    if (w >= n / 2) w -= n;
    return chord_spacing() * static_cast<double>(w);
}

bool PhaseSpaceGrid::fourier_complete() const {
    if (nx_ != np_) return false;
    return std::abs(dx() - chord_spacing()) <= 1e-9 * dx();
}

bool PhaseSpaceGrid::operator==(const PhaseSpaceGrid& o) const {
    return nx_ == o.nx_ && np_ == o.np_ && x_min_ == o.x_min_ &&
           x_max_ == o.x_max_ && p_min_ == o.p_min_ && p_max_ == o.p_max_ &&
           hbar_ == o.hbar_;
}

}  // namespace wigsim
