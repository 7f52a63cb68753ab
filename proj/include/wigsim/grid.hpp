#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace wigsim {

/// Thrown when a grid or state violates a structural precondition.
struct InvalidArgument : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Thrown when a numerical integrity check fails mid-computation
/// (norm drift, NaN, density-matrix spectrum below tolerance, ...).
struct IntegrityError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Uniform rectangular (x, p) grid with periodic spectral boundary
/// treatment. nx and np must be powers of two >= 32 so every transform
/// stays a power-of-two FFT.
///
/// The chord variable y conjugate to p has spacing dy = 2*pi*hbar/Lp.
/// Transforms between Wigner functions and position-space density
/// matrices additionally require a "Fourier-complete" grid:
/// nx == np and dx == dy, i.e. Lx*Lp = 2*pi*hbar*nx.
class PhaseSpaceGrid {
  public:
    PhaseSpaceGrid(std::size_t nx, std::size_t np, double x_min, double x_max,
                   double p_min, double p_max, double hbar = 1.0);

    /// Square Fourier-complete grid centered on (x_center, p_center):
    /// Lx = Lp = sqrt(2*pi*hbar*n).
    static PhaseSpaceGrid square(std::size_t n, double hbar = 1.0,
                                 double x_center = 0.0, double p_center = 0.0);

    std::size_t nx() const { return nx_; }
    std::size_t np() const { return np_; }
    double x_min() const { return x_min_; }
    double x_max() const { return x_max_; }
    double p_min() const { return p_min_; }
    double p_max() const { return p_max_; }
    double hbar() const { return hbar_; }

    double x_extent() const { return x_max_ - x_min_; }
    double p_extent() const { return p_max_ - p_min_; }
    double dx() const { return x_extent() / static_cast<double>(nx_); }
    double dp() const { return p_extent() / static_cast<double>(np_); }
    double cell() const { return dx() * dp(); }

    double x(std::size_t i) const { return x_min_ + dx() * static_cast<double>(i); }
    double p(std::size_t k) const { return p_min_ + dp() * static_cast<double>(k); }

    /// Angular wavenumber of x-mode a in FFT (wrapped) ordering.
    double kx(std::size_t a) const;
    /// Chord spacing dy = 2*pi*hbar / Lp.
    double chord_spacing() const;
    /// Chord value of p-conjugate mode m in FFT (wrapped) ordering.
    double chord(std::size_t m) const;

    /// True when density-matrix transforms are exact on this grid.
    bool fourier_complete() const;

    bool operator==(const PhaseSpaceGrid& o) const;
    bool operator!=(const PhaseSpaceGrid& o) const { return !(*this == o); }

  private:
    std::size_t nx_, np_;
    double x_min_, x_max_, p_min_, p_max_, hbar_;
};

}  // namespace wigsim
