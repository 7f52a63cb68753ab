#pragma once

#include <complex>
#include <cstddef>
#include <vector>

#include "wigsim/wigner_field.hpp"

namespace wigsim {

/// Position-representation density matrix rho(x_i, x_j) on the grid's
/// x-axis, row-major, Hermitian with unit trace (sum of diagonal * dx).
class DensityMatrix {
  public:
    DensityMatrix(std::size_t n, double dx, double hbar);

    std::size_t dimension() const { return n_; }
    double dx() const { return dx_; }
    double hbar() const { return hbar_; }

    std::complex<double>& at(std::size_t i, std::size_t j) { return m_[i * n_ + j]; }
    const std::complex<double>& at(std::size_t i, std::size_t j) const { return m_[i * n_ + j]; }
    std::vector<std::complex<double>>& data() { return m_; }
    const std::vector<std::complex<double>>& data() const { return m_; }

    double trace() const;
    /// Largest |rho(i,j) - conj(rho(j,i))|.
    double hermiticity_defect() const;

    /// Operator spectrum (matrix eigenvalues * dx), ascending.
    std::vector<double> eigenvalues() const;

  private:
    std::size_t n_;
    double dx_, hbar_;
    std::vector<std::complex<double>> m_;
};

/// rho(x, x') = Integral W((x+x')/2, p) e^{i p (x-x')/hbar} dp, computed
/// spectrally. Requires a Fourier-complete grid (nx == np, dx equal to the
/// chord spacing); entries with |i-j| >= nx/2 lie beyond the chord
/// fundamental domain and are zero.
DensityMatrix wigner_to_density(const WignerField& w);

/// Exact inverse of wigner_to_density on the shared grid (up to the
/// edge-coherence samples the matrix cannot carry, which are below the
/// constructor's edge-decay tolerance for admissible states).
WignerField density_to_wigner(const DensityMatrix& rho, const PhaseSpaceGrid& grid);

}  // namespace wigsim
