#pragma once

#include <array>
#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

#include "wigsim/grid.hpp"

namespace wigsim {

/// First and second moments of a phase-space distribution.
struct Moments {
    double mean_x = 0.0;
    double mean_p = 0.0;
    double var_x = 0.0;
    double var_p = 0.0;
    double cov_xp = 0.0;

    double covariance_det() const { return var_x * var_p - cov_xp * cov_xp; }
    /// Momentum dispersion conditioned on position, in the 1/e half-width
    /// convention: sqrt(2 * det(Sigma) / Var(x)).
    double conditional_p_width() const;
};

/// Gaussian phase-space state: centroid, standard deviations, and the
/// x-p correlation (in action units). Legal quantum states satisfy
/// det(Sigma) >= (hbar/2)^2; pure iff equality.
struct GaussianSpec {
    double x0 = 0.0;
    double p0 = 0.0;
    double sigma_x = 1.0;
    double sigma_p = 1.0;
    double correlation = 0.0;

    double covariance_det() const {
        return sigma_x * sigma_x * sigma_p * sigma_p - correlation * correlation;
    }
    bool legal(double hbar) const {
        return sigma_x > 0 && sigma_p > 0 &&
               covariance_det() >= hbar * hbar / 4 * (1.0 - 1e-12);
    }
    bool pure(double hbar) const {
        return legal(hbar) &&
               std::abs(covariance_det() - hbar * hbar / 4) <= 1e-9 * hbar * hbar;
    }
};

/// Real-valued Wigner quasi-distribution on a PhaseSpaceGrid, stored
/// row-major with x as the slow index. Normalization holds after
/// construction; evolution does not silently renormalize (drift is a
/// diagnostic).
class WignerField {
  public:
    WignerField(PhaseSpaceGrid grid, double time = 0.0);

    const PhaseSpaceGrid& grid() const { return grid_; }
    double time() const { return time_; }
    void set_time(double t) { time_ = t; }

    double& at(std::size_t ix, std::size_t ip) { return values_[ix * grid_.np() + ip]; }
    double at(std::size_t ix, std::size_t ip) const { return values_[ix * grid_.np() + ip]; }
    std::vector<double>& values() { return values_; }
    const std::vector<double>& values() const { return values_; }

    /// Integral of W over phase space.
    double norm() const;
    /// Rescales so that norm() == 1.
    void normalize();
    bool has_nan() const;

  private:
    PhaseSpaceGrid grid_;
    double time_;
    std::vector<double> values_;
};

/// Normalized Gaussian Wigner state with the requested moments.
/// Throws InvalidArgument if the covariance is not a legal quantum state,
/// if the grid does not cover +/- 6 sigma around the centroid, or if the
/// state fails to decay to 1e-12 (relative) at the grid edges.
WignerField make_gaussian(const GaussianSpec& spec, const PhaseSpaceGrid& grid);

/// Equal superposition of two Gaussian lobes at x0 +/- x_sep/2 with the
/// base state's widths: two positive lobes plus the oscillatory
/// interference fringe between them. The base must be pure and
/// uncorrelated. Throws when a lobe falls outside the grid or the fringe
/// (wavelength 2*pi*hbar/x_sep in p) is sampled by fewer than 4 points.
WignerField make_cat(double x_sep, const GaussianSpec& base,
                     const PhaseSpaceGrid& grid);

Moments moments(const WignerField& w);

/// 2*pi*hbar * Integral of W^2; equals Tr(rho^2).
double purity(const WignerField& w);

/// Position marginal, length nx: integral of W over p.
std::vector<double> marginal_x(const WignerField& w);
/// Momentum marginal, length np: integral of W over x.
std::vector<double> marginal_p(const WignerField& w);

/// Binary snapshot IO ("WIG1": magic, nx, np as int64, extents/hbar/time
/// as float64, then row-major float64 samples, all little-endian).
void save_wig1(const WignerField& w, const std::string& path);
WignerField load_wig1(const std::string& path);

}  // namespace wigsim
