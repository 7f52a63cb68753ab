#pragma once

#include <cstddef>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "wigsim/classical.hpp"
#include "wigsim/density_matrix.hpp"
#include "wigsim/environment.hpp"
#include "wigsim/wigner_field.hpp"

namespace wigsim {

/// -ln(2 pi hbar Integral W^2): Renyi-2 entropy of the state.
double linear_entropy(const WignerField& w);

/// Spectrum entropy -sum p ln p of wigner_to_density(w); eigenvalues in
/// [-1e-8, 0) are clipped to zero, anything more negative raises
/// IntegrityError (propagator integrity, not numerical noise).
double von_neumann_entropy(const WignerField& w);
double von_neumann_entropy(const DensityMatrix& rho);

/// Entropy time series with smoothed production-rate estimates.
struct EntropySeries {
    std::vector<double> times;
    std::vector<double> linear;
    std::vector<double> von_neumann;
    double initial_entropy() const {
        return von_neumann.empty() ? 0.0 : von_neumann.front();
    }
};

struct RateSample {
    double t = 0.0;
    double rate = 0.0;
    bool one_sided = false;  // endpoint estimate, not centered
};

/// Centered finite differences of the von Neumann series over a smoothing
/// window (in time units); endpoints fall back to one-sided differences
/// and are flagged.
std::vector<RateSample> entropy_rate(const EntropySeries& series,
                                     double smoothing_window);

/// sigma_c = sqrt(2 D / |lambda_minus|), the steady 1/e half-width of the
/// momentum profile where squeezing balances diffusion. Absent when
/// lambda_minus = 0 (regular systems reach no such steady width).
std::optional<double> critical_dispersion(const EnvironmentParams& env,
                                          double lambda_minus);

/// l = hbar / sigma_c; +infinity when D = 0.
double coherence_length(const EnvironmentParams& env, double lambda_minus);

/// tau_D = hbar^2 / (D delta_x^2); for gamma > 0 this is identically
/// tau_R (lambda_dB / delta_x)^2 and both forms are cross-checked.
double decoherence_time(const EnvironmentParams& env, double delta_x);

/// t = ln(chi delta_p / hbar) / lambda_plus with the proportionality
/// constant fixed to 1 (reported convention). Requires chi delta_p > hbar.
double ehrenfest_time(double lambda_plus, double chi, double delta_p,
                      double hbar);

struct EquilibrationTime {
    double literal = 0.0;     // (H_eq / H_0) / Hdot
    double difference = 0.0;  // (H_eq - H_0) / Hdot
};
EquilibrationTime equilibration_time(double H_eq, double H_0, double rate);

/// Closed-form transient entropy rate
///   lambda / (1 + (sigma_p0^2/sigma_c^2 - 1) e^{-2 lambda t}).
double hdot_model(double lambda_plus, double sigma_p0, double sigma_c, double t);

/// Closed-form timescales and lengths for a run configuration.
struct TimescaleReport {
    double tau_D = 0.0;                 // at delta_x_reference
    double delta_x_reference = 0.0;
    double tau_R = 0.0;
    double lambda_dB = 0.0;
    std::optional<double> sigma_c;
    double coherence_len = 0.0;
    double chi_1 = 0.0;                 // at the reference point
    double chi_reference_x = 0.0;
    std::optional<double> chi_1_min;    // min over the occupied region
    std::optional<double> t_chi;        // absent when chi delta_p <= hbar
    EquilibrationTime t_eq;
    double H_eq = 0.0;
    double H_0 = 0.0;
    bool quantum_regime = false;        // chi << l   (coherence outruns nonlinearity)
    bool classical_regime = false;      // hbar << chi sigma_c
    double chi_over_l = 0.0;
    double hbar_over_chi_sigma_c = 0.0;
};

struct ChaosVerdictConfig {
    double ratio_min = 0.5;        // plateau_rate / lambda_plus band
    double ratio_max = 1.5;
    double alpha_target = -1.0;    // power-law exponent band center
    double alpha_band = 0.3;
    double residual_margin = 1.2;  // fits closer than this are "comparable"
    double saturation_fraction = 0.9;   // of the late-time entropy gain
    double flat_tail_fraction = 0.02;   // tail growth below this marks saturation
    double min_window_span = 3.0;       // in units of 1/lambda (or drive periods)
    double window_t_min = -1.0;         // explicit fit window; < 0 = automatic
    double window_t_max = -1.0;
    double smoothing_window = -1.0;     // < 0: 1/lambda_plus (or one period)
};

struct ChaosVerdict {
    enum class Class { chaotic, regular, inconclusive };
    Class classification = Class::inconclusive;
    double plateau_rate = 0.0;
    double plateau_residual = 0.0;
    double decay_exponent = 0.0;
    double decay_amplitude = 0.0;
    double power_residual = 0.0;
    double plateau_ratio = 0.0;
    double lambda_reference = 0.0;
    double window_t_min = 0.0;
    double window_t_max = 0.0;
    double H_eq = 0.0;
    double saturation_time = std::numeric_limits<double>::infinity();
    std::string note;
};

/// Fits (a) a constant rate and (b) a power law c t^alpha to the entropy
/// production rate inside the fit window and classifies the run:
/// chaotic when the constant fit wins, the rate sits in the configured
/// band around lambda_plus, and the plateau persists until the entropy
/// approaches saturation; regular when the power law wins with
/// alpha = -1 within the band before saturation; inconclusive otherwise.
ChaosVerdict classify(const EntropySeries& series,
                      const LyapunovSpectrum& spectrum,
                      const ChaosVerdictConfig& config);

const char* to_string(ChaosVerdict::Class c);

/// Populates the closed-form timescales for a run: tau_D at the stated
/// separation (2 sqrt(Var x) of the initial state), chi_1 at the initial
/// centroid plus its minimum over the occupied region, the breakdown time
/// from ln(chi delta_p / hbar), and both equilibration-time forms.
TimescaleReport build_timescale_report(const EnvironmentParams& env,
                                       const PotentialSpec& potential,
                                       const Moments& initial,
                                       double lambda_plus, double lambda_minus,
                                       double H_eq, double H_0,
                                       double plateau_rate, double t0 = 0.0);

}  // namespace wigsim
