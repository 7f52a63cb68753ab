#include "wigsim/diagnostics.hpp"

#include <algorithm>
#include <cmath>

namespace wigsim {

namespace {

constexpr double kEigClipFloor = -1e-8;
constexpr double kEigCutoff = 1e-15;

struct LinFit {
    double intercept = 0.0;
    double slope = 0.0;
    double residual = 0.0;  // RMS
};

LinFit fit_line(const std::vector<double>& xs, const std::vector<double>& ys) {
    const auto n = static_cast<double>(xs.size());
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sx += xs[i];
        sy += ys[i];
        sxx += xs[i] * xs[i];
        sxy += xs[i] * ys[i];
    }
    LinFit f;
    const double denom = n * sxx - sx * sx;
    f.slope = denom != 0.0 ? (n * sxy - sx * sy) / denom : 0.0;
    f.intercept = (sy - f.slope * sx) / n;
    double ss = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double r = ys[i] - (f.intercept + f.slope * xs[i]);
        ss += r * r;
    }
    f.residual = std::sqrt(ss / n);
    return f;
}

}  // namespace

double linear_entropy(const WignerField& w) { return -std::log(purity(w)); }

double von_neumann_entropy(const DensityMatrix& rho) {
    double h = 0.0;
    for (double e : rho.eigenvalues()) {
        if (e < kEigClipFloor)
            throw IntegrityError(
                "von_neumann_entropy: spectrum reaches " + std::to_string(e) +
                ", below the -1e-8 clip floor; propagator integrity suspect");
        if (e > kEigCutoff) h -= e * std::log(e);
    }
    return h;
}

double von_neumann_entropy(const WignerField& w) {
    return von_neumann_entropy(wigner_to_density(w));
}

std::vector<RateSample> entropy_rate(const EntropySeries& series,
                                     double smoothing_window) {
    const auto& t = series.times;
    const auto& H = series.von_neumann;
    if (t.size() != H.size() || t.size() < 2)
        throw InvalidArgument("entropy_rate: need at least two samples");
    const double half = std::max(smoothing_window, 0.0) / 2.0;
    std::vector<RateSample> out(t.size());
    for (std::size_t i = 0; i < t.size(); ++i) {
        std::size_t lo = i, hi = i;
        while (lo > 0 && t[i] - t[lo - 1] <= half) --lo;
        while (hi + 1 < t.size() && t[hi + 1] - t[i] <= half) ++hi;
        if (lo == i && i > 0) lo = i - 1;
        if (hi == i && i + 1 < t.size()) hi = i + 1;
        out[i].t = t[i];
        out[i].rate = (H[hi] - H[lo]) / (t[hi] - t[lo]);
        out[i].one_sided = (lo == i || hi == i);
    }
    return out;
}

std::optional<double> critical_dispersion(const EnvironmentParams& env,
                                          double lambda_minus) {
    if (lambda_minus == 0.0) return std::nullopt;
    return std::sqrt(2.0 * env.diffusion() / std::abs(lambda_minus));
}

double coherence_length(const EnvironmentParams& env, double lambda_minus) {
    const auto sc = critical_dispersion(env, lambda_minus);
    if (!sc || *sc == 0.0) return std::numeric_limits<double>::infinity();
    return env.hbar() / *sc;
}

double decoherence_time(const EnvironmentParams& env, double delta_x) {
    if (!(delta_x > 0.0))
        throw InvalidArgument("decoherence_time: delta_x must be positive");
    if (env.diffusion() == 0.0) return std::numeric_limits<double>::infinity();
    const double h = env.hbar();
    const double tau = h * h / (env.diffusion() * delta_x * delta_x);
    if (env.gamma() > 0.0) {
        const double ratio = env.de_broglie_wavelength() / delta_x;
        const double tau_alt = env.relaxation_time() * ratio * ratio;
        if (std::abs(tau - tau_alt) > 1e-12 * std::abs(tau))
            throw IntegrityError("decoherence_time: the two closed forms "
                                 "disagree; environment parameters corrupt");
    }
    return tau;
}

double ehrenfest_time(double lambda_plus, double chi, double delta_p,
                      double hbar) {
    if (!(lambda_plus > 0.0))
        throw InvalidArgument("ehrenfest_time: lambda_plus must be positive");
    const double arg = chi * delta_p / hbar;
    if (!(arg > 1.0))
        throw InvalidArgument("ehrenfest_time: requires chi delta_p > hbar");
    return std::log(arg) / lambda_plus;
}

EquilibrationTime equilibration_time(double H_eq, double H_0, double rate) {
    EquilibrationTime t;
    if (rate == 0.0) {
        t.literal = t.difference = std::numeric_limits<double>::infinity();
        return t;
    }
    t.literal = (H_eq / H_0) / rate;
    t.difference = (H_eq - H_0) / rate;
    return t;
}

double hdot_model(double lambda_plus, double sigma_p0, double sigma_c,
                  double t) {
    const double r = sigma_p0 / sigma_c;
    return lambda_plus / (1.0 + (r * r - 1.0) * std::exp(-2.0 * lambda_plus * t));
}

const char* to_string(ChaosVerdict::Class c) {
    switch (c) {
        case ChaosVerdict::Class::chaotic: return "chaotic";
        case ChaosVerdict::Class::regular: return "regular";
        case ChaosVerdict::Class::inconclusive: return "inconclusive";
    }
    return "inconclusive";
}

ChaosVerdict classify(const EntropySeries& series,
                      const LyapunovSpectrum& spectrum,
                      const ChaosVerdictConfig& config) {
    ChaosVerdict v;
    v.lambda_reference = spectrum.lambda_plus;
    const auto& t = series.times;
    const auto& H = series.von_neumann;
    if (t.size() < 8) {
        v.note = "window-too-short: fewer than 8 samples";
        return v;
    }

    // empirical saturation entropy: late-time plateau of the series. A run
    // counts as saturated only when its tail is genuinely flat; a slowly
    // growing (logarithmic) series never saturates within the record.
    const std::size_t tail = std::max<std::size_t>(3, t.size() / 10);
    double heq = 0.0;
    for (std::size_t i = t.size() - tail; i < t.size(); ++i) heq += H[i];
    heq /= static_cast<double>(tail);
    v.H_eq = heq;
    const double gain = heq - H.front();
    const double t85 = t.front() + 0.85 * (t.back() - t.front());
    std::size_t i85 = 0;
    while (i85 + 1 < t.size() && t[i85] < t85) ++i85;
    const bool flat_tail =
        gain > 0.0 && (H.back() - H[i85]) <= config.flat_tail_fraction * gain;
    if (flat_tail) {
        const double target = H.front() + config.saturation_fraction * gain;
        for (std::size_t i = 0; i < t.size(); ++i)
            if (H[i] >= target) {
                v.saturation_time = t[i];
                break;
            }
    }

    double smooth = config.smoothing_window;
    if (smooth <= 0.0)
        smooth = std::abs(spectrum.lambda_plus) > 1e-6
                     ? 1.0 / std::abs(spectrum.lambda_plus)
                     : (t.back() - t.front()) / 20.0;
    const auto rates = entropy_rate(series, smooth);

    // fit window: explicit, or from the transient peak to saturation
    double t_min = config.window_t_min;
    double t_max = config.window_t_max;
    if (t_max < 0.0) t_max = std::min(v.saturation_time, t.back());
    if (t_min < 0.0) {
        std::size_t ipk = 0;
        for (std::size_t i = 0; i < rates.size(); ++i)
            if (t[i] < t_max && rates[i].rate > rates[ipk].rate) ipk = i;
        t_min = t[ipk];
    }
    v.window_t_min = t_min;
    v.window_t_max = t_max;

    std::vector<double> ln_t, ln_r;
    for (const auto& r : rates) {
        if (r.t < t_min || r.t > t_max || r.one_sided) continue;
        if (r.rate <= 0.0) continue;
        ln_t.push_back(std::log(r.t));
        ln_r.push_back(std::log(r.rate));
    }
    if (ln_r.size() < 5) {
        v.note = "window-too-short: fewer than 5 usable rate samples in [" +
                 std::to_string(t_min) + ", " + std::to_string(t_max) + "]";
        return v;
    }

    // (a) constant rate, fitted in log space
    double mean_ln = 0.0;
    for (double r : ln_r) mean_ln += r;
    mean_ln /= static_cast<double>(ln_r.size());
    double ss = 0.0;
    for (double r : ln_r) ss += (r - mean_ln) * (r - mean_ln);
    v.plateau_rate = std::exp(mean_ln);
    v.plateau_residual = std::sqrt(ss / static_cast<double>(ln_r.size()));

    // (b) power law rate = c t^alpha
    const LinFit pf = fit_line(ln_t, ln_r);
    v.decay_exponent = pf.slope;
    v.decay_amplitude = std::exp(pf.intercept);
    v.power_residual = pf.residual;

    v.plateau_ratio = spectrum.lambda_plus != 0.0
                          ? v.plateau_rate / spectrum.lambda_plus
                          : std::numeric_limits<double>::infinity();

    const bool constant_wins =
        v.plateau_residual * config.residual_margin <= v.power_residual;
    const bool power_wins =
        v.power_residual * config.residual_margin <= v.plateau_residual;

    const double t_run_end = std::min(v.saturation_time, t.back());
    const bool persists_to_saturation = t_max >= 0.95 * t_run_end;

    if (constant_wins && v.plateau_ratio >= config.ratio_min &&
        v.plateau_ratio <= config.ratio_max && persists_to_saturation) {
        v.classification = ChaosVerdict::Class::chaotic;
    } else if (power_wins &&
               std::abs(pf.slope - config.alpha_target) <= config.alpha_band &&
               t_max <= v.saturation_time + 1e-12) {
        v.classification = ChaosVerdict::Class::regular;
    } else {
        v.classification = ChaosVerdict::Class::inconclusive;
        if (!constant_wins && !power_wins)
            v.note = "comparable residuals";
        else if (constant_wins)
            v.note = "constant fit wins but plateau ratio " +
                     std::to_string(v.plateau_ratio) + " outside band";
        else
            v.note = "power fit wins but alpha " + std::to_string(pf.slope) +
                     " outside band";
    }
    return v;
}

TimescaleReport build_timescale_report(const EnvironmentParams& env,
                                       const PotentialSpec& potential,
                                       const Moments& initial,
                                       double lambda_plus, double lambda_minus,
                                       double H_eq, double H_0,
                                       double plateau_rate, double t0) {
    TimescaleReport r;
    r.tau_R = env.relaxation_time();
    r.lambda_dB = env.de_broglie_wavelength();
    r.delta_x_reference = 2.0 * std::sqrt(std::max(initial.var_x, 0.0));
    r.tau_D = r.delta_x_reference > 0.0
                  ? decoherence_time(env, r.delta_x_reference)
                  : std::numeric_limits<double>::infinity();
    r.sigma_c = critical_dispersion(env, lambda_minus);
    r.coherence_len = coherence_length(env, lambda_minus);

    // chi_1 at the initial centroid; fall back to the occupied-region scan
    // when the centroid sits on a zero-gradient point
    r.chi_reference_x = initial.mean_x;
    const double span = 3.0 * std::sqrt(std::max(initial.var_x, 0.0));
    double chi_min = std::numeric_limits<double>::infinity();
    for (int i = 0; i <= 64; ++i) {
        const double x =
            initial.mean_x - span + 2.0 * span * static_cast<double>(i) / 64.0;
        try {
            chi_min = std::min(chi_min, nonlinearity_scale(potential, 1, x, t0));
        } catch (const InvalidArgument&) {
        }
    }
    if (std::isfinite(chi_min)) r.chi_1_min = chi_min;
    try {
        r.chi_1 = nonlinearity_scale(potential, 1, initial.mean_x, t0);
    } catch (const InvalidArgument&) {
        r.chi_1 = chi_min;  // centroid force vanishes; use the region scan
    }

    const double delta_p = std::sqrt(std::max(initial.var_p, 0.0));
    if (lambda_plus > 0.0 && std::isfinite(r.chi_1) &&
        r.chi_1 * delta_p / env.hbar() > 1.0)
        r.t_chi = ehrenfest_time(lambda_plus, r.chi_1, delta_p, env.hbar());

    r.H_eq = H_eq;
    r.H_0 = H_0;
    r.t_eq = equilibration_time(H_eq, H_0, plateau_rate);

    if (r.sigma_c && std::isfinite(r.chi_1)) {
        r.chi_over_l = r.chi_1 / r.coherence_len;
        r.hbar_over_chi_sigma_c = env.hbar() / (r.chi_1 * *r.sigma_c);
        r.quantum_regime = r.chi_over_l < 1.0;
        r.classical_regime = r.hbar_over_chi_sigma_c < 1.0;
    }
    return r;
}

}  // namespace wigsim
