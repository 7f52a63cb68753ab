#include "wigsim/evolution.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <filesystem>
#include <iomanip>
#include <limits>
#include <sstream>

#include "wigsim/fft.hpp"

namespace wigsim {

namespace {

using cplx = std::complex<double>;
constexpr double kPi = 3.14159265358979323846;

double factorial(std::size_t n) {
    double f = 1.0;
    for (std::size_t i = 2; i <= n; ++i) f *= static_cast<double>(i);
    return f;
}

/// Chord-space phase rate theta(x, y) such that the kernel over a span dt
/// is e^{-i theta dt}; excludes the (linear-in-x) drive term, which is
/// handled per step as an extra A cos(w t) y / hbar.
double static_phase_rate(const PotentialSpec& spec, BracketMode mode,
                         std::size_t n_max, double hbar, double x, double y) {
    PotentialSpec s = spec;
    s.drive_amplitude = 0.0;
    switch (mode) {
        case BracketMode::moyal_exact:
            return (potential_eval(s, x + y / 2, 0.0) -
                    potential_eval(s, x - y / 2, 0.0)) / hbar;
        case BracketMode::poisson:
            return potential_derivative(s, 1, x, 0.0) * y / hbar;
        case BracketMode::truncated: {
            double th = 0.0;
            double ypow = y;
            for (std::size_t n = 0; n <= n_max; ++n) {
                th += potential_derivative(s, 2 * n + 1, x, 0.0) * ypow /
                      (std::pow(4.0, static_cast<double>(n)) * factorial(2 * n + 1));
                ypow *= y * y;
            }
            return th / hbar;
        }
    }
    return 0.0;
}

/// Largest phase-rate jump between physically adjacent chord samples,
/// used for the kernel aliasing bound (|dtheta| dt <= pi).
double max_rate_jump(const PotentialSpec& spec, BracketMode mode,
                     std::size_t n_max, const PhaseSpaceGrid& g) {
    const auto np = g.np();
    const double dy = g.chord_spacing();
    const double y_lo = -static_cast<double>(np / 2) * dy;
    double jump = 0.0;
    for (std::size_t i = 0; i < g.nx(); ++i) {
        double prev = static_phase_rate(spec, mode, n_max, g.hbar(), g.x(i), y_lo);
        for (std::size_t j = 1; j < np; ++j) {
            const double cur = static_phase_rate(spec, mode, n_max, g.hbar(),
                                                 g.x(i), y_lo + dy * static_cast<double>(j));
            jump = std::max(jump, std::abs(cur - prev));
            prev = cur;
        }
    }
    // worst-case drive contribution: |A| * dy / hbar per chord sample
    jump += std::abs(spec.drive_amplitude) * dy / g.hbar();
    return jump;
}

void to_complex(const WignerField& w, std::vector<cplx>& c) {
    const auto& v = w.values();
    c.resize(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) c[i] = v[i];
}

void to_real(const std::vector<cplx>& c, WignerField& w, double scale) {
    auto& v = w.values();
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = c[i].real() * scale;
}

}  // namespace

void EvolutionConfig::validate() const {
    if (!(dt > 0.0)) throw InvalidArgument("evolution: dt must be positive");
    if (!(t_max >= 0.0)) throw InvalidArgument("evolution: t_max must be >= 0");
    if (bracket == BracketMode::truncated && truncation_order < 1)
        throw InvalidArgument("evolution: truncation order must be >= 1");
    if (diagnostics_stride == 0)
        throw InvalidArgument("evolution: diagnostics_stride must be >= 1");
}

WignerField kinetic_step(const WignerField& w, const PotentialSpec& spec,
                         double dt) {
    const auto& g = w.grid();
    if (dt == 0.0) return w;
    const FftEngine fft(g.nx(), g.np());
    std::vector<cplx> c;
    to_complex(w, c);
    fft.forward_x(c.data());
    const auto nx = g.nx(), np = g.np();
    for (std::size_t a = 0; a < nx; ++a) {
        const double kxa = g.kx(a);
        for (std::size_t k = 0; k < np; ++k)
            c[a * np + k] *= std::polar(1.0, -kxa * g.p(k) * dt / spec.mass);
    }
    fft.backward_x(c.data());
    WignerField out(g, w.time());
    to_real(c, out, 1.0 / static_cast<double>(nx));
    return out;
}

WignerField potential_step(const WignerField& w, const PotentialSpec& spec,
                           double dt, BracketMode mode, double t,
                           std::size_t truncation_order) {
    const auto& g = w.grid();
    if (dt == 0.0) return w;
    const double jump = max_rate_jump(spec, mode, truncation_order, g);
    if (jump * std::abs(dt) > kPi)
        throw IntegrityError(
            "potential_step: kernel phase aliasing, dt = " + std::to_string(dt) +
            " exceeds the stability bound " + std::to_string(kPi / jump));
    const FftEngine fft(g.nx(), g.np());
    std::vector<cplx> c;
    to_complex(w, c);
    fft.backward_p(c.data());
    const auto nx = g.nx(), np = g.np();
    const double drive =
        spec.drive_amplitude * std::cos(spec.drive_frequency * t);
    for (std::size_t i = 0; i < nx; ++i)
        for (std::size_t m = 0; m < np; ++m) {
            const double y = g.chord(m);
            const double rate =
                static_phase_rate(spec, mode, truncation_order, g.hbar(), g.x(i), y) +
                drive * y / g.hbar();
            c[i * np + m] *= std::polar(1.0, -rate * dt);
        }
    fft.forward_p(c.data());
    WignerField out(g, w.time());
    to_real(c, out, 1.0 / static_cast<double>(np));
    return out;
}

WignerField diffusion_step(const WignerField& w, const EnvironmentParams& env,
                           double dt) {
    const auto& g = w.grid();
    if (dt == 0.0 || env.diffusion() == 0.0) return w;
    const FftEngine fft(g.nx(), g.np());
    std::vector<cplx> c;
    to_complex(w, c);
    fft.backward_p(c.data());
    const auto nx = g.nx(), np = g.np();
    const double h2 = g.hbar() * g.hbar();
    for (std::size_t m = 0; m < np; ++m) {
        const double y = g.chord(m);
        const double f = std::exp(-env.diffusion() * y * y * dt / h2);
        for (std::size_t i = 0; i < nx; ++i) c[i * np + m] *= f;
    }
    fft.forward_p(c.data());
    WignerField out(g, w.time());
    to_real(c, out, 1.0 / static_cast<double>(np));
    return out;
}

WignerField friction_step(const WignerField& w, const EnvironmentParams& env,
                          double dt) {
    const auto& g = w.grid();
    if (dt == 0.0 || env.gamma() == 0.0) return w;
    const double s = 2.0 * env.gamma() * dt;
    const double scale = std::exp(s);
    const FftEngine fft(g.nx(), g.np());
    std::vector<cplx> c;
    to_complex(w, c);
    fft.backward_p(c.data());
    // W(x, p e^s) e^s from the trigonometric interpolant along p
    const auto nx = g.nx(), np = g.np();
    WignerField out(g, w.time());
    const double norm_in = w.norm();
    std::vector<cplx> phases(np);
    for (std::size_t k = 0; k < np; ++k) {
        const double kappa = (g.p(k) * scale - g.p_min()) / g.dp();
        for (std::size_t m = 0; m < np; ++m) {
            std::ptrdiff_t wrapped = static_cast<std::ptrdiff_t>(m);
            if (wrapped >= static_cast<std::ptrdiff_t>(np / 2))
                wrapped -= static_cast<std::ptrdiff_t>(np);
            phases[m] = std::polar(1.0, -2.0 * kPi * static_cast<double>(wrapped) *
                                            kappa / static_cast<double>(np));
        }
        for (std::size_t i = 0; i < nx; ++i) {
            cplx acc(0.0, 0.0);
            const cplx* row = &c[i * np];
            for (std::size_t m = 0; m < np; ++m) acc += row[m] * phases[m];
            out.at(i, k) = scale * acc.real() / static_cast<double>(np);
        }
    }
    const double norm_out = out.norm();
    if (std::abs(norm_out - norm_in) > 1e-8 * std::max(1.0, std::abs(norm_in)))
        throw IntegrityError(
            "friction_step: rescaled support exceeds the grid (norm " +
            std::to_string(norm_in) + " -> " + std::to_string(norm_out) + ")");
    return out;
}

struct Propagator::Impl {
    PhaseSpaceGrid grid;
    PotentialSpec spec;
    EnvironmentParams env;
    FftEngine fft;
    std::vector<cplx> kin_half;       // x-spectrum shear for dt/2
    std::vector<double> rate_static;  // chord phase rate, drive excluded
    std::vector<cplx> chord_fused;    // e^{-i rate dt} * diffusion factor
    std::vector<cplx> chord_half;     // e^{-i rate dt/2}, friction path
    std::vector<double> diff_full;    // diffusion factor for dt
    mutable std::vector<cplx> buf;
    double rate_jump = 0.0;

    Impl(PhaseSpaceGrid g, PotentialSpec s, EnvironmentParams e,
         const EvolutionConfig& cfg)
        : grid(g), spec(std::move(s)), env(e), fft(g.nx(), g.np()),
          buf(g.nx() * g.np()) {
        const auto nx = grid.nx(), np = grid.np();
        const double dt = cfg.dt;
        kin_half.resize(nx * np);
        for (std::size_t a = 0; a < nx; ++a)
            for (std::size_t k = 0; k < np; ++k)
                kin_half[a * np + k] = std::polar(
                    1.0, -grid.kx(a) * grid.p(k) * (dt / 2) / spec.mass);
        rate_static.resize(nx * np);
        for (std::size_t i = 0; i < nx; ++i)
            for (std::size_t m = 0; m < np; ++m)
                rate_static[i * np + m] =
                    static_phase_rate(spec, cfg.bracket, cfg.truncation_order,
                                      grid.hbar(), grid.x(i), grid.chord(m));
        diff_full.resize(np);
        const double h2 = grid.hbar() * grid.hbar();
        for (std::size_t m = 0; m < np; ++m) {
            const double y = grid.chord(m);
            diff_full[m] = std::exp(-env.diffusion() * y * y * dt / h2);
        }
        chord_fused.resize(nx * np);
        chord_half.resize(cfg.friction_enabled ? nx * np : 0);
        for (std::size_t i = 0; i < nx; ++i)
            for (std::size_t m = 0; m < np; ++m) {
                chord_fused[i * np + m] =
                    std::polar(diff_full[m], -rate_static[i * np + m] * dt);
                if (cfg.friction_enabled)
                    chord_half[i * np + m] =
                        std::polar(1.0, -rate_static[i * np + m] * dt / 2);
            }
        rate_jump = max_rate_jump(spec, cfg.bracket, cfg.truncation_order, grid);
    }
};

Propagator::Propagator(PhaseSpaceGrid grid, PotentialSpec spec,
                       EnvironmentParams env, EvolutionConfig config)
    : config_(config) {
    config_.validate();
    spec.validate();
    impl_ = std::make_unique<Impl>(grid, std::move(spec), env, config_);
    // Both potential half-kernels are applied in a single chord pass, so
    // the aliasing guard uses the full dt.
    if (impl_->rate_jump * config_.dt > kPi)
        throw IntegrityError(
            "Propagator: potential kernel would alias at dt = " +
            std::to_string(config_.dt) + "; stability bound dt <= " +
            std::to_string(max_stable_dt()));
}

Propagator::~Propagator() = default;

double Propagator::max_stable_dt(double) const {
    return impl_->rate_jump > 0.0 ? kPi / impl_->rate_jump
                                  : std::numeric_limits<double>::infinity();
}

void Propagator::step(WignerField& w) const {
    auto& im = *impl_;
    if (w.grid() != im.grid)
        throw InvalidArgument("Propagator::step: field grid mismatch");
    const auto nx = im.grid.nx(), np = im.grid.np();
    const double dt = config_.dt;
    const double t0 = w.time();
    auto& c = im.buf;

    // half kinetic
    to_complex(w, c);
    im.fft.forward_x(c.data());
    for (std::size_t i = 0; i < nx * np; ++i) c[i] *= im.kin_half[i];
    im.fft.backward_x(c.data());
    to_real(c, w, 1.0 / static_cast<double>(nx));

    const double hbar = im.grid.hbar();
    const double A = im.spec.drive_amplitude;
    const double drive1 = A * std::cos(im.spec.drive_frequency * (t0 + dt / 4));
    const double drive2 = A * std::cos(im.spec.drive_frequency * (t0 + 3 * dt / 4));

    if (!config_.friction_enabled) {
        // potential halves and diffusion share one chord pass: all three
        // kernels are diagonal in (x, y) and commute
        to_complex(w, c);
        im.fft.backward_p(c.data());
        for (std::size_t m = 0; m < np; ++m) {
            const double y = im.grid.chord(m);
            const cplx dphase =
                std::polar(1.0, -(drive1 + drive2) * y * (dt / 2) / hbar);
            for (std::size_t i = 0; i < nx; ++i)
                c[i * np + m] *= im.chord_fused[i * np + m] * dphase;
        }
        im.fft.forward_p(c.data());
        to_real(c, w, 1.0 / static_cast<double>(np));
    } else {
        auto chord_half_pass = [&](double drive) {
            to_complex(w, c);
            im.fft.backward_p(c.data());
            for (std::size_t m = 0; m < np; ++m) {
                const double y = im.grid.chord(m);
                const cplx dphase = std::polar(1.0, -drive * y * (dt / 2) / hbar);
                for (std::size_t i = 0; i < nx; ++i)
                    c[i * np + m] *= im.chord_half[i * np + m] * dphase;
            }
            im.fft.forward_p(c.data());
            to_real(c, w, 1.0 / static_cast<double>(np));
        };
        chord_half_pass(drive1);
        w = diffusion_step(w, im.env, dt);
        w = friction_step(w, im.env, dt);
        chord_half_pass(drive2);
    }

    // half kinetic
    to_complex(w, c);
    im.fft.forward_x(c.data());
    for (std::size_t i = 0; i < nx * np; ++i) c[i] *= im.kin_half[i];
    im.fft.backward_x(c.data());
    to_real(c, w, 1.0 / static_cast<double>(nx));

    w.set_time(t0 + dt);
}

RunRecord run(WignerField state, const PotentialSpec& spec,
              const EnvironmentParams& env, const EvolutionConfig& config,
              const std::vector<Observer>& observers,
              const std::string& snapshot_dir) {
    const Propagator prop(state.grid(), spec, env, config);
    RunRecord rec;
    const auto n_steps =
        static_cast<std::size_t>(std::llround(config.t_max / config.dt));
    const double norm0 = state.norm();

    auto sample = [&](const WignerField& w) {
        SampleRow row;
        row.t = w.time();
        row.norm = w.norm();
        row.purity = purity(w);
        row.moments = moments(w);
        for (const auto& obs : observers) obs(w, row);
        rec.rows.push_back(std::move(row));
    };
    auto snapshot = [&](const WignerField& w, std::size_t step) {
        if (snapshot_dir.empty()) return;
        std::filesystem::create_directories(snapshot_dir);
        std::ostringstream name;
        name << snapshot_dir << "/w_" << std::setw(8) << std::setfill('0') << step
             << ".wig1";
        save_wig1(w, name.str());
        rec.snapshot_paths.push_back(name.str());
    };

    sample(state);
    if (config.snapshot_stride > 0) snapshot(state, 0);
    for (std::size_t i = 1; i <= n_steps; ++i) {
        prop.step(state);
        rec.steps = i;
        const bool diag = (i % config.diagnostics_stride == 0) || i == n_steps;
        if (diag) {
            if (state.has_nan()) {
                rec.aborted = true;
                rec.abort_reason = "field turned non-finite at t = " +
                                   std::to_string(state.time());
                rec.final_state = std::move(state);
                return rec;
            }
            const double drift = std::abs(state.norm() - norm0);
            if (drift > 1e-4) {
                rec.aborted = true;
                rec.abort_reason =
                    "norm drift " + std::to_string(drift) + " at t = " +
                    std::to_string(state.time()) + " exceeds 1e-4";
                rec.final_state = std::move(state);
                return rec;
            }
            sample(state);
        }
        if (config.snapshot_stride > 0 && i % config.snapshot_stride == 0)
            snapshot(state, i);
    }
    rec.final_state = std::move(state);
    return rec;
}

}  // namespace wigsim
