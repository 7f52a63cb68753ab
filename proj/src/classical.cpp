#include "wigsim/classical.hpp"

#include <cmath>
#include <random>

namespace wigsim {

namespace {

double force(const PotentialSpec& spec, double x, double t) {
    return -potential_derivative(spec, 1, x, t);
}

}  // namespace

TrajectoryState verlet_step(const TrajectoryState& s, const PotentialSpec& spec,
                            double dt) {
    // both kicks evaluate the drive at the midpoint time
    const double tm = s.t + dt / 2;
    TrajectoryState out = s;
    double p = s.p + 0.5 * dt * force(spec, s.x, tm);
    out.x = s.x + dt * p / spec.mass;
    out.p = p + 0.5 * dt * force(spec, out.x, tm);
    out.t = s.t + dt;
    return out;
}

std::vector<TrajectoryState> integrate(const TrajectoryState& initial,
                                       const PotentialSpec& spec, double dt,
                                       std::size_t n_steps) {
    std::vector<TrajectoryState> traj;
    traj.reserve(n_steps + 1);
    traj.push_back(initial);
    for (std::size_t i = 0; i < n_steps; ++i)
        traj.push_back(verlet_step(traj.back(), spec, dt));
    return traj;
}

std::array<double, 2> tangent_step(const TrajectoryState& before,
                                   const TrajectoryState& after,
                                   const std::array<double, 2>& deviation,
                                   const PotentialSpec& spec, double dt) {
    const double tm = before.t + dt / 2;
    double dx = deviation[0], dp = deviation[1];
    dp -= 0.5 * dt * potential_derivative(spec, 2, before.x, tm) * dx;
    dx += dt * dp / spec.mass;
    dp -= 0.5 * dt * potential_derivative(spec, 2, after.x, tm) * dx;
    return {dx, dp};
}

LyapunovSpectrum benettin_spectrum(const TrajectoryState& initial,
                                   const PotentialSpec& spec, double dt,
                                   double t_total, std::size_t renorm_stride) {
    if (renorm_stride == 0)
        throw InvalidArgument("benettin_spectrum: renorm_stride must be >= 1");
    LyapunovSpectrum out;
    TrajectoryState s = initial;
    std::array<double, 2> v1{1.0, 0.0}, v2{0.0, 1.0};
    double sum1 = 0.0, sum2 = 0.0;
    const auto n_steps = static_cast<std::size_t>(std::llround(t_total / dt));
    for (std::size_t i = 1; i <= n_steps; ++i) {
        const TrajectoryState before = s;
        s = verlet_step(s, spec, dt);
        v1 = tangent_step(before, s, v1, spec, dt);
        v2 = tangent_step(before, s, v2, spec, dt);
        if (i % renorm_stride == 0 || i == n_steps) {
            const double r1 = std::hypot(v1[0], v1[1]);
            v1 = {v1[0] / r1, v1[1] / r1};
            const double proj = v1[0] * v2[0] + v1[1] * v2[1];
            v2 = {v2[0] - proj * v1[0], v2[1] - proj * v1[1]};
            const double r2 = std::hypot(v2[0], v2[1]);
            v2 = {v2[0] / r2, v2[1] / r2};
            sum1 += std::log(r1);
            sum2 += std::log(r2);
            out.history.push_back({s.t, sum1 / s.t, sum2 / s.t});
        }
    }
    if (out.history.empty())
        throw InvalidArgument("benettin_spectrum: t_total shorter than dt");
    out.lambda_plus = out.history.back()[1];
    out.lambda_minus = out.history.back()[2];
    out.averaging_time = s.t;
    // convergence: running estimate steady over the final quarter
    double lo = out.lambda_plus, hi = out.lambda_plus;
    for (const auto& h : out.history)
        if (h[0] >= 0.75 * out.averaging_time) {
            lo = std::min(lo, h[1]);
            hi = std::max(hi, h[1]);
        }
    const double band = std::max(0.1 * std::abs(out.lambda_plus), 1e-3);
    out.converged = (hi - lo) <= band;
    return out;
}

EnsembleHistory ensemble_spread(const GaussianSpec& initial_cloud,
                                const PotentialSpec& spec, double dt, double t,
                                std::size_t n_samples, std::uint64_t seed,
                                std::size_t sample_stride) {
    if (n_samples < 2)
        throw InvalidArgument("ensemble_spread: need at least 2 samples");
    if (sample_stride == 0) sample_stride = 1;
    // Box-Muller on mt19937_64 keeps the draw sequence platform-stable.
    std::mt19937_64 rng(seed);
    auto normal_pair = [&rng]() {
        const double u1 = (static_cast<double>(rng() >> 11) + 0.5) * 0x1.0p-53;
        const double u2 = (static_cast<double>(rng() >> 11) + 0.5) * 0x1.0p-53;
        const double r = std::sqrt(-2.0 * std::log(u1));
        return std::array<double, 2>{r * std::cos(2.0 * 3.14159265358979323846 * u2),
                                     r * std::sin(2.0 * 3.14159265358979323846 * u2)};
    };
    // Cholesky factor of the covariance [[sx^2, c], [c, sp^2]]
    const double sx = initial_cloud.sigma_x;
    const double c = initial_cloud.correlation;
    const double l11 = sx;
    const double l21 = c / sx;
    const double l22 = std::sqrt(initial_cloud.sigma_p * initial_cloud.sigma_p -
                                 l21 * l21);
    std::vector<double> xs(n_samples), ps(n_samples);
    for (std::size_t i = 0; i < n_samples; ++i) {
        const auto z = normal_pair();
        xs[i] = initial_cloud.x0 + l11 * z[0];
        ps[i] = initial_cloud.p0 + l21 * z[0] + l22 * z[1];
    }

    EnsembleHistory hist;
    const auto n_steps = static_cast<std::size_t>(std::llround(t / dt));
    auto record = [&](double time) {
        double mx = 0.0, mp = 0.0;
        for (std::size_t i = 0; i < n_samples; ++i) {
            mx += xs[i];
            mp += ps[i];
        }
        mx /= static_cast<double>(n_samples);
        mp /= static_cast<double>(n_samples);
        Moments m;
        m.mean_x = mx;
        m.mean_p = mp;
        for (std::size_t i = 0; i < n_samples; ++i) {
            const double dx = xs[i] - mx, dp = ps[i] - mp;
            m.var_x += dx * dx;
            m.var_p += dp * dp;
            m.cov_xp += dx * dp;
        }
        m.var_x /= static_cast<double>(n_samples);
        m.var_p /= static_cast<double>(n_samples);
        m.cov_xp /= static_cast<double>(n_samples);
        hist.times.push_back(time);
        hist.moments.push_back(m);
    };
    record(0.0);
    for (std::size_t step = 1; step <= n_steps; ++step) {
        const double t0 = dt * static_cast<double>(step - 1);
        const double tm = t0 + dt / 2;
        for (std::size_t i = 0; i < n_samples; ++i) {
            double p = ps[i] + 0.5 * dt * (-potential_derivative(spec, 1, xs[i], tm));
            const double x = xs[i] + dt * p / spec.mass;
            p += 0.5 * dt * (-potential_derivative(spec, 1, x, tm));
            xs[i] = x;
            ps[i] = p;
        }
        if (step % sample_stride == 0 || step == n_steps)
            record(dt * static_cast<double>(step));
    }
    return hist;
}

}  // namespace wigsim
