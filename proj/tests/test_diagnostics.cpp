#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "wigsim/diagnostics.hpp"

using namespace wigsim;

namespace {

// analytic entropy of a gaussian state with symplectic eigenvalue nu
double gaussian_vn_oracle(double nu) {
    if (nu <= 0.5) return 0.0;
    return (nu + 0.5) * std::log(nu + 0.5) - (nu - 0.5) * std::log(nu - 0.5);
}

EntropySeries synthetic_series(double t0, double t1, double dt,
                               double (*H)(double)) {
    EntropySeries s;
    for (double t = t0; t <= t1 + 1e-12; t += dt) {
        s.times.push_back(t);
        s.von_neumann.push_back(H(t));
        s.linear.push_back(H(t));
    }
    return s;
}

LyapunovSpectrum spectrum_of(double lam) {
    LyapunovSpectrum sp;
    sp.lambda_plus = lam;
    sp.lambda_minus = -lam;
    return sp;
}

}  // namespace

TEST_CASE("linear entropy: pure zero, disjoint mixture ln 2, thermal ln 2") {
    const auto g = PhaseSpaceGrid::square(128);
    const double sx = 1.0 / std::sqrt(2.0);
    const auto pure = make_gaussian({0.0, 0.0, sx, sx, 0.0}, g);
    CHECK(std::abs(linear_entropy(pure)) < 1e-6);

    const auto wa = make_gaussian({-5.0, 0.0, sx, sx, 0.0}, g);
    const auto wb = make_gaussian({5.0, 0.0, sx, sx, 0.0}, g);
    WignerField mix(g);
    for (std::size_t i = 0; i < mix.values().size(); ++i)
        mix.values()[i] = 0.5 * (wa.values()[i] + wb.values()[i]);
    CHECK(linear_entropy(mix) == doctest::Approx(std::log(2.0)).epsilon(1e-6));

    const auto thermal = make_gaussian({0.0, 0.0, 1.0, 1.0, 0.0}, g);
    CHECK(linear_entropy(thermal) == doctest::Approx(std::log(2.0)).epsilon(1e-6));
}

TEST_CASE("von neumann entropy against the analytic gaussian oracle") {
    const auto g = PhaseSpaceGrid::square(128);
    const double sx = 1.0 / std::sqrt(2.0);
    CHECK(std::abs(von_neumann_entropy(make_gaussian({0, 0, sx, sx, 0}, g))) < 1e-6);

    const double expected = gaussian_vn_oracle(1.0);
    CHECK(expected == doctest::Approx(1.5 * std::log(1.5) - 0.5 * std::log(0.5))
                          .epsilon(1e-14));
    CHECK(von_neumann_entropy(make_gaussian({0, 0, 1.0, 1.0, 0}, g)) ==
          doctest::Approx(expected).epsilon(1e-6));

    // two disjoint equal gaussians: ln 2
    const auto wa = make_gaussian({-5.0, 0.0, sx, sx, 0.0}, g);
    const auto wb = make_gaussian({5.0, 0.0, sx, sx, 0.0}, g);
    WignerField mix(g);
    for (std::size_t i = 0; i < mix.values().size(); ++i)
        mix.values()[i] = 0.5 * (wa.values()[i] + wb.values()[i]);
    CHECK(von_neumann_entropy(mix) == doctest::Approx(std::log(2.0)).epsilon(1e-5));
}

TEST_CASE("von neumann dominates linear entropy on gaussian mixtures") {
    const auto g = PhaseSpaceGrid::square(128);
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(0.8, 1.6);
    for (int rep = 0; rep < 6; ++rep) {
        const auto w = make_gaussian({0.0, 0.0, u(rng), u(rng), 0.0}, g);
        CHECK(von_neumann_entropy(w) >= linear_entropy(w) - 1e-6);
    }
}

TEST_CASE("entropy rate: linear series gives the constant slope") {
    const auto s = synthetic_series(0.0, 10.0, 0.1,
                                    [](double t) { return 0.3 * t + 1.0; });
    const auto r = entropy_rate(s, 0.5);
    for (const auto& q : r) {
        if (q.one_sided) continue;
        CHECK(q.rate == doctest::Approx(0.3).epsilon(1e-10));
    }
    CHECK(r.front().one_sided);
    CHECK(r.back().one_sided);
}

TEST_CASE("entropy rate: logarithmic series gives rate ~ c/t") {
    const auto s = synthetic_series(1.0, 50.0, 0.05,
                                    [](double t) { return 2.0 * std::log(t); });
    const auto r = entropy_rate(s, 0.4);
    for (std::size_t i = 100; i < r.size() - 10; i += 50)
        CHECK(r[i].t * r[i].rate == doctest::Approx(2.0).epsilon(5e-3));
}

TEST_CASE("entropy rate recovers the closed-form transient within 1%") {
    // H(t) = integral of the model rate with lambda = 1, ratio 10
    static constexpr double K = 99.0;
    const auto s = synthetic_series(0.0, 10.0, 0.01, [](double t) {
        return t + 0.5 * std::log((1.0 + K * std::exp(-2.0 * t)) / (1.0 + K));
    });
    const auto r = entropy_rate(s, 0.1);
    for (std::size_t i = 0; i < r.size(); ++i) {
        if (r[i].one_sided) continue;
        const double model = hdot_model(1.0, 10.0, 1.0, r[i].t);
        CHECK(r[i].rate == doctest::Approx(model).epsilon(0.01));
    }
}

TEST_CASE("critical dispersion and coherence length") {
    const EnvironmentParams env_half(0.0, 1.0, 1.0, 1.0, 0.5);
    CHECK(*critical_dispersion(env_half, -1.0) == doctest::Approx(1.0));
    const EnvironmentParams env2(0.0, 1.0, 1.0, 1.0, 2.0);
    CHECK(*critical_dispersion(env2, -4.0) == doctest::Approx(1.0));
    const EnvironmentParams env0(0.0, 1.0, 1.0, 1.0, 0.0);
    CHECK(*critical_dispersion(env0, -1.0) == 0.0);
    CHECK(!critical_dispersion(env_half, 0.0).has_value());

    CHECK(coherence_length(env_half, -1.0) == doctest::Approx(1.0));
    CHECK(std::isinf(coherence_length(env0, -1.0)));
    // l * sigma_c = hbar identically, and l is linear in hbar
    for (double hbar : {0.5, 1.0, 2.0}) {
        const EnvironmentParams e(0.0, 1.0, 1.0, hbar, 0.7);
        const double sc = *critical_dispersion(e, -1.3);
        CHECK(coherence_length(e, -1.3) * sc == doctest::Approx(hbar).epsilon(1e-12));
    }
}

TEST_CASE("decoherence time: closed forms and scalings") {
    // hbar = 1, m = 1, k_B T = 0.5, gamma = 1: D = 1, tau_R = 1
    const EnvironmentParams env(1.0, 0.5, 1.0, 1.0);
    CHECK(env.diffusion() == doctest::Approx(1.0));
    CHECK(decoherence_time(env, 10.0) == doctest::Approx(0.01).epsilon(1e-12));
    // at delta_x = lambda_dB, tau_D = tau_R
    CHECK(decoherence_time(env, env.de_broglie_wavelength()) ==
          doctest::Approx(env.relaxation_time()).epsilon(1e-12));
    // doubling the separation quarters the time
    CHECK(decoherence_time(env, 20.0) ==
          doctest::Approx(decoherence_time(env, 10.0) / 4.0).epsilon(1e-12));
    // tau_D / tau_R is independent of gamma
    const EnvironmentParams env4(4.0, 0.5, 1.0, 1.0);
    CHECK(decoherence_time(env, 10.0) / env.relaxation_time() ==
          doctest::Approx(decoherence_time(env4, 10.0) / env4.relaxation_time())
              .epsilon(1e-12));
}

TEST_CASE("ehrenfest time") {
    CHECK(ehrenfest_time(1.0, 1.0, std::exp(1.0), 1.0) == doctest::Approx(1.0));
    CHECK_THROWS_AS(ehrenfest_time(1.0, 1.0, 1.0, 1.0), InvalidArgument);
    // reducing hbar 4x at fixed chi delta_p adds ln 4 / lambda
    const double t1 = ehrenfest_time(1.0, 0.5, 1.0, 0.1);
    const double t2 = ehrenfest_time(1.0, 0.5, 1.0, 0.025);
    CHECK(t2 - t1 == doctest::Approx(std::log(4.0)).epsilon(1e-12));
}

TEST_CASE("equilibration time: both forms") {
    const auto t = equilibration_time(10.0, 1.0, 1.0);
    CHECK(t.literal == doctest::Approx(10.0));
    CHECK(t.difference == doctest::Approx(9.0));
    CHECK(std::isinf(equilibration_time(10.0, 1.0, 0.0).literal));
    CHECK(equilibration_time(5.0, 5.0, 2.0).difference == doctest::Approx(0.0));
}

TEST_CASE("hdot model: limits and the paper value at t = 0") {
    for (double t : {0.0, 0.7, 3.0})
        CHECK(hdot_model(1.3, 2.0, 2.0, t) == doctest::Approx(1.3));
    CHECK(hdot_model(1.0, 10.0, 1.0, 50.0) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(hdot_model(1.0, 10.0, 1.0, 0.0) == doctest::Approx(0.01));
}

TEST_CASE("hdot model integrates to the ln(sigma_p0/sigma_c) offset") {
    // integral_0^T (lambda - hdot) dt -> ln(sigma_p0 / sigma_c); quadrature
    const double lam = 0.8, ratio = 7.0;
    const double T = 30.0 / lam;
    const int n = 200000;
    const double h = T / n;
    double acc = 0.0;
    for (int i = 0; i <= n; ++i) {
        const double t = h * i;
        const double w = (i == 0 || i == n) ? 0.5 : 1.0;
        acc += w * (lam - hdot_model(lam, ratio, 1.0, t));
    }
    acc *= h;
    CHECK(acc == doctest::Approx(std::log(ratio)).epsilon(1e-6));
}

TEST_CASE("classifier: synthetic chaotic series") {
    // H = lambda t + H0 on top of a saturating tail
    const double lam = 0.25;
    EntropySeries s;
    for (double t = 0.0; t <= 120.0; t += 0.25) {
        s.times.push_back(t);
        const double H = 1.0 + lam * std::min(t, 100.0);
        s.von_neumann.push_back(H);
        s.linear.push_back(H);
    }
    ChaosVerdictConfig cfg;
    cfg.window_t_min = 5.0;
    cfg.window_t_max = 90.0;
    const auto v = classify(s, spectrum_of(lam), cfg);
    CHECK(v.classification == ChaosVerdict::Class::chaotic);
    CHECK(v.plateau_ratio == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("classifier: synthetic regular series (c ln t)") {
    EntropySeries s;
    for (double t = 0.5; t <= 200.0; t += 0.25) {
        s.times.push_back(t);
        s.von_neumann.push_back(2.0 * std::log(t));
        s.linear.push_back(2.0 * std::log(t));
    }
    ChaosVerdictConfig cfg;
    cfg.window_t_min = 5.0;
    cfg.window_t_max = 150.0;
    const auto v = classify(s, spectrum_of(0.0), cfg);
    CHECK(v.classification == ChaosVerdict::Class::regular);
    CHECK(v.decay_exponent == doctest::Approx(-1.0).epsilon(0.02));
}

TEST_CASE("classifier: power-law outside the alpha band is inconclusive") {
    EntropySeries s;
    for (double t = 0.5; t <= 200.0; t += 0.25) {
        s.times.push_back(t);
        s.von_neumann.push_back(4.0 * std::sqrt(t));  // rate ~ t^{-1/2}
        s.linear.push_back(4.0 * std::sqrt(t));
    }
    ChaosVerdictConfig cfg;
    cfg.window_t_min = 5.0;
    cfg.window_t_max = 150.0;
    const auto v = classify(s, spectrum_of(0.0), cfg);
    CHECK(v.classification == ChaosVerdict::Class::inconclusive);
    CHECK(v.decay_exponent == doctest::Approx(-0.5).epsilon(0.02));
}

TEST_CASE("classifier verdict is invariant under time rescaling") {
    auto build = [](double scale) {
        EntropySeries s;
        for (double t = 0.5; t <= 120.0; t += 0.25) {
            s.times.push_back(t * scale);
            const double H = 1.0 + 0.25 * std::min(t, 100.0);
            s.von_neumann.push_back(H);
            s.linear.push_back(H);
        }
        ChaosVerdictConfig cfg;
        cfg.window_t_min = 5.0 * scale;
        cfg.window_t_max = 90.0 * scale;
        LyapunovSpectrum sp;
        sp.lambda_plus = 0.25 / scale;
        sp.lambda_minus = -0.25 / scale;
        return classify(s, sp, cfg);
    };
    const auto a = build(1.0);
    const auto b = build(13.7);
    CHECK(a.classification == b.classification);
    CHECK(a.plateau_ratio == doctest::Approx(b.plateau_ratio).epsilon(1e-6));
}

TEST_CASE("timescale report: identities and regime flags") {
    const EnvironmentParams env(0.0, 1.0, 1.0, 0.05, 0.01);
    Moments init;
    init.mean_x = std::sqrt(2.0);
    init.var_x = 0.025;
    init.var_p = 0.025;
    const auto r = build_timescale_report(env, driven_double_well(0.0), init,
                                          0.125, -0.125, 3.0, 0.5, 0.12);
    REQUIRE(r.sigma_c.has_value());
    CHECK(r.coherence_len * *r.sigma_c == doctest::Approx(0.05).epsilon(1e-12));
    CHECK(r.chi_1 == doctest::Approx(std::sqrt(1.0 / 6.0)).epsilon(1e-9));
    CHECK(r.t_eq.literal == doctest::Approx((3.0 / 0.5) / 0.12).epsilon(1e-12));
    CHECK(r.t_eq.difference == doctest::Approx((3.0 - 0.5) / 0.12).epsilon(1e-12));
    REQUIRE(r.t_chi.has_value());
    const double delta_p = std::sqrt(init.var_p);
    CHECK(*r.t_chi ==
          doctest::Approx(std::log(r.chi_1 * delta_p / 0.05) / 0.125).epsilon(1e-12));
    CHECK(r.hbar_over_chi_sigma_c ==
          doctest::Approx(0.05 / (r.chi_1 * *r.sigma_c)).epsilon(1e-12));
}
