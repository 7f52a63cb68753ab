#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "wigsim/density_matrix.hpp"
#include "wigsim/wigner_field.hpp"

using namespace wigsim;

namespace {

constexpr double kPi = 3.14159265358979323846;

// Independent oracle: purity of a Gaussian state from its covariance,
// hbar / (2 sqrt(det Sigma)).
double gaussian_purity_oracle(const GaussianSpec& g, double hbar) {
    return hbar / (2.0 * std::sqrt(g.covariance_det()));
}

// Independent oracle: thermal-state spectrum p_n = (1-q) q^n with
// q = (2 nu - 1) / (2 nu + 1), nu = sqrt(det Sigma) / hbar.
std::vector<double> thermal_spectrum_oracle(double nu, std::size_t n) {
    const double q = (2.0 * nu - 1.0) / (2.0 * nu + 1.0);
    std::vector<double> p(n);
    double w = 1.0 - q;
    for (std::size_t i = 0; i < n; ++i) {
        p[i] = w;
        w *= q;
    }
    return p;
}

GaussianSpec random_legal_spec(std::mt19937_64& rng, double hbar) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    GaussianSpec g;
    g.x0 = -1.0 + 2.0 * u(rng);
    g.p0 = -1.0 + 2.0 * u(rng);
    // sigma_x sigma_p >= 0.5625 > hbar/2, so every draw is legal
    g.sigma_x = 0.75 + 0.75 * u(rng);
    g.sigma_p = 0.75 + 0.75 * u(rng);
    const double cmax = std::sqrt(g.sigma_x * g.sigma_x * g.sigma_p * g.sigma_p -
                                  hbar * hbar / 4.0);
    g.correlation = (2.0 * u(rng) - 1.0) * 0.8 * cmax;
    return g;
}

}  // namespace

TEST_CASE("grid invariants") {
    CHECK_THROWS_AS(PhaseSpaceGrid(20, 64, -1, 1, -1, 1), InvalidArgument);
    CHECK_THROWS_AS(PhaseSpaceGrid(64, 64, 1, -1, -1, 1), InvalidArgument);
    CHECK_THROWS_AS(PhaseSpaceGrid(64, 64, -1, 1, -1, 1, -2.0), InvalidArgument);
    // chord span shorter than the x extent must be rejected
    CHECK_THROWS_AS(PhaseSpaceGrid(64, 64, -30, 30, -4, 4), InvalidArgument);

    const auto g = PhaseSpaceGrid::square(64);
    CHECK(g.fourier_complete());
    CHECK(g.dx() == doctest::Approx(g.chord_spacing()).epsilon(1e-12));
    CHECK(g.x_extent() == doctest::Approx(std::sqrt(2 * kPi * 64)).epsilon(1e-12));
}

TEST_CASE("minimum-uncertainty gaussian is pure") {
    const auto g = PhaseSpaceGrid::square(128);
    const GaussianSpec s{0.0, 0.0, 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0), 0.0};
    const auto w = make_gaussian(s, g);
    CHECK(w.norm() == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(purity(w) == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("thermal gaussian purity 1/2 against the covariance oracle") {
    const auto g = PhaseSpaceGrid::square(128);
    const GaussianSpec s{0.0, 0.0, 1.0, 1.0, 0.0};
    const auto w = make_gaussian(s, g);
    CHECK(gaussian_purity_oracle(s, 1.0) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(purity(w) == doctest::Approx(0.5).epsilon(1e-6));
}

TEST_CASE("illegal covariance rejected") {
    const auto g = PhaseSpaceGrid::square(128);
    CHECK_THROWS_AS(make_gaussian({0.0, 0.0, 0.1, 0.1, 0.0}, g), InvalidArgument);
    CHECK_THROWS_AS(make_gaussian({0.0, 0.0, 1.0, 1.0, 0.99}, g), InvalidArgument);
}

TEST_CASE("state outside grid rejected") {
    const auto g = PhaseSpaceGrid::square(64);  // extent ~ +/- 10
    CHECK_THROWS_AS(make_gaussian({9.9, 0.0, 1.0, 1.0, 0.0}, g), InvalidArgument);
}

TEST_CASE("gaussian moments match the spec") {
    const auto g = PhaseSpaceGrid::square(128);
    std::mt19937_64 rng(42);
    for (int rep = 0; rep < 12; ++rep) {
        const auto s = random_legal_spec(rng, 1.0);
        const auto w = make_gaussian(s, g);
        const auto m = moments(w);
        CHECK(m.mean_x == doctest::Approx(s.x0).epsilon(1e-6));
        CHECK(m.mean_p == doctest::Approx(s.p0).epsilon(1e-6));
        CHECK(m.var_x == doctest::Approx(s.sigma_x * s.sigma_x).epsilon(1e-6));
        CHECK(m.var_p == doctest::Approx(s.sigma_p * s.sigma_p).epsilon(1e-6));
        CHECK(m.cov_xp == doctest::Approx(s.correlation).epsilon(1e-5));
        CHECK(m.var_x >= 0.0);
        CHECK(m.var_p >= 0.0);
    }
}

TEST_CASE("gaussian purity formula validated against the spectrum route") {
    const auto g = PhaseSpaceGrid::square(128);
    std::mt19937_64 rng(7);
    for (int rep = 0; rep < 6; ++rep) {
        const auto s = random_legal_spec(rng, 1.0);
        const auto w = make_gaussian(s, g);
        const double oracle = gaussian_purity_oracle(s, 1.0);
        CHECK(purity(w) == doctest::Approx(oracle).epsilon(1e-6));
        // dual route: sum of squared density-matrix eigenvalues
        double p2 = 0.0;
        for (double e : wigner_to_density(w).eigenvalues()) p2 += e * e;
        CHECK(p2 == doctest::Approx(oracle).epsilon(1e-6));
    }
}

TEST_CASE("marginals are positive and normalized for the gaussian family") {
    const auto g = PhaseSpaceGrid::square(128);
    std::mt19937_64 rng(3);
    for (int rep = 0; rep < 8; ++rep) {
        const auto w = make_gaussian(random_legal_spec(rng, 1.0), g);
        double ix = 0.0, ip = 0.0;
        for (double v : marginal_x(w)) {
            CHECK(v >= -1e-9);
            ix += v;
        }
        for (double v : marginal_p(w)) {
            CHECK(v >= -1e-9);
            ip += v;
        }
        CHECK(ix * g.dx() == doctest::Approx(1.0).epsilon(1e-8));
        CHECK(ip * g.dp() == doctest::Approx(1.0).epsilon(1e-8));
    }
}

TEST_CASE("cat state: degenerate separation reduces to the gaussian") {
    const auto g = PhaseSpaceGrid::square(128);
    const GaussianSpec base{0.0, 0.0, 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0), 0.0};
    const auto cat0 = make_cat(0.0, base, g);
    const auto gauss = make_gaussian(base, g);
    double sup = 0.0;
    for (std::size_t i = 0; i < cat0.values().size(); ++i)
        sup = std::max(sup, std::abs(cat0.values()[i] - gauss.values()[i]));
    CHECK(sup < 1e-14);
}

TEST_CASE("cat state: purity, fringe period, and negativity") {
    const auto g = PhaseSpaceGrid::square(256);
    const GaussianSpec base{0.0, 0.0, 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0), 0.0};
    const double x_sep = 8.0;
    const auto w = make_cat(x_sep, base, g);
    CHECK(w.norm() == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(purity(w) == doctest::Approx(1.0).epsilon(1e-6));

    // independent oracle: build the same state from psi psi^dagger and
    // compare the full field
    const auto n = g.nx();
    DensityMatrix rho(n, g.dx(), g.hbar());
    std::vector<std::complex<double>> psi(n);
    const double sx = base.sigma_x;
    for (std::size_t i = 0; i < n; ++i) {
        const double x = g.x(i);
        psi[i] = std::exp(-(x - 4.0) * (x - 4.0) / (4 * sx * sx)) +
                 std::exp(-(x + 4.0) * (x + 4.0) / (4 * sx * sx));
    }
    double nrm = 0.0;
    for (auto& v : psi) nrm += std::norm(v);
    nrm = std::sqrt(nrm * g.dx());
    for (auto& v : psi) v /= nrm;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            rho.at(i, j) = psi[i] * std::conj(psi[j]);
    const auto w_oracle = density_to_wigner(rho, g);
    double sup = 0.0;
    for (std::size_t i = 0; i < w.values().size(); ++i)
        sup = std::max(sup, std::abs(w.values()[i] - w_oracle.values()[i]));
    CHECK(sup < 1e-8);

    // momentum marginal oscillates with period 2 pi hbar / x_sep ~ 0.785:
    // successive fringe maxima sit one period apart
    const auto mp = marginal_p(w);
    const double period = 2.0 * kPi * g.hbar() / x_sep;
    std::vector<double> peaks;
    for (std::size_t k = 1; k + 1 < mp.size(); ++k)
        if (mp[k] > mp[k - 1] && mp[k] > mp[k + 1] && mp[k] > 0.05)
            peaks.push_back(g.p(k));
    REQUIRE(peaks.size() >= 3);
    for (std::size_t k = 1; k < peaks.size(); ++k)
        CHECK(peaks[k] - peaks[k - 1] == doctest::Approx(period).epsilon(0.15));

    // interference fringe attains both signs at the midpoint
    double wmin = 1e9, wmax = -1e9;
    const std::size_t imid = n / 2;
    for (std::size_t k = 0; k < n; ++k) {
        wmin = std::min(wmin, w.at(imid, k));
        wmax = std::max(wmax, w.at(imid, k));
    }
    CHECK(wmin < -0.1 * wmax);
    CHECK(wmax > 0.0);

    // Var(x) = sigma_x^2 + (x_sep/2)^2 up to the exponentially small
    // lobe-overlap correction
    CHECK(moments(w).var_x == doctest::Approx(16.5).epsilon(1e-4));
}

TEST_CASE("cat state error paths") {
    const auto g = PhaseSpaceGrid::square(128);  // extent ~ +/- 14.2
    const GaussianSpec pure{0.0, 0.0, 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0), 0.0};
    CHECK_THROWS_AS(make_cat(26.0, pure, g), InvalidArgument);  // lobes outside
    // fringe undersampled: wavelength 2 pi / x_sep below 4 dp
    const double dp = g.dp();
    const double bad_sep = 2.0 * kPi / (3.0 * dp);
    CHECK_THROWS_AS(make_cat(bad_sep, pure, g), InvalidArgument);
    const GaussianSpec mixed{0.0, 0.0, 1.0, 1.0, 0.0};
    CHECK_THROWS_AS(make_cat(4.0, mixed, g), InvalidArgument);
}

TEST_CASE("wigner/density round trip is the identity") {
    const auto g = PhaseSpaceGrid::square(128);
    std::mt19937_64 rng(11);
    for (int rep = 0; rep < 6; ++rep) {
        const auto w = make_gaussian(random_legal_spec(rng, 1.0), g);
        const auto back = density_to_wigner(wigner_to_density(w), g);
        double sup = 0.0;
        for (std::size_t i = 0; i < w.values().size(); ++i)
            sup = std::max(sup, std::abs(w.values()[i] - back.values()[i]));
        CHECK(sup < 1e-10);
    }
    // and for a cat, whose coherences span half the box; the wider grid
    // keeps the longest-chord content below the round-trip tolerance
    const auto g2 = PhaseSpaceGrid::square(256);
    const GaussianSpec base{0.0, 0.0, 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0), 0.0};
    const auto cat = make_cat(8.0, base, g2);
    const auto back = density_to_wigner(wigner_to_density(cat), g2);
    double sup = 0.0;
    for (std::size_t i = 0; i < cat.values().size(); ++i)
        sup = std::max(sup, std::abs(cat.values()[i] - back.values()[i]));
    CHECK(sup < 1e-10);
}

TEST_CASE("pure gaussian density matrix has a single unit eigenvalue") {
    const auto g = PhaseSpaceGrid::square(128);
    const auto w = make_gaussian(
        {0.0, 0.0, 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0), 0.0}, g);
    const auto rho = wigner_to_density(w);
    CHECK(rho.trace() == doctest::Approx(1.0).epsilon(1e-8));
    CHECK(rho.hermiticity_defect() < 1e-10);
    const auto ev = rho.eigenvalues();
    CHECK(ev.back() == doctest::Approx(1.0).epsilon(1e-8));
    for (std::size_t i = 0; i + 1 < ev.size(); ++i) {
        CHECK(std::abs(ev[i]) < 1e-8);
        CHECK(ev[i] > -1e-8);
    }
}

TEST_CASE("thermal gaussian spectrum is geometric with ratio 1/3") {
    const auto g = PhaseSpaceGrid::square(128);
    const auto w = make_gaussian({0.0, 0.0, 1.0, 1.0, 0.0}, g);
    auto ev = wigner_to_density(w).eigenvalues();
    std::sort(ev.begin(), ev.end(), std::greater<>());
    const auto oracle = thermal_spectrum_oracle(1.0, 6);
    for (std::size_t i = 0; i < 6; ++i)
        CHECK(ev[i] == doctest::Approx(oracle[i]).epsilon(1e-8));
    for (std::size_t i = 1; i < 6; ++i)
        CHECK(ev[i] / ev[i - 1] == doctest::Approx(1.0 / 3.0).epsilon(1e-7));
}

TEST_CASE("mixture of disjoint gaussians: purity 1/2, no fringe") {
    const auto g = PhaseSpaceGrid::square(128);
    const double sx = 1.0 / std::sqrt(2.0);
    const auto wa = make_gaussian({-5.0, 0.0, sx, sx, 0.0}, g);
    const auto wb = make_gaussian({5.0, 0.0, sx, sx, 0.0}, g);
    WignerField mix(g);
    for (std::size_t i = 0; i < mix.values().size(); ++i)
        mix.values()[i] = 0.5 * (wa.values()[i] + wb.values()[i]);
    CHECK(purity(mix) == doctest::Approx(0.5).epsilon(1e-6));
    // mixtures add linearly: density matrix is the half-weight sum
    const auto rho = wigner_to_density(mix);
    const auto ra = wigner_to_density(wa);
    const auto rb = wigner_to_density(wb);
    double sup = 0.0;
    for (std::size_t i = 0; i < rho.data().size(); ++i)
        sup = std::max(sup, std::abs(rho.data()[i] -
                                     0.5 * (ra.data()[i] + rb.data()[i])));
    CHECK(sup < 1e-12);
}

TEST_CASE("transforms demand a fourier-complete grid") {
    const PhaseSpaceGrid g(64, 64, -10, 10, -8, 8);  // not aligned
    CHECK(!g.fourier_complete());
    const auto w = make_gaussian({0.0, 0.0, 1.0, 1.0, 0.0}, g);
    CHECK_THROWS_AS(wigner_to_density(w), InvalidArgument);
}

TEST_CASE("wig1 snapshot io round trips bit-exactly") {
    const auto g = PhaseSpaceGrid::square(64);
    const auto w = make_gaussian({0.3, -0.2, 1.0, 0.9, 0.1}, g);
    const std::string path = "test_snapshot.wig1";
    save_wig1(w, path);
    const auto r = load_wig1(path);
    CHECK(r.grid() == w.grid());
    CHECK(r.time() == w.time());
    CHECK(r.values() == w.values());
    std::remove(path.c_str());
}
