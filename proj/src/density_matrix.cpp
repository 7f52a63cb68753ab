#include "wigsim/density_matrix.hpp"

#include <cmath>

#include <Eigen/Dense>

#include "wigsim/fft.hpp"

namespace wigsim {

namespace {

using cplx = std::complex<double>;

void require_transform_grid(const PhaseSpaceGrid& g, const char* what) {
    if (!g.fourier_complete())
        throw InvalidArgument(
            std::string(what) +
            ": requires a Fourier-complete grid (nx == np and "
            "Lx * Lp = 2 pi hbar nx); use PhaseSpaceGrid::square");
}

// Evaluates the trigonometric interpolant of each chord column at
// x +/- dx/2 by applying e^{+/- i kx dx / 2} in the x-spectrum.
void half_shift_x(std::vector<cplx>& a, const PhaseSpaceGrid& g,
                  const FftEngine& fft, double sign) {
    const auto n = g.nx();
    fft.forward_x(a.data());
    for (std::size_t ax = 0; ax < n; ++ax) {
        const cplx ph = std::polar(1.0 / static_cast<double>(n),
                                   sign * g.kx(ax) * g.dx() / 2.0);
        for (std::size_t m = 0; m < n; ++m) a[ax * n + m] *= ph;
    }
    fft.backward_x(a.data());
}

}  // namespace

DensityMatrix::DensityMatrix(std::size_t n, double dx, double hbar)
    : n_(n), dx_(dx), hbar_(hbar), m_(n * n, cplx(0.0, 0.0)) {
    if (n == 0 || !(dx > 0.0) || !(hbar > 0.0))
        throw InvalidArgument("DensityMatrix: bad dimension or spacing");
}

double DensityMatrix::trace() const {
    double s = 0.0;
    for (std::size_t i = 0; i < n_; ++i) s += at(i, i).real();
    return s * dx_;
}

double DensityMatrix::hermiticity_defect() const {
    double d = 0.0;
    for (std::size_t i = 0; i < n_; ++i)
        for (std::size_t j = 0; j <= i; ++j)
            d = std::max(d, std::abs(at(i, j) - std::conj(at(j, i))));
    return d;
}

std::vector<double> DensityMatrix::eigenvalues() const {
    using Mat = Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
    Eigen::Map<const Mat> m(m_.data(), static_cast<Eigen::Index>(n_),
                            static_cast<Eigen::Index>(n_));
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(m, Eigen::EigenvaluesOnly);
    std::vector<double> ev(n_);
    for (std::size_t i = 0; i < n_; ++i)
        ev[i] = es.eigenvalues()(static_cast<Eigen::Index>(i)) * dx_;
    return ev;
}

DensityMatrix wigner_to_density(const WignerField& w) {
    const auto& g = w.grid();
    require_transform_grid(g, "wigner_to_density");
    const auto n = g.nx();
    const FftEngine fft(n, n);

    // Chord transform per x-row: G1[i][m] = sum_k W[i][k] e^{i p_k y_m / hbar} dp
    std::vector<cplx> G1(n * n);
    for (std::size_t i = 0; i < n * n; ++i) G1[i] = w.values()[i];
    fft.backward_p(G1.data());
    for (std::size_t m = 0; m < n; ++m) {
        const cplx ph = std::polar(g.dp(), g.p_min() * g.chord(m) / g.hbar());
        for (std::size_t i = 0; i < n; ++i) G1[i * n + m] *= ph;
    }
    // Same chords evaluated at the half-grid centers x_i + dx/2
    std::vector<cplx> Gh = G1;
    half_shift_x(Gh, g, fft, +1.0);

    DensityMatrix rho(n, g.dx(), g.hbar());
    const auto ns = static_cast<std::ptrdiff_t>(n);
    for (std::ptrdiff_t a = 0; a < ns; ++a)
        for (std::ptrdiff_t b = 0; b < ns; ++b) {
            const std::ptrdiff_t d = a - b;
            if (d >= ns / 2 || d <= -ns / 2) continue;  // beyond chord domain
            const auto m = static_cast<std::size_t>((d % ns + ns) % ns);
            if ((d & 1) == 0)
                rho.at(static_cast<std::size_t>(a), static_cast<std::size_t>(b)) =
                    G1[static_cast<std::size_t>((a + b) / 2) * n + m];
            else
                rho.at(static_cast<std::size_t>(a), static_cast<std::size_t>(b)) =
                    Gh[static_cast<std::size_t>((a + b - 1) / 2) * n + m];
        }
    return rho;
}

WignerField density_to_wigner(const DensityMatrix& rho, const PhaseSpaceGrid& grid) {
    require_transform_grid(grid, "density_to_wigner");
    const auto n = grid.nx();
    if (rho.dimension() != n || std::abs(rho.dx() - grid.dx()) > 1e-12 * grid.dx() ||
        std::abs(rho.hbar() - grid.hbar()) > 1e-12 * grid.hbar())
        throw InvalidArgument("density_to_wigner: grid mismatch");
    const FftEngine fft(n, n);
    const auto ns = static_cast<std::ptrdiff_t>(n);

    std::vector<cplx> G1(n * n, cplx(0.0, 0.0));
    std::vector<cplx> Gh(n * n, cplx(0.0, 0.0));
    for (std::size_t m = 0; m < n; ++m) {
        std::ptrdiff_t d = static_cast<std::ptrdiff_t>(m);
        if (d >= ns / 2) d -= ns;
        if (d >= ns / 2 || d <= -ns / 2) continue;  // Nyquist chord not in rho
        if ((d & 1) == 0) {
            for (std::ptrdiff_t i = 0; i < ns; ++i) {
                const std::ptrdiff_t a = i + d / 2, b = i - d / 2;
                if (a >= 0 && a < ns && b >= 0 && b < ns)
                    G1[static_cast<std::size_t>(i) * n + m] =
                        rho.at(static_cast<std::size_t>(a), static_cast<std::size_t>(b));
            }
        } else {
            for (std::ptrdiff_t i = 0; i < ns; ++i) {
                const std::ptrdiff_t a = i + (d + 1) / 2, b = i - (d - 1) / 2;
                if (a >= 0 && a < ns && b >= 0 && b < ns)
                    Gh[static_cast<std::size_t>(i) * n + m] =
                        rho.at(static_cast<std::size_t>(a), static_cast<std::size_t>(b));
            }
        }
    }
    half_shift_x(Gh, grid, fft, -1.0);
    for (std::size_t m = 1; m < n; m += 2)
        for (std::size_t i = 0; i < n; ++i) G1[i * n + m] = Gh[i * n + m];
    for (std::size_t m = 0; m < n; ++m) {
        const cplx ph = std::polar(1.0, -grid.p_min() * grid.chord(m) / grid.hbar());
        for (std::size_t i = 0; i < n; ++i) G1[i * n + m] *= ph;
    }
    fft.forward_p(G1.data());
    WignerField w(grid);
    const double scale = 1.0 / (static_cast<double>(n) * grid.dp());
    for (std::size_t i = 0; i < n * n; ++i) w.values()[i] = G1[i].real() * scale;
    return w;
}

}  // namespace wigsim
