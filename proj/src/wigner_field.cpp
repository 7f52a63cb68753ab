#include "wigsim/wigner_field.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>

namespace wigsim {

namespace {

constexpr double kPi = 3.14159265358979323846;

static_assert(std::endian::native == std::endian::little,
              "WIG1 snapshots are written natively and assume little-endian");

double edge_peak_ratio(const WignerField& w) {
    const auto nx = w.grid().nx(), np = w.grid().np();
    double peak = 0.0, edge = 0.0;
    for (std::size_t i = 0; i < nx; ++i)
        for (std::size_t k = 0; k < np; ++k) {
            const double v = std::abs(w.at(i, k));
            peak = std::max(peak, v);
            if (i == 0 || i == nx - 1 || k == 0 || k == np - 1)
                edge = std::max(edge, v);
        }
    return peak > 0 ? edge / peak : 0.0;
}

void check_constructed_state(const WignerField& w, const char* what) {
    const double r = edge_peak_ratio(w);
    if (r > 1e-12)
        throw InvalidArgument(std::string(what) +
                              ": state does not decay to 1e-12 at the grid "
                              "edges (edge/peak = " +
                              std::to_string(r) + "); enlarge the grid");
}

}  // namespace

double Moments::conditional_p_width() const {
    if (var_x <= 0.0) return 0.0;
    return std::sqrt(2.0 * covariance_det() / var_x);
}

WignerField::WignerField(PhaseSpaceGrid grid, double time)
    : grid_(grid), time_(time), values_(grid_.nx() * grid_.np(), 0.0) {}

double WignerField::norm() const {
    double s = 0.0;
    for (double v : values_) s += v;
    return s * grid_.cell();
}

void WignerField::normalize() {
    const double n = norm();
    if (!(std::abs(n) > 0.0))
        throw IntegrityError("normalize: field has zero norm");
    const double f = 1.0 / n;
    for (double& v : values_) v *= f;
}

bool WignerField::has_nan() const {
    for (double v : values_)
        if (!std::isfinite(v)) return true;
    return false;
}

WignerField make_gaussian(const GaussianSpec& spec, const PhaseSpaceGrid& grid) {
    if (!(spec.sigma_x > 0.0) || !(spec.sigma_p > 0.0))
        throw InvalidArgument("make_gaussian: sigmas must be positive");
    if (!spec.legal(grid.hbar()))
        throw InvalidArgument(
            "make_gaussian: covariance violates the hbar/2 bound (det = " +
            std::to_string(spec.covariance_det()) + ")");
    const double margin = 6.0;
    if (spec.x0 - margin * spec.sigma_x < grid.x_min() ||
        spec.x0 + margin * spec.sigma_x > grid.x_max() ||
        spec.p0 - margin * spec.sigma_p < grid.p_min() ||
        spec.p0 + margin * spec.sigma_p > grid.p_max())
        throw InvalidArgument("make_gaussian: grid does not cover +/- 6 sigma "
                              "around the centroid");

    const double det = spec.covariance_det();
    const double a = spec.sigma_p * spec.sigma_p / det;   // x-x weight
    const double b = spec.sigma_x * spec.sigma_x / det;   // p-p weight
    const double c = -spec.correlation / det;             // cross weight

    WignerField w(grid);
    const auto nx = grid.nx(), np = grid.np();
    for (std::size_t i = 0; i < nx; ++i) {
        const double dxv = grid.x(i) - spec.x0;
        for (std::size_t k = 0; k < np; ++k) {
            const double dpv = grid.p(k) - spec.p0;
            const double q = a * dxv * dxv + 2.0 * c * dxv * dpv + b * dpv * dpv;
            w.at(i, k) = std::exp(-0.5 * q);
        }
    }
    w.normalize();
    check_constructed_state(w, "make_gaussian");
    return w;
}

WignerField make_cat(double x_sep, const GaussianSpec& base,
                     const PhaseSpaceGrid& grid) {
    if (x_sep < 0.0) throw InvalidArgument("make_cat: x_sep must be >= 0");
    if (x_sep == 0.0) return make_gaussian(base, grid);
    if (base.correlation != 0.0 || !base.pure(grid.hbar()))
        throw InvalidArgument("make_cat: base state must be pure and "
                              "uncorrelated (sigma_x*sigma_p = hbar/2, c = 0)");
    const double hbar = grid.hbar();
    const double a = x_sep / 2.0;
    const double sx = base.sigma_x;
    const double margin = 6.0;
    if (base.x0 - a - margin * sx < grid.x_min() ||
        base.x0 + a + margin * sx > grid.x_max() ||
        base.p0 - margin * base.sigma_p < grid.p_min() ||
        base.p0 + margin * base.sigma_p > grid.p_max())
        throw InvalidArgument("make_cat: lobes do not fit on the grid");
    const double fringe_wavelength = 2.0 * kPi * hbar / x_sep;
    if (fringe_wavelength < 4.0 * grid.dp())
        throw InvalidArgument(
            "make_cat: interference fringe undersampled (wavelength " +
            std::to_string(fringe_wavelength) + " < 4 dp)");

    // W = [W+ + W- + 2 Re W_cross] / (2 (1 + s)), s = <g-|g+>; the cross term
    // carries cos(x_sep (p - p0) / hbar) and normalize() absorbs 2(1+s).
    WignerField w(grid);
    const auto nx = grid.nx(), np = grid.np();
    for (std::size_t i = 0; i < nx; ++i) {
        const double xv = grid.x(i) - base.x0;
        const double gp = std::exp(-(xv - a) * (xv - a) / (2.0 * sx * sx));
        const double gm = std::exp(-(xv + a) * (xv + a) / (2.0 * sx * sx));
        const double gc = std::exp(-xv * xv / (2.0 * sx * sx));
        for (std::size_t k = 0; k < np; ++k) {
            const double pv = grid.p(k) - base.p0;
            const double pg = std::exp(-2.0 * sx * sx * pv * pv / (hbar * hbar));
            w.at(i, k) = pg * (gp + gm + 2.0 * gc * std::cos(x_sep * pv / hbar));
        }
    }
    w.normalize();
    check_constructed_state(w, "make_cat");
    return w;
}

Moments moments(const WignerField& w) {
    const auto& g = w.grid();
    const auto nx = g.nx(), np = g.np();
    double n = 0.0, sx = 0.0, sp = 0.0;
    for (std::size_t i = 0; i < nx; ++i)
        for (std::size_t k = 0; k < np; ++k) {
            const double v = w.at(i, k);
            n += v;
            sx += v * g.x(i);
            sp += v * g.p(k);
        }
    Moments m;
    m.mean_x = sx / n;
    m.mean_p = sp / n;
    double vxx = 0.0, vpp = 0.0, vxp = 0.0;
    for (std::size_t i = 0; i < nx; ++i) {
        const double dxv = g.x(i) - m.mean_x;
        for (std::size_t k = 0; k < np; ++k) {
            const double dpv = g.p(k) - m.mean_p;
            const double v = w.at(i, k);
            vxx += v * dxv * dxv;
            vpp += v * dpv * dpv;
            vxp += v * dxv * dpv;
        }
    }
    m.var_x = vxx / n;
    m.var_p = vpp / n;
    m.cov_xp = vxp / n;
    return m;
}

double purity(const WignerField& w) {
    double s = 0.0;
    for (double v : w.values()) s += v * v;
    return 2.0 * kPi * w.grid().hbar() * s * w.grid().cell();
}

std::vector<double> marginal_x(const WignerField& w) {
    const auto nx = w.grid().nx(), np = w.grid().np();
    std::vector<double> m(nx, 0.0);
    for (std::size_t i = 0; i < nx; ++i) {
        double s = 0.0;
        for (std::size_t k = 0; k < np; ++k) s += w.at(i, k);
        m[i] = s * w.grid().dp();
    }
    return m;
}

std::vector<double> marginal_p(const WignerField& w) {
    const auto nx = w.grid().nx(), np = w.grid().np();
    std::vector<double> m(np, 0.0);
    for (std::size_t k = 0; k < np; ++k) {
        double s = 0.0;
        for (std::size_t i = 0; i < nx; ++i) s += w.at(i, k);
        m[k] = s * w.grid().dx();
    }
    return m;
}

void save_wig1(const WignerField& w, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IntegrityError("save_wig1: cannot open " + path);
    out.write("WIG1", 4);
    const std::int64_t nx = static_cast<std::int64_t>(w.grid().nx());
    const std::int64_t np = static_cast<std::int64_t>(w.grid().np());
    out.write(reinterpret_cast<const char*>(&nx), 8);
    out.write(reinterpret_cast<const char*>(&np), 8);
    const double header[6] = {w.grid().x_min(), w.grid().x_max(),
                              w.grid().p_min(), w.grid().p_max(),
                              w.grid().hbar(), w.time()};
    out.write(reinterpret_cast<const char*>(header), sizeof(header));
    out.write(reinterpret_cast<const char*>(w.values().data()),
              static_cast<std::streamsize>(w.values().size() * sizeof(double)));
    if (!out) throw IntegrityError("save_wig1: write failed for " + path);
}

WignerField load_wig1(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IntegrityError("load_wig1: cannot open " + path);
    char magic[4];
    in.read(magic, 4);
    if (!in || std::memcmp(magic, "WIG1", 4) != 0)
        throw IntegrityError("load_wig1: bad magic in " + path);
    std::int64_t nx = 0, np = 0;
    in.read(reinterpret_cast<char*>(&nx), 8);
    in.read(reinterpret_cast<char*>(&np), 8);
    double header[6];
    in.read(reinterpret_cast<char*>(header), sizeof(header));
    if (!in || nx <= 0 || np <= 0)
        throw IntegrityError("load_wig1: truncated header in " + path);
    PhaseSpaceGrid grid(static_cast<std::size_t>(nx), static_cast<std::size_t>(np),
                        header[0], header[1], header[2], header[3], header[4]);
    WignerField w(grid, header[5]);
    in.read(reinterpret_cast<char*>(w.values().data()),
            static_cast<std::streamsize>(w.values().size() * sizeof(double)));
    if (!in) throw IntegrityError("load_wig1: truncated samples in " + path);
    return w;
}

}  // namespace wigsim
