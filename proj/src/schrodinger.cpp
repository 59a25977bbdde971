#include "uplab/schrodinger.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace uplab::schrodinger {

using numerics::Grid;
using numerics::kPi;
using numerics::SpectralFunction;

namespace {

constexpr double kEdgeTolerance = 1e-10;

void require_positive_time(double t0) {
    if (!(t0 > 0.0) || !std::isfinite(t0)) {
        throw Error(ErrorKind::InvalidTime, "closed-form evolution needs t0 > 0");
    }
}

void check_edges(const SampledFunction& f, const char* what) {
    const double peak = f.max_abs();
    if (peak == 0.0) return;
    const double edge = std::max(std::abs(f[0]), std::abs(f[f.size() - 1]));
    if (edge > kEdgeTolerance * peak) {
        std::ostringstream msg;
        msg << what << " has not decayed at the grid ends (" << edge / peak << " of its maximum)";
        throw Error(ErrorKind::BoundaryLeak, msg.str());
    }
}

void check_nyquist(double max_xi, const Grid& grid) {
    const double nyquist = kPi / grid.step();
    if (max_xi >= nyquist) {
        std::ostringstream msg;
        msg << "closed form needs frequencies up to " << max_xi << " but the grid resolves only " << nyquist;
        throw Error(ErrorKind::GridTooSmall, msg.str());
    }
}

std::vector<cplx> to_vector(std::span<const cplx> v) { return {v.begin(), v.end()}; }

}  // namespace

cplx kernel_gamma(const SchrodingerParams& p, double x) {
    if (p.t0 == 0.0 || !std::isfinite(p.t0)) throw Error(ErrorKind::InvalidTime, "gamma needs t != 0");
    const double t = p.t0;
    const double n = p.n;
    const double sgn = t > 0 ? 1.0 : -1.0;
    const double modulus = std::pow(4.0 * kPi * std::abs(t), -0.5 * n);
    return modulus * std::polar(1.0, -p.c * t - kPi * sgn * n / 4.0 + x * x / (4.0 * t));
}

SampledFunction evolve_euclidean_closed_form(const SchrodingerParams& p, const SampledFunction& f) {
    require_positive_time(p.t0);
    check_edges(f, "f");
    const Grid& grid = f.grid();
    const double t = p.t0;
    check_nyquist(std::max(std::abs(grid.node(0)), std::abs(grid.node(grid.size() - 1))) / (2.0 * t), grid);

    std::vector<cplx> hv(grid.size());
    std::vector<double> xi(grid.size());
    for (std::size_t k = 0; k < grid.size(); ++k) {
        const double y = grid.node(k);
        hv[k] = std::polar(1.0, y * y / (4.0 * t)) * f[k];
        xi[k] = y / (2.0 * t);
    }
    const auto h_hat = numerics::fourier_transform(SampledFunction(grid, std::move(hv)), xi);
    const cplx pre = std::pow(4.0 * kPi * t, -0.5) * std::polar(1.0, -p.c * t - kPi / 4.0);
    std::vector<cplx> u(grid.size());
    for (std::size_t k = 0; k < grid.size(); ++k) {
        const double x = grid.node(k);
        u[k] = pre * std::polar(1.0, x * x / (4.0 * t)) * h_hat.values()[k];
    }
    return SampledFunction(grid, std::move(u), "u_closed_form");
}

SpectralEvolution evolve_spectral_checked(const SchrodingerParams& p, const SampledFunction& f, double t) {
    const Grid& grid = f.grid();
    const auto F = numerics::fourier_transform(f);
    const double cutoff = 0.75 * kPi / grid.step();
    std::vector<cplx> v(F.size());
    double total = 0.0;
    double tail = 0.0;
    for (std::size_t j = 0; j < F.size(); ++j) {
        const double xi = F.xi()[j];
        const double m2 = std::norm(F.values()[j]);
        total += m2;
        if (std::abs(xi) > cutoff) tail += m2;
        v[j] = std::polar(1.0, -t * (xi * xi + p.c)) * F.values()[j];
    }
    auto u = numerics::inverse_fourier_transform(SpectralFunction(std::vector<double>(F.xi().begin(), F.xi().end()), std::move(v)), grid, "u_spectral");
    const double fraction = total > 0.0 ? tail / total : 0.0;
    return SpectralEvolution{std::move(u), fraction, fraction > kAliasingTail};
}

SampledFunction evolve_spectral(const SchrodingerParams& p, const SampledFunction& f, double t) {
    return evolve_spectral_checked(p, f, t).u;
}

// Group mode -------------------------------------------------------------------------

namespace {

void require_group(const group::GroupModel& G, const Grid& grid) {
    if (G.rank() != 1) throw Error(ErrorKind::InvalidArgument, "group evolution is implemented for rank one");
    for (std::size_t k = 0; k < grid.size(); ++k) {
        if (group::phi_weight(G, grid.node(k)) == 0.0) {
            throw Error(ErrorKind::WallSingularity, "grid contains a zero of phi; use a half-step grid");
        }
    }
}

}  // namespace

SampledFunction group_g(const group::GroupModel& G, double t0, const SampledFunction& f) {
    require_positive_time(t0);
    const auto fs = group::weyl_symmetrize(f);
    const Grid& grid = f.grid();
    const double b2 = G.b_norm_scale() * G.b_norm_scale();
    std::vector<cplx> g(grid.size());
    for (std::size_t k = 0; k < grid.size(); ++k) {
        const double H = grid.node(k);
        g[k] = std::polar(1.0, b2 * H * H / (4.0 * t0)) * fs[k] * group::phi_weight(G, H);
    }
    return SampledFunction(grid, std::move(g), "g_f");
}

SampledFunction evolve_group_spectral(const group::GroupModel& G, const SchrodingerParams& p,
                                      const SampledFunction& f) {
    const Grid& grid = f.grid();
    require_group(G, grid);
    const auto lambda = grid.dual_frequencies();
    const auto F = group::spherical_transform_reduced(G, f, lambda);
    const double rho2 = G.rho_b_norm_sq();
    std::vector<cplx> v(F.size());
    for (std::size_t j = 0; j < F.size(); ++j) {
        const double l2 = std::pow(G.dual_b_norm(std::span<const double>(&lambda[j], 1)), 2);
        v[j] = std::polar(1.0, -p.t0 * (l2 + rho2)) * F.values()[j];
    }
    auto u = group::inverse_spherical(G, group::SphericalTransform(lambda, std::move(v)), grid);
    return SampledFunction(grid, to_vector(u.values()), "u_group_spectral");
}

SampledFunction evolve_group_closed_form(const group::GroupModel& G, const SchrodingerParams& p,
                                         const SampledFunction& f, cplx constant) {
    require_positive_time(p.t0);
    const Grid& grid = f.grid();
    require_group(G, grid);
    const double t = p.t0;
    const double b2 = G.b_norm_scale() * G.b_norm_scale();
    const auto g = group_g(G, t, f);
    check_edges(g, "f phi");

    std::vector<double> xi(grid.size());
    for (std::size_t k = 0; k < grid.size(); ++k) xi[k] = b2 * grid.node(k) / (2.0 * t);
    check_nyquist(std::max(std::abs(xi.front()), std::abs(xi.back())), grid);
    const auto g_hat = numerics::fourier_transform(g, xi);

    const double order = static_cast<double>(G.weyl_order());
    const cplx pre = constant * order * order * std::pow(t, -0.5 * static_cast<double>(G.rank()));
    const double rho2 = G.rho_b_norm_sq();
    std::vector<cplx> u(grid.size());
    for (std::size_t k = 0; k < grid.size(); ++k) {
        const double H = grid.node(k);
        const double phase = -(t * rho2 - b2 * H * H / (4.0 * t));
        u[k] = pre * std::polar(1.0, phase) * g_hat.values()[k] / group::phi_weight(G, H);
    }
    return SampledFunction(grid, std::move(u), "u_group_closed_form");
}

cplx calibrate_group_constant(const group::GroupModel& G, const SchrodingerParams& p, const SampledFunction& f) {
    const auto unit = evolve_group_closed_form(G, p, f, 1.0);
    const auto spectral = evolve_group_spectral(G, p, f);
    std::size_t best = 0;
    for (std::size_t k = 1; k < unit.size(); ++k) {
        if (std::abs(unit[k]) > std::abs(unit[best])) best = k;
    }
    if (unit[best] == cplx{}) throw Error(ErrorKind::InvalidData, "calibration profile is zero");
    return spectral[best] / unit[best];
}

cplx reference_group_constant(const group::GroupModel& G, double t0) {
    const auto grid = Grid::symmetric(16.0, 4096, true);
    const double b2 = G.b_norm_scale() * G.b_norm_scale();
    const auto f = SampledFunction::sample(grid, [b2](double H) { return cplx(std::exp(-b2 * H * H / 4.0)); }, "reference");
    SchrodingerParams p;
    p.t0 = t0;
    p.rank = static_cast<int>(G.rank());
    return calibrate_group_constant(G, p, f);
}

cplx analytic_group_constant(const group::GroupModel& G) {
    const double l = static_cast<double>(G.rank());
    const double kappa = 1.0 / (G.b_norm_scale() * G.b_norm_scale());
    const double order = static_cast<double>(G.weyl_order());
    return std::pow(4.0 * kPi * kappa, -0.5 * l) * std::polar(1.0, -kPi * l / 4.0) / (order * order);
}

// Residual ---------------------------------------------------------------------------

ResidualReport pde_residual(const std::array<SampledFunction, 3>& slices, const SchrodingerParams& p,
                            ResidualMode mode, double delta, const group::GroupModel* G) {
    const Grid& grid = slices[1].grid();
    if (!(slices[0].grid() == grid) || !(slices[2].grid() == grid)) {
        throw Error(ErrorKind::MismatchedGrids, "time slices live on different grids");
    }
    if (!(delta > 0.0)) throw Error(ErrorKind::InvalidArgument, "delta must be positive");
    if (grid.size() < 5) throw Error(ErrorKind::InvalidArgument, "residual needs at least 5 nodes");
    if (mode == ResidualMode::Group && G == nullptr) throw Error(ErrorKind::InvalidArgument, "group mode needs a model");

    const double h = grid.step();
    const std::size_t n = grid.size();
    const cplx I{0.0, 1.0};
    std::vector<double> phi(n, 1.0);
    std::vector<cplx> w(slices[1].values().begin(), slices[1].values().end());
    double shift = p.c;
    double scale = 1.0;
    if (mode == ResidualMode::Group) {
        if (G->rank() != 1) throw Error(ErrorKind::InvalidArgument, "group residual is implemented for rank one");
        for (std::size_t k = 0; k < n; ++k) {
            phi[k] = group::phi_weight(*G, grid.node(k));
            w[k] *= phi[k];
        }
        shift = G->rho_b_norm_sq();
        scale = 1.0 / (G->b_norm_scale() * G->b_norm_scale());
    }
    double worst = 0.0;
    for (std::size_t k = 2; k + 2 < n; ++k) {
        const cplx dt = (slices[2][k] - slices[0][k]) / (2.0 * delta);
        const cplx lap = scale * (w[k + 1] - 2.0 * w[k] + w[k - 1]) / (h * h);
        const cplx op = (lap - shift * w[k]) / phi[k];
        worst = std::max(worst, std::abs(dt - I * op));
    }
    return ResidualReport{worst, h, delta};
}

double relative_error(const SampledFunction& a, const SampledFunction& b) {
    if (!(a.grid() == b.grid())) throw Error(ErrorKind::MismatchedGrids, "relative_error needs a common grid");
    double diff = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) diff = std::max(diff, std::abs(a[k] - b[k]));
    const double scale = b.max_abs();
    if (scale == 0.0) return diff == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
    return diff / scale;
}

}  // namespace uplab::schrodinger
