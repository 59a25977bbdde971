#include "uplab/numerics.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <mutex>
#include <new>
#include <numeric>
#include <sstream>

#include <fftw3.h>

namespace uplab {

std::string_view to_string(ErrorKind kind) noexcept {
    switch (kind) {
        case ErrorKind::InvalidArgument: return "invalid-argument";
        case ErrorKind::InvalidData: return "invalid-data";
        case ErrorKind::ProfileError: return "profile-error";
        case ErrorKind::DivergentProfile: return "divergent-profile";
        case ErrorKind::GridTooSmall: return "grid-too-small";
        case ErrorKind::BoundaryLeak: return "boundary-leak";
        case ErrorKind::InvalidTime: return "invalid-time";
        case ErrorKind::WallSingularity: return "wall-singularity";
        case ErrorKind::WindowTooSmall: return "window-too-small";
        case ErrorKind::InvalidSupport: return "invalid-support";
        case ErrorKind::SupportTouchesZero: return "support-touches-zero";
        case ErrorKind::MismatchedGrids: return "mismatched-grids";
        case ErrorKind::SchemaViolation: return "schema-violation";
        case ErrorKind::Io: return "io";
    }
    return "unknown";
}

}  // namespace uplab

namespace uplab::numerics {

namespace {

bool all_finite(std::span<const cplx> v) {
    return std::all_of(v.begin(), v.end(),
                       [](const cplx& z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); });
}

}  // namespace

// Grid -----------------------------------------------------------------------

Grid::Grid(double x_min, double x_max, std::size_t n_points, bool offset)
    : x_min_(x_min), x_max_(x_max), n_(n_points), offset_(offset) {
    if (n_points == 0) throw Error(ErrorKind::InvalidArgument, "grid needs at least one point");
    if (!std::isfinite(x_min) || !std::isfinite(x_max) || !(x_min < x_max)) {
        throw Error(ErrorKind::InvalidArgument, "grid requires finite x_min < x_max");
    }
}

Grid Grid::symmetric(double radius, std::size_t n_points, bool offset) {
    return Grid(-radius, radius, n_points, offset);
}

std::vector<double> Grid::nodes() const {
    std::vector<double> out(n_);
    for (std::size_t k = 0; k < n_; ++k) out[k] = node(k);
    return out;
}

std::optional<std::size_t> Grid::mirror_index(std::size_t k) const {
    // -x_k = x_j  <=>  j = -(2*x_first/h) - k
    const double h = step();
    const double s = -2.0 * first_node() / h - static_cast<double>(k);
    const double j = std::round(s);
    if (std::abs(s - j) > 1e-9 || j < 0 || j >= static_cast<double>(n_)) return std::nullopt;
    return static_cast<std::size_t>(j);
}

std::vector<double> Grid::dual_frequencies() const {
    std::vector<double> xi(n_);
    const double dxi = dual_step();
    const auto half = static_cast<std::ptrdiff_t>(n_ / 2);
    for (std::size_t j = 0; j < n_; ++j) {
        xi[j] = static_cast<double>(static_cast<std::ptrdiff_t>(j) - half) * dxi;
    }
    return xi;
}

// SampledFunction / SpectralFunction ------------------------------------------

SampledFunction::SampledFunction(Grid grid, std::vector<cplx> values, std::string label)
    : grid_(std::move(grid)), values_(std::move(values)), label_(std::move(label)) {
    if (values_.size() != grid_.size()) {
        throw Error(ErrorKind::InvalidArgument, "sample count does not match grid size");
    }
    if (!all_finite(values_)) throw Error(ErrorKind::InvalidData, "non-finite sample in " + label_);
}

SampledFunction SampledFunction::zero(const Grid& grid, std::string label) {
    return SampledFunction(grid, std::vector<cplx>(grid.size()), std::move(label));
}

SampledFunction SampledFunction::sample(const Grid& grid, const std::function<cplx(double)>& fn,
                                        std::string label) {
    std::vector<cplx> v(grid.size());
    for (std::size_t k = 0; k < v.size(); ++k) v[k] = fn(grid.node(k));
    return SampledFunction(grid, std::move(v), std::move(label));
}

SampledFunction SampledFunction::scaled(cplx factor) const {
    std::vector<cplx> v(values_);
    for (auto& z : v) z *= factor;
    return SampledFunction(grid_, std::move(v), label_);
}

double SampledFunction::max_abs() const noexcept {
    double m = 0.0;
    for (const auto& z : values_) m = std::max(m, std::abs(z));
    return m;
}

SpectralFunction::SpectralFunction(std::vector<double> xi, std::vector<cplx> values)
    : xi_(std::move(xi)), values_(std::move(values)) {
    if (xi_.size() != values_.size()) {
        throw Error(ErrorKind::InvalidArgument, "frequency and value arrays differ in length");
    }
    for (std::size_t j = 1; j < xi_.size(); ++j) {
        if (!(xi_[j] > xi_[j - 1])) {
            throw Error(ErrorKind::InvalidArgument, "frequencies must be strictly increasing");
        }
    }
    if (!all_finite(values_)) throw Error(ErrorKind::InvalidData, "non-finite spectral value");
}

double SpectralFunction::max_abs() const noexcept {
    double m = 0.0;
    for (const auto& z : values_) m = std::max(m, std::abs(z));
    return m;
}

// FFT ---------------------------------------------------------------------

namespace {

// Linear convolution c_j = sum_k a_k b_{j-k+na-1}, used by chirp_sum.
std::vector<cplx> convolve(std::span<const cplx> a, std::span<const cplx> b) {
    const std::size_t len = a.size() + b.size() - 1;
    const std::size_t m = std::bit_ceil(len);
    std::vector<cplx> x(m), y(m);
    std::copy(a.begin(), a.end(), x.begin());
    std::copy(b.begin(), b.end(), y.begin());
    fft(x, -1);
    fft(y, -1);
    for (std::size_t k = 0; k < m; ++k) x[k] *= y[k];
    fft(x, +1);
    x.resize(len);
    for (auto& z : x) z /= static_cast<double>(m);
    return x;
}

}  // namespace

void fft(std::vector<cplx>& data, int sign) {
    const std::size_t n = data.size();
    if (n <= 1) return;
    // The planner is not thread-safe. FFTW_ESTIMATE on fftw_malloc'd buffers
    // picks the same plan every time, so results are reproducible.
    static std::mutex planner;
    auto* buf = static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * n));
    if (buf == nullptr) throw std::bad_alloc();
    fftw_plan plan;
    {
        std::lock_guard<std::mutex> lock(planner);
        plan = fftw_plan_dft_1d(static_cast<int>(n), buf, buf, sign < 0 ? FFTW_FORWARD : FFTW_BACKWARD, FFTW_ESTIMATE);
    }
    std::memcpy(buf, data.data(), sizeof(fftw_complex) * n);
    fftw_execute(plan);
    std::memcpy(static_cast<void*>(data.data()), buf, sizeof(fftw_complex) * n);
    {
        std::lock_guard<std::mutex> lock(planner);
        fftw_destroy_plan(plan);
    }
    fftw_free(buf);
}

std::vector<cplx> chirp_sum(std::span<const cplx> v, double x0, double dx, double w0, double dw,
                            std::size_t m, int sign) {
    // (x0 + k dx)(w0 + j dw) = x0 w0 + j x0 dw + k dx w0 + k j dx dw
    // and kj = (k^2 + j^2 - (j-k)^2) / 2.
    const std::size_t n = v.size();
    if (n == 0 || m == 0) return std::vector<cplx>(m);
    const double s = static_cast<double>(sign);
    const double beta = dx * dw;
    std::vector<cplx> a(n);
    for (std::size_t k = 0; k < n; ++k) {
        const double kk = static_cast<double>(k);
        a[k] = v[k] * std::polar(1.0, s * (kk * dx * w0 + 0.5 * beta * kk * kk));
    }
    // b_d = exp(-s i beta d^2 / 2) for d = j - k in [-(n-1), m-1]
    std::vector<cplx> b(n + m - 1);
    for (std::size_t i = 0; i < b.size(); ++i) {
        const double d = static_cast<double>(i) - static_cast<double>(n - 1);
        b[i] = std::polar(1.0, -s * 0.5 * beta * d * d);
    }
    const auto c = convolve(a, b);
    std::vector<cplx> out(m);
    for (std::size_t j = 0; j < m; ++j) {
        const double jj = static_cast<double>(j);
        out[j] = c[j + n - 1] * std::polar(1.0, s * (x0 * w0 + jj * x0 * dw + 0.5 * beta * jj * jj));
    }
    return out;
}

// Fourier transform ------------------------------------------------------------

bool is_uniform(std::span<const double> xi, double rel_tol) {
    if (xi.size() < 3) return xi.size() == 2;
    const double d = (xi.back() - xi.front()) / static_cast<double>(xi.size() - 1);
    for (std::size_t j = 0; j < xi.size(); ++j) {
        const double expected = xi.front() + static_cast<double>(j) * d;
        if (std::abs(xi[j] - expected) > rel_tol * std::max(std::abs(d), 1e-300) * 1e3) return false;
    }
    return true;
}

namespace {

bool is_dual_of(const Grid& grid, std::span<const double> xi) {
    if (xi.size() != grid.size() || grid.size() < 2) return false;
    const double dxi = grid.dual_step();
    const double first = -static_cast<double>(grid.size() / 2) * dxi;
    return std::abs(xi.front() - first) <= 1e-9 * dxi &&
           std::abs(xi[1] - xi[0] - dxi) <= 1e-9 * dxi && is_uniform(xi);
}

void check_input(const SampledFunction& f, std::span<const double> xi) {
    if (xi.empty()) throw Error(ErrorKind::InvalidArgument, "empty frequency grid");
    (void)f;  // finiteness is a SampledFunction invariant
}

}  // namespace

SpectralFunction fourier_transform_direct(const SampledFunction& f, std::span<const double> xi) {
    check_input(f, xi);
    const Grid& g = f.grid();
    const double h = g.step();
    std::vector<cplx> out(xi.size());
    for (std::size_t j = 0; j < xi.size(); ++j) {
        cplx acc{};
        for (std::size_t k = 0; k < g.size(); ++k) {
            if (f[k] == cplx{}) continue;
            acc += f[k] * std::polar(1.0, -g.node(k) * xi[j]);
        }
        out[j] = h * acc;
    }
    return SpectralFunction(std::vector<double>(xi.begin(), xi.end()), std::move(out));
}

SpectralFunction fourier_transform(const SampledFunction& f, std::span<const double> xi) {
    check_input(f, xi);
    const Grid& g = f.grid();
    const double h = g.step();
    const std::size_t n = g.size();
    std::vector<double> freq(xi.begin(), xi.end());

    if (is_dual_of(g, xi) && n % 2 == 0) {
        // exp(-i k h xi_j) = exp(-2 pi i kj/n) * (-1)^k on the dual grid
        std::vector<cplx> a(n);
        for (std::size_t k = 0; k < n; ++k) a[k] = (k % 2 == 0) ? f[k] : -f[k];
        fft(a, -1);
        const double x0 = g.first_node();
        std::vector<cplx> out(n);
        for (std::size_t j = 0; j < n; ++j) out[j] = h * std::polar(1.0, -x0 * freq[j]) * a[j];
        return SpectralFunction(std::move(freq), std::move(out));
    }
    if (is_uniform(xi) && xi.size() > 16 && n > 16) {
        const double dw = (freq.back() - freq.front()) / static_cast<double>(freq.size() - 1);
        auto out = chirp_sum(f.values(), g.first_node(), h, freq.front(), dw, freq.size(), -1);
        for (auto& z : out) z *= h;
        return SpectralFunction(std::move(freq), std::move(out));
    }
    return fourier_transform_direct(f, xi);
}

SpectralFunction fourier_transform(const SampledFunction& f) {
    const auto xi = f.grid().dual_frequencies();
    return fourier_transform(f, xi);
}

SampledFunction inverse_fourier_transform(const SpectralFunction& F, const Grid& grid,
                                          std::string label) {
    const auto xi = F.xi();
    if (xi.empty()) throw Error(ErrorKind::InvalidArgument, "empty spectral function");
    const std::size_t m = xi.size();
    const std::size_t n = grid.size();
    const double span = grid.x_max() - grid.x_min();

    double max_gap = 0.0;
    for (std::size_t j = 1; j < m; ++j) max_gap = std::max(max_gap, xi[j] - xi[j - 1]);
    if (m < 2 || 2.0 * kPi / max_gap < span * (1.0 - 1e-9)) {
        std::ostringstream msg;
        msg << "frequency spacing " << max_gap << " aliases a grid of span " << span;
        throw Error(ErrorKind::InvalidArgument, msg.str());
    }

    std::vector<cplx> out(n);
    if (is_dual_of(grid, xi) && n % 2 == 0) {
        const double x0 = grid.first_node();
        std::vector<cplx> a(n);
        for (std::size_t j = 0; j < n; ++j) a[j] = F.values()[j] * std::polar(1.0, x0 * xi[j]);
        fft(a, +1);
        const double scale = grid.dual_step() / (2.0 * kPi);
        for (std::size_t k = 0; k < n; ++k) out[k] = scale * ((k % 2 == 0) ? a[k] : -a[k]);
    } else if (is_uniform(xi) && m > 16 && n > 16) {
        const double dxi = (xi.back() - xi.front()) / static_cast<double>(m - 1);
        out = chirp_sum(F.values(), xi.front(), dxi, grid.first_node(), grid.step(), n, +1);
        for (auto& z : out) z *= dxi / (2.0 * kPi);
    } else {
        // trapezoid weights on a general increasing frequency set
        std::vector<double> w(m);
        for (std::size_t j = 0; j < m; ++j) {
            const double lo = j == 0 ? xi[0] : 0.5 * (xi[j - 1] + xi[j]);
            const double hi = j + 1 == m ? xi[m - 1] : 0.5 * (xi[j] + xi[j + 1]);
            w[j] = hi - lo;
        }
        for (std::size_t k = 0; k < n; ++k) {
            cplx acc{};
            const double x = grid.node(k);
            for (std::size_t j = 0; j < m; ++j) acc += w[j] * F.values()[j] * std::polar(1.0, x * xi[j]);
            out[k] = acc / (2.0 * kPi);
        }
    }
    return SampledFunction(grid, std::move(out), std::move(label));
}

double l2_norm(const SampledFunction& f) {
    double acc = 0.0;
    for (const auto& z : f.values()) acc += std::norm(z);
    return std::sqrt(acc * f.grid().step());
}

cplx integrate(const SampledFunction& f) {
    cplx acc{};
    for (const auto& z : f.values()) acc += z;
    return acc * f.grid().step();
}

// Adaptive Simpson ---------------------------------------------------------------

namespace {

template <typename T, typename Fn>
T simpson_rec(const Fn& fn, double a, double b, T fa, T fm, T fb, T whole, double tol, int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const T flm = fn(lm);
    const T frm = fn(rm);
    const T left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const T right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const T delta = left + right - whole;
    if (depth <= 0 || std::abs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
    return simpson_rec<T>(fn, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           simpson_rec<T>(fn, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

template <typename T, typename Fn>
T simpson(const Fn& fn, double a, double b, double rel_tol, int max_depth) {
    if (a == b) return T{};
    // a coarse 8-panel Simpson estimate sets the absolute scale for rel_tol
    constexpr int kPanels = 8;
    const double w = (b - a) / kPanels;
    T total{};
    double scale = 0.0;
    std::vector<T> fa(kPanels), fm(kPanels), fb(kPanels), whole(kPanels);
    for (int p = 0; p < kPanels; ++p) {
        const double lo = a + p * w;
        const double hi = p + 1 == kPanels ? b : lo + w;
        fa[p] = fn(lo);
        fm[p] = fn(0.5 * (lo + hi));
        fb[p] = fn(hi);
        whole[p] = (hi - lo) / 6.0 * (fa[p] + 4.0 * fm[p] + fb[p]);
        scale += (hi - lo) / 6.0 * (std::abs(fa[p]) + 4.0 * std::abs(fm[p]) + std::abs(fb[p]));
    }
    const double tol = std::max(rel_tol * scale, 1e-300) / kPanels;
    for (int p = 0; p < kPanels; ++p) {
        const double lo = a + p * w;
        const double hi = p + 1 == kPanels ? b : lo + w;
        total += simpson_rec<T>(fn, lo, hi, fa[p], fm[p], fb[p], whole[p], tol, max_depth);
    }
    return total;
}

}  // namespace

double adaptive_simpson(const std::function<double(double)>& fn, double a, double b, double rel_tol,
                        int max_depth) {
    return simpson<double>(fn, a, b, rel_tol, max_depth);
}

cplx adaptive_simpson_complex(const std::function<cplx(double)>& fn, double a, double b, double rel_tol,
                              int max_depth) {
    return simpson<cplx>(fn, a, b, rel_tol, max_depth);
}

}  // namespace uplab::numerics
