#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "uplab/error.hpp"

namespace uplab::numerics {

using cplx = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846264338327950288;

/**
 * Uniform grid of n_points nodes on [x_min, x_max).
 *
 * Nodes sit at x_min + k*h (offset == false) or x_min + (k + 1/2)*h
 * (offset == true) with h = (x_max - x_min) / n_points. Integrals over a
 * grid use the periodic trapezoid rule h * sum(f_k), which is the ordinary
 * trapezoid rule for functions vanishing at the boundary.
 *
 * A symmetric offset grid ([-R, R), offset) never contains 0, which is what
 * every division by the Weyl weight relies on.
 */
class Grid {
public:
    Grid(double x_min, double x_max, std::size_t n_points, bool offset = false);

    /// Symmetric grid [-radius, radius).
    static Grid symmetric(double radius, std::size_t n_points, bool offset = false);

    double x_min() const noexcept { return x_min_; }
    double x_max() const noexcept { return x_max_; }
    std::size_t size() const noexcept { return n_; }
    bool offset() const noexcept { return offset_; }
    double step() const noexcept { return (x_max_ - x_min_) / static_cast<double>(n_); }
    double first_node() const noexcept { return x_min_ + (offset_ ? 0.5 * step() : 0.0); }
    double node(std::size_t k) const noexcept { return first_node() + static_cast<double>(k) * step(); }
    std::vector<double> nodes() const;

    /// Index of the node at -x(k), when the grid contains it.
    std::optional<std::size_t> mirror_index(std::size_t k) const;

    /// Frequencies (j - n/2) * 2*pi / (n*h), j = 0..n-1: the grid on which
    /// the trapezoid transform is evaluated by a single FFT.
    std::vector<double> dual_frequencies() const;
    double dual_step() const noexcept { return 2.0 * kPi / (static_cast<double>(n_) * step()); }

    bool operator==(const Grid&) const = default;

private:
    double x_min_;
    double x_max_;
    std::size_t n_;
    bool offset_;
};

/// Complex samples of a function on a Grid. Values are finite by construction.
class SampledFunction {
public:
    SampledFunction(Grid grid, std::vector<cplx> values, std::string label = {});

    static SampledFunction zero(const Grid& grid, std::string label = {});
    static SampledFunction sample(const Grid& grid, const std::function<cplx(double)>& fn,
                                  std::string label = {});

    const Grid& grid() const noexcept { return grid_; }
    std::span<const cplx> values() const noexcept { return values_; }
    const cplx& operator[](std::size_t k) const noexcept { return values_[k]; }
    const std::string& label() const noexcept { return label_; }
    std::size_t size() const noexcept { return values_.size(); }

    SampledFunction scaled(cplx factor) const;
    double max_abs() const noexcept;

private:
    Grid grid_;
    std::vector<cplx> values_;
    std::string label_;
};

/// Values of a transform on a strictly increasing set of real frequencies.
class SpectralFunction {
public:
    SpectralFunction(std::vector<double> xi, std::vector<cplx> values);

    std::span<const double> xi() const noexcept { return xi_; }
    std::span<const cplx> values() const noexcept { return values_; }
    std::size_t size() const noexcept { return xi_.size(); }
    double max_abs() const noexcept;

private:
    std::vector<double> xi_;
    std::vector<cplx> values_;
};

// FFT ---------------------------------------------------------------------

/// In-place DFT, X_j = sum_k x_k exp(-+2 pi i jk/n) (sign -1 forward, +1
/// inverse, no normalization), computed by FFTW.
void fft(std::vector<cplx>& data, int sign = -1);

/// S_j = sum_k v_k exp(sign * i * (x0 + k dx) * (w0 + j dw)) for j < m,
/// evaluated with the chirp-z factorization.
std::vector<cplx> chirp_sum(std::span<const cplx> v, double x0, double dx, double w0, double dw,
                            std::size_t m, int sign);

// Continuous Fourier transform, f^(xi) = int f(x) exp(-i x xi) dx ------------

/// Trapezoid approximation of f^ at each xi. Uses one FFT when xi is the dual
/// grid of f.grid(), the chirp-z path when xi is otherwise uniform, and the
/// direct sum in all other cases.
SpectralFunction fourier_transform(const SampledFunction& f, std::span<const double> xi);

/// Transform on the dual grid of f.grid().
SpectralFunction fourier_transform(const SampledFunction& f);

/// The direct O(n*m) sum; kept as the slow reference path.
SpectralFunction fourier_transform_direct(const SampledFunction& f, std::span<const double> xi);

/// f(x) = (1/2pi) int F(xi) exp(i x xi) dxi by the trapezoid rule in xi.
/// Throws InvalidArgument when the frequency spacing cannot resolve the
/// target grid (period 2*pi/dxi shorter than the grid span).
SampledFunction inverse_fourier_transform(const SpectralFunction& F, const Grid& grid,
                                          std::string label = {});

double l2_norm(const SampledFunction& f);

/// Periodic trapezoid integral h * sum(f_k).
cplx integrate(const SampledFunction& f);

// Helpers shared by the modules ----------------------------------------------

bool is_uniform(std::span<const double> xi, double rel_tol = 1e-10);

/// Adaptive Simpson quadrature of a real integrand with relative tolerance.
double adaptive_simpson(const std::function<double(double)>& fn, double a, double b,
                        double rel_tol = 1e-10, int max_depth = 50);

/// Complex variant (real and imaginary parts integrated together).
cplx adaptive_simpson_complex(const std::function<cplx(double)>& fn, double a, double b,
                              double rel_tol = 1e-10, int max_depth = 50);

}  // namespace uplab::numerics
