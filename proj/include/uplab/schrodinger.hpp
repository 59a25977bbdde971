#pragma once

#include <array>

#include "uplab/complex_group.hpp"
#include "uplab/numerics.hpp"

namespace uplab::schrodinger {

using numerics::cplx;
using numerics::SampledFunction;

// du/dt - i (Delta - c) u = 0 evaluated at t0. In group mode the damping is
// ||rho||_B^2 of the model and c is ignored.
struct SchrodingerParams {
    double t0 = 1.0;
    double c = 0.0;
    int n = 1;
    int rank = 1;
};

/// gamma_{c,t}(x) = (4 pi |t|)^{-n/2} e^{-ict} e^{-i pi sign(t) n/4} e^{i x^2/4t}.
/// Throws InvalidTime for t0 == 0.
cplx kernel_gamma(const SchrodingerParams& p, double x);

/// u(x,t0) = (4 pi t0)^{-1/2} e^{-ic t0} e^{-i pi/4} e^{i x^2/4t0} h^(x/2t0), h(y) = e^{i y^2/4t0} f(y).
/// Output on f's grid. Throws InvalidTime (t0 <= 0), BoundaryLeak (f not
/// decayed at the grid ends) and GridTooSmall (x/2t0 beyond the Nyquist band).
SampledFunction evolve_euclidean_closed_form(const SchrodingerParams& p, const SampledFunction& f);

/// u^_t = e^{-it(xi^2 + c)} f^ on the dual grid.
SampledFunction evolve_spectral(const SchrodingerParams& p, const SampledFunction& f, double t);

struct SpectralEvolution {
    SampledFunction u;
    double tail_fraction;  // |f^|^2 mass beyond 3/4 of the Nyquist frequency
    bool aliasing_warning;
};
inline constexpr double kAliasingTail = 1e-8;

SpectralEvolution evolve_spectral_checked(const SchrodingerParams& p, const SampledFunction& f, double t);

// Group mode (rank one) ---------------------------------------------------------

/// u~_t(lambda) = e^{-it(||lambda||_B^2 + ||rho||_B^2)} f~(lambda), inverted by
/// inverse_spherical. f lives on a symmetric half-step grid.
SampledFunction evolve_group_spectral(const group::GroupModel& G, const SchrodingerParams& p,
                                      const SampledFunction& f);

/// u(H,t0) phi(H) = C |W|^2 t0^{-l/2} e^{-i(t0 ||rho||_B^2 - ||H||_B^2/4t0)} g_f^(H/2t0),
/// g_f = e^{i ||H||_B^2/4t0} f phi, with g_f^ paired through the Killing form
/// (coordinate frequency ||H||_B^2/|H|^2 * H/2t0 = 8H/t0 for SL(2,C)).
SampledFunction evolve_group_closed_form(const group::GroupModel& G, const SchrodingerParams& p,
                                         const SampledFunction& f, cplx constant);

/// g_f on f's grid (f symmetrized over W first).
SampledFunction group_g(const group::GroupModel& G, double t0, const SampledFunction& f);

/// C from one (f, H) pair: the node where the closed form with C = 1 peaks.
cplx calibrate_group_constant(const group::GroupModel& G, const SchrodingerParams& p, const SampledFunction& f);

/// Calibration against the fixed reference profile exp(-||H||_B^2/4) on [-16, 16)
/// with 4096 half-step nodes.
cplx reference_group_constant(const group::GroupModel& G, double t0);

/// (4 pi kappa)^{-l/2} e^{-i pi l/4} / |W|^2 with kappa = |H|^2/||H||_B^2.
cplx analytic_group_constant(const group::GroupModel& G);

// Residual ----------------------------------------------------------------------

enum class ResidualMode { Euclidean, Group };

struct ResidualReport {
    double residual;  // max over interior nodes
    double h;
    double delta;
};

/// Slices at t - delta, t, t + delta. Central differences in t and in x;
/// group mode uses Delta = phi^{-1} (Delta_B - ||rho||_B^2) phi with
/// Delta_B = d^2/dH^2 / b_norm_scale^2. The two outermost nodes on each side
/// are skipped. Throws MismatchedGrids.
ResidualReport pde_residual(const std::array<SampledFunction, 3>& slices, const SchrodingerParams& p,
                            ResidualMode mode, double delta, const group::GroupModel* G = nullptr);

/// max |a - b| / max |b|.
double relative_error(const SampledFunction& a, const SampledFunction& b);

}  // namespace uplab::schrodinger
