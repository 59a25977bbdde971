#pragma once

#include <optional>
#include <string>
#include <vector>

#include "uplab/complex_group.hpp"
#include "uplab/envelope.hpp"
#include "uplab/ingham.hpp"
#include "uplab/numerics.hpp"
#include "uplab/profiles.hpp"

namespace uplab::counterexample {

using numerics::cplx;
using numerics::Grid;
using numerics::SampledFunction;

struct CounterexampleParams {
    double alpha = 0.5;
    double eta = 0.25;
    double beta = 0.25;        // 1 - alpha - eta
    double beta_prime = 0.125; // in (0, beta)
    double t0 = 1.0;
    profiles::DecayProfile theta = profiles::theta_log();

    /// beta = 1 - alpha - eta; beta_prime defaults to beta / 2.
    static CounterexampleParams make(double alpha, double eta, double t0,
                                     std::optional<double> beta_prime = std::nullopt,
                                     profiles::DecayProfile theta = profiles::theta_log());
    /// Throws InvalidArgument on any violated constraint.
    void validate() const;
};

/// h(x) = exp(-1/(1 - y^2)) / Z with y the affine map of [lo, hi] onto [-1, 1],
/// Z chosen so that int h = 1.
class SmoothBump {
public:
    SmoothBump(double lo, double hi);
    double operator()(double x) const;
    double lo() const noexcept { return lo_; }
    double hi() const noexcept { return hi_; }
    double norm() const noexcept { return z_; }

private:
    double lo_, hi_, z_ = 1.0;
};

/// Samples of SmoothBump(beta_prime, beta) on the grid. Throws InvalidSupport
/// unless 0 < beta_prime < beta.
SampledFunction build_bump(double beta_prime, double beta, const Grid& grid);

/// f(H) = (1/2t0) e^{-i ||H||_B^2/4t0} phi(H)^{-1} h_odd(H/2t0), h_odd(s) = h(s) - h(-s),
/// which is W-invariant and gives g_f = (1/2t0) h_odd(H/2t0). Needs a
/// half-step grid (WallSingularity) whose first positive node lies below
/// 2 t0 beta' (SupportTouchesZero).
SampledFunction build_initial_data(const CounterexampleParams& params, const group::GroupModel& G, const Grid& grid);

/// max |g_f(H) - (1/2t0) h_odd(H/2t0)| over the grid.
double g_identity_error(const CounterexampleParams& params, const group::GroupModel& G, const SampledFunction& f);

// Thresholds ---------------------------------------------------------------------

/// Smallest lattice point m*step > 1 with theta(4 M1) < eta/4.
double threshold_m1(const profiles::DecayProfile& theta, double eta, double step);
/// Smallest lattice point m*step > 1 from which e^H <= sinh 2H (C = 1).
double threshold_m2(double step);

// Envelopes -------------------------------------------------------------------------

enum class EnvelopeMode { Remark42, Remark451, FullStrength };
std::string_view to_string(EnvelopeMode m) noexcept;

/// E(H) = phi_0(H)^alpha exp(-decay(H)); decay = ||H||_B theta(||H||_B) for
/// Remark42 and FullStrength (alpha = 1), eta |H| for Remark451.
struct EnvelopeTarget {
    EnvelopeMode mode;
    double alpha;
    double eta;
    profiles::DecayProfile theta;

    static EnvelopeTarget from(const CounterexampleParams& params, EnvelopeMode mode);
    double log_envelope(const group::GroupModel& G, double H) const;
};

/// log|u| at the positive grid nodes, optionally extended beyond the grid by
/// the bound |u(H)| <= K / |phi(H)| with K = |C| |W|^2 t0^{-l/2} ||g_f||_1.
struct ModulusSamples {
    std::vector<double> H;
    std::vector<double> log_modulus;
    std::vector<bool> upper_bound;
};

ModulusSamples resolved_samples(const SampledFunction& u);
void append_tail_bound(ModulusSamples& s, const group::GroupModel& G, double log_k, double h_max,
                       std::size_t count = 4096);

inline constexpr double kEnvelopeSlack = 0.10;

struct EnvelopeReport {
    EnvelopeMode mode;
    double alpha;
    double threshold;  // M (0 when the windows were given explicitly)
    double m1;
    double m2;
    std::vector<envelope::Window> windows;
    double drift;
    double growth;
    bool monotone;  // window constants nondecreasing
    envelope::Verdict verdict;
    double slack;
    bool tail_bound_used;
};

/// Explicit nested windows [first sample, radii[k]].
EnvelopeReport verify_envelope(const ModulusSamples& samples, const group::GroupModel& G,
                               const EnvelopeTarget& target, const std::vector<double>& radii);

/// Windows Xi0 * 2^k (k = 0..2), Xi0 the smallest power of two >= M, M = max(M1, M2)
/// for Remark42 and M2 for Remark451. Without `log_tail_constant` the grid must
/// reach 4 Xi0 (WindowTooSmall otherwise).
EnvelopeReport verify_envelope(const CounterexampleParams& params, const group::GroupModel& G,
                               const SampledFunction& u, EnvelopeMode mode,
                               std::optional<double> log_tail_constant = std::nullopt);

/// Euclidean fit of |u(x)| against exp(-psi(|x|)) over the nested windows.
EnvelopeReport verify_euclidean_envelope(const SampledFunction& u, const profiles::DecayProfile& psi,
                                         const std::vector<double>& radii);

// Chain certificate ------------------------------------------------------------------

struct ChainLink {
    std::string name;
    double worst_log_margin;  // max of log(lhs) - log(rhs); <= 0 when the link holds
    bool holds;
};

struct ChainCertificate {
    std::vector<ChainLink> links;
    std::vector<double> H;
    bool holds;
};

/// At log-spaced H in (M, 1000 M]:
///   |h^(H)| <= ||h||_1 e^{beta H},
///   e^{beta H} <= e^{(1-alpha) H} e^{-4H theta(4H)},
///   e^{(1-alpha) H} <= |phi(H)| phi_0(H)^alpha.
ChainCertificate certify_envelope_chain(const CounterexampleParams& params, const group::GroupModel& G,
                                        double step, std::size_t samples = 64);

// Pipelines ----------------------------------------------------------------------------

struct PipelineResult {
    SampledFunction f;
    SampledFunction u;
    cplx constant;
    double g_identity_error;
    double log_tail_constant;
    EnvelopeReport report;
};

/// Builds the initial data, evolves with the calibrated closed form and
/// verifies the Remark42 (or Remark451) envelope.
PipelineResult run_counterexample(const CounterexampleParams& params, const group::GroupModel& G, const Grid& grid,
                                  EnvelopeMode mode);

/// log(|C| |W|^2 t0^{-l/2} ||g_f||_1) for the tail bound.
double log_tail_constant(const group::GroupModel& G, double t0, cplx constant, const SampledFunction& f);

struct DichotomyReport {
    EnvelopeReport report;
    bool nonzero_data;
    double growth;
    bool monotone;
};

/// Evolves f and fits the full-strength envelope phi_0(H) exp(-||H||_B theta(||H||_B))
/// on the resolved windows R/4, R/2, R (R the grid radius).
DichotomyReport theorem_dichotomy_experiment(const group::GroupModel& G, const profiles::DecayProfile& theta,
                                             const SampledFunction& f, double t0);

/// W-invariant data with g_f(H) = b(H - s) - b(-H - s), b the Ingham bump of
/// `spec` and s = (m + 1/2) h the first half-step shift beyond radius + 1/2.
SampledFunction ingham_seeded_initial_data(const ingham::SincProductSpec& spec, const group::GroupModel& G,
                                           const Grid& grid, double t0);

}  // namespace uplab::counterexample
