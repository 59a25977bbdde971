#pragma once

#include <vector>

#include "uplab/envelope.hpp"
#include "uplab/numerics.hpp"
#include "uplab/profiles.hpp"

namespace uplab::ingham {

/**
 * Infinite-convolution bump: f = *_k (1_[-a_k, a_k] / 2a_k), so that
 * f^(xi) = prod_k sin(a_k xi) / (a_k xi) and supp f = [-sum a_k, sum a_k].
 *
 * The widths are positive and nonincreasing. An empty width list is the
 * trivial spec (f^ == 1), produced for the zero envelope.
 */
class SincProductSpec {
public:
    explicit SincProductSpec(std::vector<double> widths);

    const std::vector<double>& widths() const noexcept { return a_; }
    std::size_t size() const noexcept { return a_.size(); }
    double support_radius() const noexcept { return radius_; }
    bool trivial() const noexcept { return a_.empty(); }

    /// sum of the first k widths
    double partial_radius(std::size_t k) const;

    // suffix power sums of the widths, used for the small-argument tail
    const std::vector<double>& suffix_moment(int power) const;

private:
    std::vector<double> a_;
    double radius_ = 0.0;
    std::vector<double> s2_, s4_, s6_;
};

// Truncation of the width sequence.
inline constexpr double kWidthThreshold = 1e-8;
// 2^k stays representable up to k = 1023.
inline constexpr int kMaxDyadicExponent = 1023;

/// a_k = theta(2^k), k = 1, 2, ..., stopping before the first width below
/// kWidthThreshold. Throws DivergentProfile unless the Ingham integral of
/// theta classifies as LIKELY_CONVERGENT (sum theta(2^k) and
/// int theta(r)/r dr converge together for nonincreasing theta).
SincProductSpec spec_from_theta(const profiles::DecayProfile& theta);

/// Delegates to spec_from_theta with theta(r) = psi(max(r,1)) / max(r,1).
/// The zero envelope yields the trivial spec.
SincProductSpec spec_from_psi(const profiles::DecayProfile& psi);

/// prod_k sin(a_k xi)/(a_k xi); 1 at xi = 0.
double evaluate_product_fourier(const SincProductSpec& spec, double xi);

/// Inverse transform of the sinc product sampled on the dual grid. The grid
/// must cover the support with a margin of 8 steps (GridTooSmall otherwise).
numerics::SampledFunction realize_function(const SincProductSpec& spec, const numerics::Grid& grid);

/// sum_{|x| > R + h} |f(x)| h / sum |f| h.
double support_leakage(const numerics::SampledFunction& f, double radius);

struct EnvelopeCertificate {
    std::vector<envelope::Window> windows;
    double slack_factor;  // the envelope certified is exp(-slack_factor * psi)
    double drift;
    bool stable;
};

/// C*(Xi) = max_{|xi| <= Xi} |f^(xi)| exp(slack_factor * psi(|xi|)) on the
/// dyadic windows Xi0 * 2^k; stable when the constants drift by < 10 %.
EnvelopeCertificate certify_envelope(const SincProductSpec& spec, const profiles::DecayProfile& psi,
                                     double xi0, std::size_t windows = 3, double slack_factor = 0.5);

inline constexpr double kCertificateDrift = 0.10;

}  // namespace uplab::ingham
