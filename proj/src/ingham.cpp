#include "uplab/ingham.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace uplab::ingham {

using numerics::cplx;

SincProductSpec::SincProductSpec(std::vector<double> widths) : a_(std::move(widths)) {
    for (std::size_t k = 0; k < a_.size(); ++k) {
        if (!(a_[k] > 0.0) || !std::isfinite(a_[k])) {
            throw Error(ErrorKind::InvalidArgument, "sinc widths must be positive and finite");
        }
        if (k > 0 && a_[k] > a_[k - 1]) throw Error(ErrorKind::InvalidArgument, "sinc widths must be nonincreasing");
    }
    // sum smallest first
    for (auto it = a_.rbegin(); it != a_.rend(); ++it) radius_ += *it;

    const std::size_t n = a_.size();
    s2_.assign(n + 1, 0.0);
    s4_.assign(n + 1, 0.0);
    s6_.assign(n + 1, 0.0);
    for (std::size_t k = n; k-- > 0;) {
        const double a2 = a_[k] * a_[k];
        s2_[k] = s2_[k + 1] + a2;
        s4_[k] = s4_[k + 1] + a2 * a2;
        s6_[k] = s6_[k + 1] + a2 * a2 * a2;
    }
}

double SincProductSpec::partial_radius(std::size_t k) const {
    double s = 0.0;
    for (std::size_t j = std::min(k, a_.size()); j-- > 0;) s += a_[j];
    return s;
}

const std::vector<double>& SincProductSpec::suffix_moment(int power) const {
    switch (power) {
        case 2: return s2_;
        case 4: return s4_;
        case 6: return s6_;
        default: throw Error(ErrorKind::InvalidArgument, "suffix moments exist for powers 2, 4, 6");
    }
}

SincProductSpec spec_from_theta(const profiles::DecayProfile& theta) {
    if (theta.kind != profiles::ProfileKind::ThetaDecreasing) {
        throw Error(ErrorKind::InvalidArgument, "spec_from_theta needs a theta profile");
    }
    const auto diag = profiles::classify_integral(theta);
    if (diag.verdict != profiles::IntegralVerdict::LikelyConvergent) {
        std::ostringstream msg;
        msg << "profile '" << theta.name << "' classifies as " << profiles::to_string(diag.verdict)
            << " (tail exponent " << diag.tail_exponent << "), so sum theta(2^k) is taken to diverge";
        throw Error(ErrorKind::DivergentProfile, msg.str());
    }
    std::vector<double> a;
    for (int k = 1; k <= kMaxDyadicExponent; ++k) {
        const double v = theta(std::ldexp(1.0, k));
        if (v < kWidthThreshold) break;
        if (!a.empty() && v > a.back()) {
            throw Error(ErrorKind::ProfileError, "theta increases between dyadic points");
        }
        a.push_back(v);
    }
    return SincProductSpec(std::move(a));
}

SincProductSpec spec_from_psi(const profiles::DecayProfile& psi) {
    if (psi.kind != profiles::ProfileKind::PsiNondecreasing) {
        throw Error(ErrorKind::InvalidArgument, "spec_from_psi needs a psi profile");
    }
    profiles::DecayProfile theta{profiles::ProfileKind::ThetaDecreasing,
                                 [eval = psi.eval](double r) {
                                     const double s = std::max(r, 1.0);
                                     return eval(s) / s;
                                 },
                                 psi.name + "/r", psi.parameter};
    // The zero envelope is met by any f; report it without a construction.
    bool all_zero = true;
    for (int k = 0; k <= 64 && all_zero; ++k) all_zero = theta(std::ldexp(1.0, k)) == 0.0;
    if (all_zero) return SincProductSpec({});
    return spec_from_theta(theta);
}

double evaluate_product_fourier(const SincProductSpec& spec, double xi) {
    const auto& a = spec.widths();
    const double ax = std::abs(xi);
    if (ax == 0.0 || a.empty()) return 1.0;
    // factors with a_k |xi| < 1e-3 use log(sin t / t) = -t^2/6 - t^4/180 - t^6/2835 + O(t^8)
    constexpr double kSmall = 1e-3;
    const auto split = std::partition_point(a.begin(), a.end(), [&](double w) { return w * ax >= kSmall; });
    const std::size_t k0 = static_cast<std::size_t>(split - a.begin());
    double prod = 1.0;
    for (std::size_t k = 0; k < k0; ++k) {
        const double t = a[k] * ax;
        prod *= std::sin(t) / t;
        if (prod == 0.0) return 0.0;
    }
    const double x2 = ax * ax;
    const double log_tail = -x2 * spec.suffix_moment(2)[k0] / 6.0 - x2 * x2 * spec.suffix_moment(4)[k0] / 180.0 -
                            x2 * x2 * x2 * spec.suffix_moment(6)[k0] / 2835.0;
    return prod * std::exp(log_tail);
}

numerics::SampledFunction realize_function(const SincProductSpec& spec, const numerics::Grid& grid) {
    if (spec.trivial()) throw Error(ErrorKind::InvalidArgument, "the trivial spec has no realization");
    const double margin = 8.0 * grid.step();
    const double r = spec.support_radius();
    if (grid.x_min() > -r - margin || grid.x_max() < r + margin) {
        std::ostringstream msg;
        msg << "grid [" << grid.x_min() << ", " << grid.x_max() << ") does not cover the support radius " << r
            << " with margin " << margin;
        throw Error(ErrorKind::GridTooSmall, msg.str());
    }
    auto xi = grid.dual_frequencies();
    std::vector<cplx> values(xi.size());
    for (std::size_t j = 0; j < xi.size(); ++j) values[j] = evaluate_product_fourier(spec, xi[j]);
    auto f = numerics::inverse_fourier_transform(numerics::SpectralFunction(std::move(xi), std::move(values)), grid,
                                                 "ingham_bump");
    // drop the O(eps) imaginary residue of the real, even transform
    std::vector<cplx> real(f.values().begin(), f.values().end());
    for (auto& z : real) z = cplx(z.real(), 0.0);
    return numerics::SampledFunction(grid, std::move(real), "ingham_bump");
}

double support_leakage(const numerics::SampledFunction& f, double radius) {
    const double h = f.grid().step();
    double outside = 0.0;
    double total = 0.0;
    for (std::size_t k = 0; k < f.size(); ++k) {
        const double m = std::abs(f[k]);
        total += m;
        if (std::abs(f.grid().node(k)) > radius + h) outside += m;
    }
    return total > 0.0 ? outside / total : 0.0;
}

EnvelopeCertificate certify_envelope(const SincProductSpec& spec, const profiles::DecayProfile& psi, double xi0,
                                     std::size_t windows, double slack_factor) {
    if (!(xi0 > 0.0) || windows == 0) throw Error(ErrorKind::InvalidArgument, "need xi0 > 0 and at least one window");
    const auto radii = envelope::dyadic_radii(xi0, windows);
    // f^ is even: sample [0, Xi_max] finely enough to resolve the sinc oscillations
    const double xi_max = radii.back();
    const double min_width = spec.trivial() ? 1.0 : spec.widths().back();
    const double step = std::min(xi_max / 16384.0, 0.05 / std::max(spec.support_radius(), min_width));
    const auto n = static_cast<std::size_t>(std::ceil(xi_max / step));
    std::vector<envelope::RatioSample> samples;
    samples.reserve(n + 1);
    for (std::size_t j = 0; j <= n; ++j) {
        const double xi = std::min(xi_max, static_cast<double>(j) * step);
        const double v = std::abs(evaluate_product_fourier(spec, xi));
        samples.push_back({xi, envelope::safe_log(v) + slack_factor * psi(xi), false});
    }
    EnvelopeCertificate cert;
    cert.windows = envelope::fit_windows(samples, 0.0, radii);
    cert.slack_factor = slack_factor;
    cert.drift = envelope::drift(cert.windows);
    cert.stable = cert.drift < kCertificateDrift;
    return cert;
}

}  // namespace uplab::ingham
