#include "uplab/counterexample.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "uplab/schrodinger.hpp"

namespace uplab::counterexample {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require(bool ok, const std::string& what) {
    if (!ok) throw Error(ErrorKind::InvalidArgument, what);
}

double bump_shape(double y) { return std::abs(y) < 1.0 ? std::exp(-1.0 / (1.0 - y * y)) : 0.0; }

// int_{-1}^{1} exp(-1/(1-y^2)) dy
double bump_mass() {
    static const double mass = numerics::adaptive_simpson(bump_shape, -1.0, 1.0, 1e-14);
    return mass;
}

double h_odd(const SmoothBump& h, double s) { return h(s) - h(-s); }

}  // namespace

CounterexampleParams CounterexampleParams::make(double alpha, double eta, double t0, std::optional<double> beta_prime,
                                                profiles::DecayProfile theta) {
    CounterexampleParams p;
    p.alpha = alpha;
    p.eta = eta;
    p.beta = 1.0 - alpha - eta;
    p.beta_prime = beta_prime.value_or(0.5 * p.beta);
    p.t0 = t0;
    p.theta = std::move(theta);
    p.validate();
    return p;
}

void CounterexampleParams::validate() const {
    require(alpha >= 0.0 && alpha < 1.0, "alpha must lie in [0, 1)");
    require(eta > 0.0 && eta < 1.0 - alpha, "eta must lie in (0, 1 - alpha)");
    require(std::abs(alpha + eta + beta - 1.0) <= 4.0 * std::numeric_limits<double>::epsilon(),
            "beta must equal 1 - alpha - eta");
    require(beta_prime > 0.0 && beta_prime < beta, "beta' must lie in (0, beta)");
    require(t0 > 0.0 && std::isfinite(t0), "t0 must be positive");
    require(theta.kind == profiles::ProfileKind::ThetaDecreasing, "theta must be a decreasing profile");
}

// Bump -------------------------------------------------------------------------------

SmoothBump::SmoothBump(double lo, double hi) : lo_(lo), hi_(hi) {
    if (!(lo < hi) || !std::isfinite(lo) || !std::isfinite(hi)) {
        throw Error(ErrorKind::InvalidSupport, "bump support needs lo < hi");
    }
    z_ = 0.5 * (hi - lo) * bump_mass();
}

double SmoothBump::operator()(double x) const {
    const double y = (2.0 * x - (lo_ + hi_)) / (hi_ - lo_);
    return bump_shape(y) / z_;
}

SampledFunction build_bump(double beta_prime, double beta, const Grid& grid) {
    if (!(beta_prime > 0.0 && beta_prime < beta)) {
        throw Error(ErrorKind::InvalidSupport, "bump support [beta', beta] needs 0 < beta' < beta");
    }
    const SmoothBump h(beta_prime, beta);
    return SampledFunction::sample(grid, [&h](double x) { return cplx(h(x)); }, "bump");
}

SampledFunction build_initial_data(const CounterexampleParams& params, const group::GroupModel& G, const Grid& grid) {
    params.validate();
    if (G.rank() != 1) throw Error(ErrorKind::InvalidArgument, "the construction lives on a rank-one model");
    double first_positive = kInf;
    for (std::size_t k = 0; k < grid.size(); ++k) {
        const double H = grid.node(k);
        if (group::phi_weight(G, H) == 0.0) {
            throw Error(ErrorKind::WallSingularity, "grid contains a zero of phi; use a half-step grid");
        }
        if (H > 0.0) first_positive = std::min(first_positive, H);
    }
    const double t = params.t0;
    if (2.0 * t * params.beta_prime <= first_positive) {
        std::ostringstream msg;
        msg << "support starts at 2 t0 beta' = " << 2.0 * t * params.beta_prime << ", not beyond the first node "
            << first_positive;
        throw Error(ErrorKind::SupportTouchesZero, msg.str());
    }
    if (2.0 * t * params.beta >= grid.x_max() || -2.0 * t * params.beta <= grid.x_min()) {
        throw Error(ErrorKind::InvalidSupport, "support [2 t0 beta', 2 t0 beta] exceeds the grid");
    }
    const SmoothBump h(params.beta_prime, params.beta);
    const double b2 = G.b_norm_scale() * G.b_norm_scale();
    return SampledFunction::sample(
        grid,
        [&](double H) {
            const double v = h_odd(h, H / (2.0 * t));
            if (v == 0.0) return cplx{};
            return std::polar(1.0, -b2 * H * H / (4.0 * t)) * (v / (2.0 * t * group::phi_weight(G, H)));
        },
        "initial_data");
}

double g_identity_error(const CounterexampleParams& params, const group::GroupModel& G, const SampledFunction& f) {
    const auto g = schrodinger::group_g(G, params.t0, f);
    const SmoothBump h(params.beta_prime, params.beta);
    double worst = 0.0;
    for (std::size_t k = 0; k < g.size(); ++k) {
        const double H = g.grid().node(k);
        const double expected = h_odd(h, H / (2.0 * params.t0)) / (2.0 * params.t0);
        worst = std::max(worst, std::abs(g[k] - expected));
    }
    return worst;
}

// Thresholds ---------------------------------------------------------------------------

double threshold_m1(const profiles::DecayProfile& theta, double eta, double step) {
    require(step > 0.0 && eta > 0.0, "threshold needs positive step and eta");
    auto ok = [&](double m) { return theta(4.0 * m * step) < eta / 4.0; };
    double lo = std::floor(1.0 / step) + 1.0;  // first lattice index beyond 1
    if (ok(lo)) return lo * step;
    double hi = 2.0 * lo;
    while (!ok(hi)) {
        hi *= 2.0;
        if (hi * step > 1e300) throw Error(ErrorKind::ProfileError, "theta never falls below eta/4");
    }
    // invariant: !ok(lo), ok(hi)
    while (hi - lo > 1.0) {
        const double mid = std::floor(0.5 * (lo + hi));
        (ok(mid) ? hi : lo) = mid;
    }
    return hi * step;
}

double threshold_m2(double step) {
    require(step > 0.0, "threshold needs a positive step");
    // log sinh 2H - H is increasing, so the first lattice point that satisfies the bound is the threshold
    for (double m = std::floor(1.0 / step) + 1.0;; m += 1.0) {
        const double H = m * step;
        if (std::exp(H) <= std::sinh(2.0 * H)) return H;
    }
}

// Envelopes -----------------------------------------------------------------------------

std::string_view to_string(EnvelopeMode m) noexcept {
    switch (m) {
        case EnvelopeMode::Remark42: return "remark42";
        case EnvelopeMode::Remark451: return "remark451";
        case EnvelopeMode::FullStrength: return "full_strength";
    }
    return "unknown";
}

EnvelopeTarget EnvelopeTarget::from(const CounterexampleParams& params, EnvelopeMode mode) {
    const double alpha = mode == EnvelopeMode::FullStrength ? 1.0 : params.alpha;
    return EnvelopeTarget{mode, alpha, params.eta, params.theta};
}

double EnvelopeTarget::log_envelope(const group::GroupModel& G, double H) const {
    const double a = std::abs(H);
    double decay = 0.0;
    if (mode == EnvelopeMode::Remark451) {
        decay = eta * a;
    } else {
        const double r = G.b_norm(std::span<const double>(&a, 1));
        decay = r * theta(r);
    }
    const double weight = alpha == 0.0 ? 0.0 : alpha * group::log_phi_zero(G, a);
    return weight - decay;
}

ModulusSamples resolved_samples(const SampledFunction& u) {
    ModulusSamples s;
    for (std::size_t k = 0; k < u.size(); ++k) {
        const double H = u.grid().node(k);
        if (H <= 0.0) continue;
        s.H.push_back(H);
        s.log_modulus.push_back(envelope::safe_log(std::abs(u[k])));
        s.upper_bound.push_back(false);
    }
    return s;
}

void append_tail_bound(ModulusSamples& s, const group::GroupModel& G, double log_k, double h_max, std::size_t count) {
    const double start = s.H.empty() ? 1.0 : s.H.back();
    if (!(h_max > start) || count == 0) return;
    const double ratio = std::log(h_max / start);
    for (std::size_t j = 1; j <= count; ++j) {
        const double H = start * std::exp(ratio * static_cast<double>(j) / static_cast<double>(count));
        s.H.push_back(H);
        s.log_modulus.push_back(log_k - group::log_abs_phi_weight(G, H));
        s.upper_bound.push_back(true);
    }
}

namespace {

EnvelopeReport fit(const std::vector<envelope::RatioSample>& ratio, EnvelopeMode mode, double alpha,
                   const std::vector<double>& radii) {
    if (ratio.empty()) throw Error(ErrorKind::WindowTooSmall, "no samples to fit");
    // windows may end up to one sample spacing beyond the last sample
    const double spacing = ratio.size() > 1 ? ratio.back().x - ratio[ratio.size() - 2].x : 0.0;
    if (radii.empty() || radii.back() > ratio.back().x + spacing) {
        std::ostringstream msg;
        msg << "windows reach " << (radii.empty() ? 0.0 : radii.back()) << " but samples end at " << ratio.back().x;
        throw Error(ErrorKind::WindowTooSmall, msg.str());
    }
    EnvelopeReport r;
    r.mode = mode;
    r.alpha = alpha;
    r.threshold = 0.0;
    r.m1 = 0.0;
    r.m2 = 0.0;
    r.windows = envelope::fit_windows(ratio, ratio.front().x, radii);
    r.drift = envelope::drift(r.windows);
    r.growth = envelope::growth(r.windows);
    r.monotone = true;
    for (std::size_t k = 1; k < r.windows.size(); ++k) {
        r.monotone = r.monotone && r.windows[k].constant >= r.windows[k - 1].constant;
    }
    r.slack = kEnvelopeSlack;
    r.verdict = envelope::judge(r.windows, kEnvelopeSlack);
    r.tail_bound_used = std::any_of(ratio.begin(), ratio.end(), [](const auto& s) { return s.upper_bound; });
    return r;
}

}  // namespace

EnvelopeReport verify_envelope(const ModulusSamples& samples, const group::GroupModel& G, const EnvelopeTarget& target,
                               const std::vector<double>& radii) {
    std::vector<envelope::RatioSample> ratio;
    ratio.reserve(samples.H.size());
    for (std::size_t k = 0; k < samples.H.size(); ++k) {
        const double H = samples.H[k];
        ratio.push_back({H, samples.log_modulus[k] - target.log_envelope(G, H), samples.upper_bound[k]});
    }
    return fit(ratio, target.mode, target.alpha, radii);
}

EnvelopeReport verify_envelope(const CounterexampleParams& params, const group::GroupModel& G,
                               const SampledFunction& u, EnvelopeMode mode, std::optional<double> log_tail_constant) {
    params.validate();
    const double step = u.grid().step();
    const double m2 = threshold_m2(step);
    const double m1 = mode == EnvelopeMode::Remark451 ? 0.0 : threshold_m1(params.theta, params.eta, step);
    const double M = std::max(m1, m2);
    const double xi0 = std::exp2(std::ceil(std::log2(M)));
    const auto radii = envelope::dyadic_radii(xi0, 3);

    auto samples = resolved_samples(u);
    const double reach = samples.H.empty() ? 0.0 : samples.H.back();
    if (reach < radii.back()) {
        if (!log_tail_constant) {
            std::ostringstream msg;
            msg << "grid reaches " << reach << " but the windows beyond M = " << M << " need " << radii.back();
            throw Error(ErrorKind::WindowTooSmall, msg.str());
        }
        append_tail_bound(samples, G, *log_tail_constant, radii.back());
    }
    auto report = verify_envelope(samples, G, EnvelopeTarget::from(params, mode), radii);
    report.threshold = M;
    report.m1 = m1;
    report.m2 = m2;
    return report;
}

EnvelopeReport verify_euclidean_envelope(const SampledFunction& u, const profiles::DecayProfile& psi,
                                         const std::vector<double>& radii) {
    std::vector<envelope::RatioSample> ratio;
    for (std::size_t k = 0; k < u.size(); ++k) {
        const double x = u.grid().node(k);
        if (x <= 0.0) continue;
        ratio.push_back({x, envelope::safe_log(std::abs(u[k])) + psi(x), false});
    }
    return fit(ratio, EnvelopeMode::FullStrength, 0.0, radii);
}

// Chain --------------------------------------------------------------------------------

ChainCertificate certify_envelope_chain(const CounterexampleParams& params, const group::GroupModel& G, double step,
                                        std::size_t samples) {
    params.validate();
    require(samples > 0, "chain certificate needs samples");
    const double M = std::max(threshold_m1(params.theta, params.eta, step), threshold_m2(step));
    const SmoothBump h(params.beta_prime, params.beta);

    // trapezoid samples of h for |h^(H)|; the sum is bounded by the discrete L1 norm
    constexpr std::size_t kNodes = 4096;
    const double dx = (params.beta - params.beta_prime) / static_cast<double>(kNodes);
    std::vector<double> hx(kNodes), hv(kNodes);
    double l1 = 0.0;
    for (std::size_t k = 0; k < kNodes; ++k) {
        hx[k] = params.beta_prime + (static_cast<double>(k) + 0.5) * dx;
        hv[k] = h(hx[k]);
        l1 += hv[k] * dx;
    }

    ChainCertificate cert;
    cert.links = {{"|h^(H)| <= C e^{beta H}", -kInf, true},
                  {"e^{beta H} <= e^{(1-alpha) H} e^{-4H theta(4H)}", -kInf, true},
                  {"e^{(1-alpha) H} <= |phi(H)| phi_0(H)^alpha", -kInf, true}};
    for (std::size_t j = 1; j <= samples; ++j) {
        const double H = M * std::pow(1000.0, static_cast<double>(j) / static_cast<double>(samples));
        cert.H.push_back(H);
        cplx hat{};
        for (std::size_t k = 0; k < kNodes; ++k) hat += hv[k] * std::polar(1.0, -hx[k] * H);
        hat *= dx;
        const double m0 = envelope::safe_log(std::abs(hat)) - (std::log(l1) + params.beta * H);
        const double m1 = 4.0 * H * params.theta(4.0 * H) - params.eta * H;
        const double m2 = (1.0 - params.alpha) * H - group::log_abs_phi_weight(G, H) -
                          params.alpha * group::log_phi_zero(G, H);
        const double margins[3] = {m0, m1, m2};
        for (int i = 0; i < 3; ++i) cert.links[i].worst_log_margin = std::max(cert.links[i].worst_log_margin, margins[i]);
    }
    cert.holds = true;
    for (auto& link : cert.links) {
        link.holds = link.worst_log_margin <= 1e-12;
        cert.holds = cert.holds && link.holds;
    }
    return cert;
}

// Pipelines -----------------------------------------------------------------------------

double log_tail_constant(const group::GroupModel& G, double t0, cplx constant, const SampledFunction& f) {
    const auto g = schrodinger::group_g(G, t0, f);
    double l1 = 0.0;
    for (std::size_t k = 0; k < g.size(); ++k) l1 += std::abs(g[k]);
    l1 *= g.grid().step();
    const double order = static_cast<double>(G.weyl_order());
    return envelope::safe_log(std::abs(constant) * order * order * std::pow(t0, -0.5 * static_cast<double>(G.rank())) *
                              l1);
}

PipelineResult run_counterexample(const CounterexampleParams& params, const group::GroupModel& G, const Grid& grid,
                                  EnvelopeMode mode) {
    auto f = build_initial_data(params, G, grid);
    schrodinger::SchrodingerParams sp;
    sp.t0 = params.t0;
    const cplx C = schrodinger::reference_group_constant(G, params.t0);
    auto u = schrodinger::evolve_group_closed_form(G, sp, f, C);
    const double gerr = g_identity_error(params, G, f);
    const double ltc = log_tail_constant(G, params.t0, C, f);
    auto report = verify_envelope(params, G, u, mode, ltc);
    return PipelineResult{std::move(f), std::move(u), C, gerr, ltc, std::move(report)};
}

DichotomyReport theorem_dichotomy_experiment(const group::GroupModel& G, const profiles::DecayProfile& theta,
                                             const SampledFunction& f, double t0) {
    schrodinger::SchrodingerParams sp;
    sp.t0 = t0;
    const cplx C = schrodinger::reference_group_constant(G, t0);
    const auto u = schrodinger::evolve_group_closed_form(G, sp, f, C);
    const double R = f.grid().node(f.size() - 1);
    const std::vector<double> radii{R / 4.0, R / 2.0, R};
    const EnvelopeTarget target{EnvelopeMode::FullStrength, 1.0, 0.0, theta};
    DichotomyReport d;
    d.report = verify_envelope(resolved_samples(u), G, target, radii);
    d.nonzero_data = f.max_abs() > 0.0;
    d.growth = d.report.growth;
    d.monotone = d.report.monotone;
    return d;
}

SampledFunction ingham_seeded_initial_data(const ingham::SincProductSpec& spec, const group::GroupModel& G,
                                           const Grid& grid, double t0) {
    if (!grid.offset() || std::abs(grid.x_min() + grid.x_max()) > 1e-12 * grid.x_max()) {
        throw Error(ErrorKind::InvalidArgument, "seeded data needs a symmetric half-step grid");
    }
    if (!(t0 > 0.0)) throw Error(ErrorKind::InvalidTime, "t0 must be positive");
    const Grid plain(grid.x_min(), grid.x_max(), grid.size(), false);
    const auto b = ingham::realize_function(spec, plain);
    const double h = grid.step();
    const auto m = static_cast<long>(std::ceil((spec.support_radius() + 0.5) / h - 0.5));
    const double s = (static_cast<double>(m) + 0.5) * h;
    if (s + spec.support_radius() >= grid.x_max()) {
        throw Error(ErrorKind::GridTooSmall, "grid too small for the shifted bump");
    }
    const long n = static_cast<long>(grid.size());
    auto at = [&](long j) { return j >= 0 && j < n ? b[static_cast<std::size_t>(j)].real() : 0.0; };
    const double b2 = G.b_norm_scale() * G.b_norm_scale();
    std::vector<cplx> v(grid.size());
    for (long k = 0; k < n; ++k) {
        // H_k - s and -H_k - s are nodes k - m and n - k - m - 1 of the plain grid
        const double g = at(k - m) - at(n - k - m - 1);
        const double H = grid.node(static_cast<std::size_t>(k));
        v[static_cast<std::size_t>(k)] =
            g == 0.0 ? cplx{} : std::polar(1.0, -b2 * H * H / (4.0 * t0)) * (g / group::phi_weight(G, H));
    }
    return SampledFunction(grid, std::move(v), "ingham_seeded");
}

}  // namespace uplab::counterexample
