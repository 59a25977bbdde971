#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "uplab/counterexample.hpp"
#include "uplab/schrodinger.hpp"

using namespace uplab;
using namespace uplab::counterexample;
using envelope::Verdict;

namespace {

const group::GroupModel G = group::GroupModel::sl2c();
const Grid kGrid = Grid::symmetric(16.0, 4096, true);

ErrorKind kind_of(const std::function<void()>& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.kind();
    }
    FAIL("no error raised");
    return ErrorKind::InvalidArgument;
}

}  // namespace

TEST_CASE("parameters") {
    const auto p = CounterexampleParams::make(0.5, 0.25, 1.0);
    CHECK(p.beta == 0.25);
    CHECK(p.beta_prime == 0.125);
    CHECK(CounterexampleParams::make(0.2, 0.3, 2.0, 0.1).beta == doctest::Approx(0.5));
    CHECK(kind_of([] { CounterexampleParams::make(1.0, 0.25, 1.0); }) == ErrorKind::InvalidArgument);
    CHECK(kind_of([] { CounterexampleParams::make(0.5, 0.5, 1.0); }) == ErrorKind::InvalidArgument);
    CHECK(kind_of([] { CounterexampleParams::make(0.5, 0.25, 1.0, 0.25); }) == ErrorKind::InvalidArgument);
    CHECK(kind_of([] { CounterexampleParams::make(0.5, 0.25, 0.0); }) == ErrorKind::InvalidArgument);
    CHECK(kind_of([] { CounterexampleParams::make(0.5, 0.25, 1.0, std::nullopt, profiles::psi_log()); }) ==
          ErrorKind::InvalidArgument);
}

TEST_CASE("smooth bump") {
    const SmoothBump b(0.125, 0.25);
    CHECK(b(0.125) == 0.0);
    CHECK(b(0.25) == 0.0);
    CHECK(b(0.1) == 0.0);
    CHECK(b(0.2) > 0.0);
    // unit mass by midpoint sums on a fine grid (spectrally accurate for a flat-edged bump)
    double mass = 0.0;
    const int n = 1 << 14;
    for (int k = 0; k < n; ++k) mass += b(0.125 + (k + 0.5) * 0.125 / n);
    CHECK(mass * 0.125 / n == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(kind_of([] { SmoothBump(1.0, 1.0); }) == ErrorKind::InvalidSupport);
    CHECK(kind_of([] { build_bump(0.3, 0.25, kGrid); }) == ErrorKind::InvalidSupport);
    const auto sampled = build_bump(0.125, 0.25, Grid(0.0, 1.0, 4096, true));
    CHECK(numerics::integrate(sampled).real() == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("initial data") {
    const auto p = CounterexampleParams::make(0.5, 0.25, 1.0);
    const auto f = build_initial_data(p, G, kGrid);
    CHECK(g_identity_error(p, G, f) < 1e-12);
    CHECK(numerics::l2_norm(f) > 0.0);
    for (std::size_t k = 0; k < f.size(); ++k) {
        const double a = std::abs(kGrid.node(k));
        if (f[k] != numerics::cplx{}) {
            CHECK(a >= 2.0 * p.t0 * p.beta_prime);
            CHECK(a <= 2.0 * p.t0 * p.beta);
        }
        CHECK(f[k] == f[*kGrid.mirror_index(k)]);  // W-invariant
    }
    CHECK(kind_of([&] { build_initial_data(p, G, Grid::symmetric(16.0, 4096, false)); }) == ErrorKind::WallSingularity);
    const auto thin = CounterexampleParams::make(0.5, 0.25, 1.0, 1e-4);
    CHECK(kind_of([&] { build_initial_data(thin, G, kGrid); }) == ErrorKind::SupportTouchesZero);
    const auto late = CounterexampleParams::make(0.5, 0.25, 100.0);
    CHECK(kind_of([&] { build_initial_data(late, G, kGrid); }) == ErrorKind::InvalidSupport);
}

TEST_CASE("thresholds") {
    const double h = 1.0 / 128.0;
    const auto theta = profiles::theta_log();
    const double m1 = threshold_m1(theta, 0.25, h);
    CHECK(theta(4.0 * m1) < 0.0625);
    CHECK(theta(4.0 * (m1 - h)) >= 0.0625);
    // 1/log(e + 4M) < 1/16 iff 4M > e^16 - e
    CHECK(m1 == doctest::Approx((std::exp(16.0) - std::exp(1.0)) / 4.0).epsilon(1e-8));
    CHECK(threshold_m2(h) == 1.0 + h);
    CHECK(std::exp(threshold_m2(h)) <= std::sinh(2.0 * threshold_m2(h)));
    CHECK(threshold_m2(0.5) == 1.5);
    // e^H <= sinh 2H first holds near H = 0.53; the threshold stays beyond 1
    CHECK(threshold_m1(profiles::theta_step(2.0), 0.25, h) == 1.0 + h);
}

TEST_CASE("envelope target") {
    const auto p = CounterexampleParams::make(0.5, 0.25, 1.0);
    const auto t42 = EnvelopeTarget::from(p, EnvelopeMode::Remark42);
    const double H = 3.0;
    CHECK(t42.log_envelope(G, H) ==
          doctest::Approx(0.5 * std::log(6.0 / std::sinh(6.0)) - 12.0 / std::log(std::exp(1.0) + 12.0)));
    CHECK(EnvelopeTarget::from(p, EnvelopeMode::Remark451).log_envelope(G, H) ==
          doctest::Approx(0.5 * std::log(6.0 / std::sinh(6.0)) - 0.75));
    CHECK(EnvelopeTarget::from(p, EnvelopeMode::FullStrength).alpha == 1.0);
    CHECK(to_string(EnvelopeMode::Remark451) == "remark451");
}

TEST_CASE("theta-decay envelope holds at alpha = 0.5, fails at alpha = 1") {
    const auto p = CounterexampleParams::make(0.5, 0.25, 1.0);
    const auto r = run_counterexample(p, G, kGrid, EnvelopeMode::Remark42);
    CHECK(r.report.verdict == Verdict::Holds);
    CHECK(r.report.tail_bound_used);
    CHECK(r.report.threshold >= r.report.m1);
    CHECK(r.g_identity_error < 1e-12);

    const auto s = resolved_samples(r.u);
    const double R = s.H.back();
    const auto control =
        verify_envelope(s, G, EnvelopeTarget::from(p, EnvelopeMode::FullStrength), {R / 4.0, R / 2.0, R});
    CHECK(control.verdict == Verdict::Fails);
    CHECK(control.growth > 10.0);
    CHECK(control.monotone);

    CHECK(kind_of([&] { verify_envelope(p, G, r.u, EnvelopeMode::Remark42); }) == ErrorKind::WindowTooSmall);
    CHECK(kind_of([&] { verify_envelope(s, G, EnvelopeTarget::from(p, EnvelopeMode::Remark42), {2.0 * R}); }) ==
          ErrorKind::WindowTooSmall);
}

TEST_CASE("linear-decay envelope holds") {
    const auto p = CounterexampleParams::make(0.5, 0.25, 1.0);
    const auto r = run_counterexample(p, G, kGrid, EnvelopeMode::Remark451);
    CHECK(r.report.verdict == Verdict::Holds);
    CHECK(r.report.m1 == 0.0);
    CHECK(r.report.threshold == threshold_m2(kGrid.step()));
}

TEST_CASE("zero solution satisfies every envelope") {
    const auto p = CounterexampleParams::make(0.5, 0.25, 1.0);
    const auto zero = numerics::SampledFunction::zero(kGrid);
    const auto r = verify_envelope(resolved_samples(zero), G, EnvelopeTarget::from(p, EnvelopeMode::FullStrength), {4.0, 8.0, 16.0});
    CHECK(r.verdict == Verdict::Holds);
    CHECK(r.drift == 0.0);
    for (const auto& w : r.windows) CHECK(w.constant == 0.0);
}

TEST_CASE("tail bound samples") {
    ModulusSamples s;
    s.H = {1.0};
    s.log_modulus = {0.0};
    s.upper_bound = {false};
    append_tail_bound(s, G, 2.0, 100.0, 10);
    CHECK(s.H.size() == 11);
    CHECK(s.H.back() == doctest::Approx(100.0));
    CHECK(s.upper_bound.back());
    CHECK(s.log_modulus.back() == doctest::Approx(2.0 - 200.0));
}

TEST_CASE("chain certificate") {
    const auto p = CounterexampleParams::make(0.5, 0.25, 1.0);
    const auto c = certify_envelope_chain(p, G, kGrid.step());
    CHECK(c.holds);
    CHECK(c.links.size() == 3);
    for (const auto& l : c.links) CHECK(l.worst_log_margin <= 0.0);
    CHECK(c.H.front() > threshold_m1(p.theta, p.eta, kGrid.step()));
}

TEST_CASE("dichotomy") {
    const auto theta = profiles::theta_log2();
    const auto p = CounterexampleParams::make(0.5, 0.25, 1.0);
    const auto divergent = theorem_dichotomy_experiment(G, p.theta, build_initial_data(p, G, kGrid), 1.0);
    CHECK(divergent.nonzero_data);
    CHECK(divergent.report.verdict == Verdict::Fails);
    CHECK(divergent.growth > 10.0);
    CHECK(divergent.monotone);

    const auto zero = theorem_dichotomy_experiment(G, theta, numerics::SampledFunction::zero(kGrid), 1.0);
    CHECK_FALSE(zero.nonzero_data);
    CHECK(zero.report.verdict == Verdict::Holds);

    const auto spec = ingham::spec_from_theta(theta);
    const auto seeded = ingham_seeded_initial_data(spec, G, kGrid, 1.0);
    CHECK(seeded.max_abs() > 0.0);
    const auto convergent = theorem_dichotomy_experiment(G, theta, seeded, 1.0);
    CHECK(convergent.report.verdict == Verdict::Holds);
    CHECK(kind_of([&] { ingham_seeded_initial_data(spec, G, Grid::symmetric(16.0, 4096, false), 1.0); }) ==
          ErrorKind::InvalidArgument);
}

TEST_CASE("Euclidean witness: a Gaussian misses a linear exponential envelope") {
    const auto grid = Grid::symmetric(16.0, 4096);
    const auto u = numerics::SampledFunction::sample(grid, [](double x) { return numerics::cplx(std::exp(-0.5 * x * x)); });
    CHECK(verify_euclidean_envelope(u, profiles::psi_linear(1.0), {4.0, 8.0, 15.9}).verdict == Verdict::Holds);
    const auto wide = numerics::SampledFunction::sample(grid, [](double x) { return numerics::cplx(std::exp(-std::abs(x) / 4.0)); });
    CHECK(verify_euclidean_envelope(wide, profiles::psi_linear(1.0), {4.0, 8.0, 15.9}).verdict == Verdict::Fails);
}
