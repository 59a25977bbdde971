#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "uplab/counterexample.hpp"
#include "uplab/schrodinger.hpp"

using namespace uplab;
using namespace uplab::schrodinger;
using numerics::Grid;

namespace {

SchrodingerParams at(double t0, double c = 0.0) {
    SchrodingerParams p;
    p.t0 = t0;
    p.c = c;
    return p;
}

SampledFunction random_gaussians(const Grid& grid, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> centre(-2.0, 2.0), width(0.5, 1.5), amp(-1.0, 1.0);
    std::vector<std::array<double, 4>> terms(3);
    for (auto& t : terms) t = {centre(rng), width(rng), amp(rng), amp(rng)};
    return SampledFunction::sample(grid, [terms](double x) {
        cplx v = 0.0;
        for (const auto& t : terms) {
            const double d = (x - t[0]) / t[1];
            v += cplx(t[2], t[3]) * std::exp(-0.5 * d * d);
        }
        return v;
    });
}

SampledFunction gaussian(const Grid& grid, double s) {
    return SampledFunction::sample(grid, [s](double x) { return cplx(std::exp(-0.5 * x * x / (s * s))); });
}

std::array<SampledFunction, 3> closed_form_slices(const SampledFunction& f, double t, double delta) {
    return {evolve_euclidean_closed_form(at(t - delta), f), evolve_euclidean_closed_form(at(t), f),
            evolve_euclidean_closed_form(at(t + delta), f)};
}

const group::GroupModel G = group::GroupModel::sl2c();

}  // namespace

TEST_CASE("heat-type kernel gamma") {
    const auto g = kernel_gamma(at(1.0 / (4.0 * numerics::kPi)), 0.0);
    CHECK(std::abs(g - std::polar(1.0, -numerics::kPi / 4.0)) < 1e-15);
    for (double x : {0.0, 1.0, 5.0}) {
        CHECK(std::abs(kernel_gamma(at(2.0), x)) == doctest::Approx(1.0 / std::sqrt(8.0 * numerics::kPi)));
        CHECK(std::abs(kernel_gamma(at(-2.0), x) - std::conj(kernel_gamma(at(2.0), x))) < 1e-15);
    }
    CHECK(std::abs(kernel_gamma(at(1.0, 3.0), 0.0) - std::polar(1.0, -3.0) * kernel_gamma(at(1.0), 0.0)) < 1e-15);
    CHECK_THROWS_AS(kernel_gamma(at(0.0), 1.0), Error);
}

TEST_CASE("Euclidean closed form against the free Gaussian") {
    const auto grid = Grid::symmetric(16.0, 4096);
    for (double s : {0.7, 1.0, 1.5}) {
        const auto f = gaussian(grid, s);
        for (double t : {0.1, 0.5, 1.0}) {
            const auto u = evolve_euclidean_closed_form(at(t), f);
            double err = 0.0;
            for (std::size_t k = 0; k < grid.size(); ++k) err = std::max(err, std::abs(u[k] - oracle::free_gaussian(grid.node(k), t, s)));
            CHECK(err < 1e-10);
        }
    }
}

TEST_CASE("closed form and spectral path agree") {
    const auto grid = Grid::symmetric(16.0, 4096);
    for (std::uint64_t seed : {1u, 2u, 3u}) {
        const auto f = random_gaussians(grid, seed);
        for (double c : {0.0, 0.7}) {
            const auto a = evolve_euclidean_closed_form(at(0.8, c), f);
            const auto b = evolve_spectral(at(0.8, c), f, 0.8);
            CHECK(relative_error(a, b) < 1e-6);
        }
    }
    const auto zero = SampledFunction::zero(grid);
    CHECK(evolve_euclidean_closed_form(at(1.0), zero).max_abs() == 0.0);
    CHECK(evolve_spectral(at(1.0), zero, 1.0).max_abs() == 0.0);
}

TEST_CASE("modulus of the transform is preserved") {
    const auto grid = Grid::symmetric(16.0, 4096);
    const auto f = random_gaussians(grid, 11);
    const auto F = numerics::fourier_transform(f);
    const auto U = numerics::fourier_transform(evolve_spectral(at(1.0), f, 1.0));
    double err = 0.0;
    for (std::size_t j = 0; j < F.size(); ++j) err = std::max(err, std::abs(std::abs(U.values()[j]) - std::abs(F.values()[j])));
    CHECK(err < 1e-10 * F.max_abs());
}

TEST_CASE("group law, identity and L2 conservation") {
    const auto grid = Grid::symmetric(16.0, 2048);
    const auto f = random_gaussians(grid, 5);
    const auto p = at(1.0, 0.3);
    const auto two_steps = evolve_spectral(p, evolve_spectral(p, f, 0.3), 0.3);
    CHECK(relative_error(two_steps, evolve_spectral(p, f, 0.6)) < 1e-9);
    CHECK(relative_error(evolve_spectral(p, f, 0.0), f) < 1e-12);
    const double n0 = numerics::l2_norm(f);
    CHECK(numerics::l2_norm(evolve_spectral(p, f, 0.9)) == doctest::Approx(n0).epsilon(1e-8));
    CHECK(numerics::l2_norm(evolve_euclidean_closed_form(at(0.9), f)) == doctest::Approx(n0).epsilon(1e-8));
}

TEST_CASE("aliasing warning") {
    const auto grid = Grid::symmetric(16.0, 4096);
    CHECK_FALSE(evolve_spectral_checked(at(1.0), gaussian(grid, 1.0), 1.0).aliasing_warning);
    const auto ind = SampledFunction::sample(grid, [](double x) { return cplx(std::abs(x) < 1.0 ? 1.0 : 0.0); });
    const auto r = evolve_spectral_checked(at(1.0), ind, 1.0);
    CHECK(r.aliasing_warning);
    CHECK(r.tail_fraction > kAliasingTail);
}

TEST_CASE("closed form refusals") {
    const auto grid = Grid::symmetric(16.0, 4096);
    const auto f = gaussian(grid, 1.0);
    for (double t : {0.0, -1.0}) {
        try {
            (void)evolve_euclidean_closed_form(at(t), f);
            FAIL("expected InvalidTime");
        } catch (const Error& e) {
            CHECK(e.kind() == ErrorKind::InvalidTime);
        }
    }
    CHECK_THROWS_AS(evolve_euclidean_closed_form(at(1.0), gaussian(grid, 8.0)), Error);
    CHECK_THROWS_AS(evolve_euclidean_closed_form(at(0.01), f), Error);
}

TEST_CASE("PDE residual is second order and catches corruption") {
    const double t = 0.5;
    std::vector<double> residuals;
    for (std::size_t n : {512u, 1024u, 2048u, 4096u}) {
        const auto grid = Grid::symmetric(16.0, n);
        const auto f = gaussian(grid, 1.0);
        const double h = grid.step();
        residuals.push_back(pde_residual(closed_form_slices(f, t, h), at(t), ResidualMode::Euclidean, h).residual);
    }
    for (std::size_t i = 0; i + 1 < residuals.size(); ++i) {
        CHECK(std::log2(residuals[i] / residuals[i + 1]) >= 1.9);
    }

    const auto grid = Grid::symmetric(16.0, 2048);
    const double h = grid.step();
    auto slices = closed_form_slices(gaussian(grid, 1.0), t, h);
    std::vector<cplx> flipped(slices[1].values().begin(), slices[1].values().end());
    for (auto& z : flipped) z = std::conj(z);
    slices[1] = SampledFunction(grid, flipped);
    CHECK(pde_residual(slices, at(t), ResidualMode::Euclidean, h).residual > 0.1);

    const auto zero = SampledFunction::zero(grid);
    CHECK(pde_residual({zero, zero, zero}, at(t), ResidualMode::Euclidean, h).residual == 0.0);
    const auto other = SampledFunction::zero(Grid::symmetric(8.0, 2048));
    try {
        (void)pde_residual({zero, other, zero}, at(t), ResidualMode::Euclidean, h);
        FAIL("expected MismatchedGrids");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::MismatchedGrids);
    }
    CHECK_THROWS_AS(relative_error(zero, other), Error);
}

TEST_CASE("group constant") {
    const auto analytic = analytic_group_constant(G);
    CHECK(std::abs(analytic - std::polar(1.0 / (2.0 * std::sqrt(numerics::kPi)), -numerics::kPi / 4.0)) < 1e-15);
    CHECK(std::abs(reference_group_constant(G, 1.0) - analytic) < 1e-8 * std::abs(analytic));
    CHECK(std::abs(reference_group_constant(G, 0.5) - analytic) < 1e-8 * std::abs(analytic));
}

TEST_CASE("group closed form matches the spectral evolution") {
    const auto grid = Grid::symmetric(16.0, 4096, true);
    const auto C = reference_group_constant(G, 1.0);
    std::vector<SampledFunction> held_out;
    held_out.push_back(SampledFunction::sample(grid, [](double H) { return cplx(std::exp(-2.0 * H * H)); }));
    held_out.push_back(SampledFunction::sample(grid, [](double H) { return cplx(std::exp(-8.0 * H * H) * std::cos(3.0 * H)); }));
    held_out.push_back(SampledFunction::sample(grid, [](double H) { const double e = std::exp(-3.0 * H * H); return cplx((1.0 + H * H) * e, 0.5 * e); }));
    held_out.push_back(SampledFunction::sample(grid, [](double H) { return cplx(std::exp(-H * H), std::exp(-6.0 * H * H)); }));
    held_out.push_back(SampledFunction::sample(grid, [](double H) {
        const double e = std::exp(-5.0 * H * H);
        return cplx(e * (1.0 + 0.5 * std::cos(5.0 * H)), -0.2 * H * H * e);
    }));
    for (const auto& f : held_out) {
        const auto a = evolve_group_closed_form(G, at(1.0), f, C);
        const auto b = evolve_group_spectral(G, at(1.0), f);
        CHECK(relative_error(a, b) < 1e-5);
    }
    CHECK_THROWS_AS(evolve_group_spectral(G, at(1.0), SampledFunction::zero(Grid::symmetric(16.0, 4096, false))), Error);
    CHECK_THROWS_AS(evolve_group_closed_form(G, at(-1.0), held_out[0], C), Error);
}

TEST_CASE("group evolution solves the group equation") {
    const auto grid = Grid::symmetric(16.0, 4096, true);
    const auto f = SampledFunction::sample(grid, [](double H) { return cplx(std::exp(-4.0 * H * H)); });
    const double t = 1.0;
    const double h = grid.step();
    const std::array<SampledFunction, 3> slices{evolve_group_spectral(G, at(t - h), f), evolve_group_spectral(G, at(t), f),
                                                evolve_group_spectral(G, at(t + h), f)};
    const auto r = pde_residual(slices, at(t), ResidualMode::Group, h, &G);
    CHECK(r.residual < 1e-4);
    // the Euclidean operator does not fit the group solution
    CHECK(pde_residual(slices, at(t), ResidualMode::Euclidean, h).residual > 100.0 * r.residual);
    CHECK_THROWS_AS(pde_residual(slices, at(t), ResidualMode::Group, h, nullptr), Error);
}

TEST_CASE("spectral path wraps around when u phi has not decayed on the grid") {
    // Compactly supported g_f has a slowly decaying transform, so u phi is still
    // ~1e-3 at H = 16; the periodic spectral path then disagrees with the closed form.
    const auto params = counterexample::CounterexampleParams::make(0.5, 0.25, 1.0);
    const auto C = reference_group_constant(G, 1.0);
    auto mismatch = [&](double radius, std::size_t n) {
        const auto grid = Grid::symmetric(radius, n, true);
        const auto f = counterexample::build_initial_data(params, G, grid);
        return relative_error(evolve_group_closed_form(G, at(1.0), f, C), evolve_group_spectral(G, at(1.0), f));
    };
    const double narrow = mismatch(16.0, 4096);
    const double wide = mismatch(32.0, 8192);
    CHECK(narrow > 0.05);
    CHECK(wide < 1e-3);
}
