#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <array>
#include <cmath>
#include <vector>

#include "uplab/complex_group.hpp"
#include "uplab/counterexample.hpp"

using namespace uplab;
using namespace uplab::group;
using numerics::Grid;
using numerics::SampledFunction;

namespace {

const GroupModel G = GroupModel::sl2c();

// 2 sin(lambda H) / (lambda sinh 2H), written out independently.
double phi_lambda_ref(double lambda, double H) { return 2.0 * std::sin(lambda * H) / (lambda * std::sinh(2.0 * H)); }

std::vector<double> symmetric_lambdas(double max, std::size_t half) {
    std::vector<double> out;
    for (std::size_t j = half; j >= 1; --j) out.push_back(-max * double(j) / double(half));
    out.push_back(0.0);
    for (std::size_t j = 1; j <= half; ++j) out.push_back(max * double(j) / double(half));
    return out;
}

std::vector<SampledFunction> test_functions(const Grid& grid) {
    std::vector<SampledFunction> fs;
    for (int i = 0; i < 10; ++i) {
        const double a = 0.6 + 0.2 * i;
        const double b = 0.5 * i;
        const double x0 = (i % 3 == 0) ? 0.0 : 0.3 * (i % 4);
        fs.push_back(SampledFunction::sample(grid, [=](double H) {
            const double d = H - x0;
            return numerics::cplx(std::exp(-a * d * d) * std::cos(b * d), (i % 2) * std::exp(-a * H * H) * H * H);
        }));
    }
    return fs;
}

}  // namespace

TEST_CASE("root data") {
    CHECK(G.rank() == 1);
    CHECK(G.positive_roots() == std::vector<std::vector<double>>{{2.0}});
    CHECK(G.multiplicities() == std::vector<int>{2});
    CHECK(G.rho() == std::vector<double>{2.0});
    CHECK(G.weyl_order() == 2);
    CHECK(G.b_norm_scale() == 4.0);
    CHECK(G.rho_b_norm_sq() == doctest::Approx(0.25));
    const double H = 0.75;
    CHECK(G.b_norm(std::span<const double>(&H, 1)) == 3.0);
    CHECK_NOTHROW(G.validate());

    const auto P = GroupModel::preset("sl2c×sl2c");
    CHECK(P.rank() == 2);
    CHECK(P.weyl_order() == 4);
    CHECK(P.rho() == std::vector<double>{2.0, 2.0});
    CHECK(P.rho_b_norm_sq() == doctest::Approx(0.5));
    CHECK_NOTHROW(P.validate());
    CHECK(GroupModel::preset("sl2cxsl2c").rank() == 2);
    CHECK_THROWS_AS(GroupModel::preset("sl3c"), Error);
    for (const auto& s : P.weyl()) {
        const std::array<double, 2> v{1.0, -3.0};
        const auto w = P.act(s, v);
        CHECK(std::abs(w[0]) == 1.0);
        CHECK(std::abs(w[1]) == 3.0);
    }
}

TEST_CASE("Weyl weight") {
    CHECK(phi_weight(G, 0.0) == 0.0);
    CHECK(phi_weight(G, 1.0) == doctest::Approx(7.2537208156).epsilon(1e-10));
    CHECK(phi_weight(G, -1.0) == -phi_weight(G, 1.0));
    CHECK(log_abs_phi_weight(G, 300.0) == doctest::Approx(600.0).epsilon(1e-14));
    CHECK(std::isinf(log_abs_phi_weight(G, 0.0)));
    for (double H : {0.1, 1.0, 3.0}) CHECK(std::pow(phi_weight(G, H), 2) == doctest::Approx(4.0 * std::pow(std::sinh(2 * H), 2)));
    const auto P = GroupModel::sl2c_power(2);
    const std::array<double, 2> H{0.3, -1.1};
    CHECK(phi_weight(P, H) == doctest::Approx(phi_weight(G, 0.3) * phi_weight(G, -1.1)).epsilon(1e-13));
}

TEST_CASE("spherical functions") {
    for (double lambda : {0.1, 1.0, 2.5, 7.0, 30.0}) {
        CHECK(std::abs(spherical_function(G, lambda, 0.0) - 1.0) < 1e-14);
        CHECK(std::abs(spherical_function(G, lambda, 1e-9) - 1.0) < 1e-10);
        for (double H : {0.01, 0.4, 1.0, 3.0, 9.0}) {
            const auto v = spherical_function(G, lambda, H);
            CHECK(std::abs(v.imag()) < 1e-14 * std::max(1.0, std::abs(v)));
            CHECK(v.real() == doctest::Approx(phi_lambda_ref(lambda, H)).epsilon(1e-12));
            CHECK(spherical_function(G, -lambda, H) == v);
            CHECK(spherical_function(G, lambda, -H) == v);
        }
    }
    CHECK(std::abs(spherical_function(G, numerics::kPi, 1.0)) < 1e-15);
    // lambda -> 0 limit is phi_0
    for (double H : {0.0, 0.5, 2.0, 20.0}) {
        CHECK(std::abs(spherical_function(G, 1e-7, H).real() - phi_zero(G, H)) < 1e-10);
        CHECK(std::abs(spherical_function(G, 0.0, H).real() - phi_zero(G, H)) < 1e-15);
    }
    const auto P = GroupModel::sl2c_power(2);
    const std::array<double, 2> l{1.5, 0.7}, H{0.4, 2.0};
    CHECK(std::abs(spherical_function(P, l, H) - spherical_function(G, 1.5, 0.4) * spherical_function(G, 0.7, 2.0)) < 1e-14);
}

TEST_CASE("c-function") {
    for (double lambda : {-5.0, -0.3, 1e-6, 0.5, 40.0}) {
        CHECK(std::abs(c_function(G, lambda) - numerics::cplx(0.0, 2.0 / lambda)) < 1e-14 * std::abs(c_function(G, lambda)));
        CHECK(std::abs(c_function(G, lambda) * c_function_inverse(G, lambda) - 1.0) < 1e-14);
    }
    CHECK_THROWS_AS(c_function(G, 0.0), Error);
    CHECK(c_function_inverse(G, 0.0) == numerics::cplx(0.0));
    // 1/|c| grows at most linearly
    double worst = 0.0;
    for (int k = -40; k <= 40; ++k) {
        const double lambda = std::pow(10.0, k / 10.0);
        worst = std::max(worst, std::abs(c_function_inverse(G, lambda)) / (1.0 + lambda));
    }
    CHECK(worst <= 0.5);
    const auto P = GroupModel::sl2c_power(2);
    const std::array<double, 2> l{2.0, 4.0};
    CHECK(std::abs(c_function(P, l) - numerics::cplx(-0.5, 0.0)) < 1e-15);
}

TEST_CASE("phi_0 bounds") {
    for (int k = 0; k <= 2000; ++k) {
        const double H = 0.01 * k;
        const double p0 = phi_zero(G, H);
        CHECK(p0 <= 1.0);
        CHECK(p0 >= std::exp(-2.0 * H));
        CHECK(p0 * std::exp(2.0 * H) <= 1.0 + 4.0 * H);
        if (H > 0.0) CHECK(log_phi_zero(G, H) == doctest::Approx(std::log(p0)).epsilon(1e-12));
    }
    CHECK(phi_zero(G, 0.0) == 1.0);
}

TEST_CASE("two transform paths agree") {
    const auto grid = Grid::symmetric(12.0, 1024, true);
    const auto lambda = symmetric_lambdas(20.0, 40);
    for (const auto& f : test_functions(grid)) {
        const auto direct = spherical_transform_direct(G, f, lambda);
        const auto reduced = spherical_transform_reduced(G, f, lambda);
        const double scale = direct.max_abs();
        for (std::size_t j = 0; j < lambda.size(); ++j) {
            CHECK(std::abs(direct.values()[j] - reduced.values()[j]) < 1e-6 * scale);
        }
        CHECK(direct.weyl_asymmetry() < 1e-8);
        CHECK(reduced.weyl_asymmetry() < 1e-8);
    }
}

TEST_CASE("reduction details") {
    const auto grid = Grid::symmetric(12.0, 1024, true);
    const auto f = test_functions(grid)[4];
    const auto lambda = symmetric_lambdas(10.0, 20);
    const auto d = spherical_transform_reduced_detail(G, f, lambda);
    // g = f phi is odd, so g^ is odd
    for (std::size_t j = 0; j < lambda.size(); ++j) {
        CHECK(std::abs(d.g_hat.values()[j] + d.g_hat.values()[lambda.size() - 1 - j]) < 1e-12 * d.g_hat.max_abs());
    }
    // value at 0 continues the neighbours
    const std::vector<double> near{-1e-4, 0.0, 1e-4};
    const auto F = spherical_transform_reduced(G, f, near);
    CHECK(std::abs(F.values()[1] - F.values()[2]) < 1e-6 * std::abs(F.values()[1]));

    const auto zero = spherical_transform_reduced(G, SampledFunction::zero(grid), lambda);
    CHECK(zero.max_abs() == 0.0);

    const auto flat = SampledFunction::sample(grid, [](double) { return numerics::cplx(1.0); });
    CHECK_THROWS_AS(spherical_transform_direct(G, flat, lambda), Error);
    CHECK_THROWS_AS(spherical_transform_reduced(GroupModel::sl2c_power(2), f, lambda), Error);
}

TEST_CASE("inverse transform round trip") {
    const auto grid = Grid::symmetric(16.0, 4096, true);
    std::vector<SampledFunction> fs;
    fs.push_back(SampledFunction::sample(grid, [](double H) { return numerics::cplx(std::exp(-4.0 * H * H)); }));
    fs.push_back(SampledFunction::sample(grid, [](double H) { return numerics::cplx(std::exp(-H * H) * std::cos(2 * H), 0.0); }));
    const auto params = counterexample::CounterexampleParams::make(0.5, 0.25, 1.0);
    fs.push_back(counterexample::build_initial_data(params, G, grid));
    for (const auto& f : fs) {
        const auto F = spherical_transform_reduced(G, f);
        const auto back = inverse_spherical(G, F, grid);
        double err = 0.0;
        for (std::size_t k = 0; k < grid.size(); ++k) err = std::max(err, std::abs(back[k] - f[k]));
        CHECK(err < 1e-5 * f.max_abs());
    }
    const auto zero = inverse_spherical(G, spherical_transform_reduced(G, SampledFunction::zero(grid)), grid);
    CHECK(zero.max_abs() == 0.0);
}

TEST_CASE("inverse transform refusals") {
    const auto grid = Grid::symmetric(8.0, 512, true);
    const auto lambda = grid.dual_frequencies();
    std::vector<numerics::cplx> odd(lambda.size());
    for (std::size_t j = 0; j < odd.size(); ++j) odd[j] = lambda[j] * std::exp(-lambda[j] * lambda[j]);
    CHECK_THROWS_AS(inverse_spherical(G, SphericalTransform(lambda, odd), grid), Error);

    std::vector<numerics::cplx> even(lambda.size());
    for (std::size_t j = 0; j < even.size(); ++j) even[j] = std::exp(-lambda[j] * lambda[j]);
    const auto with_zero = Grid::symmetric(8.0, 512, false);
    try {
        (void)inverse_spherical(G, SphericalTransform(with_zero.dual_frequencies(), even), with_zero);
        FAIL("expected WallSingularity");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::WallSingularity);
    }
}

TEST_CASE("W-symmetrization") {
    const auto grid = Grid::symmetric(4.0, 64, true);
    const auto f = SampledFunction::sample(grid, [](double H) { return numerics::cplx(H, 1.0); });
    const auto s = weyl_symmetrize(f);
    for (std::size_t k = 0; k < grid.size(); ++k) CHECK(std::abs(s[k] - numerics::cplx(0.0, 1.0)) < 1e-15);
}
