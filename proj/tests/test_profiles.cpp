#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "uplab/profiles.hpp"

using namespace uplab;
using namespace uplab::profiles;

TEST_CASE("built-in values") {
    CHECK(psi_linear(0.25)(8.0) == 2.0);
    CHECK(psi_power(0.5)(16.0) == doctest::Approx(4.0));
    CHECK(psi_zero()(1e9) == 0.0);
    CHECK(theta_log()(0.0) == doctest::Approx(1.0));
    CHECK(theta_log2()(1.0) == doctest::Approx(1.0 / std::pow(std::log(std::exp(1.0) + 1.0), 2)));
    CHECK(theta_step(2.0)(2.0) == 1.0);
    CHECK(theta_step(2.0)(2.5) == 0.0);
    for (const auto& name : builtin_profile_names()) {
        const auto p = profile_by_name(name, default_parameter(name));
        CHECK(p.name == name);
        CHECK_NOTHROW(validate(p));
    }
    CHECK_THROWS_AS(profile_by_name("psi_cubic"), Error);
    CHECK_THROWS_AS(psi_power(1.5), Error);
    CHECK_THROWS_AS(psi_linear(0.0), Error);
}

TEST_CASE("partial integral of r/(1+r^2) is log(1+R^2)/2") {
    const auto p = psi_linear(1.0);
    for (double R : {10.0, 100.0, 1e4}) {
        CHECK(ingham_integral_partial(p, R) == doctest::Approx(0.5 * std::log1p(R * R)).epsilon(1e-8));
    }
    CHECK(ingham_integral_partial(psi_zero(), 1e6) == 0.0);
}

TEST_CASE("partial integral of theta(r)/r for theta = 1/log^2") {
    // d/dr [-1/log(e + r)] = 1/((e + r) log^2(e + r)); the integrand differs by the factor (e + r)/r.
    const auto p = theta_log2();
    const double R = 1e3;
    const double e = std::exp(1.0);
    const double bound = 1.0 / std::log(e + 1.0) - 1.0 / std::log(e + R);
    const double value = ingham_integral_partial(p, R);
    CHECK(value > bound);
    CHECK(value < bound * (e + 1.0));
}

TEST_CASE("partial integrals grow and scale linearly") {
    const auto p = psi_log();
    double prev = 0.0;
    for (double R : default_schedule()) {
        const double v = ingham_integral_partial(p, R);
        CHECK(v > prev);
        prev = v;
    }
    DecayProfile tripled{ProfileKind::PsiNondecreasing, [](double r) { return 3.0 * r / std::log(std::exp(1.0) + r); },
                         "tripled", 0.0};
    CHECK(ingham_integral_partial(tripled, 1e5) == doctest::Approx(3.0 * ingham_integral_partial(p, 1e5)).epsilon(1e-8));
    CHECK(ingham_integral_between(p, 2.0, 50.0) ==
          doctest::Approx(ingham_integral_partial(p, 50.0) - ingham_integral_partial(p, 2.0)).epsilon(1e-8));
}

TEST_CASE("theta = 1/log grows like log log R") {
    // At R = exp(2^j) the increments approach log 2.
    const auto p = theta_log();
    double prev = ingham_integral_partial(p, std::exp(64.0));
    const double next = ingham_integral_partial(p, std::exp(128.0));
    CHECK(next - prev == doctest::Approx(std::log(2.0)).epsilon(0.05));
}

TEST_CASE("classification") {
    CHECK(classify_integral(psi_linear(0.25)).verdict == IntegralVerdict::LikelyDivergent);
    CHECK(classify_integral(psi_log()).verdict == IntegralVerdict::LikelyDivergent);
    CHECK(classify_integral(theta_log()).verdict == IntegralVerdict::LikelyDivergent);
    CHECK(classify_integral(theta_log2()).verdict == IntegralVerdict::LikelyConvergent);
    CHECK(classify_integral(psi_power(0.5)).verdict == IntegralVerdict::LikelyConvergent);
    CHECK(classify_integral(theta_step(2.0)).verdict == IntegralVerdict::LikelyConvergent);

    const auto zero = classify_integral(psi_zero());
    CHECK(zero.verdict == IntegralVerdict::LikelyConvergent);
    CHECK(zero.partial_integrals.back() == 0.0);
    CHECK(zero.heuristic);

    const auto d = classify_integral(theta_log2());
    CHECK(d.radii.size() == default_schedule().size());
    CHECK(d.tail_exponent > kConvergentExponent);
    CHECK(to_string(d.verdict) == "LIKELY_CONVERGENT");

    CHECK_THROWS_AS(classify_integral(psi_log(), {10.0, 100.0, 1000.0}), Error);
    CHECK_THROWS_AS(classify_integral(psi_log(), {10.0, 100.0, 50.0, 1000.0}), Error);
}

TEST_CASE("validation rejects ill-formed profiles") {
    DecayProfile rising{ProfileKind::ThetaDecreasing, [](double r) { return r; }, "rising", 0.0};
    CHECK_THROWS_AS(validate(rising), Error);
    DecayProfile falling{ProfileKind::PsiNondecreasing, [](double r) { return -r; }, "falling", 0.0};
    CHECK_THROWS_AS(validate(falling), Error);
    DecayProfile stuck{ProfileKind::ThetaDecreasing, [](double) { return 1.0; }, "stuck", 0.0};
    CHECK_THROWS_AS(validate(stuck), Error);
    DecayProfile nan{ProfileKind::PsiNondecreasing, [](double) { return std::nan(""); }, "nan", 0.0};
    CHECK_THROWS_AS(validate(nan), Error);
    DecayProfile boom{ProfileKind::PsiNondecreasing, [](double) -> double { throw std::runtime_error("x"); }, "boom", 0.0};
    try {
        validate(boom);
        FAIL("expected ProfileError");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::ProfileError);
    }
}
