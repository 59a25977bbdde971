#pragma once

#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "uplab/error.hpp"

namespace uplab::profiles {

enum class ProfileKind {
    PsiNondecreasing,  // envelope exp(-psi(r)), Ingham integral int_0^inf psi(r)/(1+r^2) dr
    ThetaDecreasing,   // envelope exp(-r theta(r)), Ingham integral int_1^inf theta(r)/r dr
};

std::string_view to_string(ProfileKind kind) noexcept;

// A decay envelope. eval must be stateless (it is called concurrently) and
// defined pointwise on [0, inf).
struct DecayProfile {
    ProfileKind kind;
    std::function<double(double)> eval;
    std::string name;
    double parameter = 0.0;  // the single shape parameter of the built-ins, if any

    double operator()(double r) const;
};

// Built-in library -------------------------------------------------------------

DecayProfile psi_power(double a);        // r^a, 0 < a <= 1
DecayProfile psi_log();                  // r / log(e + r)
DecayProfile psi_linear(double eta);     // eta * r
DecayProfile psi_zero();                 // 0
DecayProfile theta_log();                // 1 / log(e + r)
DecayProfile theta_log2();               // 1 / log(e + r)^2
DecayProfile theta_step(double cutoff);  // 1 on [0, cutoff], 0 beyond

/// Look up a built-in by name ("psi_power", "psi_log", "psi_linear",
/// "psi_zero", "theta_log", "theta_log2", "theta_step"). The parameter is
/// the exponent, slope or cutoff where the profile has one.
DecayProfile profile_by_name(std::string_view name, double parameter = 0.0);
std::vector<std::string> builtin_profile_names();

/// Default parameter used when a name is given without one.
double default_parameter(std::string_view name);

/// Spot-check monotonicity on a log-spaced net (and decay to zero for theta
/// profiles). Throws ProfileError on violation.
void validate(const DecayProfile& p);

// Ingham integrals -------------------------------------------------------------

/// Partial Ingham integral up to R (> 1): int_0^R psi/(1+r^2) dr for psi
/// profiles, int_1^R theta(r)/r dr for theta profiles. Adaptive Simpson with
/// relative tolerance 1e-8 per unit panel in log r.
double ingham_integral_partial(const DecayProfile& p, double R);

/// Integral of the Ingham integrand over [R0, R1] (R0 >= 1 for theta profiles).
double ingham_integral_between(const DecayProfile& p, double R0, double R1);

enum class IntegralVerdict { LikelyDivergent, LikelyConvergent, Inconclusive };
std::string_view to_string(IntegralVerdict v) noexcept;

struct IntegralDiagnostic {
    std::string profile;
    std::vector<double> radii;
    std::vector<double> partial_integrals;
    // Fitted p in (integrand per unit log r) ~ (log r)^-p over the tail of the
    // schedule; p <= 1 behaves like a divergent integral.
    double tail_exponent = 0.0;
    IntegralVerdict verdict = IntegralVerdict::Inconclusive;
    // Always true: sampled partial integrals can suggest but never prove
    // convergence.
    bool heuristic = true;
};

/// Default schedule R_j = exp(2^j), j = 1..9.
std::vector<double> default_schedule();

/// Heuristic convergence classification from partial integrals on an
/// increasing schedule of at least 4 radii.
IntegralDiagnostic classify_integral(const DecayProfile& p, const std::vector<double>& schedule);
IntegralDiagnostic classify_integral(const DecayProfile& p);

// Verdict thresholds on the fitted tail exponent.
inline constexpr double kDivergentExponent = 1.2;
inline constexpr double kConvergentExponent = 1.5;

}  // namespace uplab::profiles
