#include "uplab/profiles.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "uplab/numerics.hpp"

namespace uplab::profiles {

namespace {

constexpr double kE = std::numbers::e;
constexpr double kPanelTolerance = 1e-8;

[[noreturn]] void profile_failure(const std::string& name, double r, const std::string& what) {
    std::ostringstream msg;
    msg << "profile '" << name << "' at r = " << r << ": " << what;
    throw Error(ErrorKind::ProfileError, msg.str());
}

}  // namespace

std::string_view to_string(ProfileKind kind) noexcept {
    return kind == ProfileKind::PsiNondecreasing ? "psi" : "theta";
}

std::string_view to_string(IntegralVerdict v) noexcept {
    switch (v) {
        case IntegralVerdict::LikelyDivergent: return "LIKELY_DIVERGENT";
        case IntegralVerdict::LikelyConvergent: return "LIKELY_CONVERGENT";
        case IntegralVerdict::Inconclusive: return "INCONCLUSIVE";
    }
    return "INCONCLUSIVE";
}

double DecayProfile::operator()(double r) const {
    double v = 0.0;
    try {
        v = eval(r);
    } catch (const Error&) {
        throw;
    } catch (const std::exception& e) {
        profile_failure(name, r, e.what());
    }
    if (!std::isfinite(v) || v < 0.0) profile_failure(name, r, "value is negative or not finite");
    return v;
}

DecayProfile psi_power(double a) {
    if (!(a > 0.0 && a <= 1.0)) throw Error(ErrorKind::InvalidArgument, "psi_power needs 0 < a <= 1");
    return {ProfileKind::PsiNondecreasing, [a](double r) { return std::pow(r, a); }, "psi_power", a};
}

DecayProfile psi_log() {
    return {ProfileKind::PsiNondecreasing, [](double r) { return r / std::log(kE + r); }, "psi_log", 0.0};
}

DecayProfile psi_linear(double eta) {
    if (!(eta > 0.0)) throw Error(ErrorKind::InvalidArgument, "psi_linear needs eta > 0");
    return {ProfileKind::PsiNondecreasing, [eta](double r) { return eta * r; }, "psi_linear", eta};
}

DecayProfile psi_zero() {
    return {ProfileKind::PsiNondecreasing, [](double) { return 0.0; }, "psi_zero", 0.0};
}

DecayProfile theta_log() {
    return {ProfileKind::ThetaDecreasing, [](double r) { return 1.0 / std::log(kE + r); }, "theta_log", 0.0};
}

DecayProfile theta_log2() {
    return {ProfileKind::ThetaDecreasing,
            [](double r) {
                const double l = std::log(kE + r);
                return 1.0 / (l * l);
            },
            "theta_log2", 0.0};
}

DecayProfile theta_step(double cutoff) {
    if (!(cutoff > 0.0)) throw Error(ErrorKind::InvalidArgument, "theta_step needs cutoff > 0");
    return {ProfileKind::ThetaDecreasing, [cutoff](double r) { return r <= cutoff ? 1.0 : 0.0; },
            "theta_step", cutoff};
}

std::vector<std::string> builtin_profile_names() {
    return {"psi_power", "psi_log", "psi_linear", "psi_zero", "theta_log", "theta_log2", "theta_step"};
}

double default_parameter(std::string_view name) {
    if (name == "psi_power") return 0.5;
    if (name == "psi_linear") return 1.0;
    if (name == "theta_step") return 2.0;
    return 0.0;
}

DecayProfile profile_by_name(std::string_view name, double parameter) {
    if (name == "psi_power") return psi_power(parameter);
    if (name == "psi_log") return psi_log();
    if (name == "psi_linear") return psi_linear(parameter);
    if (name == "psi_zero") return psi_zero();
    if (name == "theta_log") return theta_log();
    if (name == "theta_log2") return theta_log2();
    if (name == "theta_step") return theta_step(parameter);
    throw Error(ErrorKind::InvalidArgument, "unknown profile '" + std::string(name) + "'");
}

void validate(const DecayProfile& p) {
    // 0 plus a log-spaced net 1e-3 .. 1e12
    std::vector<double> net{0.0};
    for (int k = -12; k <= 48; ++k) net.push_back(std::pow(10.0, k / 4.0));
    double prev = p(net.front());
    for (std::size_t i = 1; i < net.size(); ++i) {
        const double v = p(net[i]);
        const bool ok = p.kind == ProfileKind::PsiNondecreasing ? v >= prev : v <= prev;
        if (!ok) profile_failure(p.name, net[i], "monotonicity violated");
        prev = v;
    }
    if (p.kind == ProfileKind::ThetaDecreasing) {
        const double head = p(1.0);
        if (head > 0.0 && !(p(net.back()) < head / 10.0)) {
            profile_failure(p.name, net.back(), "theta does not decay towards zero");
        }
    }
}

// Ingham integrals ---------------------------------------------------------------

namespace {

// Integrand per unit u = log r, valid for r >= 1.
double log_density(const DecayProfile& p, double u) {
    const double r = std::exp(u);
    if (p.kind == ProfileKind::ThetaDecreasing) return p(r);
    // psi(r) * r / (1 + r^2) without forming r^2
    return p(r) / (r + 1.0 / r);
}

// int over u in [u0, u1] in unit panels
double integrate_log_range(const DecayProfile& p, double u0, double u1) {
    double total = 0.0;
    double lo = u0;
    while (lo < u1) {
        const double hi = std::min(u1, std::floor(lo) + 1.0);
        total += numerics::adaptive_simpson([&](double u) { return log_density(p, u); }, lo, hi,
                                            kPanelTolerance, 40);
        lo = hi;
    }
    return total;
}

double psi_head(const DecayProfile& p, double r1) {
    return numerics::adaptive_simpson([&](double r) { return p(r) / (1.0 + r * r); }, 0.0, r1,
                                      kPanelTolerance, 40);
}

}  // namespace

double ingham_integral_between(const DecayProfile& p, double R0, double R1) {
    if (!(R1 >= R0)) throw Error(ErrorKind::InvalidArgument, "integration range must be increasing");
    double total = 0.0;
    if (R0 < 1.0) {
        if (p.kind == ProfileKind::ThetaDecreasing) {
            throw Error(ErrorKind::InvalidArgument, "theta integrals start at r = 1");
        }
        total += psi_head(p, std::min(R1, 1.0)) - psi_head(p, R0);
        R0 = 1.0;
    }
    if (R1 > R0) total += integrate_log_range(p, std::log(R0), std::log(R1));
    return total;
}

double ingham_integral_partial(const DecayProfile& p, double R) {
    if (!(R > 1.0) || !std::isfinite(R)) throw Error(ErrorKind::InvalidArgument, "partial integral needs R > 1");
    return ingham_integral_between(p, p.kind == ProfileKind::PsiNondecreasing ? 0.0 : 1.0, R);
}

std::vector<double> default_schedule() {
    std::vector<double> s;
    for (int j = 1; j <= 9; ++j) s.push_back(std::exp(std::ldexp(1.0, j)));
    return s;
}

IntegralDiagnostic classify_integral(const DecayProfile& p) { return classify_integral(p, default_schedule()); }

IntegralDiagnostic classify_integral(const DecayProfile& p, const std::vector<double>& schedule) {
    if (schedule.size() < 4) throw Error(ErrorKind::InvalidArgument, "schedule needs at least 4 radii");
    for (std::size_t j = 0; j < schedule.size(); ++j) {
        if (!(schedule[j] > 1.0) || !std::isfinite(schedule[j]) || (j > 0 && !(schedule[j] > schedule[j - 1]))) {
            throw Error(ErrorKind::InvalidArgument, "schedule must be finite, > 1 and increasing");
        }
    }

    IntegralDiagnostic d;
    d.profile = p.name;
    d.radii = schedule;
    // accumulate increments so the partial integrals are monotone by construction
    double running = ingham_integral_partial(p, schedule.front());
    d.partial_integrals.push_back(running);
    std::vector<double> density;  // increment per unit log r
    std::vector<double> mid;      // log of the panel's mean log-radius
    for (std::size_t j = 1; j < schedule.size(); ++j) {
        const double inc = ingham_integral_between(p, schedule[j - 1], schedule[j]);
        running += inc;
        d.partial_integrals.push_back(running);
        const double u0 = std::log(schedule[j - 1]);
        const double u1 = std::log(schedule[j]);
        density.push_back(inc / (u1 - u0));
        mid.push_back(std::log(0.5 * (u0 + u1)));
    }

    if (!(running > 0.0)) {
        d.tail_exponent = std::numeric_limits<double>::infinity();
        d.verdict = IntegralVerdict::LikelyConvergent;
        return d;
    }

    const std::size_t n_tail = std::max<std::size_t>(3, density.size() / 2);
    const std::size_t first = density.size() - std::min(n_tail, density.size());
    bool vanished = false;
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    std::size_t n = 0;
    for (std::size_t j = first; j < density.size(); ++j) {
        if (!(density[j] > 0.0)) {
            vanished = true;
            break;
        }
        const double x = mid[j];
        const double y = std::log(density[j]);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        ++n;
    }
    if (vanished) {
        d.tail_exponent = std::numeric_limits<double>::infinity();
        d.verdict = IntegralVerdict::LikelyConvergent;
        return d;
    }
    const double dn = static_cast<double>(n);
    const double slope = (dn * sxy - sx * sy) / (dn * sxx - sx * sx);
    d.tail_exponent = -slope;
    if (d.tail_exponent <= kDivergentExponent) {
        d.verdict = IntegralVerdict::LikelyDivergent;
    } else if (d.tail_exponent >= kConvergentExponent) {
        d.verdict = IntegralVerdict::LikelyConvergent;
    } else {
        d.verdict = IntegralVerdict::Inconclusive;
    }
    return d;
}

}  // namespace uplab::profiles
