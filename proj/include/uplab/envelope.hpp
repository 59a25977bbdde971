#pragma once

#include <cmath>
#include <limits>
#include <string>
#include <string_view>
#include <vector>

namespace uplab::envelope {

// One sample of log(|F(x)| / E(x)) for an envelope E. Samples marked
// upper_bound carry a certified upper bound on |F| instead of a resolved
// value.
struct RatioSample {
    double x;
    double log_ratio;
    bool upper_bound = false;
};

// Fitted constant C* = sup of |F| / E over [lo, hi].
struct Window {
    double lo;
    double hi;
    double constant;
    double argmax;
    bool from_upper_bound;  // the sup was attained at an upper-bound sample
};

enum class Verdict { Holds, Fails };
std::string_view to_string(Verdict v) noexcept;

/// Nested windows [lo, radii[k]]; radii must be increasing.
std::vector<Window> fit_windows(const std::vector<RatioSample>& samples, double lo,
                                const std::vector<double>& radii);

/// Relative growth (C*_last - C*_first) / C*_first of the window constants;
/// 0 when every constant is 0 and +inf when the first is 0 but a later one is not.
double drift(const std::vector<Window>& windows);

/// C*_last / C*_first (same conventions as drift).
double growth(const std::vector<Window>& windows);

/// HOLDS iff the window constants drift by less than `slack`.
Verdict judge(const std::vector<Window>& windows, double slack);

/// Radii x0 * 2^k, k = 0..count-1.
std::vector<double> dyadic_radii(double x0, std::size_t count);

inline double safe_log(double v) {
    return v > 0.0 ? std::log(v) : -std::numeric_limits<double>::infinity();
}

}  // namespace uplab::envelope
