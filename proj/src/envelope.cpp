#include "uplab/envelope.hpp"

#include <algorithm>

#include "uplab/error.hpp"

namespace uplab::envelope {

std::string_view to_string(Verdict v) noexcept { return v == Verdict::Holds ? "HOLDS" : "FAILS"; }

std::vector<Window> fit_windows(const std::vector<RatioSample>& samples, double lo,
                                const std::vector<double>& radii) {
    for (std::size_t k = 1; k < radii.size(); ++k) {
        if (!(radii[k] > radii[k - 1])) throw Error(ErrorKind::InvalidArgument, "window radii must increase");
    }
    std::vector<Window> out;
    for (double hi : radii) {
        Window w{lo, hi, 0.0, lo, false};
        double best = -std::numeric_limits<double>::infinity();
        for (const auto& s : samples) {
            if (s.x < lo || s.x > hi) continue;
            if (s.log_ratio > best) {
                best = s.log_ratio;
                w.argmax = s.x;
                w.from_upper_bound = s.upper_bound;
            }
        }
        w.constant = std::exp(best);
        out.push_back(w);
    }
    return out;
}

double growth(const std::vector<Window>& windows) {
    if (windows.empty()) return 1.0;
    const double first = windows.front().constant;
    const double last = windows.back().constant;
    if (first == 0.0) return last == 0.0 ? 1.0 : std::numeric_limits<double>::infinity();
    return last / first;
}

double drift(const std::vector<Window>& windows) {
    if (windows.empty()) return 0.0;
    double lo = windows.front().constant;
    double hi = lo;
    for (const auto& w : windows) {
        lo = std::min(lo, w.constant);
        hi = std::max(hi, w.constant);
    }
    if (lo == 0.0) return hi == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
    return (hi - lo) / lo;
}

Verdict judge(const std::vector<Window>& windows, double slack) {
    return drift(windows) < slack ? Verdict::Holds : Verdict::Fails;
}

std::vector<double> dyadic_radii(double x0, std::size_t count) {
    std::vector<double> r;
    for (std::size_t k = 0; k < count; ++k) r.push_back(std::ldexp(x0, static_cast<int>(k)));
    return r;
}

}  // namespace uplab::envelope
