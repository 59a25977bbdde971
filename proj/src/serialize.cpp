#include "uplab/serialize.hpp"

#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace uplab::io {

namespace {

std::string num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

template <typename Coords, typename Values>
void csv(std::ostream& os, const char* coordinate, const Coords& x, const Values& v) {
    os << coordinate << ",re,im\n";
    for (std::size_t k = 0; k < v.size(); ++k) {
        os << num(x[k]) << ',' << num(v[k].real()) << ',' << num(v[k].imag()) << '\n';
    }
}

Json finite_or_null(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

}  // namespace

void write_csv(std::ostream& os, const numerics::SampledFunction& f) {
    csv(os, "x", f.grid().nodes(), f.values());
}

void write_csv(std::ostream& os, const numerics::SpectralFunction& F) { csv(os, "xi", F.xi(), F.values()); }

void write_csv(std::ostream& os, const group::SphericalTransform& F) { csv(os, "lambda", F.lambda(), F.values()); }

Json to_json(const numerics::Grid& g) {
    return Json{{"x_min", g.x_min()}, {"x_max", g.x_max()}, {"n_points", g.size()}, {"offset", g.offset()}};
}

Json to_json(const numerics::SampledFunction& f) {
    Json re = Json::array();
    Json im = Json::array();
    for (const auto& z : f.values()) {
        re.push_back(z.real());
        im.push_back(z.imag());
    }
    return Json{{"label", f.label()}, {"grid", to_json(f.grid())}, {"re", re}, {"im", im}};
}

Json to_json(const numerics::SpectralFunction& F) {
    Json re = Json::array();
    Json im = Json::array();
    for (const auto& z : F.values()) {
        re.push_back(z.real());
        im.push_back(z.imag());
    }
    return Json{{"xi", std::vector<double>(F.xi().begin(), F.xi().end())}, {"re", re}, {"im", im}};
}

Json to_json(const ingham::SincProductSpec& spec) {
    return Json{{"a", spec.widths()},
                {"K", spec.size()},
                {"support_radius", spec.support_radius()},
                {"trivial", spec.trivial()}};
}

Json to_json(const envelope::Window& w) {
    return Json{{"lo", w.lo},
                {"hi", w.hi},
                {"constant", finite_or_null(w.constant)},
                {"argmax", w.argmax},
                {"from_upper_bound", w.from_upper_bound}};
}

Json to_json(const ingham::EnvelopeCertificate& cert) {
    Json windows = Json::array();
    for (const auto& w : cert.windows) windows.push_back(to_json(w));
    return Json{{"windows", windows},
                {"slack_factor", cert.slack_factor},
                {"drift", finite_or_null(cert.drift)},
                {"stable", cert.stable}};
}

Json to_json(const profiles::IntegralDiagnostic& d) {
    return Json{{"profile", d.profile},
                {"radii", d.radii},
                {"partial_integrals", d.partial_integrals},
                {"tail_exponent", finite_or_null(d.tail_exponent)},
                {"verdict", std::string(profiles::to_string(d.verdict))},
                {"heuristic", d.heuristic}};
}

Json to_json(const counterexample::EnvelopeReport& r) {
    Json windows = Json::array();
    for (const auto& w : r.windows) windows.push_back(to_json(w));
    return Json{{"mode", std::string(counterexample::to_string(r.mode))},
                {"alpha", r.alpha},
                {"threshold_M", r.threshold},
                {"M1", r.m1},
                {"M2", r.m2},
                {"windows", windows},
                {"drift", finite_or_null(r.drift)},
                {"growth", finite_or_null(r.growth)},
                {"monotone", r.monotone},
                {"verdict", std::string(envelope::to_string(r.verdict))},
                {"slack", r.slack},
                {"tail_bound_used", r.tail_bound_used}};
}

Json to_json(const counterexample::ChainCertificate& c) {
    Json links = Json::array();
    for (const auto& l : c.links) {
        links.push_back(
            Json{{"link", l.name}, {"worst_log_margin", finite_or_null(l.worst_log_margin)}, {"holds", l.holds}});
    }
    return Json{{"links", links}, {"H_min", c.H.empty() ? 0.0 : c.H.front()}, {"H_max", c.H.empty() ? 0.0 : c.H.back()},
                {"holds", c.holds}};
}

Json to_json(const group::GroupModel& G) {
    return Json{{"name", G.name()},
                {"rank", G.rank()},
                {"rho", G.rho()},
                {"weyl_order", G.weyl_order()},
                {"b_norm_scale", G.b_norm_scale()}};
}

numerics::Grid grid_from_json(const Json& j) {
    try {
        return numerics::Grid(j.at("x_min").get<double>(), j.at("x_max").get<double>(),
                              j.at("n_points").get<std::size_t>(), j.value("offset", false));
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorKind::InvalidData, std::string("bad grid record: ") + e.what());
    }
}

numerics::SampledFunction function_from_json(const Json& j) {
    try {
        const auto grid = grid_from_json(j.at("grid"));
        const auto re = j.at("re").get<std::vector<double>>();
        const auto im = j.at("im").get<std::vector<double>>();
        if (re.size() != im.size()) throw Error(ErrorKind::InvalidData, "re and im lengths differ");
        std::vector<numerics::cplx> v(re.size());
        for (std::size_t k = 0; k < v.size(); ++k) v[k] = {re[k], im[k]};
        return numerics::SampledFunction(grid, std::move(v), j.value("label", std::string{}));
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorKind::InvalidData, std::string("bad function record: ") + e.what());
    }
}

void save_text(const std::filesystem::path& path, const std::string& text) {
    std::error_code ec;
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path(), ec);
    std::ofstream os(path, std::ios::binary);
    if (!os) throw Error(ErrorKind::Io, "cannot open " + path.string() + " for writing");
    os << text;
    if (!os) throw Error(ErrorKind::Io, "write to " + path.string() + " failed");
}

std::string load_text(const std::filesystem::path& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw Error(ErrorKind::Io, "cannot open " + path.string());
    std::ostringstream ss;
    ss << is.rdbuf();
    return ss.str();
}

std::string fnv1a_hex(const std::string& data) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : data) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016" PRIx64, h);
    return buf;
}

}  // namespace uplab::io
