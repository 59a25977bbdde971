#include "uplab/cli.hpp"

#include <filesystem>
#include <functional>
#include <optional>
#include <random>
#include <sstream>

#include "CLI11.hpp"
#include "schema_text.hpp"
#include "uplab/counterexample.hpp"
#include "uplab/schrodinger.hpp"

namespace uplab::cli {

using io::Json;
using numerics::cplx;
using numerics::Grid;
using numerics::SampledFunction;

// Schema ---------------------------------------------------------------------------

const Json& config_schema() {
    static const Json schema = Json::parse(kConfigSchemaText);
    return schema;
}

namespace {

[[noreturn]] void violation(const std::string& path, const std::string& what) {
    throw Error(ErrorKind::SchemaViolation, (path.empty() ? std::string("/") : path) + ": " + what);
}

void check_node(const Json& schema, const Json& v, const std::string& path) {
    if (schema.contains("type")) {
        const auto type = schema["type"].get<std::string>();
        const bool ok = (type == "object" && v.is_object()) || (type == "string" && v.is_string()) ||
                        (type == "number" && v.is_number()) || (type == "integer" && v.is_number_integer()) ||
                        (type == "boolean" && v.is_boolean());
        if (!ok) violation(path, "expected " + type);
    }
    if (schema.contains("enum")) {
        const auto& options = schema["enum"];
        if (std::find(options.begin(), options.end(), v) == options.end()) {
            violation(path, "value " + v.dump() + " not in " + options.dump());
        }
    }
    if (v.is_number()) {
        const double x = v.get<double>();
        if (schema.contains("minimum") && x < schema["minimum"].get<double>()) {
            violation(path, "must be >= " + schema["minimum"].dump());
        }
        if (schema.contains("exclusiveMinimum") && x <= schema["exclusiveMinimum"].get<double>()) {
            violation(path, "must be > " + schema["exclusiveMinimum"].dump());
        }
    }
    if (v.is_object()) {
        const Json empty = Json::object();
        const Json& props = schema.contains("properties") ? schema["properties"] : empty;
        const bool closed = schema.contains("additionalProperties") && !schema["additionalProperties"].get<bool>();
        for (const auto& [key, value] : v.items()) {
            if (props.contains(key)) {
                check_node(props[key], value, path + "/" + key);
            } else if (closed) {
                violation(path + "/" + key, "unknown key");
            }
        }
    }
}

}  // namespace

void validate_config(const Json& config) { check_node(config_schema(), config, ""); }

// Effective configuration ------------------------------------------------------------

namespace {

// Reads a value, recording the default in the effective config when absent.
class Config {
public:
    explicit Config(Json j) : j_(std::move(j)) {}

    template <typename T>
    T get(const std::string& pointer, T fallback) {
        const Json::json_pointer p(pointer);
        if (!j_.contains(p)) j_[p] = fallback;
        return j_[p].get<T>();
    }
    std::optional<double> maybe(const std::string& pointer) const {
        const Json::json_pointer p(pointer);
        if (!j_.contains(p)) return std::nullopt;
        return j_[p].get<double>();
    }
    bool has(const std::string& pointer) const { return j_.contains(Json::json_pointer(pointer)); }
    void set(const std::string& pointer, Json v) { j_[Json::json_pointer(pointer)] = std::move(v); }
    const Json& json() const { return j_; }

private:
    Json j_;
};

void merge(Json& into, const Json& from) {
    for (const auto& [key, value] : from.items()) {
        if (value.is_object() && into.contains(key) && into[key].is_object()) {
            merge(into[key], value);
        } else {
            into[key] = value;
        }
    }
}

struct Outcome {
    Json results = Json::object();
    Json tolerances = Json::object();
    std::optional<bool> holds;
    std::vector<std::pair<std::string, std::string>> artifacts;
    std::vector<std::string> summary;
};

std::string csv_of(const SampledFunction& f) {
    std::ostringstream os;
    io::write_csv(os, f);
    return os.str();
}

template <typename T>
std::string csv_of_spectrum(const T& F) {
    std::ostringstream os;
    io::write_csv(os, F);
    return os.str();
}

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(6);
    os << v + 0.0;  // no "-0"
    return os.str();
}

Grid make_grid(Config& c, bool group_default) {
    const double radius = c.get<double>("/grid/radius", group_default ? 16.0 : 64.0);
    const auto points = c.get<std::size_t>("/grid/points", group_default ? 4096 : 16384);
    const bool offset = c.get<bool>("/grid/offset", group_default);
    return Grid::symmetric(radius, points, offset);
}

profiles::DecayProfile make_profile(Config& c, const std::string& fallback) {
    const auto name = c.get<std::string>("/profile/name", fallback);
    const double parameter = c.get<double>("/profile/parameter", profiles::default_parameter(name));
    auto p = profiles::profile_by_name(name, parameter);
    profiles::validate(p);
    return p;
}

SampledFunction make_input(Config& c, const Grid& grid) {
    const auto name = c.get<std::string>("/input/name", "gaussian");
    const double w = c.get<double>("/input/width", 1.0);
    const double x0 = c.get<double>("/input/center", 0.0);
    if (name == "gaussian") {
        return SampledFunction::sample(
            grid, [=](double x) { return cplx(std::exp(-0.5 * (x - x0) * (x - x0) / (w * w))); }, name);
    }
    if (name == "indicator") {
        return SampledFunction::sample(grid, [=](double x) { return cplx(std::abs(x - x0) <= w ? 1.0 : 0.0); }, name);
    }
    double lo = x0 - w;
    double hi = x0 + w;
    if (name == "random_bump") {
        std::mt19937_64 rng(c.get<std::uint64_t>("/seed", 0));
        std::uniform_real_distribution<double> unit(0.0, 1.0);
        const double centre = x0 + unit(rng) - 0.5;
        const double half = w * (0.5 + unit(rng));
        lo = centre - half;
        hi = centre + half;
    }
    const counterexample::SmoothBump b(lo, hi);
    return SampledFunction::sample(grid, [&b](double x) { return cplx(b(x)); }, name);
}

group::GroupModel make_group(Config& c) {
    auto G = group::GroupModel::preset(c.get<std::string>("/group", "sl2c"));
    G.validate();
    return G;
}

counterexample::CounterexampleParams make_params(Config& c) {
    const double alpha = c.get<double>("/counterexample/alpha", 0.5);
    const double eta = c.get<double>("/counterexample/eta", 0.25);
    const double t0 = c.get<double>("/counterexample/t0", 1.0);
    auto theta = make_profile(c, "theta_log");
    if (theta.kind != profiles::ProfileKind::ThetaDecreasing) {
        throw Error(ErrorKind::InvalidArgument, "the envelope profile must be a theta profile");
    }
    auto p = counterexample::CounterexampleParams::make(alpha, eta, t0, c.maybe("/counterexample/beta_prime"), theta);
    c.set("/counterexample/beta_prime", p.beta_prime);
    return p;
}

counterexample::EnvelopeMode parse_mode(const std::string& s) {
    if (s == "remark42") return counterexample::EnvelopeMode::Remark42;
    if (s == "remark451") return counterexample::EnvelopeMode::Remark451;
    return counterexample::EnvelopeMode::FullStrength;
}

std::vector<double> resolved_radii(const Grid& grid) {
    const double R = grid.node(grid.size() - 1);
    return {R / 4.0, R / 2.0, R};
}

// Subcommands --------------------------------------------------------------------------

Outcome cmd_classify(Config& c) {
    Outcome o;
    const auto p = make_profile(c, "psi_linear");
    const auto d = profiles::classify_integral(p);
    o.results["diagnostic"] = io::to_json(d);
    o.tolerances = {{"divergent_exponent", profiles::kDivergentExponent},
                    {"convergent_exponent", profiles::kConvergentExponent},
                    {"panel_rel_tol", 1e-8}};
    o.artifacts.emplace_back("classify.json", o.results.dump(2) + "\n");
    o.summary.push_back("profile " + p.name + ": " + std::string(profiles::to_string(d.verdict)) +
                        " (tail exponent " + fmt(d.tail_exponent) + ", heuristic)");
    return o;
}

Outcome cmd_construct(Config& c) {
    Outcome o;
    const auto p = make_profile(c, "theta_log2");
    const auto spec = p.kind == profiles::ProfileKind::ThetaDecreasing ? ingham::spec_from_theta(p)
                                                                        : ingham::spec_from_psi(p);
    o.results["spec"] = io::to_json(spec);
    o.tolerances = {{"width_threshold", ingham::kWidthThreshold},
                    {"support_leakage", 1e-6},
                    {"certificate_drift", ingham::kCertificateDrift}};
    o.artifacts.emplace_back("spec.json", io::to_json(spec).dump(2) + "\n");
    if (spec.trivial()) {
        o.holds = true;
        o.summary.push_back("profile " + p.name + ": zero envelope, trivial spec");
        return o;
    }
    const auto grid = make_grid(c, false);
    const auto f = ingham::realize_function(spec, grid);
    const double leakage = ingham::support_leakage(f, spec.support_radius());
    profiles::DecayProfile psi = p;
    if (p.kind == profiles::ProfileKind::ThetaDecreasing) {
        psi = profiles::DecayProfile{profiles::ProfileKind::PsiNondecreasing,
                                     [eval = p.eval](double r) { return r * eval(r); }, "r*" + p.name, p.parameter};
    }
    const double xi0 = c.get<double>("/certificate/xi0", 64.0);
    const double slack = c.get<double>("/certificate/slack_factor", 0.5);
    const auto cert = ingham::certify_envelope(spec, psi, xi0, 3, slack);
    o.results["support_leakage"] = leakage;
    o.results["l2_norm"] = numerics::l2_norm(f);
    o.results["certificate"] = io::to_json(cert);
    o.holds = cert.stable && leakage <= 1e-6;
    o.artifacts.emplace_back("function.csv", csv_of(f));
    o.artifacts.emplace_back("certificate.json", o.results.dump(2) + "\n");
    o.summary.push_back("support radius " + fmt(spec.support_radius()) + " from " + std::to_string(spec.size()) +
                        " factors, leakage " + fmt(leakage));
    o.summary.push_back(std::string("envelope certificate: ") + (cert.stable ? "HOLDS" : "FAILS") + " (drift " +
                        fmt(cert.drift) + ")");
    return o;
}

Outcome cmd_transform(Config& c) {
    Outcome o;
    const auto kind = c.get<std::string>("/transform", "fourier");
    if (kind == "fourier") {
        const auto grid = make_grid(c, false);
        const auto f = make_input(c, grid);
        const auto F = numerics::fourier_transform(f);
        const double lhs = std::pow(numerics::l2_norm(f), 2);
        double rhs = 0.0;
        for (const auto& z : F.values()) rhs += std::norm(z);
        rhs *= grid.dual_step() / (2.0 * numerics::kPi);
        o.results["l2_norm"] = std::sqrt(lhs);
        o.results["plancherel_defect"] = lhs > 0.0 ? std::abs(lhs - rhs) / lhs : std::abs(rhs);
        o.artifacts.emplace_back("input.csv", csv_of(f));
        o.artifacts.emplace_back("transform.csv", csv_of_spectrum(F));
        o.summary.push_back("fourier transform on " + std::to_string(F.size()) + " dual frequencies");
    } else {
        const auto G = make_group(c);
        const auto grid = make_grid(c, true);
        const auto f = make_input(c, grid);
        const auto F = group::spherical_transform_reduced(G, f);
        o.results["weyl_asymmetry"] = F.weyl_asymmetry();
        o.results["max_abs"] = F.max_abs();
        o.tolerances = {{"weyl", group::kWeylTolerance}, {"boundary_leak", group::kBoundaryLeakTolerance}};
        o.artifacts.emplace_back("input.csv", csv_of(f));
        o.artifacts.emplace_back("transform.csv", csv_of_spectrum(F));
        o.summary.push_back("spherical transform on " + G.name() + ", W-asymmetry " + fmt(F.weyl_asymmetry()));
    }
    o.artifacts.emplace_back("transform.json", o.results.dump(2) + "\n");
    return o;
}

Outcome cmd_evolve(Config& c) {
    Outcome o;
    const auto mode = c.get<std::string>("/schrodinger/mode", "euclidean");
    schrodinger::SchrodingerParams p;
    p.t0 = c.get<double>("/schrodinger/t0", 1.0);
    const bool group_mode = mode == "group";
    const auto grid = make_grid(c, group_mode);
    const auto f = make_input(c, grid);
    const double delta = grid.step();
    std::optional<SampledFunction> closed, spectral;
    schrodinger::ResidualReport res{};
    double tol = 0.0;
    if (!group_mode) {
        p.c = c.get<double>("/schrodinger/c", 0.0);
        closed = schrodinger::evolve_euclidean_closed_form(p, f);
        const auto checked = schrodinger::evolve_spectral_checked(p, f, p.t0);
        spectral = checked.u;
        o.results["spectral_tail_fraction"] = checked.tail_fraction;
        o.results["aliasing_warning"] = checked.aliasing_warning;
        res = schrodinger::pde_residual({schrodinger::evolve_spectral(p, f, p.t0 - delta), *spectral,
                                         schrodinger::evolve_spectral(p, f, p.t0 + delta)},
                                        p, schrodinger::ResidualMode::Euclidean, delta);
        tol = 1e-6;
    } else {
        const auto G = make_group(c);
        const cplx C = schrodinger::reference_group_constant(G, p.t0);
        closed = schrodinger::evolve_group_closed_form(G, p, f, C);
        spectral = schrodinger::evolve_group_spectral(G, p, f);
        auto at = [&](double t) {
            auto q = p;
            q.t0 = t;
            return schrodinger::evolve_group_spectral(G, q, f);
        };
        res = schrodinger::pde_residual({at(p.t0 - delta), *spectral, at(p.t0 + delta)}, p,
                                        schrodinger::ResidualMode::Group, delta, &G);
        o.results["constant"] = {C.real(), C.imag()};
        tol = 1e-5;
    }
    const double rel = schrodinger::relative_error(*closed, *spectral);
    o.results["relative_error"] = rel;
    o.results["residual"] = {{"value", res.residual}, {"h", res.h}, {"delta", res.delta}};
    o.tolerances = {{"two_path", tol}, {"aliasing_tail", schrodinger::kAliasingTail}};
    o.holds = rel < tol;
    o.artifacts.emplace_back("u_closed_form.csv", csv_of(*closed));
    o.artifacts.emplace_back("u_spectral.csv", csv_of(*spectral));
    o.artifacts.emplace_back("evolve.json", o.results.dump(2) + "\n");
    o.summary.push_back(mode + " evolution to t0 = " + fmt(p.t0) + ": closed form vs spectral " + fmt(rel) +
                        ", residual " + fmt(res.residual));
    return o;
}

Json envelope_tolerances() {
    return {{"envelope_slack", counterexample::kEnvelopeSlack}, {"g_identity", 1e-12}};
}

Outcome run_envelope(Config& c, bool with_chain) {
    Outcome o;
    const auto params = make_params(c);
    const auto mode = parse_mode(c.get<std::string>("/counterexample/envelope", "remark42"));
    const auto G = make_group(c);
    const auto grid = make_grid(c, true);
    counterexample::EnvelopeReport report;
    if (mode == counterexample::EnvelopeMode::FullStrength) {
        const auto f = counterexample::build_initial_data(params, G, grid);
        schrodinger::SchrodingerParams sp;
        sp.t0 = params.t0;
        const auto u = schrodinger::evolve_group_closed_form(G, sp, f, schrodinger::reference_group_constant(G, params.t0));
        report = counterexample::verify_envelope(counterexample::resolved_samples(u), G,
                                                 counterexample::EnvelopeTarget::from(params, mode), resolved_radii(grid));
        o.results["g_identity_error"] = counterexample::g_identity_error(params, G, f);
        o.artifacts.emplace_back("f.csv", csv_of(f));
        o.artifacts.emplace_back("u.csv", csv_of(u));
    } else {
        auto r = counterexample::run_counterexample(params, G, grid, mode);
        report = r.report;
        o.results["g_identity_error"] = r.g_identity_error;
        o.results["constant"] = {r.constant.real(), r.constant.imag()};
        o.results["log_tail_constant"] = r.log_tail_constant;
        o.artifacts.emplace_back("f.csv", csv_of(r.f));
        o.artifacts.emplace_back("u.csv", csv_of(r.u));
    }
    o.results["report"] = io::to_json(report);
    bool holds = report.verdict == envelope::Verdict::Holds;
    if (with_chain && mode == counterexample::EnvelopeMode::Remark42) {
        const auto chain = counterexample::certify_envelope_chain(params, G, grid.step());
        o.results["chain"] = io::to_json(chain);
        holds = holds && chain.holds;
    }
    o.holds = holds;
    o.tolerances = envelope_tolerances();
    o.artifacts.emplace_back("report.json", o.results.dump(2) + "\n");
    o.summary.push_back("envelope " + std::string(counterexample::to_string(report.mode)) + " (alpha " +
                        fmt(report.alpha) + "): " + std::string(envelope::to_string(report.verdict)) + ", drift " +
                        fmt(report.drift) + ", growth " + fmt(report.growth));
    return o;
}

Outcome cmd_dichotomy(Config& c) {
    Outcome o;
    const auto G = make_group(c);
    const auto grid = make_grid(c, true);
    const auto data = c.get<std::string>("/dichotomy/data", "remark42");
    std::optional<SampledFunction> f;
    double t0 = 1.0;
    profiles::DecayProfile theta;
    if (data == "remark42") {
        const auto params = make_params(c);
        theta = params.theta;
        t0 = params.t0;
        f = counterexample::build_initial_data(params, G, grid);
    } else {
        theta = make_profile(c, data == "ingham" ? "theta_log2" : "theta_log");
        t0 = c.get<double>("/counterexample/t0", 1.0);
        f = data == "ingham"
                ? counterexample::ingham_seeded_initial_data(ingham::spec_from_theta(theta), G, grid, t0)
                : SampledFunction::zero(grid, "zero");
    }
    const auto d = counterexample::theorem_dichotomy_experiment(G, theta, *f, t0);
    o.results["nonzero_data"] = d.nonzero_data;
    o.results["report"] = io::to_json(d.report);
    o.holds = d.report.verdict == envelope::Verdict::Holds;
    o.tolerances = envelope_tolerances();
    o.artifacts.emplace_back("f.csv", csv_of(*f));
    o.artifacts.emplace_back("report.json", o.results.dump(2) + "\n");
    o.summary.push_back("full-strength envelope (" + theta.name + ", " + data + " data): " +
                        std::string(envelope::to_string(d.report.verdict)) + ", growth " + fmt(d.growth));
    return o;
}

// Flags ---------------------------------------------------------------------------------

struct Flags {
    std::string config, out, group, profile, input, kind, mode, envelope, data;
    std::size_t points = 0;
    std::uint64_t seed = 0;
    double radius = 0, parameter = 0, width = 0, center = 0, t0 = 0, c = 0, alpha = 0, eta = 0, beta_prime = 0,
           xi0 = 0, slack = 0;
    bool expect_holds = false;
};

struct Binding {
    const char* flag;
    std::function<void(Config&, const std::string& sub)> apply;
};

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"uplab: numerical lab for uncertainty principles on SL(2,C) and R", "uplab"};
    bool print_schema = false;
    app.add_flag("--print-schema", print_schema, "Print the experiment-config JSON schema and exit");
    app.require_subcommand(0, 1);

    Flags fl;
    const std::vector<std::pair<std::string, std::string>> commands{
        {"classify", "Classify the Ingham integral of a profile"},
        {"construct", "Build a compactly supported function obeying a decay envelope"},
        {"transform", "Fourier or spherical transform of an input function"},
        {"evolve", "Schrodinger evolution: closed form vs spectral"},
        {"verify", "Envelope verification and chain certificate on the counterexample data"},
        {"counterexample", "Counterexample pipeline (build, evolve, verify)"},
        {"dichotomy", "Full-strength envelope experiment"},
    };
    for (const auto& [name, help] : commands) {
        auto* sub = app.add_subcommand(name, help);
        sub->add_option("--config", fl.config, "JSON experiment config")->check(CLI::ExistingFile);
        sub->add_option("--out", fl.out, "Output directory (default: out)");
        sub->add_option("--grid-points", fl.points, "Grid points");
        sub->add_option("--grid-radius", fl.radius, "Grid radius R of [-R, R)");
        sub->add_flag("--expect-holds", fl.expect_holds, "Exit 2 when the verdict is FAILS");
        sub->add_option("--seed", fl.seed, "Seed for randomized inputs");
        sub->add_option("--group", fl.group, "Group preset (sl2c, sl2c×sl2c)");
        sub->add_option("--profile", fl.profile, "Decay profile name");
        sub->add_option("--parameter", fl.parameter, "Profile parameter");
        if (name == "transform" || name == "evolve") {
            sub->add_option("--input", fl.input, "gaussian, indicator, bump or random_bump");
            sub->add_option("--width", fl.width, "Input width");
            sub->add_option("--center", fl.center, "Input center");
        }
        if (name == "transform") sub->add_option("--kind", fl.kind, "fourier or spherical");
        if (name == "evolve") {
            sub->add_option("--mode", fl.mode, "euclidean or group");
            sub->add_option("--c", fl.c, "Damping parameter (euclidean mode)");
        }
        if (name == "evolve" || name == "verify" || name == "counterexample" || name == "dichotomy") {
            sub->add_option("--t0", fl.t0, "Evaluation time");
        }
        if (name == "verify" || name == "counterexample" || name == "dichotomy") {
            sub->add_option("--alpha", fl.alpha, "Exponent on phi_0");
            sub->add_option("--eta", fl.eta, "eta in (0, 1 - alpha)");
            sub->add_option("--beta-prime", fl.beta_prime, "Lower end of the bump support");
        }
        if (name == "verify" || name == "counterexample") {
            sub->add_option("--envelope", fl.envelope, "remark42, remark451 or full_strength");
        }
        if (name == "dichotomy") sub->add_option("--data", fl.data, "remark42, ingham or zero");
        if (name == "construct") {
            sub->add_option("--xi0", fl.xi0, "First certificate window");
            sub->add_option("--slack-factor", fl.slack, "Certified envelope exp(-slack * psi)");
        }
    }

    if (argc <= 1) {
        out << app.help();
        return 1;
    }
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? 0 : 1;
    }
    if (print_schema) {
        out << config_schema().dump(2) << "\n";
        return 0;
    }
    const auto subs = app.get_subcommands();
    if (subs.empty()) {
        out << app.help();
        return 1;
    }
    const CLI::App* sub = subs.front();
    const std::string name = sub->get_name();

    const std::vector<Binding> bindings{
        {"--out", [&](Config& c, const std::string&) { c.set("/output_dir", fl.out); }},
        {"--grid-points", [&](Config& c, const std::string&) { c.set("/grid/points", fl.points); }},
        {"--grid-radius", [&](Config& c, const std::string&) { c.set("/grid/radius", fl.radius); }},
        {"--expect-holds", [&](Config& c, const std::string&) { c.set("/expect_holds", true); }},
        {"--seed", [&](Config& c, const std::string&) { c.set("/seed", fl.seed); }},
        {"--group", [&](Config& c, const std::string&) { c.set("/group", fl.group); }},
        {"--profile", [&](Config& c, const std::string&) { c.set("/profile/name", fl.profile); }},
        {"--parameter", [&](Config& c, const std::string&) { c.set("/profile/parameter", fl.parameter); }},
        {"--input", [&](Config& c, const std::string&) { c.set("/input/name", fl.input); }},
        {"--width", [&](Config& c, const std::string&) { c.set("/input/width", fl.width); }},
        {"--center", [&](Config& c, const std::string&) { c.set("/input/center", fl.center); }},
        {"--kind", [&](Config& c, const std::string&) { c.set("/transform", fl.kind); }},
        {"--mode", [&](Config& c, const std::string&) { c.set("/schrodinger/mode", fl.mode); }},
        {"--c", [&](Config& c, const std::string&) { c.set("/schrodinger/c", fl.c); }},
        {"--t0",
         [&](Config& c, const std::string& s) {
             c.set(s == "evolve" ? "/schrodinger/t0" : "/counterexample/t0", fl.t0);
         }},
        {"--alpha", [&](Config& c, const std::string&) { c.set("/counterexample/alpha", fl.alpha); }},
        {"--eta", [&](Config& c, const std::string&) { c.set("/counterexample/eta", fl.eta); }},
        {"--beta-prime", [&](Config& c, const std::string&) { c.set("/counterexample/beta_prime", fl.beta_prime); }},
        {"--envelope", [&](Config& c, const std::string&) { c.set("/counterexample/envelope", fl.envelope); }},
        {"--data", [&](Config& c, const std::string&) { c.set("/dichotomy/data", fl.data); }},
        {"--xi0", [&](Config& c, const std::string&) { c.set("/certificate/xi0", fl.xi0); }},
        {"--slack-factor", [&](Config& c, const std::string&) { c.set("/certificate/slack_factor", fl.slack); }},
    };

    try {
        Json effective = {{"schema_version", 1}, {"subcommand", name}};
        if (!fl.config.empty()) {
            Json file;
            try {
                file = Json::parse(io::load_text(fl.config));
            } catch (const nlohmann::json::parse_error& e) {
                throw Error(ErrorKind::SchemaViolation, std::string("config is not valid JSON: ") + e.what());
            }
            validate_config(file);
            if (file.contains("subcommand") && file["subcommand"] != name) {
                throw Error(ErrorKind::SchemaViolation,
                            "config is for subcommand " + file["subcommand"].dump() + ", not \"" + name + "\"");
            }
            merge(effective, file);
        }
        Config cfg(std::move(effective));
        for (const auto& b : bindings) {
            if (sub->get_option_no_throw(b.flag) != nullptr && sub->count(b.flag) > 0) b.apply(cfg, name);
        }
        validate_config(cfg.json());

        Outcome o;
        if (name == "classify") o = cmd_classify(cfg);
        else if (name == "construct") o = cmd_construct(cfg);
        else if (name == "transform") o = cmd_transform(cfg);
        else if (name == "evolve") o = cmd_evolve(cfg);
        else if (name == "verify") o = run_envelope(cfg, true);
        else if (name == "counterexample") o = run_envelope(cfg, false);
        else o = cmd_dichotomy(cfg);

        const bool expect = cfg.get<bool>("/expect_holds", false);
        const std::filesystem::path dir = cfg.get<std::string>("/output_dir", "out");
        Json hashed = cfg.json();
        hashed.erase("output_dir");
        Json manifest = {{"schema_version", 1},
                         {"subcommand", name},
                         {"config_hash", io::fnv1a_hex(hashed.dump())},
                         {"config", cfg.json()},
                         {"tolerances", o.tolerances},
                         {"verdict", o.holds ? Json(*o.holds ? "HOLDS" : "FAILS") : Json(nullptr)},
                         {"results", o.results}};
        Json files = Json::array();
        for (const auto& [file, text] : o.artifacts) {
            io::save_text(dir / file, text);
            files.push_back(file);
        }
        manifest["artifacts"] = files;
        io::save_text(dir / "manifest.json", manifest.dump(2) + "\n");

        for (const auto& line : o.summary) out << line << "\n";
        if (o.holds) out << "verdict: " << (*o.holds ? "HOLDS" : "FAILS") << "\n";
        out << "artifacts written to " << dir.string() << "\n";
        return expect && o.holds && !*o.holds ? 2 : 0;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
}

}  // namespace uplab::cli
