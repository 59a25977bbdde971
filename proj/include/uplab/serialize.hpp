#pragma once

#include <filesystem>
#include <ostream>
#include <string>

#include "json.hpp"
#include "uplab/complex_group.hpp"
#include "uplab/counterexample.hpp"
#include "uplab/ingham.hpp"
#include "uplab/numerics.hpp"
#include "uplab/profiles.hpp"

namespace uplab::io {

using Json = nlohmann::ordered_json;

// CSV: header row (coordinate, re, im), then one row per sample, %.17g.
void write_csv(std::ostream& os, const numerics::SampledFunction& f);
void write_csv(std::ostream& os, const numerics::SpectralFunction& F);
void write_csv(std::ostream& os, const group::SphericalTransform& F);

Json to_json(const numerics::Grid& g);
Json to_json(const numerics::SampledFunction& f);
Json to_json(const numerics::SpectralFunction& F);
Json to_json(const ingham::SincProductSpec& spec);
Json to_json(const ingham::EnvelopeCertificate& cert);
Json to_json(const profiles::IntegralDiagnostic& d);
Json to_json(const envelope::Window& w);
Json to_json(const counterexample::EnvelopeReport& r);
Json to_json(const counterexample::ChainCertificate& c);
Json to_json(const group::GroupModel& G);

numerics::Grid grid_from_json(const Json& j);
numerics::SampledFunction function_from_json(const Json& j);

/// Writes text to path (parent directories created). Throws Io.
void save_text(const std::filesystem::path& path, const std::string& text);
std::string load_text(const std::filesystem::path& path);

/// 64-bit FNV-1a, as 16 lowercase hex digits.
std::string fnv1a_hex(const std::string& data);

}  // namespace uplab::io
