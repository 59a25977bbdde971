#pragma once

#include <ostream>
#include <string>

#include "uplab/serialize.hpp"

namespace uplab::cli {

/// Entry point of the `uplab` tool. Returns 0 on success, 2 when
/// --expect-holds is set and the verdict is FAILS, 1 on any error
/// (including a missing subcommand, which prints usage).
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

/// The published experiment-config schema (schemas/experiment_config.schema.json).
const io::Json& config_schema();

/// Checks `config` against the schema subset in use (type, properties,
/// additionalProperties, enum, minimum, exclusiveMinimum). Throws
/// SchemaViolation naming the offending JSON pointer.
void validate_config(const io::Json& config);

}  // namespace uplab::cli
