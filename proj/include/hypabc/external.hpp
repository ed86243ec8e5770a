#pragma once

#include <string>

#include "hypabc/objective.hpp"

namespace hypabc {

/// Placeholder replaced by the path of the JSON file holding the assignment.
inline constexpr const char* kConfigPlaceholder = "{config}";

/// Runs `command_template` through /bin/sh for every evaluation. The decoded
/// assignment is written as a JSON object to a temporary file whose path
/// replaces every "{config}" in the template. The child's standard output must
/// hold a single real number, taken as the objective. Nonzero exit, unparseable
/// output and timeouts raise ObjectiveError (stderr is included in the message).
ObjectiveHandle external_objective(std::string command_template, double timeout_s = 600.0);

}  // namespace hypabc
