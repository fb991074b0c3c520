#pragma once

#include <string>

#include "delgame/params.hpp"

namespace delgame {

/// Parses and schema-validates a config document:
///   {"lambda": .., "mu": .., "delta_law": {"type": ..}, "M": .., "N": ..}
/// Unknown keys are rejected (InvalidConfig); value-domain violations are
/// reported by validate_params with their own codes.
GameParams params_from_json_text(const std::string& text);

/// Stable-key-order JSON rendering of a parameter set (round-trips through
/// params_from_json_text).
std::string params_to_json_text(const GameParams& p);

}  // namespace delgame
