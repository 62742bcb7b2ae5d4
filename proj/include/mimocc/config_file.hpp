#pragma once

#include <string>
#include <string_view>

#include "mimocc/core_model.hpp"

namespace mimocc {

// Line-oriented "key = value" text. '#' starts a comment; blank lines are
// ignored. Besides the network keys, the optimizer keys tol, max_outer,
// max_inner and softmin_temperature_factor are accepted. Unknown or
// duplicated keys raise a ParseError naming the key and the 1-based line.
ParameterMap parse_config_text(std::string_view text);
ParameterMap read_config_file(const std::string& path);

// Applies a single "key=value" override on top of parsed parameters.
void apply_override(ParameterMap& params, std::string_view assignment);

std::string format_config_text(const NetworkConfig& config);

}  // namespace mimocc
