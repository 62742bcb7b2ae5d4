#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace mimocc {

enum class ErrorCode {
  invalid_parameter,
  non_integer_eta,
  non_integer_t,
  insufficient_users,
  multiplexing_exceeds_antennas,
  out_of_range,
  invalid_demand,
  malformed_baseline,
  low_subpack_inapplicable,
  config_mismatch,
  parse_error,
  dimension_mismatch,
  rank_deficient,
  zero_matrix,
  degenerate_nullspace,
  singular_covariance,
  mode_mismatch,
  infeasible_init,
  unsupported_combination,
  insufficient_points,
};

// CamelCase identifier used in diagnostics, e.g. "NonIntegerEta".
std::string_view error_name(ErrorCode code) noexcept;

// Errors raised by numerical kernels rather than by malformed input.
bool is_numerical(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& detail);

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace mimocc
