#include "mimocc/error.hpp"

namespace mimocc {

std::string_view error_name(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::invalid_parameter: return "InvalidParameter";
    case ErrorCode::non_integer_eta: return "NonIntegerEta";
    case ErrorCode::non_integer_t: return "NonIntegerT";
    case ErrorCode::insufficient_users: return "InsufficientUsers";
    case ErrorCode::multiplexing_exceeds_antennas: return "MultiplexingExceedsAntennas";
    case ErrorCode::out_of_range: return "OutOfRange";
    case ErrorCode::invalid_demand: return "InvalidDemand";
    case ErrorCode::malformed_baseline: return "MalformedBaseline";
    case ErrorCode::low_subpack_inapplicable: return "LowSubpackInapplicable";
    case ErrorCode::config_mismatch: return "ConfigMismatch";
    case ErrorCode::parse_error: return "ParseError";
    case ErrorCode::dimension_mismatch: return "DimensionMismatch";
    case ErrorCode::rank_deficient: return "RankDeficient";
    case ErrorCode::zero_matrix: return "ZeroMatrix";
    case ErrorCode::degenerate_nullspace: return "DegenerateNullspace";
    case ErrorCode::singular_covariance: return "SingularCovariance";
    case ErrorCode::mode_mismatch: return "ModeMismatch";
    case ErrorCode::infeasible_init: return "InfeasibleInit";
    case ErrorCode::unsupported_combination: return "UnsupportedCombination";
    case ErrorCode::insufficient_points: return "InsufficientPoints";
  }
  return "Unknown";
}

bool is_numerical(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::rank_deficient:
    case ErrorCode::zero_matrix:
    case ErrorCode::degenerate_nullspace:
    case ErrorCode::singular_covariance:
    case ErrorCode::infeasible_init:
      return true;
    default:
      return false;
  }
}

Error::Error(ErrorCode code, const std::string& detail)
    : std::runtime_error(std::string(error_name(code)) + ": " + detail), code_(code) {}

}  // namespace mimocc
