#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace mimocc::cli {

// Exit codes.
inline constexpr int kOk = 0;
inline constexpr int kVerifyFailed = 1;
inline constexpr int kUsage = 2;
inline constexpr int kNumerical = 3;

// "start:step:stop" (inclusive), "a,b,c" or a single value.
std::vector<double> parse_snr_list(const std::string& text);

// Runs the command line; payload goes to `out`, diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace mimocc::cli
