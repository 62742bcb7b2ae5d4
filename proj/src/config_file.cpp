#include "mimocc/config_file.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "mimocc/error.hpp"

namespace mimocc {

namespace {

const std::set<std::string, std::less<>> kKeys{"users",           "caching_gain",    "cache_size",
                                               "tx_multiplexing", "rx_multiplexing", "library_size",
                                               "tx_antennas",     "rx_antennas",     "tol",
                                               "max_outer",       "max_inner",
                                               "softmin_temperature_factor"};

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

}  // namespace

ParameterMap parse_config_text(std::string_view text) {
  ParameterMap out;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto nl = text.find('\n', pos);
    std::string_view line = text.substr(pos, nl == std::string_view::npos ? text.npos : nl - pos);
    ++line_no;
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;

    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    const std::string content = trim(line);
    if (content.empty()) continue;

    const auto sep = content.find_first_of("=:");
    if (sep == std::string::npos) {
      throw Error(ErrorCode::parse_error,
                  "line " + std::to_string(line_no) + ": expected 'key = value', got '" + content + "'");
    }
    const std::string key = trim(std::string_view(content).substr(0, sep));
    const std::string value = trim(std::string_view(content).substr(sep + 1));
    if (!kKeys.contains(key)) {
      throw Error(ErrorCode::parse_error,
                  "line " + std::to_string(line_no) + ": unknown key '" + key + "'");
    }
    if (value.empty()) {
      throw Error(ErrorCode::parse_error,
                  "line " + std::to_string(line_no) + ": key '" + key + "' has no value");
    }
    if (!out.emplace(key, value).second) {
      throw Error(ErrorCode::parse_error,
                  "line " + std::to_string(line_no) + ": duplicate key '" + key + "'");
    }
  }
  return out;
}

ParameterMap read_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::parse_error, "cannot open config file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    return parse_config_text(buf.str());
  } catch (const Error& e) {
    throw Error(e.code(), path + ": " + std::string(e.what()).substr(error_name(e.code()).size() + 2));
  }
}

void apply_override(ParameterMap& params, std::string_view assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string_view::npos) {
    throw Error(ErrorCode::parse_error,
                "override '" + std::string(assignment) + "' is not of the form key=value");
  }
  const std::string key = trim(assignment.substr(0, eq));
  const std::string value = trim(assignment.substr(eq + 1));
  if (!kKeys.contains(key)) throw Error(ErrorCode::parse_error, "override: unknown key '" + key + "'");
  if (value.empty()) throw Error(ErrorCode::parse_error, "override: key '" + key + "' has no value");
  params[key] = value;
}

std::string format_config_text(const NetworkConfig& config) {
  std::ostringstream os;
  for (const auto& [key, value] : to_parameter_map(config)) os << key << " = " << value << '\n';
  return os.str();
}

}  // namespace mimocc
