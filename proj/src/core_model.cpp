#include "mimocc/core_model.hpp"

#include <algorithm>
#include <charconv>
#include <limits>
#include <numeric>
#include <optional>
#include <set>
#include <sstream>

#include "mimocc/error.hpp"

namespace mimocc {

namespace {

const std::set<std::string>& known_keys() {
  static const std::set<std::string> keys{"users",        "caching_gain",    "cache_size",
                                          "tx_multiplexing", "rx_multiplexing", "library_size",
                                          "tx_antennas",  "rx_antennas"};
  return keys;
}

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

std::optional<long long> parse_integer(const std::string& text) {
  const std::string s = trim(text);
  long long value = 0;
  const auto* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, value);
  if (ec != std::errc() || ptr != end || s.empty()) return std::nullopt;
  return value;
}

// Accepts "p/q", integers and plain decimals; returns a reduced fraction.
std::optional<Rational> parse_rational(const std::string& text) {
  const std::string s = trim(text);
  if (const auto slash = s.find('/'); slash != std::string::npos) {
    auto num = parse_integer(s.substr(0, slash));
    auto den = parse_integer(s.substr(slash + 1));
    if (!num || !den || *den <= 0) return std::nullopt;
    const long long g = std::gcd(*num, *den);
    return Rational{*num / (g == 0 ? 1 : g), *den / (g == 0 ? 1 : g)};
  }
  if (const auto dot = s.find('.'); dot != std::string::npos) {
    const std::string frac = s.substr(dot + 1);
    if (frac.size() > 9) return std::nullopt;
    auto whole = parse_integer(s.substr(0, dot).empty() ? "0" : s.substr(0, dot));
    auto part = frac.empty() ? std::optional<long long>{0} : parse_integer(frac);
    if (!whole || !part || *part < 0 || *whole < 0) return std::nullopt;
    long long den = 1;
    for (std::size_t i = 0; i < frac.size(); ++i) den *= 10;
    const long long num = *whole * den + *part;
    const long long g = std::gcd(num, den);
    return Rational{num / g, den / g};
  }
  if (auto v = parse_integer(s)) return Rational{*v, 1};
  return std::nullopt;
}

int require_int(const ParameterMap& raw, const std::string& key, std::optional<int> fallback) {
  auto it = raw.find(key);
  if (it == raw.end()) {
    if (fallback) return *fallback;
    throw Error(ErrorCode::invalid_parameter, "missing required key '" + key + "'");
  }
  auto v = parse_integer(it->second);
  if (!v) {
    throw Error(ErrorCode::invalid_parameter,
                "key '" + key + "' expects an integer, got '" + it->second + "'");
  }
  if (*v < std::numeric_limits<int>::min() || *v > std::numeric_limits<int>::max()) {
    throw Error(ErrorCode::invalid_parameter, "key '" + key + "' is out of range");
  }
  return static_cast<int>(*v);
}

}  // namespace

Rational NetworkConfig::cache_size() const {
  const long long num = static_cast<long long>(caching_gain) * library_size;
  const long long den = users;
  const long long g = std::gcd(num, den);
  if (g == 0) return {};
  return {num / g, den / g};
}

void validate(const NetworkConfig& c) {
  auto positive = [](int v, const char* name) {
    if (v <= 0) {
      throw Error(ErrorCode::invalid_parameter,
                  std::string(name) + " must be positive, got " + std::to_string(v));
    }
  };
  positive(c.users, "users");
  positive(c.caching_gain, "caching_gain");
  positive(c.tx_multiplexing, "tx_multiplexing");
  positive(c.rx_multiplexing, "rx_multiplexing");
  positive(c.library_size, "library_size");
  positive(c.tx_antennas, "tx_antennas");
  positive(c.rx_antennas, "rx_antennas");
  if (c.tx_multiplexing % c.rx_multiplexing != 0) {
    throw Error(ErrorCode::non_integer_eta,
                "tx_multiplexing L=" + std::to_string(c.tx_multiplexing) +
                    " is not a multiple of rx_multiplexing G=" + std::to_string(c.rx_multiplexing));
  }
  if (c.caching_gain + c.eta() > c.users) {
    throw Error(ErrorCode::insufficient_users,
                "t + eta = " + std::to_string(c.caching_gain + c.eta()) + " exceeds users K=" +
                    std::to_string(c.users));
  }
  if (c.tx_multiplexing > c.tx_antennas) {
    throw Error(ErrorCode::multiplexing_exceeds_antennas,
                "tx_multiplexing L=" + std::to_string(c.tx_multiplexing) + " exceeds tx_antennas " +
                    std::to_string(c.tx_antennas));
  }
  if (c.rx_multiplexing > c.rx_antennas) {
    throw Error(ErrorCode::multiplexing_exceeds_antennas,
                "rx_multiplexing G=" + std::to_string(c.rx_multiplexing) + " exceeds rx_antennas " +
                    std::to_string(c.rx_antennas));
  }
}

NetworkConfig validate_config(const ParameterMap& raw) {
  for (const auto& [key, value] : raw) {
    if (!known_keys().contains(key)) {
      throw Error(ErrorCode::invalid_parameter, "unknown key '" + key + "'");
    }
  }
  NetworkConfig c;
  c.users = require_int(raw, "users", std::nullopt);
  c.tx_multiplexing = require_int(raw, "tx_multiplexing", std::nullopt);
  c.rx_multiplexing = require_int(raw, "rx_multiplexing", std::nullopt);
  c.library_size = require_int(raw, "library_size", c.users);
  c.tx_antennas = require_int(raw, "tx_antennas", c.tx_multiplexing);
  c.rx_antennas = require_int(raw, "rx_antennas", c.rx_multiplexing);

  std::optional<int> gain;
  if (auto it = raw.find("caching_gain"); it != raw.end()) {
    auto as_int = parse_integer(it->second);
    if (!as_int) {
      auto as_frac = parse_rational(it->second);
      if (as_frac && as_frac->den != 1) {
        throw Error(ErrorCode::non_integer_t, "caching_gain '" + it->second + "' is not an integer");
      }
      if (!as_frac) {
        throw Error(ErrorCode::invalid_parameter,
                    "key 'caching_gain' expects an integer, got '" + it->second + "'");
      }
      as_int = as_frac->num;
    }
    gain = static_cast<int>(*as_int);
  }
  if (auto it = raw.find("cache_size"); it != raw.end()) {
    auto m = parse_rational(it->second);
    if (!m || m->num < 0) {
      throw Error(ErrorCode::invalid_parameter,
                  "key 'cache_size' expects a nonnegative rational, got '" + it->second + "'");
    }
    // t = K M / N
    const long long num = static_cast<long long>(c.users) * m->num;
    const long long den = static_cast<long long>(c.library_size) * m->den;
    if (den == 0 || num % den != 0) {
      throw Error(ErrorCode::non_integer_t, "K*M/N = " + std::to_string(num) + "/" +
                                                std::to_string(den) + " is not an integer");
    }
    const int derived = static_cast<int>(num / den);
    if (gain && *gain != derived) {
      throw Error(ErrorCode::non_integer_t, "caching_gain " + std::to_string(*gain) +
                                                " disagrees with K*M/N = " + std::to_string(derived));
    }
    gain = derived;
  }
  if (!gain) throw Error(ErrorCode::invalid_parameter, "missing required key 'caching_gain'");
  c.caching_gain = *gain;
  validate(c);
  return c;
}

NetworkConfig make_config(int users, int caching_gain, int tx_multiplexing, int rx_multiplexing,
                          int library_size, int tx_antennas, int rx_antennas) {
  NetworkConfig c;
  c.users = users;
  c.caching_gain = caching_gain;
  c.tx_multiplexing = tx_multiplexing;
  c.rx_multiplexing = rx_multiplexing;
  c.library_size = library_size > 0 ? library_size : users;
  c.tx_antennas = tx_antennas > 0 ? tx_antennas : tx_multiplexing;
  c.rx_antennas = rx_antennas > 0 ? rx_antennas : rx_multiplexing;
  validate(c);
  return c;
}

ParameterMap to_parameter_map(const NetworkConfig& c) {
  return {{"users", std::to_string(c.users)},
          {"caching_gain", std::to_string(c.caching_gain)},
          {"tx_multiplexing", std::to_string(c.tx_multiplexing)},
          {"rx_multiplexing", std::to_string(c.rx_multiplexing)},
          {"library_size", std::to_string(c.library_size)},
          {"tx_antennas", std::to_string(c.tx_antennas)},
          {"rx_antennas", std::to_string(c.rx_antennas)}};
}

std::string to_string(const UserSet& s) {
  std::ostringstream os;
  os << '{';
  for (std::size_t i = 0; i < s.size(); ++i) os << (i ? "," : "") << s[i];
  os << '}';
  return os.str();
}

std::string to_string(const StreamId& s) {
  return "s" + std::to_string(s.user) + "." + std::to_string(s.stream);
}

namespace {
std::string file_label(int owner) {
  if (owner >= 1 && owner <= 26) return std::string(1, static_cast<char>('A' + owner - 1));
  return "W(" + std::to_string(owner) + ")";
}
}  // namespace

std::string to_string(const SubpacketId& p) {
  std::string cache;
  for (std::size_t i = 0; i < p.cache_set.size(); ++i) {
    cache += (i ? "," : "") + std::to_string(p.cache_set[i]);
  }
  return file_label(p.owner) + "_{" + cache + "}^{" + std::to_string(p.part) + "," +
         std::to_string(p.stream) + "}";
}

std::string to_string(const CodewordId& c) {
  std::string out;
  for (std::size_t i = 0; i < c.components.size(); ++i) {
    out += (i ? " xor " : "") + to_string(c.components[i]);
  }
  return "X" + to_string(c.target_set) + "^" + std::to_string(c.stream) + "[" + out + "]";
}

std::uint64_t binomial(int n, int r) {
  if (r < 0 || n < 0 || r > n) return 0;
  r = std::min(r, n - r);
  std::uint64_t result = 1;
  for (int i = 1; i <= r; ++i) {
    result = result * static_cast<std::uint64_t>(n - r + i) / static_cast<std::uint64_t>(i);
  }
  return result;
}

std::vector<UserSet> enumerate_subsets(int n, int r) {
  if (r < 0 || r > n) {
    throw Error(ErrorCode::out_of_range,
                "subset size " + std::to_string(r) + " outside [0, " + std::to_string(n) + "]");
  }
  std::vector<UserSet> out;
  out.reserve(binomial(n, r));
  UserSet current(r);
  std::iota(current.begin(), current.end(), 1);
  while (true) {
    out.push_back(current);
    int i = r - 1;
    while (i >= 0 && current[i] == n - r + i + 1) --i;
    if (i < 0) break;
    ++current[i];
    for (int j = i + 1; j < r; ++j) current[j] = current[j - 1] + 1;
  }
  return out;
}

std::uint64_t subset_rank(const UserSet& subset, int n) {
  const int r = static_cast<int>(subset.size());
  std::uint64_t rank = 0;
  int prev = 0;
  for (int i = 0; i < r; ++i) {
    const int v = subset[i];
    if (v <= prev || v > n) {
      throw Error(ErrorCode::out_of_range,
                  "subset " + to_string(subset) + " is not an increasing subset of [" +
                      std::to_string(n) + "]");
    }
    for (int w = prev + 1; w < v; ++w) rank += binomial(n - w, r - i - 1);
    prev = v;
  }
  return rank;
}

UserSet subset_unrank(std::uint64_t rank, int n, int r) {
  if (r < 0 || r > n || rank >= binomial(n, r)) {
    throw Error(ErrorCode::out_of_range, "rank " + std::to_string(rank) + " outside C(" +
                                             std::to_string(n) + "," + std::to_string(r) + ")");
  }
  UserSet out;
  out.reserve(r);
  int v = 1;
  for (int i = 0; i < r; ++i) {
    while (true) {
      const std::uint64_t block = binomial(n - v, r - i - 1);
      if (rank < block) break;
      rank -= block;
      ++v;
    }
    out.push_back(v);
    ++v;
  }
  return out;
}

bool contains(const UserSet& set, int user) {
  return std::binary_search(set.begin(), set.end(), user);
}

UserSet set_union(const UserSet& a, const UserSet& b) {
  UserSet out;
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

UserSet set_difference(const UserSet& a, const UserSet& b) {
  UserSet out;
  std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

bool is_subset(const UserSet& inner, const UserSet& outer) {
  return std::includes(outer.begin(), outer.end(), inner.begin(), inner.end());
}

SubsetEnumerator::SubsetEnumerator(int ground_size, int subset_size)
    : n_(ground_size), r_(subset_size), size_(binomial(ground_size, subset_size)) {
  if (subset_size < 0 || subset_size > ground_size) {
    throw Error(ErrorCode::out_of_range, "subset size outside [0, n]");
  }
}

std::uint64_t SubsetEnumerator::rank_of(const UserSet& subset) const {
  if (static_cast<int>(subset.size()) != r_) {
    throw Error(ErrorCode::out_of_range, "subset " + to_string(subset) + " has wrong size");
  }
  return subset_rank(subset, n_);
}

}  // namespace mimocc
