#pragma once

// Network configuration, symbolic identifiers and lexicographic subset
// enumeration. Users, streams, files and parts are 1-indexed throughout.

#include <compare>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace mimocc {

// Sorted ascending, 1-indexed user labels.
using UserSet = std::vector<int>;

struct Rational {
  long long num = 0;
  long long den = 1;
  friend bool operator==(const Rational&, const Rational&) = default;
};

struct NetworkConfig {
  int users = 0;            // K
  int caching_gain = 0;     // t = K M / N
  int tx_multiplexing = 0;  // L
  int rx_multiplexing = 0;  // G
  int library_size = 0;     // N
  int tx_antennas = 0;
  int rx_antennas = 0;

  // eta = L / G; only meaningful on a validated config.
  int eta() const noexcept { return tx_multiplexing / rx_multiplexing; }
  // M = t N / K in files, reduced.
  Rational cache_size() const;

  friend bool operator==(const NetworkConfig&, const NetworkConfig&) = default;
};

// Raw key/value parameters as read from a config file or overrides.
// Recognised keys: users, caching_gain, cache_size, tx_multiplexing,
// rx_multiplexing, library_size, tx_antennas, rx_antennas.
using ParameterMap = std::map<std::string, std::string>;

// Checks every NetworkConfig invariant, throwing mimocc::Error naming the
// violated constraint.
void validate(const NetworkConfig& config);

// Parses and validates. library_size defaults to users, antenna counts
// default to the matching multiplexing gain. cache_size ("p/q" or integer)
// may replace or corroborate caching_gain.
NetworkConfig validate_config(const ParameterMap& raw);

// Convenience constructor; zero means "use the default".
NetworkConfig make_config(int users, int caching_gain, int tx_multiplexing, int rx_multiplexing,
                          int library_size = 0, int tx_antennas = 0, int rx_antennas = 0);

ParameterMap to_parameter_map(const NetworkConfig& config);

struct StreamId {
  int user = 0;
  int stream = 0;
  friend auto operator<=>(const StreamId&, const StreamId&) = default;
};

// W_P^{q,g}(k): fragment of the file requested by user k.
struct SubpacketId {
  int owner = 0;
  UserSet cache_set;
  int part = 0;
  int stream = 0;
  friend auto operator<=>(const SubpacketId&, const SubpacketId&) = default;
};

// X_T^g: XOR of one subpacket per member of the target set.
struct CodewordId {
  UserSet target_set;
  int stream = 0;
  std::vector<SubpacketId> components;
  friend auto operator<=>(const CodewordId&, const CodewordId&) = default;
};

std::string to_string(const StreamId& s);
std::string to_string(const SubpacketId& p);
std::string to_string(const CodewordId& c);
std::string to_string(const UserSet& s);

// n choose r; zero outside 0 <= r <= n.
std::uint64_t binomial(int n, int r);

std::vector<UserSet> enumerate_subsets(int n, int r);

// Lexicographic rank among all |subset|-subsets of [n].
std::uint64_t subset_rank(const UserSet& subset, int n);
UserSet subset_unrank(std::uint64_t rank, int n, int r);

bool contains(const UserSet& set, int user);
UserSet set_union(const UserSet& a, const UserSet& b);
UserSet set_difference(const UserSet& a, const UserSet& b);
bool is_subset(const UserSet& inner, const UserSet& outer);

class SubsetEnumerator {
 public:
  SubsetEnumerator(int ground_size, int subset_size);

  int ground_size() const noexcept { return n_; }
  int subset_size() const noexcept { return r_; }
  std::uint64_t size() const noexcept { return size_; }
  UserSet at(std::uint64_t rank) const { return subset_unrank(rank, n_, r_); }
  std::uint64_t rank_of(const UserSet& subset) const;
  std::vector<UserSet> all() const { return enumerate_subsets(n_, r_); }

 private:
  int n_;
  int r_;
  std::uint64_t size_;
};

}  // namespace mimocc
