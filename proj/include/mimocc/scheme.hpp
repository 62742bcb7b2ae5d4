#pragma once

// Cache placement and delivery-plan construction: native unicast and
// multicast MIMO plans, elevation of virtual MISO baselines, and the DoF /
// subpacketization counting identities.

#include <cstdint>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "mimocc/core_model.hpp"

namespace mimocc {

struct CachedSubfile {
  int file = 0;
  UserSet cache_set;
  friend auto operator<=>(const CachedSubfile&, const CachedSubfile&) = default;
};

// Uncoded placement: user k stores W_P of every file for every packet label
// P with k in P. Packets are labelled by their caching set.
struct CachePlacement {
  int users = 0;
  int files = 0;
  std::vector<UserSet> packets;
  std::vector<std::set<CachedSubfile>> caches;  // indexed by user - 1

  bool has(int user, int file, const UserSet& cache_set) const;
  // Share of the library held by one user.
  double cached_fraction(int user) const;

  friend bool operator==(const CachePlacement&, const CachePlacement&) = default;
};

CachePlacement build_placement(const NetworkConfig& config);
CachePlacement build_placement(int users, int files, std::vector<UserSet> packets);

using Payload = std::variant<SubpacketId, CodewordId>;

struct TransmissionTerm {
  Payload payload;
  std::vector<StreamId> zf_set;  // sorted

  bool is_codeword() const noexcept { return std::holds_alternative<CodewordId>(payload); }
  // Streams at which the payload is decoded.
  std::vector<StreamId> served_streams() const;
  // Every subpacket carried by the payload.
  std::vector<SubpacketId> subpackets() const;

  friend bool operator==(const TransmissionTerm&, const TransmissionTerm&) = default;
};

std::string to_string(const TransmissionTerm& term);

struct TransmissionVector {
  UserSet serving_set;
  std::vector<TransmissionTerm> terms;
  int schedule_index = 0;

  friend bool operator==(const TransmissionVector&, const TransmissionVector&) = default;
};

enum class PlanMode { unicast, multicast, elevated };

std::string to_string(PlanMode mode);
PlanMode parse_plan_mode(const std::string& text);

struct DeliveryPlan {
  NetworkConfig config;
  PlanMode mode = PlanMode::unicast;
  std::vector<int> demands;  // demands[k-1] = file requested by user k
  CachePlacement placement;
  std::vector<TransmissionVector> transmissions;
  int split_count = 1;   // Q
  int stream_split = 1;  // G

  friend bool operator==(const DeliveryPlan&, const DeliveryPlan&) = default;
};

// W(k) = k, wrapping around the library when N < K.
std::vector<int> default_demands(const NetworkConfig& config);
void check_demands(const NetworkConfig& config, const std::vector<int>& demands);

// Q = C(K - t - 1, eta - 1)
int combinatorial_split_count(const NetworkConfig& config);

// Part index of W_P(k) inside serving set S: 1 + lexicographic rank of S
// among the (t + eta)-supersets of {k} u P.
int part_index(const UserSet& serving_set, int owner, const UserSet& cache_set, int users);

// R(S, T, k, g): all streams of S \ T plus the other G - 1 streams of k.
std::vector<StreamId> unicast_zf_set(const UserSet& serving_set, const UserSet& target_set,
                                     int owner, int stream, int rx_multiplexing);
// R^(S, T, g): all streams of S \ T plus every stream g' != g of every member of T.
std::vector<StreamId> multicast_zf_set(const UserSet& serving_set, const UserSet& target_set,
                                       int stream, int rx_multiplexing);

DeliveryPlan build_unicast_plan(const NetworkConfig& config, std::vector<int> demands = {});
DeliveryPlan build_multicast_plan(const NetworkConfig& config, std::vector<int> demands = {});

// Virtual MISO plan: each term is W_p^q(k) w_{T(k)} with |T(k)| = eta - 1.
struct BaselineTerm {
  int owner = 0;
  UserSet packet;  // caching set of packet p
  int part = 0;    // q
  UserSet zf_users;
  friend bool operator==(const BaselineTerm&, const BaselineTerm&) = default;
};

struct BaselineTransmission {
  std::vector<BaselineTerm> terms;
  friend bool operator==(const BaselineTransmission&, const BaselineTransmission&) = default;
};

struct BaselineMisoPlan {
  int users = 0;
  int caching_gain = 0;
  int multiplexing = 0;  // eta of the virtual network
  int split_count = 1;   // subpackets per packet
  std::vector<UserSet> packets;
  std::vector<BaselineTransmission> transmissions;

  friend bool operator==(const BaselineMisoPlan&, const BaselineMisoPlan&) = default;
};

// Throws MalformedBaseline on any structural violation.
void validate_baseline(const BaselineMisoPlan& baseline);

// Combinatorial MISO baseline: for every (t+eta)-set S, every
// (t+1)-subset T and k in T, the term W_{T\k}^q(k) w_{S\T}.
BaselineMisoPlan build_combinatorial_baseline(int users, int caching_gain, int multiplexing);

// Replaces every term W_p^q(k) w_T by G terms W_p^{q,g}(k) w_{R_g}. The
// real network uses L = eta G and default library / antenna sizes.
DeliveryPlan elevate_baseline(const BaselineMisoPlan& baseline, int rx_multiplexing,
                              std::vector<int> demands = {});
// Same, but against an explicit real-network config that must agree with
// the baseline on K, t and eta.
DeliveryPlan elevate_baseline(const BaselineMisoPlan& baseline, const NetworkConfig& config,
                              std::vector<int> demands = {});

enum class DofMode { mimo, virtual_miso };

// Streams per transmission: Gt + L (mimo) or t + L (virtual MISO).
int count_dof(int caching_gain, int tx_multiplexing, int rx_multiplexing, DofMode mode);
int count_dof(const NetworkConfig& config, DofMode mode);

enum class SubpacketizationBaseline { combinatorial, low_subpacketization };

// combinatorial: G C(K,t) C(K-t-1, eta-1); low_subpacketization: G K (t+eta)
// (requires eta >= t).
std::uint64_t count_subpacketization(const NetworkConfig& config, SubpacketizationBaseline baseline);

// Number of distinct (P, q, g) fragment labels delivered by a plan.
std::uint64_t plan_subpacketization(const DeliveryPlan& plan);

}  // namespace mimocc
