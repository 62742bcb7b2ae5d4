#pragma once

// Symbolic decodability check for delivery plans. No numerics: every term
// seen at a served stream must be decoded there, zero-forced there, or
// rebuilt from the receiver's cache.

#include <cstddef>
#include <vector>

#include "mimocc/scheme.hpp"

namespace mimocc {

struct StreamAccount {
  int transmission = 0;
  StreamId stream;
  std::vector<std::size_t> served;         // terms decoded at this stream
  std::vector<std::size_t> zf_suppressed;  // stream is in the term's zf_set
  std::vector<std::size_t> cache_removed;  // payload fully cached by the user
  std::vector<std::size_t> unresolved;
  std::vector<std::size_t> unstrippable;   // served codewords the user cannot un-XOR

  bool resolved() const noexcept { return unresolved.empty() && unstrippable.empty(); }
};

struct UserCoverage {
  int user = 0;
  std::size_t demanded = 0;    // non-cached subpackets of the requested file
  std::size_t recovered = 0;   // distinct demanded subpackets decoded
  std::size_t duplicates = 0;  // extra decodings of an already recovered subpacket
  std::size_t extraneous = 0;  // decoded subpackets outside the demand
  double fraction() const noexcept {
    return demanded == 0 ? 1.0 : static_cast<double>(recovered) / static_cast<double>(demanded);
  }
  bool exact() const noexcept { return recovered == demanded && duplicates == 0 && extraneous == 0; }
};

struct DecodabilityReport {
  bool pass = false;
  std::vector<StreamAccount> streams;
  std::vector<UserCoverage> coverage;

  std::size_t unresolved_count() const;
};

// Accounts for every served stream of one transmission.
std::vector<StreamAccount> verify_transmission(const TransmissionVector& tx,
                                               const CachePlacement& placement,
                                               const std::vector<int>& demands);

std::vector<UserCoverage> coverage_ledger(const DeliveryPlan& plan);

// Throws ConfigMismatch when placement or demands do not belong to the plan.
DecodabilityReport verify_plan(const DeliveryPlan& plan, const CachePlacement& placement,
                               const std::vector<int>& demands);
DecodabilityReport verify_plan(const DeliveryPlan& plan);

// Minimum over transmissions of the number of distinct served streams.
int verify_dof_accounting(const DeliveryPlan& plan);

}  // namespace mimocc
