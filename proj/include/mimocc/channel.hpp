#pragma once

// Random MIMO channel draws and a plain-text dump format.
//
// Dump format (one realization):
//   mimocc-channel/1
//   users <K> rows <SfG> cols <SfL> noise <N0> seed <seed>
//   H <k>
//   <re> <im> <re> <im> ...      one line per row of H_k
// Numbers are written with %.17g so a dump round-trips exactly.

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "mimocc/core_model.hpp"
#include "mimocc/linalg.hpp"

namespace mimocc {

struct ChannelRealization {
  std::vector<ComplexMatrix> users;  // H_k at index k - 1, SfG x SfL
  double noise_power = 1.0;
  std::uint64_t trial_seed = 0;

  const ComplexMatrix& user(int k) const { return users.at(static_cast<std::size_t>(k - 1)); }
  // Vertical concatenation of all H_k.
  ComplexMatrix stacked() const;

  friend bool operator==(const ChannelRealization&, const ChannelRealization&) = default;
};

// SplitMix64 mix of (master, trial); any single trial can be replayed alone.
std::uint64_t trial_seed(std::uint64_t master_seed, std::uint64_t trial);

// Number of redraws generate_channel attempts before giving up.
inline constexpr int kMaxChannelDraws = 8;

// i.i.d. CN(0, 1) entries. Redraws until every H_k has rank >= G and the
// stack has rank >= L, then throws RankDeficient.
ChannelRealization generate_channel(const NetworkConfig& config, std::uint64_t master_seed,
                                    std::uint64_t trial, double noise_power = 1.0);

// Throws RankDeficient naming the first violation.
void check_channel_rank(const ChannelRealization& channel, int min_user_rank, int min_stacked_rank);

std::string dump_channel(const ChannelRealization& channel);
ChannelRealization parse_channel(std::string_view text);

}  // namespace mimocc
