#include "mimocc/verifier.hpp"

#include <algorithm>
#include <iterator>
#include <limits>
#include <map>
#include <set>

#include "mimocc/error.hpp"

namespace mimocc {

namespace {

bool cached_by(const SubpacketId& sp, int user, const CachePlacement& placement,
               const std::vector<int>& demands) {
  return placement.has(user, demands[sp.owner - 1], sp.cache_set);
}

}  // namespace

std::size_t DecodabilityReport::unresolved_count() const {
  std::size_t n = 0;
  for (const auto& s : streams) n += s.unresolved.size() + s.unstrippable.size();
  return n;
}

std::vector<StreamAccount> verify_transmission(const TransmissionVector& tx,
                                               const CachePlacement& placement,
                                               const std::vector<int>& demands) {
  std::map<StreamId, std::vector<std::size_t>> served_at;
  for (std::size_t i = 0; i < tx.terms.size(); ++i) {
    for (const auto& s : tx.terms[i].served_streams()) served_at[s].push_back(i);
  }

  std::vector<StreamAccount> out;
  out.reserve(served_at.size());
  for (const auto& [stream, served] : served_at) {
    StreamAccount acc;
    acc.transmission = tx.schedule_index;
    acc.stream = stream;
    acc.served = served;
    const int user = stream.user;
    for (std::size_t i = 0; i < tx.terms.size(); ++i) {
      const auto& term = tx.terms[i];
      if (std::binary_search(served.begin(), served.end(), i)) {
        if (term.is_codeword()) {
          for (const auto& c : std::get<CodewordId>(term.payload).components) {
            if (c.owner != user && !cached_by(c, user, placement, demands)) {
              acc.unstrippable.push_back(i);
              break;
            }
          }
        }
        continue;
      }
      if (std::binary_search(term.zf_set.begin(), term.zf_set.end(), stream)) {
        acc.zf_suppressed.push_back(i);
        continue;
      }
      const auto parts = term.subpackets();
      const bool removable = std::all_of(parts.begin(), parts.end(), [&](const SubpacketId& sp) {
        return cached_by(sp, user, placement, demands);
      });
      (removable ? acc.cache_removed : acc.unresolved).push_back(i);
    }
    out.push_back(std::move(acc));
  }
  return out;
}

std::vector<UserCoverage> coverage_ledger(const DeliveryPlan& plan) {
  const int K = plan.config.users;
  std::vector<std::set<SubpacketId>> demanded(K);
  for (int k = 1; k <= K; ++k) {
    for (const auto& packet : plan.placement.packets) {
      if (contains(packet, k)) continue;
      for (int q = 1; q <= plan.split_count; ++q) {
        for (int g = 1; g <= plan.stream_split; ++g) demanded[k - 1].insert({k, packet, q, g});
      }
    }
  }
  std::vector<UserCoverage> cov(K);
  std::vector<std::set<SubpacketId>> got(K);
  for (int k = 1; k <= K; ++k) {
    cov[k - 1].user = k;
    cov[k - 1].demanded = demanded[k - 1].size();
  }
  for (const auto& tx : plan.transmissions) {
    for (const auto& term : tx.terms) {
      for (const auto& sp : term.subpackets()) {
        if (sp.owner < 1 || sp.owner > K) continue;
        auto& c = cov[sp.owner - 1];
        if (!demanded[sp.owner - 1].contains(sp)) {
          ++c.extraneous;
        } else if (!got[sp.owner - 1].insert(sp).second) {
          ++c.duplicates;
        } else {
          ++c.recovered;
        }
      }
    }
  }
  return cov;
}

DecodabilityReport verify_plan(const DeliveryPlan& plan, const CachePlacement& placement,
                               const std::vector<int>& demands) {
  const auto& cfg = plan.config;
  if (placement.users != cfg.users || placement.files != cfg.library_size) {
    throw Error(ErrorCode::config_mismatch,
                "placement covers " + std::to_string(placement.users) + " users / " +
                    std::to_string(placement.files) + " files, plan has " +
                    std::to_string(cfg.users) + " / " + std::to_string(cfg.library_size));
  }
  if (static_cast<int>(demands.size()) != cfg.users) {
    throw Error(ErrorCode::config_mismatch, "demand vector has " + std::to_string(demands.size()) +
                                                " entries for " + std::to_string(cfg.users) + " users");
  }
  for (int d : demands) {
    if (d < 1 || d > cfg.library_size) {
      throw Error(ErrorCode::config_mismatch, "demand " + std::to_string(d) + " outside the library");
    }
  }
  for (const auto& tx : plan.transmissions) {
    for (const auto& term : tx.terms) {
      for (const auto& sp : term.subpackets()) {
        if (sp.owner < 1 || sp.owner > cfg.users) {
          throw Error(ErrorCode::config_mismatch, "subpacket owner " + std::to_string(sp.owner) +
                                                      " outside [1," + std::to_string(cfg.users) + "]");
        }
      }
    }
  }

  DecodabilityReport report;
  for (const auto& tx : plan.transmissions) {
    auto accounts = verify_transmission(tx, placement, demands);
    std::move(accounts.begin(), accounts.end(), std::back_inserter(report.streams));
  }
  report.coverage = coverage_ledger(plan);
  report.pass =
      std::all_of(report.streams.begin(), report.streams.end(),
                  [](const StreamAccount& s) { return s.resolved(); }) &&
      std::all_of(report.coverage.begin(), report.coverage.end(),
                  [](const UserCoverage& c) { return c.exact(); });
  return report;
}

DecodabilityReport verify_plan(const DeliveryPlan& plan) {
  return verify_plan(plan, plan.placement, plan.demands);
}

int verify_dof_accounting(const DeliveryPlan& plan) {
  if (plan.transmissions.empty()) return 0;
  int best = std::numeric_limits<int>::max();
  for (const auto& tx : plan.transmissions) {
    std::set<StreamId> served;
    for (const auto& term : tx.terms) {
      for (const auto& s : term.served_streams()) served.insert(s);
    }
    best = std::min(best, static_cast<int>(served.size()));
  }
  return best;
}

}  // namespace mimocc
