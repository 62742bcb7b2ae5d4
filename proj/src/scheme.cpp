#include "mimocc/scheme.hpp"

#include <algorithm>
#include <map>

#include "mimocc/error.hpp"

namespace mimocc {

bool CachePlacement::has(int user, int file, const UserSet& cache_set) const {
  if (user < 1 || user > users) return false;
  return caches[user - 1].contains(CachedSubfile{file, cache_set});
}

double CachePlacement::cached_fraction(int user) const {
  if (user < 1 || user > users || packets.empty() || files == 0) return 0.0;
  return static_cast<double>(caches[user - 1].size()) /
         (static_cast<double>(files) * static_cast<double>(packets.size()));
}

CachePlacement build_placement(int users, int files, std::vector<UserSet> packets) {
  CachePlacement p;
  p.users = users;
  p.files = files;
  p.packets = std::move(packets);
  p.caches.resize(users);
  for (const auto& packet : p.packets) {
    for (int k : packet) {
      if (k < 1 || k > users) {
        throw Error(ErrorCode::out_of_range, "packet " + to_string(packet) + " names user " +
                                                 std::to_string(k) + " outside [1," +
                                                 std::to_string(users) + "]");
      }
      for (int f = 1; f <= files; ++f) p.caches[k - 1].insert({f, packet});
    }
  }
  return p;
}

CachePlacement build_placement(const NetworkConfig& config) {
  return build_placement(config.users, config.library_size,
                         enumerate_subsets(config.users, config.caching_gain));
}

std::vector<StreamId> TransmissionTerm::served_streams() const {
  if (const auto* sp = std::get_if<SubpacketId>(&payload)) return {{sp->owner, sp->stream}};
  const auto& cw = std::get<CodewordId>(payload);
  std::vector<StreamId> out;
  out.reserve(cw.components.size());
  for (const auto& c : cw.components) out.push_back({c.owner, c.stream});
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<SubpacketId> TransmissionTerm::subpackets() const {
  if (const auto* sp = std::get_if<SubpacketId>(&payload)) return {*sp};
  return std::get<CodewordId>(payload).components;
}

std::string to_string(const TransmissionTerm& term) {
  std::string zf;
  for (std::size_t i = 0; i < term.zf_set.size(); ++i) zf += (i ? "," : "") + to_string(term.zf_set[i]);
  const std::string payload = std::visit([](const auto& p) { return to_string(p); }, term.payload);
  return payload + " w[" + zf + "]";
}

std::string to_string(PlanMode mode) {
  switch (mode) {
    case PlanMode::unicast: return "unicast";
    case PlanMode::multicast: return "multicast";
    case PlanMode::elevated: return "elevated";
  }
  return "unknown";
}

PlanMode parse_plan_mode(const std::string& text) {
  if (text == "unicast") return PlanMode::unicast;
  if (text == "multicast") return PlanMode::multicast;
  if (text == "elevated") return PlanMode::elevated;
  throw Error(ErrorCode::parse_error, "unknown plan mode '" + text + "'");
}

std::vector<int> default_demands(const NetworkConfig& config) {
  std::vector<int> d(config.users);
  for (int k = 1; k <= config.users; ++k) d[k - 1] = (k - 1) % config.library_size + 1;
  return d;
}

void check_demands(const NetworkConfig& config, const std::vector<int>& demands) {
  if (static_cast<int>(demands.size()) != config.users) {
    throw Error(ErrorCode::invalid_demand, "expected " + std::to_string(config.users) +
                                               " demands, got " + std::to_string(demands.size()));
  }
  for (std::size_t k = 0; k < demands.size(); ++k) {
    if (demands[k] < 1 || demands[k] > config.library_size) {
      throw Error(ErrorCode::invalid_demand, "user " + std::to_string(k + 1) + " requests file " +
                                                 std::to_string(demands[k]) + " outside [1," +
                                                 std::to_string(config.library_size) + "]");
    }
  }
}

int combinatorial_split_count(const NetworkConfig& config) {
  return static_cast<int>(
      binomial(config.users - config.caching_gain - 1, config.eta() - 1));
}

int part_index(const UserSet& serving_set, int owner, const UserSet& cache_set, int users) {
  UserSet fixed = set_union(cache_set, UserSet{owner});
  if (!is_subset(fixed, serving_set)) {
    throw Error(ErrorCode::out_of_range, "serving set " + to_string(serving_set) +
                                             " does not contain " + to_string(fixed));
  }
  // Lex order of supersets of `fixed` equals lex order of their extra
  // elements, relabelled inside the complement of `fixed`.
  UserSet complement;
  for (int u = 1; u <= users; ++u) {
    if (!contains(fixed, u)) complement.push_back(u);
  }
  UserSet extras;
  for (int u : set_difference(serving_set, fixed)) {
    const auto it = std::lower_bound(complement.begin(), complement.end(), u);
    extras.push_back(static_cast<int>(it - complement.begin()) + 1);
  }
  return static_cast<int>(subset_rank(extras, static_cast<int>(complement.size()))) + 1;
}

std::vector<StreamId> unicast_zf_set(const UserSet& serving_set, const UserSet& target_set,
                                     int owner, int stream, int rx_multiplexing) {
  std::vector<StreamId> out;
  for (int u : set_difference(serving_set, target_set)) {
    for (int g = 1; g <= rx_multiplexing; ++g) out.push_back({u, g});
  }
  for (int g = 1; g <= rx_multiplexing; ++g) {
    if (g != stream) out.push_back({owner, g});
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<StreamId> multicast_zf_set(const UserSet& serving_set, const UserSet& target_set,
                                       int stream, int rx_multiplexing) {
  std::vector<StreamId> out;
  for (int u : serving_set) {
    const bool in_target = contains(target_set, u);
    for (int g = 1; g <= rx_multiplexing; ++g) {
      if (!in_target || g != stream) out.push_back({u, g});
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

namespace {

DeliveryPlan empty_plan(const NetworkConfig& config, PlanMode mode, std::vector<int> demands) {
  validate(config);
  if (demands.empty()) demands = default_demands(config);
  check_demands(config, demands);
  DeliveryPlan plan;
  plan.config = config;
  plan.mode = mode;
  plan.demands = std::move(demands);
  plan.placement = build_placement(config);
  plan.split_count = combinatorial_split_count(config);
  plan.stream_split = config.rx_multiplexing;
  return plan;
}

}  // namespace

DeliveryPlan build_unicast_plan(const NetworkConfig& config, std::vector<int> demands) {
  DeliveryPlan plan = empty_plan(config, PlanMode::unicast, std::move(demands));
  const int K = config.users;
  const int t = config.caching_gain;
  const int G = config.rx_multiplexing;
  int index = 0;
  for (const UserSet& serving : enumerate_subsets(K, t + config.eta())) {
    TransmissionVector tx;
    tx.serving_set = serving;
    tx.schedule_index = index++;
    for (const UserSet& local : enumerate_subsets(static_cast<int>(serving.size()), t + 1)) {
      UserSet target;
      for (int i : local) target.push_back(serving[i - 1]);
      for (int k : target) {
        const UserSet cache_set = set_difference(target, UserSet{k});
        const int q = part_index(serving, k, cache_set, K);
        for (int g = 1; g <= G; ++g) {
          tx.terms.push_back(TransmissionTerm{SubpacketId{k, cache_set, q, g},
                                              unicast_zf_set(serving, target, k, g, G)});
        }
      }
    }
    plan.transmissions.push_back(std::move(tx));
  }
  return plan;
}

DeliveryPlan build_multicast_plan(const NetworkConfig& config, std::vector<int> demands) {
  DeliveryPlan plan = empty_plan(config, PlanMode::multicast, std::move(demands));
  const int K = config.users;
  const int t = config.caching_gain;
  const int G = config.rx_multiplexing;
  int index = 0;
  for (const UserSet& serving : enumerate_subsets(K, t + config.eta())) {
    TransmissionVector tx;
    tx.serving_set = serving;
    tx.schedule_index = index++;
    for (const UserSet& local : enumerate_subsets(static_cast<int>(serving.size()), t + 1)) {
      UserSet target;
      for (int i : local) target.push_back(serving[i - 1]);
      for (int g = 1; g <= G; ++g) {
        CodewordId cw;
        cw.target_set = target;
        cw.stream = g;
        for (int k : target) {
          const UserSet cache_set = set_difference(target, UserSet{k});
          cw.components.push_back(SubpacketId{k, cache_set, part_index(serving, k, cache_set, K), g});
        }
        tx.terms.push_back(TransmissionTerm{std::move(cw), multicast_zf_set(serving, target, g, G)});
      }
    }
    plan.transmissions.push_back(std::move(tx));
  }
  return plan;
}

void validate_baseline(const BaselineMisoPlan& b) {
  auto fail = [](const std::string& what) { throw Error(ErrorCode::malformed_baseline, what); };
  if (b.users <= 0 || b.caching_gain <= 0 || b.multiplexing <= 0 || b.split_count <= 0) {
    fail("users, caching_gain, multiplexing and split_count must be positive");
  }
  if (b.caching_gain + b.multiplexing > b.users) fail("t + eta exceeds the number of users");
  std::set<UserSet> packets;
  for (const auto& p : b.packets) {
    if (static_cast<int>(p.size()) != b.caching_gain || !std::is_sorted(p.begin(), p.end()) ||
        std::adjacent_find(p.begin(), p.end()) != p.end() || p.front() < 1 || p.back() > b.users) {
      fail("packet " + to_string(p) + " is not a sorted t-subset of users");
    }
    if (!packets.insert(p).second) fail("duplicate packet " + to_string(p));
  }
  for (std::size_t i = 0; i < b.transmissions.size(); ++i) {
    const std::string where = "transmission " + std::to_string(i) + ": ";
    std::set<std::tuple<int, UserSet, int>> seen;
    for (const auto& term : b.transmissions[i].terms) {
      if (term.owner < 1 || term.owner > b.users) fail(where + "owner out of range");
      if (!packets.contains(term.packet)) fail(where + "unknown packet " + to_string(term.packet));
      if (contains(term.packet, term.owner)) {
        fail(where + "user " + std::to_string(term.owner) + " already caches packet " +
             to_string(term.packet));
      }
      if (term.part < 1 || term.part > b.split_count) fail(where + "part index out of range");
      if (static_cast<int>(term.zf_users.size()) != b.multiplexing - 1) {
        fail(where + "zero-forcing set " + to_string(term.zf_users) + " has size " +
             std::to_string(term.zf_users.size()) + ", expected eta-1 = " +
             std::to_string(b.multiplexing - 1));
      }
      if (!std::is_sorted(term.zf_users.begin(), term.zf_users.end()) ||
          std::adjacent_find(term.zf_users.begin(), term.zf_users.end()) != term.zf_users.end()) {
        fail(where + "zero-forcing set must be sorted and distinct");
      }
      for (int u : term.zf_users) {
        if (u < 1 || u > b.users || u == term.owner) fail(where + "invalid zero-forcing user");
      }
      if (!seen.emplace(term.owner, term.packet, term.part).second) {
        fail(where + "subpacket repeated within one transmission");
      }
    }
  }
}

BaselineMisoPlan build_combinatorial_baseline(int users, int caching_gain, int multiplexing) {
  BaselineMisoPlan b;
  b.users = users;
  b.caching_gain = caching_gain;
  b.multiplexing = multiplexing;
  b.split_count = static_cast<int>(binomial(users - caching_gain - 1, multiplexing - 1));
  b.packets = enumerate_subsets(users, caching_gain);
  for (const UserSet& serving : enumerate_subsets(users, caching_gain + multiplexing)) {
    BaselineTransmission tx;
    for (const UserSet& local : enumerate_subsets(static_cast<int>(serving.size()), caching_gain + 1)) {
      UserSet target;
      for (int i : local) target.push_back(serving[i - 1]);
      const UserSet zf = set_difference(serving, target);
      for (int k : target) {
        const UserSet packet = set_difference(target, UserSet{k});
        tx.terms.push_back({k, packet, part_index(serving, k, packet, users), zf});
      }
    }
    b.transmissions.push_back(std::move(tx));
  }
  validate_baseline(b);
  return b;
}

DeliveryPlan elevate_baseline(const BaselineMisoPlan& baseline, int rx_multiplexing,
                              std::vector<int> demands) {
  return elevate_baseline(baseline,
                          make_config(baseline.users, baseline.caching_gain,
                                      baseline.multiplexing * rx_multiplexing, rx_multiplexing),
                          std::move(demands));
}

DeliveryPlan elevate_baseline(const BaselineMisoPlan& baseline, const NetworkConfig& config,
                              std::vector<int> demands) {
  validate_baseline(baseline);
  validate(config);
  if (config.users != baseline.users || config.caching_gain != baseline.caching_gain ||
      config.eta() != baseline.multiplexing) {
    throw Error(ErrorCode::config_mismatch,
                "baseline (K=" + std::to_string(baseline.users) + ", t=" +
                    std::to_string(baseline.caching_gain) + ", eta=" +
                    std::to_string(baseline.multiplexing) + ") does not match the real network");
  }
  if (demands.empty()) demands = default_demands(config);
  check_demands(config, demands);

  const int G = config.rx_multiplexing;
  DeliveryPlan plan;
  plan.config = config;
  plan.mode = PlanMode::elevated;
  plan.demands = std::move(demands);
  plan.placement = build_placement(config.users, config.library_size, baseline.packets);
  plan.split_count = baseline.split_count;
  plan.stream_split = G;

  int index = 0;
  for (const auto& vtx : baseline.transmissions) {
    TransmissionVector tx;
    tx.schedule_index = index++;
    for (const auto& term : vtx.terms) {
      tx.serving_set = set_union(tx.serving_set, UserSet{term.owner});
      for (int g = 1; g <= G; ++g) {
        std::vector<StreamId> zf;
        for (int u : term.zf_users) {
          for (int gg = 1; gg <= G; ++gg) zf.push_back({u, gg});
        }
        for (int gg = 1; gg <= G; ++gg) {
          if (gg != g) zf.push_back({term.owner, gg});
        }
        std::sort(zf.begin(), zf.end());
        tx.terms.push_back(
            TransmissionTerm{SubpacketId{term.owner, term.packet, term.part, g}, std::move(zf)});
      }
    }
    plan.transmissions.push_back(std::move(tx));
  }
  return plan;
}

int count_dof(int caching_gain, int tx_multiplexing, int rx_multiplexing, DofMode mode) {
  if (mode == DofMode::virtual_miso) return caching_gain + tx_multiplexing;
  return rx_multiplexing * caching_gain + tx_multiplexing;
}

int count_dof(const NetworkConfig& config, DofMode mode) {
  return count_dof(config.caching_gain, config.tx_multiplexing, config.rx_multiplexing, mode);
}

std::uint64_t count_subpacketization(const NetworkConfig& config, SubpacketizationBaseline baseline) {
  validate(config);
  const std::uint64_t K = static_cast<std::uint64_t>(config.users);
  const int t = config.caching_gain;
  const int eta = config.eta();
  const std::uint64_t G = static_cast<std::uint64_t>(config.rx_multiplexing);
  if (baseline == SubpacketizationBaseline::low_subpacketization) {
    if (eta < t) {
      throw Error(ErrorCode::low_subpack_inapplicable,
                  "low-subpacketization baseline needs eta >= t (eta=" + std::to_string(eta) +
                      ", t=" + std::to_string(t) + ")");
    }
    return G * K * static_cast<std::uint64_t>(t + eta);
  }
  return G * binomial(config.users, t) * binomial(config.users - t - 1, eta - 1);
}

std::uint64_t plan_subpacketization(const DeliveryPlan& plan) {
  std::set<std::tuple<UserSet, int, int>> labels;
  for (const auto& tx : plan.transmissions) {
    for (const auto& term : tx.terms) {
      for (const auto& sp : term.subpackets()) labels.emplace(sp.cache_set, sp.part, sp.stream);
    }
  }
  return labels.size();
}

}  // namespace mimocc
