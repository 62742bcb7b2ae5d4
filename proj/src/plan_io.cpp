#include "mimocc/plan_io.hpp"

#include <algorithm>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "mimocc/error.hpp"

namespace mimocc {

using nlohmann::json;

namespace {

constexpr const char* kPlanFormat = "mimocc-plan/1";
constexpr const char* kBaselineFormat = "mimocc-baseline/1";

template <typename Fn>
auto guarded(const char* what, Fn&& fn) {
  try {
    return fn();
  } catch (const json::exception& e) {
    throw Error(ErrorCode::parse_error, std::string(what) + ": " + e.what());
  }
}

UserSet user_set_from_json(const json& j, const char* field) {
  UserSet s;
  if (j.is_number_integer()) {
    s.push_back(j.get<int>());
  } else {
    s = j.get<UserSet>();
  }
  if (!std::is_sorted(s.begin(), s.end()) || std::adjacent_find(s.begin(), s.end()) != s.end()) {
    throw Error(ErrorCode::parse_error,
                std::string(field) + " " + to_string(s) + " must be strictly increasing");
  }
  return s;
}

json subpacket_to_json(const SubpacketId& sp) {
  return json{{"owner", sp.owner}, {"P", sp.cache_set}, {"q", sp.part}, {"g", sp.stream}};
}

SubpacketId subpacket_from_json(const json& j) {
  return SubpacketId{j.at("owner").get<int>(), user_set_from_json(j.at("P"), "P"),
                     j.at("q").get<int>(), j.at("g").get<int>()};
}

json stream_to_json(const StreamId& s) { return json::array({s.user, s.stream}); }

StreamId stream_from_json(const json& j) {
  if (!j.is_array() || j.size() != 2) {
    throw Error(ErrorCode::parse_error, "stream must be a [user, stream] pair, got " + j.dump());
  }
  return {j[0].get<int>(), j[1].get<int>()};
}

void check_stream(const StreamId& s, const NetworkConfig& c, const std::string& where) {
  if (s.user < 1 || s.user > c.users || s.stream < 1 || s.stream > c.rx_multiplexing) {
    throw Error(ErrorCode::parse_error, where + ": stream " + to_string(s) + " outside the network");
  }
}

void check_subpacket(const SubpacketId& sp, const DeliveryPlan& plan, const std::string& where) {
  const auto& c = plan.config;
  if (sp.owner < 1 || sp.owner > c.users) {
    throw Error(ErrorCode::parse_error, where + ": owner " + std::to_string(sp.owner) + " out of range");
  }
  if (sp.part < 1 || sp.part > plan.split_count) {
    throw Error(ErrorCode::parse_error, where + ": part index " + std::to_string(sp.part) + " out of range");
  }
  if (sp.stream < 1 || sp.stream > plan.stream_split) {
    throw Error(ErrorCode::parse_error, where + ": stream index " + std::to_string(sp.stream) + " out of range");
  }
  for (int u : sp.cache_set) {
    if (u < 1 || u > c.users) throw Error(ErrorCode::parse_error, where + ": cache set names unknown user");
  }
}

}  // namespace

json config_to_json(const NetworkConfig& c) {
  return json{{"users", c.users},
              {"caching_gain", c.caching_gain},
              {"tx_multiplexing", c.tx_multiplexing},
              {"rx_multiplexing", c.rx_multiplexing},
              {"library_size", c.library_size},
              {"tx_antennas", c.tx_antennas},
              {"rx_antennas", c.rx_antennas}};
}

NetworkConfig config_from_json(const json& j) {
  return guarded("config", [&] {
    NetworkConfig c;
    c.users = j.at("users").get<int>();
    c.caching_gain = j.at("caching_gain").get<int>();
    c.tx_multiplexing = j.at("tx_multiplexing").get<int>();
    c.rx_multiplexing = j.at("rx_multiplexing").get<int>();
    c.library_size = j.value("library_size", c.users);
    c.tx_antennas = j.value("tx_antennas", c.tx_multiplexing);
    c.rx_antennas = j.value("rx_antennas", c.rx_multiplexing);
    validate(c);
    return c;
  });
}

json plan_to_json(const DeliveryPlan& plan) {
  json txs = json::array();
  for (const auto& tx : plan.transmissions) {
    json terms = json::array();
    for (const auto& term : tx.terms) {
      json payload;
      if (const auto* sp = std::get_if<SubpacketId>(&term.payload)) {
        payload = subpacket_to_json(*sp);
      } else {
        const auto& cw = std::get<CodewordId>(term.payload);
        json parts = json::array();
        for (const auto& c : cw.components) parts.push_back(subpacket_to_json(c));
        payload = json{{"T", cw.target_set}, {"g", cw.stream}, {"xor", parts}};
      }
      json zf = json::array();
      for (const auto& s : term.zf_set) zf.push_back(stream_to_json(s));
      terms.push_back(json{{"payload", payload}, {"zf_set", zf}});
    }
    txs.push_back(json{{"index", tx.schedule_index}, {"serving_set", tx.serving_set}, {"terms", terms}});
  }
  return json{{"format", kPlanFormat},
              {"config", config_to_json(plan.config)},
              {"mode", to_string(plan.mode)},
              {"demands", plan.demands},
              {"split_count", plan.split_count},
              {"stream_split", plan.stream_split},
              {"packets", plan.placement.packets},
              {"transmissions", txs}};
}

DeliveryPlan plan_from_json(const json& j) {
  return guarded("plan", [&] {
    if (!j.is_object()) throw Error(ErrorCode::parse_error, "plan document must be a JSON object");
    if (j.value("format", std::string(kPlanFormat)) != kPlanFormat) {
      throw Error(ErrorCode::parse_error, "unsupported plan format '" + j.at("format").get<std::string>() + "'");
    }
    DeliveryPlan plan;
    plan.config = config_from_json(j.at("config"));
    plan.mode = parse_plan_mode(j.at("mode").get<std::string>());
    plan.demands = j.at("demands").get<std::vector<int>>();
    try {
      check_demands(plan.config, plan.demands);
    } catch (const Error& e) {
      throw Error(ErrorCode::parse_error, e.what());
    }
    plan.split_count = j.at("split_count").get<int>();
    plan.stream_split = j.at("stream_split").get<int>();
    if (plan.split_count < 1 || plan.stream_split != plan.config.rx_multiplexing) {
      throw Error(ErrorCode::parse_error, "split_count / stream_split inconsistent with config");
    }
    std::vector<UserSet> packets;
    for (const auto& p : j.at("packets")) packets.push_back(user_set_from_json(p, "packet"));
    plan.placement = build_placement(plan.config.users, plan.config.library_size, std::move(packets));

    for (const auto& jt : j.at("transmissions")) {
      TransmissionVector tx;
      tx.schedule_index = jt.at("index").get<int>();
      tx.serving_set = user_set_from_json(jt.at("serving_set"), "serving_set");
      const std::string where = "transmission " + std::to_string(tx.schedule_index);
      for (const auto& jterm : jt.at("terms")) {
        TransmissionTerm term;
        const json& jp = jterm.at("payload");
        if (jp.contains("xor")) {
          CodewordId cw;
          cw.target_set = user_set_from_json(jp.at("T"), "T");
          cw.stream = jp.at("g").get<int>();
          for (const auto& c : jp.at("xor")) {
            cw.components.push_back(subpacket_from_json(c));
            check_subpacket(cw.components.back(), plan, where);
          }
          if (cw.components.empty()) throw Error(ErrorCode::parse_error, where + ": empty codeword");
          term.payload = std::move(cw);
        } else {
          auto sp = subpacket_from_json(jp);
          check_subpacket(sp, plan, where);
          term.payload = std::move(sp);
        }
        for (const auto& s : jterm.at("zf_set")) {
          term.zf_set.push_back(stream_from_json(s));
          check_stream(term.zf_set.back(), plan.config, where);
        }
        if (!std::is_sorted(term.zf_set.begin(), term.zf_set.end()) ||
            std::adjacent_find(term.zf_set.begin(), term.zf_set.end()) != term.zf_set.end()) {
          throw Error(ErrorCode::parse_error, where + ": zf_set must be sorted and distinct");
        }
        tx.terms.push_back(std::move(term));
      }
      plan.transmissions.push_back(std::move(tx));
    }
    return plan;
  });
}

std::string export_plan(const DeliveryPlan& plan) { return plan_to_json(plan).dump(1) + "\n"; }

DeliveryPlan import_plan(std::string_view text) {
  return guarded("plan", [&] { return plan_from_json(json::parse(text)); });
}

json baseline_to_json(const BaselineMisoPlan& b) {
  json txs = json::array();
  for (const auto& tx : b.transmissions) {
    json terms = json::array();
    for (const auto& t : tx.terms) {
      terms.push_back(json{{"subpacket", json{{"owner", t.owner}, {"p", t.packet}, {"q", t.part}}},
                           {"zf_users", t.zf_users}});
    }
    txs.push_back(json{{"terms", terms}});
  }
  return json{{"format", kBaselineFormat},
              {"virtual", json{{"users", b.users}, {"caching_gain", b.caching_gain},
                               {"multiplexing", b.multiplexing}}},
              {"split_count", b.split_count},
              {"packets", b.packets},
              {"transmissions", txs}};
}

BaselineMisoPlan baseline_from_json(const json& j) {
  return guarded("baseline", [&] {
    if (!j.is_object()) throw Error(ErrorCode::parse_error, "baseline document must be a JSON object");
    BaselineMisoPlan b;
    const json& v = j.at("virtual");
    b.users = v.at("users").get<int>();
    b.caching_gain = v.at("caching_gain").get<int>();
    b.multiplexing = v.at("multiplexing").get<int>();
    b.split_count = j.at("split_count").get<int>();
    if (j.contains("packets")) {
      for (const auto& p : j.at("packets")) b.packets.push_back(user_set_from_json(p, "packet"));
    } else if (b.users > 0 && b.caching_gain >= 0 && b.caching_gain <= b.users) {
      b.packets = enumerate_subsets(b.users, b.caching_gain);
    }
    for (const auto& jt : j.at("transmissions")) {
      BaselineTransmission tx;
      for (const auto& jterm : jt.at("terms")) {
        const json& sp = jterm.at("subpacket");
        tx.terms.push_back(BaselineTerm{sp.at("owner").get<int>(), user_set_from_json(sp.at("p"), "p"),
                                        sp.at("q").get<int>(),
                                        user_set_from_json(jterm.at("zf_users"), "zf_users")});
      }
      b.transmissions.push_back(std::move(tx));
    }
    return b;
  });
}

std::string export_baseline(const BaselineMisoPlan& b) { return baseline_to_json(b).dump(1) + "\n"; }

BaselineMisoPlan import_baseline(std::string_view text) {
  return guarded("baseline", [&] { return baseline_from_json(json::parse(text)); });
}

json placement_to_json(const CachePlacement& p) {
  json caches = json::array();
  for (const auto& cache : p.caches) {
    json entries = json::array();
    for (const auto& e : cache) entries.push_back(json{{"file", e.file}, {"P", e.cache_set}});
    caches.push_back(entries);
  }
  return json{{"users", p.users}, {"files", p.files}, {"packets", p.packets}, {"caches", caches}};
}

CachePlacement placement_from_json(const json& j) {
  return guarded("placement", [&] {
    CachePlacement p;
    p.users = j.at("users").get<int>();
    p.files = j.at("files").get<int>();
    for (const auto& pk : j.at("packets")) p.packets.push_back(user_set_from_json(pk, "packet"));
    for (const auto& cache : j.at("caches")) {
      std::set<CachedSubfile> entries;
      for (const auto& e : cache) {
        entries.insert({e.at("file").get<int>(), user_set_from_json(e.at("P"), "P")});
      }
      p.caches.push_back(std::move(entries));
    }
    if (static_cast<int>(p.caches.size()) != p.users) {
      throw Error(ErrorCode::parse_error, "placement lists " + std::to_string(p.caches.size()) +
                                              " caches for " + std::to_string(p.users) + " users");
    }
    return p;
  });
}

json report_to_json(const DecodabilityReport& report, const DeliveryPlan& plan) {
  std::map<int, const TransmissionVector*> by_index;
  for (const auto& tx : plan.transmissions) by_index[tx.schedule_index] = &tx;
  auto names = [&](int tx, const std::vector<std::size_t>& idx) {
    json out = json::array();
    const auto* t = by_index.at(tx);
    for (auto i : idx) out.push_back(json{{"term", i}, {"name", to_string(t->terms[i])}});
    return out;
  };
  json streams = json::array();
  for (const auto& s : report.streams) {
    streams.push_back(json{{"transmission", s.transmission},
                           {"stream", stream_to_json(s.stream)},
                           {"served", names(s.transmission, s.served)},
                           {"zf_suppressed", s.zf_suppressed},
                           {"cache_removed", s.cache_removed},
                           {"unresolved", names(s.transmission, s.unresolved)},
                           {"unstrippable", names(s.transmission, s.unstrippable)}});
  }
  json coverage = json::array();
  for (const auto& c : report.coverage) {
    coverage.push_back(json{{"user", c.user},
                            {"demanded", c.demanded},
                            {"recovered", c.recovered},
                            {"duplicates", c.duplicates},
                            {"extraneous", c.extraneous},
                            {"fraction", c.fraction()}});
  }
  return json{{"verdict", report.pass ? "pass" : "fail"},
              {"unresolved_terms", report.unresolved_count()},
              {"streams", streams},
              {"coverage", coverage}};
}

std::string report_table(const DecodabilityReport& report, const DeliveryPlan& plan) {
  std::map<int, const TransmissionVector*> by_index;
  for (const auto& tx : plan.transmissions) by_index[tx.schedule_index] = &tx;
  std::ostringstream os;
  os << "verdict: " << (report.pass ? "PASS" : "FAIL") << "  (mode " << to_string(plan.mode)
     << ", " << plan.transmissions.size() << " transmissions, " << report.streams.size()
     << " served streams)\n\n";
  os << std::left << std::setw(6) << "user" << std::setw(10) << "demanded" << std::setw(11)
     << "recovered" << std::setw(11) << "duplicate" << std::setw(11) << "extraneous"
     << "coverage\n";
  for (const auto& c : report.coverage) {
    os << std::left << std::setw(6) << c.user << std::setw(10) << c.demanded << std::setw(11)
       << c.recovered << std::setw(11) << c.duplicates << std::setw(11) << c.extraneous
       << std::fixed << std::setprecision(1) << 100.0 * c.fraction() << "%\n";
  }
  std::size_t shown = 0;
  for (const auto& s : report.streams) {
    if (s.resolved()) continue;
    if (shown++ == 0) os << "\nunresolved:\n";
    const auto* tx = by_index.at(s.transmission);
    for (auto i : s.unresolved) {
      os << "  tx " << s.transmission << " stream " << to_string(s.stream) << ": interference from "
         << to_string(tx->terms[i]) << '\n';
    }
    for (auto i : s.unstrippable) {
      os << "  tx " << s.transmission << " stream " << to_string(s.stream) << ": cannot strip "
         << to_string(tx->terms[i]) << '\n';
    }
  }
  return os.str();
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::parse_error, "cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_text_file(const std::string& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::parse_error, "cannot write '" + path + "'");
  out << text;
}

}  // namespace mimocc
