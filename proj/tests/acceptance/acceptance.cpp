// Acceptance run: one PASS/FAIL line per criterion. Every tolerance, trial
// count and SNR grid is fixed below. Usage: mimocc_acceptance [AC1 ... AC8]
// (no arguments runs all of them). Exit status is 0 only if every selected
// criterion passes.

#include <boost/math/distributions/students_t.hpp>
#include <chrono>
#include <cstdio>
#include <functional>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "mimocc/evaluator.hpp"
#include "mimocc/fixtures.hpp"
#include "mimocc/plan_io.hpp"
#include "mimocc/verifier.hpp"
#include "support.hpp"

using namespace mimocc;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

std::string fmt(const char* pattern, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, pattern, args...);
  return buf;
}

// ---- AC1 ------------------------------------------------------------------

using TermTable = std::set<std::pair<std::string, std::vector<StreamId>>>;

TermTable table_of(const TransmissionVector& tx) {
  TermTable out;
  for (const auto& term : tx.terms) {
    out.insert({to_string(std::get<SubpacketId>(term.payload)), term.zf_set});
  }
  return out;
}

TermTable expected(std::initializer_list<std::pair<const char*, std::vector<StreamId>>> rows) {
  TermTable out;
  for (const auto& [name, zf] : rows) {
    auto sorted = zf;
    std::sort(sorted.begin(), sorted.end());
    out.insert({name, sorted});
  }
  return out;
}

Outcome ac1() {
  const auto start = std::chrono::steady_clock::now();
  const auto baseline = import_baseline(read_text_file(MIMOCC_FIXTURE_DIR "/k6_baseline.json"));
  const auto plan = elevate_baseline(baseline, 2);
  const TermTable x1 = expected({{"A_{2}^{1,1}", {{3, 1}, {3, 2}, {1, 2}}},
                                 {"A_{2}^{1,2}", {{3, 1}, {3, 2}, {1, 1}}},
                                 {"B_{1}^{1,1}", {{3, 1}, {3, 2}, {2, 2}}},
                                 {"B_{1}^{1,2}", {{3, 1}, {3, 2}, {2, 1}}},
                                 {"C_{1}^{1,1}", {{2, 1}, {2, 2}, {3, 2}}},
                                 {"C_{1}^{1,2}", {{2, 1}, {2, 2}, {3, 1}}}});
  const TermTable x2 = expected({{"A_{3}^{1,1}", {{4, 1}, {4, 2}, {1, 2}}},
                                 {"A_{3}^{1,2}", {{4, 1}, {4, 2}, {1, 1}}},
                                 {"C_{1}^{2,1}", {{4, 1}, {4, 2}, {3, 2}}},
                                 {"C_{1}^{2,2}", {{4, 1}, {4, 2}, {3, 1}}},
                                 {"D_{1}^{1,1}", {{3, 1}, {3, 2}, {4, 2}}},
                                 {"D_{1}^{1,2}", {{3, 1}, {3, 2}, {4, 1}}}});
  const bool x1_ok = plan.transmissions.size() >= 2 && plan.transmissions[0].terms.size() == 6 &&
                     table_of(plan.transmissions[0]) == x1;
  const bool x2_ok = plan.transmissions.size() >= 2 && plan.transmissions[1].terms.size() == 6 &&
                     table_of(plan.transmissions[1]) == x2;
  const auto s_count =
      count_subpacketization(make_config(6, 1, 4, 2), SubpacketizationBaseline::low_subpacketization);
  const auto s_plan = plan_subpacketization(plan);
  const double elapsed = seconds_since(start);
  return {x1_ok && x2_ok && s_count == 36 && s_plan == 36 && elapsed < 1.0,
          fmt("x(1) %s, x(2) %s, subpacketization %llu (plan %llu), %.3f s < 1 s",
              x1_ok ? "exact" : "MISMATCH", x2_ok ? "exact" : "MISMATCH",
              static_cast<unsigned long long>(s_count), static_cast<unsigned long long>(s_plan),
              elapsed)};
}

// ---- AC2 ------------------------------------------------------------------

// Every single-element removal from every zf_set must leave some stream of
// that transmission unresolved. Only the mutated transmission can change,
// and coverage does not depend on zf sets, so checking it alone decides
// the verdict of the mutated plan.
bool mutations_flip(const DeliveryPlan& plan, std::size_t& count) {
  for (const auto& tx : plan.transmissions) {
    for (std::size_t i = 0; i < tx.terms.size(); ++i) {
      for (std::size_t z = 0; z < tx.terms[i].zf_set.size(); ++z) {
        auto mutated = tx;
        auto& zf = mutated.terms[i].zf_set;
        zf.erase(zf.begin() + static_cast<std::ptrdiff_t>(z));
        const auto accounts = verify_transmission(mutated, plan.placement, plan.demands);
        const bool flipped = std::any_of(accounts.begin(), accounts.end(),
                                         [](const StreamAccount& a) { return !a.resolved(); });
        ++count;
        if (!flipped) return false;
      }
    }
  }
  return true;
}

Outcome ac2() {
  const auto start = std::chrono::steady_clock::now();
  std::size_t plans = 0, mutations = 0, failures = 0;
  std::string first_failure;
  auto check = [&](const DeliveryPlan& plan, const std::string& label) {
    ++plans;
    const auto report = verify_plan(plan);
    const bool exact = std::all_of(report.coverage.begin(), report.coverage.end(),
                                   [](const UserCoverage& c) { return c.exact(); });
    if (!report.pass || !exact || !mutations_flip(plan, mutations)) {
      if (failures++ == 0) first_failure = label;
    }
  };
  for (int k = 2; k <= 8; ++k) {
    for (int t = 1; t <= 2; ++t) {
      for (int g = 1; g <= 3; ++g) {
        for (int eta = 1; eta <= 2; ++eta) {
          if (t + eta > k) continue;
          const auto cfg = make_config(k, t, eta * g, g);
          const std::string label = fmt("K=%d t=%d G=%d eta=%d", k, t, g, eta);
          check(build_unicast_plan(cfg), label + " unicast");
          check(build_multicast_plan(cfg), label + " multicast");
          check(elevate_baseline(build_combinatorial_baseline(k, t, eta), g), label + " elevated");
          if (t == 1 && eta == 2 && k >= 3) {
            check(elevate_baseline(build_cyclic_baseline(k), g), label + " elevated-cyclic");
          }
        }
      }
    }
  }
  const double elapsed = seconds_since(start);
  return {failures == 0 && elapsed < 60.0,
          fmt("%zu plans verified, %zu zf mutations all flipped%s%s, %.1f s < 60 s", plans,
              mutations, failures ? "; FIRST FAILURE " : "", first_failure.c_str(), elapsed)};
}

// ---- AC3 ------------------------------------------------------------------

Outcome ac3() {
  const auto start = std::chrono::steady_clock::now();
  SimulationParams p;
  p.config = make_config(4, 1, 2, 2);
  p.snr_points_db = {30, 35, 40};
  p.trials = 200;
  p.strategy = Strategy::zf;
  const auto report = run_sweep(p);
  const double uni = estimate_dof_slope(report, SimMode::mimo_unicast, Strategy::zf, 30, 40);
  const double multi = estimate_dof_slope(report, SimMode::mimo_multicast, Strategy::zf, 30, 40);
  const double virt = estimate_dof_slope(report, SimMode::virtual_miso, Strategy::zf, 30, 40);
  const double mimo_target = 4.0;  // Gt + L
  const double miso_target = 3.0;  // t + L
  const bool ok = std::abs(uni - mimo_target) <= 0.1 * mimo_target &&
                  std::abs(multi - mimo_target) <= 0.1 * mimo_target &&
                  std::abs(virt - miso_target) <= 0.1 * miso_target;
  const double elapsed = seconds_since(start);
  return {ok && elapsed < 300.0,
          fmt("slopes 30-40 dB: mimo-unicast %.3f, mimo-multicast %.3f (target 4 +-10%%), "
              "virtual-miso %.3f (target 3 +-10%%), %.1f s < 300 s",
              uni, multi, virt, elapsed)};
}

// ---- AC4 ------------------------------------------------------------------

Outcome ac4() {
  const auto start = std::chrono::steady_clock::now();
  SimulationParams p;
  p.config = make_config(8, 1, 2, 2);
  p.snr_points_db = {5, 10};
  p.trials = 100;
  p.modes = {SimMode::mimo_unicast, SimMode::mimo_multicast};
  p.strategy = Strategy::optimized;
  const auto report = run_sweep(p);
  bool ok = true;
  std::string detail;
  for (double snr : p.snr_points_db) {
    const auto& u = report.at(SimMode::mimo_unicast, Strategy::optimized, snr);
    const auto& m = report.at(SimMode::mimo_multicast, Strategy::optimized, snr);
    std::vector<double> diff;
    for (std::size_t i = 0; i < u.raw.size(); ++i) diff.push_back(m.raw[i] - u.raw[i]);
    const double n = static_cast<double>(diff.size());
    const double mean = compensated_sum(diff) / n;
    std::vector<double> sq;
    for (double d : diff) sq.push_back((d - mean) * (d - mean));
    const double sd = std::sqrt(compensated_sum(sq) / (n - 1.0));
    const double t_stat = sd > 0.0 ? mean / (sd / std::sqrt(n)) : (mean > 0.0 ? 1e300 : -1e300);
    const boost::math::students_t dist(n - 1.0);
    const double p_value = boost::math::cdf(boost::math::complement(dist, std::min(t_stat, 1e300)));
    const bool here = m.mean_rate > u.mean_rate && p_value < 0.05;
    ok = ok && here;
    detail += fmt("%g dB multicast %.4f vs unicast %.4f (paired t %.2f, p %.2g); ", snr,
                  m.mean_rate, u.mean_rate, t_stat, p_value);
  }
  const double elapsed = seconds_since(start);
  return {ok && elapsed < 1800.0, detail + fmt("one-sided alpha 0.05, %.1f s < 1800 s", elapsed)};
}

// ---- AC5 ------------------------------------------------------------------

Outcome ac5() {
  const auto start = std::chrono::steady_clock::now();
  SimulationParams p;
  p.config = make_config(8, 1, 2, 2);
  p.snr_points_db = {0, 5, 10, 15, 20, 25, 30};
  p.trials = 100;
  p.modes = {SimMode::mimo_multicast, SimMode::virtual_miso};
  p.strategy = Strategy::optimized;
  const auto report = run_sweep(p);
  bool dominates = true;
  std::string detail;
  std::map<double, double> gap;
  for (double snr : p.snr_points_db) {
    const double m = report.at(SimMode::mimo_multicast, Strategy::optimized, snr).mean_rate;
    const double v = report.at(SimMode::virtual_miso, Strategy::optimized, snr).mean_rate;
    gap[snr] = m - v;
    dominates = dominates && m >= v;
    detail += fmt("%g dB %.3f/%.3f%s; ", snr, m, v, m >= v ? "" : " (BELOW)");
  }
  const bool widening = gap[30] > gap[5];
  const double elapsed = seconds_since(start);
  return {dominates && widening && elapsed < 1800.0,
          "mimo-multicast/virtual-miso " + detail +
              fmt("gap 30 dB %.3f vs 5 dB %.3f, %.1f s < 1800 s", gap[30], gap[5], elapsed)};
}

// ---- AC6 ------------------------------------------------------------------

Outcome ac6() {
  const auto start = std::chrono::steady_clock::now();
  const auto cfg = make_config(2, 1, 2, 2);
  const DeliveryPlan plans[2] = {build_unicast_plan(cfg), build_multicast_plan(cfg)};
  int good = 0;
  const int instances = 50;
  double worst_gain = std::numeric_limits<double>::infinity();
  for (int i = 0; i < instances; ++i) {
    const auto& plan = plans[i % 2];
    OptProblem p;
    p.mode = i % 2 == 0 ? LinkMode::unicast : LinkMode::multicast;
    p.transmission = plan.transmissions.front();
    p.channels = generate_channel(cfg, 2024, static_cast<std::uint64_t>(i)).users;
    p.power_budget = power_from_snr_db(-5.0 + 2.5 * (i % 15));  // -5 .. 30 dB
    const auto zf = design_zf(p.transmission, p.channels, p.mode, p.power_budget);
    const double zf_value = evaluate_objective(zf, p).min_rate;
    const auto res = optimize_beamformers(p, zf);
    bool monotone = true;
    for (std::size_t j = 1; j < res.trace.size(); ++j) monotone = monotone && res.trace[j] >= res.trace[j - 1];
    const bool power_ok = res.beamformers.total_power() <= p.power_budget * (1.0 + 1e-9);
    const double final_value = evaluate_objective(res.beamformers, p).min_rate;
    worst_gain = std::min(worst_gain, final_value - zf_value);
    if (monotone && power_ok && final_value >= zf_value) ++good;
  }
  const double elapsed = seconds_since(start);
  return {good == instances && elapsed < 120.0,
          fmt("%d/%d instances monotone, within P_T(1+1e-9) and >= ZF (smallest gain %.3g), "
              "%.1f s < 120 s",
              good, instances, worst_gain, elapsed)};
}

// ---- AC7 ------------------------------------------------------------------

Outcome ac7() {
  const auto start = std::chrono::steady_clock::now();
  const auto grid = testsupport::config_grid(6, 2, 3, {1});
  std::mt19937_64 rng(4242);
  double worst = 0.0;
  int instances = 0;
  for (int i = 0; i < 100; ++i) {
    const auto& cfg = grid[static_cast<std::size_t>(i) % grid.size()];
    const bool multicast = i % 2 == 1;
    const auto plan = multicast ? build_multicast_plan(cfg) : build_unicast_plan(cfg);
    const auto& tx = plan.transmissions[static_cast<std::size_t>(i) % plan.transmissions.size()];
    const auto ch = generate_channel(cfg, 77, static_cast<std::uint64_t>(i));
    const LinkMode mode = multicast ? LinkMode::multicast : LinkMode::unicast;
    auto bf = design_zf(tx, ch.users, mode, power_from_snr_db(10.0));
    // Random transmit vectors so the residual interference is not zero.
    for (auto& w : bf.transmit) w = testsupport::random_vector(rng, w.size());
    const auto got = compute_sinrs(tx, bf, 1.0, mode);
    const auto ref = testsupport::signal_level_sinrs(tx, ch.users, bf, plan.placement, plan.demands, 1.0);
    if (got.size() != ref.size()) return {false, fmt("instance %d: stream sets differ", i)};
    for (const auto& [s, v] : ref) worst = std::max(worst, std::abs(got.at(s) - v) / std::max(v, 1e-300));
    ++instances;
  }
  const double elapsed = seconds_since(start);
  return {worst <= 1e-12 && elapsed < 60.0,
          fmt("%d instances (unicast and multicast, eta=1), worst relative error %.2e <= 1e-12, "
              "%.2f s < 60 s",
              instances, worst, elapsed)};
}

// ---- AC8 ------------------------------------------------------------------

Outcome ac8() {
  const auto start = std::chrono::steady_clock::now();
  int configs = 0;
  std::string failure;
  auto require = [&](bool ok, const std::string& what) {
    if (!ok && failure.empty()) failure = what;
  };
  for (int k = 2; k <= 8; ++k) {
    for (int t = 1; t < k; ++t) {
      for (int eta = 1; t + eta <= k; ++eta) {
        for (int g = 1; g <= 3; ++g) {
          const auto cfg = make_config(k, t, eta * g, g);
          const int l = cfg.tx_multiplexing;
          const std::string label = fmt("K=%d t=%d L=%d G=%d", k, t, l, g);
          ++configs;
          const auto uni = build_unicast_plan(cfg);
          const auto multi = build_multicast_plan(cfg);
          const auto n_tx = binomial(k, t + eta);
          require(uni.transmissions.size() == n_tx && multi.transmissions.size() == n_tx,
                  label + " transmission count");
          const auto uni_terms = static_cast<std::size_t>(g * (t + 1)) * binomial(t + eta, t + 1);
          const auto multi_terms = static_cast<std::size_t>(g) * binomial(t + eta, t + 1);
          for (const auto& tx : uni.transmissions) {
            require(tx.terms.size() == uni_terms, label + " unicast terms");
            for (const auto& term : tx.terms) {
              require(static_cast<int>(term.zf_set.size()) == l - 1, label + " unicast zf size");
            }
          }
          for (const auto& tx : multi.transmissions) {
            require(tx.terms.size() == multi_terms, label + " multicast terms");
          }
          const auto expected_s = static_cast<std::uint64_t>(g) * binomial(k, t) *
                                  binomial(k - t - 1, eta - 1);
          require(plan_subpacketization(uni) == expected_s &&
                      plan_subpacketization(multi) == expected_s &&
                      count_subpacketization(cfg, SubpacketizationBaseline::combinatorial) == expected_s,
                  label + " subpacketization");
          const auto elevated = elevate_baseline(build_combinatorial_baseline(k, t, eta), g);
          for (const auto& tx : elevated.transmissions) {
            for (const auto& term : tx.terms) {
              require(static_cast<int>(term.zf_set.size()) == l - 1, label + " elevated zf size");
            }
          }
        }
      }
    }
  }
  const double elapsed = seconds_since(start);
  return {failure.empty() && elapsed < 10.0,
          fmt("%d configs, transmissions, terms, subpacketization and zf sizes %s, %.2f s < 10 s",
              configs, failure.empty() ? "exact" : ("MISMATCH at " + failure).c_str(), elapsed)};
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"AC1", ac1}, {"AC2", ac2}, {"AC3", ac3}, {"AC4", ac4},
      {"AC5", ac5}, {"AC6", ac6}, {"AC7", ac7}, {"AC8", ac8}};
  std::set<std::string> selected(argv + 1, argv + argc);
  for (const auto& name : selected) {
    if (std::none_of(criteria.begin(), criteria.end(), [&](const auto& c) { return c.first == name; })) {
      std::fprintf(stderr, "unknown criterion '%s' (expected AC1..AC8)\n", name.c_str());
      return 2;
    }
  }
  bool all = true;
  for (const auto& [name, fn] : criteria) {
    if (!selected.empty() && !selected.contains(name)) continue;
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    all = all && o.pass;
    std::printf("[%s] %s: %s\n", o.pass ? "PASS" : "FAIL", name.c_str(), o.detail.c_str());
    std::fflush(stdout);
  }
  return all ? 0 : 1;
}
