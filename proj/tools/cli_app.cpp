#include "cli_app.hpp"

#include <CLI11.hpp>
#include <cmath>
#include <cstdlib>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "mimocc/config_file.hpp"
#include "mimocc/error.hpp"
#include "mimocc/evaluator.hpp"
#include "mimocc/fixtures.hpp"
#include "mimocc/plan_io.hpp"
#include "mimocc/scheme.hpp"
#include "mimocc/verifier.hpp"

namespace mimocc::cli {

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(text);
  while (std::getline(in, item, sep)) out.push_back(item);
  return out;
}

double to_double(const std::string& s, const std::string& what) {
  std::size_t used = 0;
  double v = 0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (s.empty() || used != s.size() || !std::isfinite(v)) {
    throw UsageError("invalid number '" + s + "' in " + what);
  }
  return v;
}

std::vector<int> parse_demands(const std::string& text) {
  std::vector<int> out;
  for (const auto& item : split(text, ',')) {
    const double v = to_double(item, "--demands");
    if (v != std::floor(v)) throw UsageError("demand '" + item + "' is not an integer");
    out.push_back(static_cast<int>(v));
  }
  return out;
}

struct ConfigSource {
  std::string path;
  std::vector<std::string> overrides;

  bool given() const { return !path.empty() || !overrides.empty(); }

  ParameterMap load() const {
    ParameterMap params = path.empty() ? ParameterMap{} : read_config_file(path);
    for (const auto& o : overrides) apply_override(params, o);
    return params;
  }
};

void add_config_options(CLI::App* app, ConfigSource& src) {
  app->add_option("-c,--config", src.path, "network configuration file (key = value lines)");
  app->add_option("--set", src.overrides, "override a configuration key (key=value), repeatable");
}

void emit(const std::string& payload, const std::string& output, std::ostream& out) {
  if (output.empty() || output == "-") {
    out << payload;
  } else {
    write_text_file(output, payload);
  }
}

std::string plan_table(const DeliveryPlan& plan) {
  std::ostringstream os;
  for (const auto& tx : plan.transmissions) {
    os << "x(" << tx.schedule_index + 1 << ") S=" << to_string(tx.serving_set) << '\n';
    for (const auto& term : tx.terms) os << "    " << to_string(term) << '\n';
  }
  return os.str();
}

std::string plan_summary(const DeliveryPlan& plan) {
  std::ostringstream os;
  const auto& c = plan.config;
  os << "mode " << to_string(plan.mode) << ": K=" << c.users << " t=" << c.caching_gain
     << " L=" << c.tx_multiplexing << " G=" << c.rx_multiplexing << ", "
     << plan.transmissions.size() << " transmissions, DoF " << count_dof(c, DofMode::mimo)
     << " (served streams per transmission " << verify_dof_accounting(plan)
     << "), subpacketization " << plan_subpacketization(plan) << '\n';
  return os.str();
}

// ---- plan -----------------------------------------------------------------

struct PlanArgs {
  ConfigSource config;
  std::string mode = "unicast";
  std::string baseline;
  std::string demands;
  std::string output;
  std::string format = "json";
};

int cmd_plan(const PlanArgs& a, std::ostream& out, std::ostream& err) {
  const PlanMode mode = parse_plan_mode(a.mode);
  const std::vector<int> demands = a.demands.empty() ? std::vector<int>{} : parse_demands(a.demands);
  DeliveryPlan plan;
  if (mode == PlanMode::elevated) {
    if (a.baseline.empty()) throw UsageError("--mode elevated requires --baseline <file>");
    const BaselineMisoPlan baseline = import_baseline(read_text_file(a.baseline));
    ParameterMap params = a.config.load();
    if (params.empty() || (params.size() == 1 && params.contains("rx_multiplexing"))) {
      const int g = params.empty() ? 2 : static_cast<int>(to_double(params["rx_multiplexing"], "rx_multiplexing"));
      plan = elevate_baseline(baseline, g, demands);
    } else {
      plan = elevate_baseline(baseline, validate_config(params), demands);
    }
  } else {
    if (!a.baseline.empty()) throw UsageError("--baseline only applies to --mode elevated");
    if (!a.config.given()) throw UsageError("plan needs --config or --set for the network");
    const NetworkConfig cfg = validate_config(a.config.load());
    plan = mode == PlanMode::unicast ? build_unicast_plan(cfg, demands)
                                     : build_multicast_plan(cfg, demands);
  }
  if (a.format == "json") {
    emit(export_plan(plan), a.output, out);
    err << plan_summary(plan);
  } else if (a.format == "table") {
    emit(plan_summary(plan) + plan_table(plan), a.output, out);
  } else {
    throw UsageError("plan supports --format json or table");
  }
  return kOk;
}

// ---- verify ---------------------------------------------------------------

struct VerifyArgs {
  std::string plan;
  std::string placement;
  std::string demands;
  std::string output;
  std::string format = "json";
};

int cmd_verify(const VerifyArgs& a, std::ostream& out, std::ostream& err) {
  const DeliveryPlan plan = import_plan(read_text_file(a.plan));
  const CachePlacement placement =
      a.placement.empty() ? plan.placement
                          : placement_from_json(nlohmann::json::parse(read_text_file(a.placement)));
  const std::vector<int> demands = a.demands.empty() ? plan.demands : parse_demands(a.demands);
  const DecodabilityReport report = verify_plan(plan, placement, demands);
  if (a.format == "json") {
    emit(report_to_json(report, plan).dump(1) + "\n", a.output, out);
  } else if (a.format == "table") {
    emit(report_table(report, plan), a.output, out);
  } else {
    throw UsageError("verify supports --format json or table");
  }
  err << "verdict: " << (report.pass ? "pass" : "fail") << " (" << report.unresolved_count()
      << " unresolved)\n";
  return report.pass ? kOk : kVerifyFailed;
}

// ---- simulate -------------------------------------------------------------

struct SimulateArgs {
  ConfigSource config;
  std::string snr = "0:5:30";
  int trials = 100;
  std::string modes = "mimo-unicast,mimo-multicast,virtual-miso";
  std::string strategy = "optimized";
  std::string slope_window;
  std::string output;
  std::string format = "csv";
  unsigned threads = 0;
  bool quiet = false;
};

std::string report_json(const RateReport& r, std::pair<double, double> window) {
  nlohmann::json points = nlohmann::json::array();
  for (const auto& p : r.points) {
    nlohmann::json slope = nullptr;
    try {
      slope = estimate_dof_slope(r, p.mode, p.strategy, window.first, window.second);
    } catch (const Error&) {
    }
    points.push_back({{"snr_db", p.snr_db},
                      {"mode", to_string(p.mode)},
                      {"strategy", to_string(p.strategy)},
                      {"mean_rate_nats", p.mean_rate},
                      {"stderr", p.standard_error},
                      {"dof_slope", slope}});
  }
  return nlohmann::json{{"trials", r.trials},
                        {"dof_slope_window", {window.first, window.second}},
                        {"points", points}}
             .dump(1) +
         "\n";
}

std::string report_text_table(const RateReport& r) {
  std::ostringstream os;
  os << std::left << std::setw(8) << "snr_db" << std::setw(16) << "mode" << std::setw(11)
     << "strategy" << std::setw(14) << "mean_nats" << "stderr\n";
  for (const auto& p : r.points) {
    os << std::left << std::setw(8) << p.snr_db << std::setw(16) << to_string(p.mode)
       << std::setw(11) << to_string(p.strategy) << std::setw(14) << std::fixed
       << std::setprecision(4) << p.mean_rate << p.standard_error << '\n';
    os.unsetf(std::ios::fixed);
  }
  return os.str();
}

int cmd_simulate(const SimulateArgs& a, std::uint64_t seed, std::ostream& out, std::ostream& err) {
  ParameterMap params = a.config.load();
  SimulationParams sim;
  sim.optimizer = take_optimizer_settings(params);
  for (const auto& [k, v] : ParameterMap{{"users", "8"},
                                         {"caching_gain", "1"},
                                         {"tx_multiplexing", "2"},
                                         {"rx_multiplexing", "2"}}) {
    if (!a.config.given()) params.emplace(k, v);
  }
  sim.config = validate_config(params);
  sim.snr_points_db = parse_snr_list(a.snr);
  sim.trials = a.trials;
  sim.master_seed = seed;
  sim.modes.clear();
  for (const auto& m : split(a.modes, ',')) sim.modes.push_back(parse_sim_mode(m));
  sim.strategy = parse_strategy(a.strategy);
  sim.threads = a.threads;
  if (!a.quiet) {
    sim.progress = [&err](int done, int total) {
      err << "\rtrial " << done << "/" << total << std::flush;
      if (done == total) err << '\n';
    };
  }
  const RateReport report = run_sweep(sim);
  std::pair<double, double> window = default_slope_window(report);
  if (!a.slope_window.empty()) {
    const auto parts = split(a.slope_window, ':');
    if (parts.size() != 2) throw UsageError("--slope-window expects lo:hi in dB");
    window = {to_double(parts[0], "--slope-window"), to_double(parts[1], "--slope-window")};
  }
  if (a.format == "csv") {
    emit(report_csv(report, window), a.output, out);
  } else if (a.format == "json") {
    emit(report_json(report, window), a.output, out);
  } else if (a.format == "table") {
    emit(report_text_table(report), a.output, out);
  } else {
    throw UsageError("simulate supports --format csv, json or table");
  }
  return kOk;
}

// ---- fixtures -------------------------------------------------------------

struct FixtureArgs {
  std::string directory = "fixtures";
  bool check = false;
};

int cmd_fixtures(const FixtureArgs& a, std::ostream& out, std::ostream& err) {
  if (!a.check) {
    write_fixtures(a.directory);
    out << "wrote k6_baseline.json, k6_elevated_plan.json, k6_placement.json to " << a.directory
        << '\n';
    return kOk;
  }
  const auto docs = k6_fixture_documents();
  int stale = 0;
  for (const auto& [name, text] : {std::pair{"k6_baseline.json", docs.baseline},
                                   std::pair{"k6_elevated_plan.json", docs.plan},
                                   std::pair{"k6_placement.json", docs.placement}}) {
    const std::string path = a.directory + "/" + name;
    if (read_text_file(path) != text) {
      err << path << " differs from the generated document\n";
      ++stale;
    }
  }
  out << (stale ? "stale" : "up to date") << '\n';
  return stale ? kVerifyFailed : kOk;
}

std::uint64_t default_seed() {
  if (const char* env = std::getenv("MIMOCC_SEED")) {
    try {
      std::size_t used = 0;
      const auto v = std::stoull(env, &used);
      if (used == std::string(env).size()) return v;
    } catch (const std::exception&) {
    }
    throw UsageError(std::string("MIMOCC_SEED is not an unsigned integer: '") + env + "'");
  }
  return 1;
}

}  // namespace

std::vector<double> parse_snr_list(const std::string& text) {
  std::vector<double> out;
  if (text.find(':') != std::string::npos) {
    const auto parts = split(text, ':');
    if (parts.size() != 3) throw UsageError("SNR range must be start:step:stop");
    const double start = to_double(parts[0], "--snr");
    const double step = to_double(parts[1], "--snr");
    const double stop = to_double(parts[2], "--snr");
    if (!(step > 0) || stop < start) throw UsageError("SNR range needs step > 0 and stop >= start");
    const auto n = static_cast<long>(std::floor((stop - start) / step + 1e-9)) + 1;
    for (long i = 0; i < n; ++i) out.push_back(start + static_cast<double>(i) * step);
  } else {
    for (const auto& item : split(text, ',')) out.push_back(to_double(item, "--snr"));
  }
  if (out.empty()) throw UsageError("empty SNR list");
  return out;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Coded caching delivery planning, verification and simulation for MIMO networks",
               "mimocc"};
  app.require_subcommand(1);
  std::string seed_text;
  app.add_option("--seed", seed_text, "master seed (default: $MIMOCC_SEED, else 1)");

  PlanArgs plan_args;
  auto* plan = app.add_subcommand("plan", "build a delivery plan and write it as JSON");
  add_config_options(plan, plan_args.config);
  plan->add_option("--mode", plan_args.mode, "unicast, multicast or elevated")
      ->check(CLI::IsMember({"unicast", "multicast", "elevated"}));
  plan->add_option("--baseline", plan_args.baseline, "virtual MISO baseline (elevated mode)");
  plan->add_option("--demands", plan_args.demands, "comma-separated file index per user");
  plan->add_option("-o,--output", plan_args.output, "output file (default stdout)");
  plan->add_option("--format", plan_args.format, "json or table");

  VerifyArgs verify_args;
  auto* verify = app.add_subcommand("verify", "check decodability of a plan file");
  verify->add_option("plan", verify_args.plan, "plan JSON file")->required();
  verify->add_option("--placement", verify_args.placement, "placement JSON (default: embedded)");
  verify->add_option("--demands", verify_args.demands, "comma-separated file index per user");
  verify->add_option("-o,--output", verify_args.output, "output file (default stdout)");
  verify->add_option("--format", verify_args.format, "json or table");

  SimulateArgs sim_args;
  auto* simulate = app.add_subcommand("simulate", "Monte-Carlo symmetric-rate sweep, CSV output");
  add_config_options(simulate, sim_args.config);
  simulate->add_option("--snr", sim_args.snr, "start:step:stop (inclusive) or a,b,c in dB");
  simulate->add_option("--trials", sim_args.trials, "channel realizations")
      ->check(CLI::PositiveNumber);
  simulate->add_option("--modes", sim_args.modes, "comma list of mimo-unicast, mimo-multicast, virtual-miso");
  simulate->add_option("--strategy", sim_args.strategy, "zf or optimized");
  simulate->add_option("--slope-window", sim_args.slope_window, "lo:hi dB window for the DoF slope");
  simulate->add_option("--threads", sim_args.threads, "worker threads (0: all cores)");
  simulate->add_option("-o,--output", sim_args.output, "output file (default stdout)");
  simulate->add_option("--format", sim_args.format, "csv, json or table");
  simulate->add_flag("-q,--quiet", sim_args.quiet, "no progress on stderr");

  FixtureArgs fixture_args;
  auto* fixtures = app.add_subcommand("fixtures", "write or check the K=6 example documents");
  fixtures->add_option("-d,--dir", fixture_args.directory, "target directory");
  fixtures->add_flag("--check", fixture_args.check, "compare instead of writing");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n' << "run 'mimocc --help' for usage\n";
    return kUsage;
  }

  try {
    std::uint64_t seed = default_seed();
    if (!seed_text.empty()) {
      std::size_t used = 0;
      try {
        seed = std::stoull(seed_text, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used != seed_text.size() || seed_text.empty()) throw UsageError("--seed must be an unsigned integer");
    }
    if (plan->parsed()) return cmd_plan(plan_args, out, err);
    if (verify->parsed()) return cmd_verify(verify_args, out, err);
    if (simulate->parsed()) return cmd_simulate(sim_args, seed, out, err);
    if (fixtures->parsed()) return cmd_fixtures(fixture_args, out, err);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    if (e.code() == ErrorCode::unsupported_combination) {
      err << "hint: optimized beamforming and mimo-multicast rates need L = G; "
             "try --strategy zf or drop mimo-multicast from --modes\n";
    }
    return is_numerical(e.code()) ? kNumerical : kUsage;
  }
  return kUsage;
}

}  // namespace mimocc::cli
