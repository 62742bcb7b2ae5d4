#include "mimocc/evaluator.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <mutex>
#include <sstream>
#include <thread>

#include "mimocc/error.hpp"

namespace mimocc {

namespace {

double mean_of(const std::vector<double>& v) {
  return v.empty() ? 0.0 : compensated_sum(v) / static_cast<double>(v.size());
}

std::string number(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.10g", x);
  return buf;
}

NetworkConfig virtual_config(const NetworkConfig& c) {
  NetworkConfig v = c;
  v.rx_multiplexing = 1;
  v.rx_antennas = 1;
  return v;
}

double symmetric_rate(const OptProblem& problem, const BeamformerSet& bf, int streams) {
  return streams * evaluate_objective(bf, problem).min_rate;
}

std::vector<double> run_transmissions(const DeliveryPlan& plan,
                                      const std::vector<ComplexMatrix>& channels, LinkMode link,
                                      Strategy strategy, double power, double noise, int streams,
                                      const OptimizerSettings& optimizer) {
  std::vector<double> out;
  out.reserve(plan.transmissions.size());
  for (const auto& tx : plan.transmissions) {
    OptProblem problem{link, tx, channels, noise, power};
    const BeamformerSet zf = design_zf(tx, channels, link, power);
    if (strategy == Strategy::zf) {
      out.push_back(symmetric_rate(problem, zf, streams));
    } else {
      const OptResult r = optimize_beamformers(problem, zf, optimizer);
      out.push_back(symmetric_rate(problem, r.beamformers, streams));
    }
  }
  return out;
}

}  // namespace

std::string to_string(SimMode mode) {
  switch (mode) {
    case SimMode::mimo_unicast: return "mimo-unicast";
    case SimMode::mimo_multicast: return "mimo-multicast";
    case SimMode::virtual_miso: return "virtual-miso";
  }
  return "?";
}

std::string to_string(Strategy strategy) { return strategy == Strategy::zf ? "zf" : "optimized"; }

SimMode parse_sim_mode(const std::string& text) {
  for (auto m : {SimMode::mimo_unicast, SimMode::mimo_multicast, SimMode::virtual_miso}) {
    if (text == to_string(m)) return m;
  }
  throw Error(ErrorCode::invalid_parameter,
              "unknown mode '" + text + "' (mimo-unicast, mimo-multicast, virtual-miso)");
}

Strategy parse_strategy(const std::string& text) {
  if (text == "zf") return Strategy::zf;
  if (text == "optimized") return Strategy::optimized;
  throw Error(ErrorCode::invalid_parameter, "unknown strategy '" + text + "' (zf, optimized)");
}

double compensated_sum(const std::vector<double>& values) {
  double sum = 0.0;
  double carry = 0.0;
  for (double x : values) {
    const double t = sum + x;
    carry += std::abs(sum) >= std::abs(x) ? (sum - t) + x : (x - t) + sum;
    sum = t;
  }
  return sum + carry;
}

double power_from_snr_db(double snr_db) { return std::pow(10.0, snr_db / 10.0); }

int streams_per_transmission(const NetworkConfig& config, SimMode mode) {
  return count_dof(config, mode == SimMode::virtual_miso ? DofMode::virtual_miso : DofMode::mimo);
}

DeliveryPlan plan_for_mode(const NetworkConfig& config, SimMode mode) {
  switch (mode) {
    case SimMode::mimo_unicast: return build_unicast_plan(config);
    case SimMode::mimo_multicast: return build_multicast_plan(config);
    case SimMode::virtual_miso: return build_unicast_plan(virtual_config(config));
  }
  throw Error(ErrorCode::invalid_parameter, "unknown mode");
}

void check_params(const SimulationParams& params) {
  validate(params.config);
  if (params.trials < 1) throw Error(ErrorCode::invalid_parameter, "trials must be at least 1");
  if (params.snr_points_db.empty()) throw Error(ErrorCode::invalid_parameter, "empty SNR list");
  for (std::size_t i = 1; i < params.snr_points_db.size(); ++i) {
    if (!(params.snr_points_db[i] > params.snr_points_db[i - 1])) {
      throw Error(ErrorCode::invalid_parameter, "SNR points must be strictly increasing");
    }
  }
  if (params.modes.empty()) throw Error(ErrorCode::invalid_parameter, "no modes selected");
  const int eta = params.config.eta();
  for (auto m : params.modes) {
    if (eta > 1 && m != SimMode::virtual_miso && params.strategy == Strategy::optimized) {
      throw Error(ErrorCode::unsupported_combination,
                  "optimized beamforming for " + to_string(m) + " needs L = G (eta = " +
                      std::to_string(eta) + "); use --strategy zf");
    }
    if (eta > 1 && m == SimMode::mimo_multicast) {
      throw Error(ErrorCode::unsupported_combination,
                  "mimo-multicast rates need L = G (eta = " + std::to_string(eta) +
                      "); only the symbolic verifier covers eta > 1 multicast");
    }
  }
}

std::vector<ComplexMatrix> virtual_channels(const ChannelRealization& channel) {
  std::vector<ComplexMatrix> out;
  out.reserve(channel.users.size());
  for (const auto& h : channel.users) {
    const CVector u = strongest_eigenmode_receiver(h);
    const CVector row = h.adjoint() * u;  // (u^H H)^H
    CVector conj_row(row.size());
    for (std::size_t i = 0; i < row.size(); ++i) conj_row[i] = std::conj(row[i]);
    out.push_back(ComplexMatrix(1, conj_row.size(), conj_row));
  }
  return out;
}

std::vector<double> run_mimo_trial(const NetworkConfig& config, const DeliveryPlan& plan,
                                   const ChannelRealization& channel, SimMode mode,
                                   Strategy strategy, double power,
                                   const OptimizerSettings& optimizer) {
  if (mode == SimMode::virtual_miso) {
    throw Error(ErrorCode::mode_mismatch, "run_mimo_trial called for virtual-miso");
  }
  const LinkMode link = mode == SimMode::mimo_multicast ? LinkMode::multicast : LinkMode::unicast;
  return run_transmissions(plan, channel.users, link, strategy, power, channel.noise_power,
                           streams_per_transmission(config, mode), optimizer);
}

std::vector<double> run_virtual_miso_trial(const NetworkConfig& config,
                                           const ChannelRealization& channel, Strategy strategy,
                                           double power, const OptimizerSettings& optimizer) {
  const DeliveryPlan plan = plan_for_mode(config, SimMode::virtual_miso);
  return run_transmissions(plan, virtual_channels(channel), LinkMode::unicast, strategy, power,
                           channel.noise_power,
                           streams_per_transmission(config, SimMode::virtual_miso), optimizer);
}

const RatePoint& RateReport::at(SimMode mode, Strategy strategy, double snr_db) const {
  for (const auto& p : points) {
    if (p.mode == mode && p.strategy == strategy && std::abs(p.snr_db - snr_db) < 1e-9) return p;
  }
  throw Error(ErrorCode::out_of_range, "no report entry for " + to_string(mode) + " at " +
                                           number(snr_db) + " dB");
}

RateReport run_sweep(const SimulationParams& params) {
  check_params(params);
  const auto& cfg = params.config;
  std::vector<DeliveryPlan> plans;
  for (auto m : params.modes) plans.push_back(plan_for_mode(cfg, m));

  const std::size_t n_snr = params.snr_points_db.size();
  const std::size_t n_mode = params.modes.size();
  const auto trials = static_cast<std::size_t>(params.trials);
  // results[trial][mode * n_snr + snr]
  std::vector<std::vector<double>> results(trials, std::vector<double>(n_mode * n_snr));

  std::atomic<std::size_t> next{0};
  std::atomic<int> done{0};
  std::mutex failure_lock;
  std::exception_ptr failure;
  std::mutex progress_lock;

  auto worker = [&] {
    for (;;) {
      const std::size_t trial = next.fetch_add(1);
      if (trial >= trials) return;
      {
        std::lock_guard lock(failure_lock);
        if (failure) return;
      }
      try {
        const ChannelRealization ch = generate_channel(cfg, params.master_seed, trial);
        std::vector<ComplexMatrix> virt;
        for (std::size_t mi = 0; mi < n_mode; ++mi) {
          const SimMode mode = params.modes[mi];
          const LinkMode link =
              mode == SimMode::mimo_multicast ? LinkMode::multicast : LinkMode::unicast;
          if (mode == SimMode::virtual_miso && virt.empty()) virt = virtual_channels(ch);
          const auto& channels = mode == SimMode::virtual_miso ? virt : ch.users;
          for (std::size_t si = 0; si < n_snr; ++si) {
            const auto rates = run_transmissions(
                plans[mi], channels, link, params.strategy,
                power_from_snr_db(params.snr_points_db[si]), ch.noise_power,
                streams_per_transmission(cfg, mode), params.optimizer);
            results[trial][mi * n_snr + si] = mean_of(rates);
          }
        }
      } catch (...) {
        std::lock_guard lock(failure_lock);
        if (!failure) failure = std::current_exception();
        return;
      }
      const int finished = ++done;
      if (params.progress) {
        std::lock_guard lock(progress_lock);
        params.progress(finished, params.trials);
      }
    }
  };

  unsigned threads = params.threads ? params.threads : std::thread::hardware_concurrency();
  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(trials)));
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned i = 0; i < threads; ++i) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  if (failure) std::rethrow_exception(failure);

  RateReport report;
  report.trials = params.trials;
  for (std::size_t mi = 0; mi < n_mode; ++mi) {
    for (std::size_t si = 0; si < n_snr; ++si) {
      RatePoint p;
      p.snr_db = params.snr_points_db[si];
      p.mode = params.modes[mi];
      p.strategy = params.strategy;
      for (std::size_t t = 0; t < trials; ++t) p.raw.push_back(results[t][mi * n_snr + si]);
      p.mean_rate = mean_of(p.raw);
      if (trials > 1) {
        std::vector<double> sq;
        for (double x : p.raw) sq.push_back((x - p.mean_rate) * (x - p.mean_rate));
        const double var = compensated_sum(sq) / static_cast<double>(trials - 1);
        p.standard_error = std::sqrt(var / static_cast<double>(trials));
      }
      report.points.push_back(std::move(p));
    }
  }
  return report;
}

double estimate_dof_slope(const RateReport& report, SimMode mode, Strategy strategy, double lo_db,
                          double hi_db) {
  std::vector<double> xs, ys;
  for (const auto& p : report.points) {
    if (p.mode != mode || p.strategy != strategy) continue;
    if (p.snr_db < lo_db - 1e-9 || p.snr_db > hi_db + 1e-9) continue;
    xs.push_back(std::log(power_from_snr_db(p.snr_db)));
    ys.push_back(p.mean_rate);
  }
  if (xs.size() < 2) {
    throw Error(ErrorCode::insufficient_points,
                std::to_string(xs.size()) + " SNR point(s) of " + to_string(mode) + " in [" +
                    number(lo_db) + ", " + number(hi_db) + "] dB, need 2");
  }
  const double mx = mean_of(xs);
  const double my = mean_of(ys);
  std::vector<double> sxy, sxx;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxy.push_back((xs[i] - mx) * (ys[i] - my));
    sxx.push_back((xs[i] - mx) * (xs[i] - mx));
  }
  return compensated_sum(sxy) / compensated_sum(sxx);
}

std::pair<double, double> default_slope_window(const RateReport& report) {
  std::vector<double> snrs;
  for (const auto& p : report.points) snrs.push_back(p.snr_db);
  std::sort(snrs.begin(), snrs.end());
  snrs.erase(std::unique(snrs.begin(), snrs.end()), snrs.end());
  if (snrs.empty()) return {0.0, 0.0};
  if (snrs.size() == 1) return {snrs.front(), snrs.front()};
  return {snrs[snrs.size() - 2], snrs.back()};
}

std::string report_csv(const RateReport& report, std::optional<std::pair<double, double>> window) {
  const auto [lo, hi] = window.value_or(default_slope_window(report));
  std::ostringstream out;
  out << "snr_db,mode,strategy,mean_rate_nats,stderr,trials,dof_slope_window,dof_slope\n";
  for (const auto& p : report.points) {
    std::string slope;
    try {
      slope = number(estimate_dof_slope(report, p.mode, p.strategy, lo, hi));
    } catch (const Error& e) {
      if (e.code() != ErrorCode::insufficient_points) throw;
    }
    out << number(p.snr_db) << ',' << to_string(p.mode) << ',' << to_string(p.strategy) << ','
        << number(p.mean_rate) << ',' << number(p.standard_error) << ',' << report.trials << ','
        << number(lo) << ':' << number(hi) << ',' << slope << '\n';
  }
  return out.str();
}

}  // namespace mimocc
