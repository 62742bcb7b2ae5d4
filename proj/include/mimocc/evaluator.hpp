#pragma once

// Monte-Carlo sweeps over SNR for the MIMO unicast, MIMO multicast and
// virtual MISO delivery modes.
//
// Conventions: N0 = 1 and P_T = 10^(snr_db / 10). Each transmission scores
// S * (minimum stream rate) with S = Gt + L for the MIMO modes and t + L for
// virtual MISO; a trial averages its transmissions and the report averages
// trials. Trial i always sees the channel generate_channel(config, seed, i),
// whatever the SNR or mode, so modes are compared on identical channels.

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "mimocc/channel.hpp"
#include "mimocc/optimizer.hpp"
#include "mimocc/scheme.hpp"

namespace mimocc {

enum class SimMode { mimo_unicast, mimo_multicast, virtual_miso };
enum class Strategy { zf, optimized };

std::string to_string(SimMode mode);
std::string to_string(Strategy strategy);
SimMode parse_sim_mode(const std::string& text);
Strategy parse_strategy(const std::string& text);

struct SimulationParams {
  NetworkConfig config;
  std::vector<double> snr_points_db;
  int trials = 100;
  std::uint64_t master_seed = 1;
  std::vector<SimMode> modes{SimMode::mimo_unicast, SimMode::mimo_multicast, SimMode::virtual_miso};
  Strategy strategy = Strategy::optimized;
  OptimizerSettings optimizer;
  unsigned threads = 0;  // 0: one per hardware thread
  // Called after each finished trial; may run on a worker thread.
  std::function<void(int done, int total)> progress;
};

// Throws InvalidParameter or UnsupportedCombination.
void check_params(const SimulationParams& params);

struct RatePoint {
  double snr_db = 0.0;
  SimMode mode = SimMode::mimo_unicast;
  Strategy strategy = Strategy::zf;
  double mean_rate = 0.0;       // nats/s
  double standard_error = 0.0;  // sample std / sqrt(trials)
  std::vector<double> raw;      // per trial
};

struct RateReport {
  int trials = 0;
  std::vector<RatePoint> points;  // ordered by mode, then SNR

  const RatePoint& at(SimMode mode, Strategy strategy, double snr_db) const;
};

double power_from_snr_db(double snr_db);

// Streams per transmission used as the symmetric-rate multiplier.
int streams_per_transmission(const NetworkConfig& config, SimMode mode);

// Delivery plan the mode schedules on the real or virtual network.
DeliveryPlan plan_for_mode(const NetworkConfig& config, SimMode mode);

// Per-transmission symmetric rates of one channel realization.
std::vector<double> run_mimo_trial(const NetworkConfig& config, const DeliveryPlan& plan,
                                   const ChannelRealization& channel, SimMode mode,
                                   Strategy strategy, double power,
                                   const OptimizerSettings& optimizer = {});
std::vector<double> run_virtual_miso_trial(const NetworkConfig& config,
                                           const ChannelRealization& channel, Strategy strategy,
                                           double power, const OptimizerSettings& optimizer = {});

// Effective single-stream channels u_k^H H_k with u_k the strongest eigenmode.
std::vector<ComplexMatrix> virtual_channels(const ChannelRealization& channel);

RateReport run_sweep(const SimulationParams& params);

// Least-squares slope of mean rate against ln(SNR) over [lo_db, hi_db].
// Throws InsufficientPoints with fewer than two points in the window.
double estimate_dof_slope(const RateReport& report, SimMode mode, Strategy strategy, double lo_db,
                          double hi_db);

// Window spanning the two highest SNR points of the report.
std::pair<double, double> default_slope_window(const RateReport& report);

// Columns: snr_db, mode, strategy, mean_rate_nats, stderr, trials,
// dof_slope_window, dof_slope. The slope cell is empty when the window
// holds fewer than two points.
std::string report_csv(const RateReport& report, std::optional<std::pair<double, double>> window = {});

// Neumaier-compensated sum.
double compensated_sum(const std::vector<double>& values);

}  // namespace mimocc
