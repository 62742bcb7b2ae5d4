#pragma once

// Max-min rate beamformer optimization for one transmission.
//
// Alternates an MMSE receive update with a successive-convex-approximation
// transmit update. The transmit step linearizes each desired signal power
// around the current iterate (a global lower bound), keeps interference
// exact, and runs projected gradient ascent on a soft-min of the resulting
// per-stream rate bounds. A step is kept only if the true min-rate grows,
// so the objective trace is nondecreasing.

#include <map>
#include <vector>

#include "mimocc/beamforming.hpp"

namespace mimocc {

struct OptimizerSettings {
  double tol = 1e-4;        // relative objective change that stops the outer loop
  int max_outer = 100;
  int max_inner = 20;       // gradient steps per transmit update
  double softmin_temperature_factor = 0.01;
};

// Removes the optimizer keys from `params` and returns the settings they
// describe (defaults for absent keys). Throws InvalidParameter.
OptimizerSettings take_optimizer_settings(ParameterMap& params);

struct OptProblem {
  LinkMode mode = LinkMode::unicast;
  TransmissionVector transmission;
  std::vector<ComplexMatrix> channels;  // per user, index k - 1
  double noise_power = 1.0;
  double power_budget = 1.0;

  std::size_t transmit_variable_count() const noexcept { return transmission.terms.size(); }
};

struct ObjectiveValue {
  double min_rate = 0.0;
  std::map<StreamId, double> rates;
};

ObjectiveValue evaluate_objective(const BeamformerSet& beamformers, const OptProblem& problem);

struct OptResult {
  BeamformerSet beamformers;
  std::map<StreamId, double> sinrs;  // empty when some stream decodes several terms
  std::map<StreamId, double> rates;
  std::vector<double> trace;         // objective after each outer iteration, trace[0] = init
  int iterations = 0;
  bool converged = false;
  int receive_sinr_decreases = 0;    // MMSE updates that lowered some stream SINR
  OptimizerSettings settings;
};

// Starts from the given beamformers. Throws InfeasibleInit when the start
// violates the power budget or has mismatched dimensions.
OptResult optimize_beamformers(const OptProblem& problem, const BeamformerSet& init,
                               const OptimizerSettings& settings = {});

// Starts from uniform-power zero-forcing. Throws InfeasibleInit when that
// design is degenerate.
OptResult optimize_beamformers(const OptProblem& problem, const OptimizerSettings& settings = {});

}  // namespace mimocc
