#include "mimocc/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <type_traits>

#include "mimocc/error.hpp"

namespace mimocc {

namespace {

constexpr double kPowerSlack = 1e-9;

using Beams = std::vector<CVector>;

// One rate bound: c * log(1 + sum_{j in J} |h^H w_j|^2 / (N0 + sum_I |h^H w_i|^2)).
struct RateEntry {
  StreamId stream;
  double weight = 1.0;
  std::vector<std::size_t> joint;
  std::vector<std::size_t> interferers;
};

std::vector<RateEntry> rate_entries(const TransmissionVector& tx) {
  std::vector<RateEntry> out;
  for (const auto& layout : stream_layout(tx)) {
    const std::size_t m = layout.desired.size();
    for (std::size_t mask = 1; mask < (std::size_t{1} << m); ++mask) {
      RateEntry e;
      e.stream = layout.stream;
      e.interferers = layout.interferers;
      for (std::size_t j = 0; j < m; ++j) {
        if (mask & (std::size_t{1} << j)) e.joint.push_back(layout.desired[j]);
      }
      e.weight = static_cast<double>(m) / static_cast<double>(e.joint.size());
      out.push_back(std::move(e));
    }
  }
  return out;
}

double total_power(const Beams& w) {
  double p = 0.0;
  for (const auto& x : w) p += squared_norm(x);
  return p;
}

void project_to_budget(Beams& w, double budget) {
  const double p = total_power(w);
  if (p > budget && p > 0.0) {
    const double s = std::sqrt(budget / p);
    for (auto& x : w) x = scaled(x, s);
  }
}

double interference_plus_noise(const RateEntry& e, const CVector& h, const Beams& w, double n0) {
  double b = n0;
  for (auto i : e.interferers) b += std::norm(inner(h, w[i]));
  return b;
}

// Linearized signal power around `anchor`: 2 Re(conj(h^H a) h^H w) - |h^H a|^2.
double linear_signal(const RateEntry& e, const CVector& h, const Beams& w, const Beams& anchor) {
  double a = 0.0;
  for (auto j : e.joint) {
    const Complex ha = inner(h, anchor[j]);
    a += 2.0 * std::real(std::conj(ha) * inner(h, w[j])) - std::norm(ha);
  }
  return a;
}

double softmin(const std::vector<double>& values, double tau) {
  const double lo = *std::min_element(values.begin(), values.end());
  if (!std::isfinite(lo)) return lo;
  double s = 0.0;
  for (double v : values) s += std::exp(-(v - lo) / tau);
  return lo - tau * std::log(s);
}

class Surrogate {
 public:
  Surrogate(const std::vector<RateEntry>& entries, const BeamformerSet& bf, const Beams& anchor,
            double noise, double tau)
      : entries_(entries), bf_(bf), anchor_(anchor), noise_(noise), tau_(tau) {}

  std::vector<double> values(const Beams& w) const {
    std::vector<double> v;
    v.reserve(entries_.size());
    for (const auto& e : entries_) {
      const CVector& h = bf_.equivalent.at(e.stream);
      const double b = interference_plus_noise(e, h, w, noise_);
      const double a = linear_signal(e, h, w, anchor_);
      v.push_back(a / b <= -1.0 ? -std::numeric_limits<double>::infinity()
                                : e.weight * std::log1p(a / b));
    }
    return v;
  }

  double value(const Beams& w) const { return softmin(values(w), tau_); }

  // Conjugate (Wirtinger) gradient of the soft-min.
  Beams gradient(const Beams& w) const {
    const auto v = values(w);
    const double lo = *std::min_element(v.begin(), v.end());
    std::vector<double> pi(v.size());
    double z = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) z += (pi[i] = std::exp(-(v[i] - lo) / tau_));
    Beams g(w.size(), CVector(w.front().size()));
    for (std::size_t idx = 0; idx < entries_.size(); ++idx) {
      const double weight = pi[idx] / z;
      if (weight < 1e-300) continue;
      const auto& e = entries_[idx];
      const CVector& h = bf_.equivalent.at(e.stream);
      const double b = interference_plus_noise(e, h, w, noise_);
      const double ab = b + linear_signal(e, h, w, anchor_);
      const double c = weight * e.weight;
      for (auto j : e.joint) g[j] = axpy(g[j], c * inner(h, anchor_[j]) / ab, h);
      for (auto i : e.interferers) {
        g[i] = axpy(g[i], c * inner(h, w[i]) * (1.0 / ab - 1.0 / b), h);
      }
    }
    return g;
  }

 private:
  const std::vector<RateEntry>& entries_;
  const BeamformerSet& bf_;
  const Beams& anchor_;
  double noise_;
  double tau_;
};

// Projected gradient ascent on the surrogate, starting at the anchor.
Beams transmit_step(const Surrogate& sur, const Beams& anchor, double budget, int max_inner,
                    double& step) {
  Beams w = anchor;
  double current = sur.value(w);
  for (int it = 0; it < max_inner; ++it) {
    const Beams g = sur.gradient(w);
    double gnorm = 0.0;
    for (const auto& x : g) gnorm += squared_norm(x);
    gnorm = std::sqrt(gnorm);
    if (gnorm == 0.0 || !std::isfinite(gnorm)) break;
    bool moved = false;
    while (step > 1e-12) {
      Beams cand = w;
      const double scale = step * std::sqrt(budget) / gnorm;
      for (std::size_t i = 0; i < cand.size(); ++i) cand[i] = axpy(cand[i], scale, g[i]);
      project_to_budget(cand, budget);
      const double v = sur.value(cand);
      if (v > current) {
        w = std::move(cand);
        current = v;
        step = std::min(1.0, step * 1.5);
        moved = true;
        break;
      }
      step *= 0.5;
    }
    if (!moved) break;
  }
  return w;
}

void check_init(const OptProblem& problem, const BeamformerSet& init) {
  if (init.transmit.size() != problem.transmission.terms.size()) {
    throw Error(ErrorCode::infeasible_init, "initial beamformer count does not match the terms");
  }
  const std::size_t n = problem.channels.empty() ? 0 : problem.channels.front().cols();
  for (const auto& w : init.transmit) {
    if (w.size() != n) throw Error(ErrorCode::infeasible_init, "initial beamformer length mismatch");
  }
  if (init.total_power() > problem.power_budget * (1.0 + kPowerSlack)) {
    throw Error(ErrorCode::infeasible_init, "initial beamformers exceed the power budget");
  }
}

// MMSE update of every receiver with more than one antenna.
BeamformerSet receive_update(const OptProblem& problem, const BeamformerSet& bf) {
  BeamformerSet out = bf;
  std::map<int, std::vector<StreamLayout>> by_user;
  for (auto& l : stream_layout(problem.transmission)) by_user[l.stream.user].push_back(l);
  for (const auto& [user, layouts] : by_user) {
    const auto& h = problem.channels.at(static_cast<std::size_t>(user - 1));
    if (h.rows() < 2) continue;
    std::vector<std::size_t> members;
    for (const auto& l : layouts) {
      members.insert(members.end(), l.desired.begin(), l.desired.end());
      members.insert(members.end(), l.interferers.begin(), l.interferers.end());
    }
    std::sort(members.begin(), members.end());
    members.erase(std::unique(members.begin(), members.end()), members.end());
    std::vector<CVector> serving;
    for (auto i : members) serving.push_back(bf.transmit[i]);
    for (const auto& l : layouts) {
      const auto pos = static_cast<std::size_t>(
          std::lower_bound(members.begin(), members.end(), l.desired.front()) - members.begin());
      try {
        out.receive[l.stream] = mmse_receiver(h, serving, pos, problem.noise_power);
      } catch (const Error& e) {
        // A silent desired beam leaves nothing to steer towards.
        if (e.code() != ErrorCode::zero_matrix) throw;
      }
    }
  }
  refresh_equivalent_channels(out, problem.channels);
  return out;
}

bool has_single_sinr(const TransmissionVector& tx) {
  const auto layout = stream_layout(tx);
  return std::all_of(layout.begin(), layout.end(),
                     [](const StreamLayout& l) { return l.desired.size() == 1; });
}

template <class T>
T take_number(ParameterMap& params, const std::string& key, T fallback) {
  const auto it = params.find(key);
  if (it == params.end()) return fallback;
  const std::string text = it->second;
  params.erase(it);
  std::size_t used = 0;
  T value{};
  try {
    if constexpr (std::is_integral_v<T>) {
      value = static_cast<T>(std::stoi(text, &used));
    } else {
      value = std::stod(text, &used);
    }
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != text.size() || text.empty() || !(value > T{0})) {
    throw Error(ErrorCode::invalid_parameter, key + " must be a positive number, got '" + text + "'");
  }
  return value;
}

}  // namespace

OptimizerSettings take_optimizer_settings(ParameterMap& params) {
  OptimizerSettings s;
  s.tol = take_number(params, "tol", s.tol);
  s.max_outer = take_number(params, "max_outer", s.max_outer);
  s.max_inner = take_number(params, "max_inner", s.max_inner);
  s.softmin_temperature_factor =
      take_number(params, "softmin_temperature_factor", s.softmin_temperature_factor);
  return s;
}

ObjectiveValue evaluate_objective(const BeamformerSet& beamformers, const OptProblem& problem) {
  ObjectiveValue v;
  v.rates = stream_rates(problem.transmission, beamformers, problem.noise_power);
  v.min_rate = v.rates.empty() ? 0.0 : std::numeric_limits<double>::infinity();
  for (const auto& [s, r] : v.rates) v.min_rate = std::min(v.min_rate, r);
  return v;
}

OptResult optimize_beamformers(const OptProblem& problem, const BeamformerSet& init,
                               const OptimizerSettings& settings) {
  check_link_mode(problem.transmission, problem.mode);
  check_init(problem, init);
  const auto entries = rate_entries(problem.transmission);
  const bool single = has_single_sinr(problem.transmission);

  OptResult res;
  res.settings = settings;
  res.beamformers = init;
  double objective = evaluate_objective(res.beamformers, problem).min_rate;
  res.trace.push_back(objective);
  double step = 0.5;

  for (int it = 0; it < settings.max_outer; ++it) {
    const double previous = objective;

    BeamformerSet rx = receive_update(problem, res.beamformers);
    if (single && rx.receive != res.beamformers.receive) {
      const auto before = compute_sinrs(problem.transmission, res.beamformers, problem.noise_power,
                                        problem.mode);
      const auto after = compute_sinrs(problem.transmission, rx, problem.noise_power, problem.mode);
      for (const auto& [s, v] : before) {
        if (after.at(s) < v * (1.0 - 1e-9)) ++res.receive_sinr_decreases;
      }
    }
    const double rx_objective = evaluate_objective(rx, problem).min_rate;
    if (rx_objective >= objective) {
      res.beamformers = std::move(rx);
      objective = rx_objective;
    }

    const double tau =
        std::max(settings.softmin_temperature_factor * std::abs(objective), 1e-6);
    const Beams anchor = res.beamformers.transmit;
    const Surrogate sur(entries, res.beamformers, anchor, problem.noise_power, tau);
    BeamformerSet tx = res.beamformers;
    tx.transmit = transmit_step(sur, anchor, problem.power_budget, settings.max_inner, step);
    const double tx_objective = evaluate_objective(tx, problem).min_rate;
    bool rejected = false;
    if (tx_objective > objective) {
      res.beamformers = std::move(tx);
      objective = tx_objective;
    } else {
      rejected = true;
      step *= 0.25;
    }

    res.trace.push_back(objective);
    res.iterations = it + 1;
    // A rejected transmit step only ends the run once the step has shrunk.
    if (objective - previous <= settings.tol * std::max(std::abs(previous), 1e-12) &&
        !(rejected && step > 1e-4)) {
      res.converged = true;
      break;
    }
  }

  const auto final_value = evaluate_objective(res.beamformers, problem);
  res.rates = final_value.rates;
  if (single) {
    res.sinrs = compute_sinrs(problem.transmission, res.beamformers, problem.noise_power,
                              problem.mode);
  }
  return res;
}

OptResult optimize_beamformers(const OptProblem& problem, const OptimizerSettings& settings) {
  BeamformerSet init;
  try {
    init = design_zf(problem.transmission, problem.channels, problem.mode, problem.power_budget);
  } catch (const Error& e) {
    if (e.code() == ErrorCode::degenerate_nullspace || e.code() == ErrorCode::singular_covariance ||
        e.code() == ErrorCode::zero_matrix) {
      throw Error(ErrorCode::infeasible_init, std::string("zero-forcing start is degenerate: ") +
                                                  e.what());
    }
    throw;
  }
  return optimize_beamformers(problem, init, settings);
}

}  // namespace mimocc
