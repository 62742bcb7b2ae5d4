#pragma once

// Generators and independent reference computations shared by the unit and
// acceptance suites. Nothing here calls the code paths it is used to check.

#include <algorithm>
#include <bit>
#include <cmath>
#include <complex>
#include <cstdint>
#include <map>
#include <random>
#include <set>
#include <vector>

#include "mimocc/beamforming.hpp"
#include "mimocc/core_model.hpp"
#include "mimocc/scheme.hpp"

namespace testsupport {

using mimocc::Complex;
using mimocc::ComplexMatrix;
using mimocc::CVector;

// ---- generators ------------------------------------------------------------

// Every (K, t, L, G) with K <= max_users, t <= max_t, G <= max_g, eta in etas
// and t + eta <= K.
inline std::vector<mimocc::NetworkConfig> config_grid(int max_users, int max_t, int max_g,
                                                      std::vector<int> etas = {1, 2},
                                                      int min_users = 2) {
  std::vector<mimocc::NetworkConfig> out;
  for (int k = min_users; k <= max_users; ++k) {
    for (int t = 1; t <= max_t; ++t) {
      for (int g = 1; g <= max_g; ++g) {
        for (int eta : etas) {
          if (t + eta > k) continue;
          out.push_back(mimocc::make_config(k, t, eta * g, g));
        }
      }
    }
  }
  return out;
}

inline ComplexMatrix random_matrix(std::mt19937_64& rng, std::size_t rows, std::size_t cols) {
  std::normal_distribution<double> n(0.0, std::sqrt(0.5));
  ComplexMatrix m(rows, cols);
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) m(r, c) = Complex(n(rng), n(rng));
  }
  return m;
}

inline CVector random_vector(std::mt19937_64& rng, std::size_t n) {
  std::normal_distribution<double> g(0.0, 1.0);
  CVector v(n);
  for (auto& x : v) x = Complex(g(rng), g(rng));
  return v;
}

// ---- combinatorics ---------------------------------------------------------

inline double factorial(int n) {
  double f = 1.0;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

// All r-subsets of [n] via bitmasks, sorted lexicographically.
inline std::vector<mimocc::UserSet> brute_force_subsets(int n, int r) {
  std::vector<mimocc::UserSet> out;
  for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
    if (std::popcount(mask) != r) continue;
    mimocc::UserSet s;
    for (int i = 0; i < n; ++i) {
      if (mask & (1u << i)) s.push_back(i + 1);
    }
    out.push_back(s);
  }
  std::sort(out.begin(), out.end());
  return out;
}

// Demanded fragments of user k: W_P^{q,g}(k) for k not in P.
inline std::set<mimocc::SubpacketId> demanded_fragments(int users, int t, int q_count, int g_count,
                                                        int user) {
  std::set<mimocc::SubpacketId> out;
  for (const auto& p : brute_force_subsets(users, t)) {
    if (std::find(p.begin(), p.end(), user) != p.end()) continue;
    for (int q = 1; q <= q_count; ++q) {
      for (int g = 1; g <= g_count; ++g) out.insert({user, p, q, g});
    }
  }
  return out;
}

// ---- numerics --------------------------------------------------------------

inline CVector mat_vec(const ComplexMatrix& a, const CVector& x) {
  CVector y(a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) y[i] += a(i, j) * x[j];
  }
  return y;
}

inline double vec_norm(const CVector& v) {
  double s = 0;
  for (const auto& x : v) s += std::norm(x);
  return std::sqrt(s);
}

inline Complex vec_inner(const CVector& a, const CVector& b) {
  Complex s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += std::conj(a[i]) * b[i];
  return s;
}

// Dominant left singular vector and sigma_max of H by power iteration on H H^H.
inline std::pair<CVector, double> power_iteration(const ComplexMatrix& h, int iterations = 2000) {
  CVector u(h.rows(), Complex(1.0, 0.3));
  for (int it = 0; it < iterations; ++it) {
    CVector v(h.cols());
    for (std::size_t j = 0; j < h.cols(); ++j) {
      for (std::size_t i = 0; i < h.rows(); ++i) v[j] += std::conj(h(i, j)) * u[i];
    }
    u = mat_vec(h, v);
    const double n = vec_norm(u);
    for (auto& x : u) x /= n;
  }
  CVector v(h.cols());
  for (std::size_t j = 0; j < h.cols(); ++j) {
    for (std::size_t i = 0; i < h.rows(); ++i) v[j] += std::conj(h(i, j)) * u[i];
  }
  return {u, vec_norm(v)};
}

// Maximizer of |u^H a|^2 / (u^H R u) for a 2x2 Hermitian positive definite
// R: the principal generalized eigenvector, R^{-1} a, with an explicit 2x2
// inverse.
inline CVector mvdr_2x2(const ComplexMatrix& r, const CVector& a) {
  const Complex det = r(0, 0) * r(1, 1) - r(0, 1) * r(1, 0);
  CVector u{(r(1, 1) * a[0] - r(0, 1) * a[1]) / det, (-r(1, 0) * a[0] + r(0, 0) * a[1]) / det};
  const double n = vec_norm(u);
  for (auto& x : u) x /= n;
  return u;
}

// |<a, b>| / (|a||b|): 1 when the vectors are parallel.
inline double alignment(const CVector& a, const CVector& b) {
  return std::abs(vec_inner(a, b)) / (vec_norm(a) * vec_norm(b));
}

// Signal-level SINR: synthesize u^H H_k x term by term, drop the terms the
// user can rebuild from its cache, and measure what remains. Only valid for
// streams with a single decoded payload.
inline std::map<mimocc::StreamId, double> signal_level_sinrs(
    const mimocc::TransmissionVector& tx, const std::vector<ComplexMatrix>& channels,
    const mimocc::BeamformerSet& bf, const mimocc::CachePlacement& placement,
    const std::vector<int>& demands, double noise) {
  std::map<mimocc::StreamId, double> out;
  for (const auto& [stream, u] : bf.receive) {
    const auto& h = channels[static_cast<std::size_t>(stream.user - 1)];
    double signal = 0.0;
    double residual = 0.0;
    for (std::size_t i = 0; i < tx.terms.size(); ++i) {
      CVector hw = mat_vec(h, bf.transmit[i]);
      const double power = std::norm(vec_inner(u, hw));
      const auto served = tx.terms[i].served_streams();
      if (std::find(served.begin(), served.end(), stream) != served.end()) {
        signal += power;
        continue;
      }
      bool known = true;
      for (const auto& sp : tx.terms[i].subpackets()) {
        known = known && placement.has(stream.user, demands[static_cast<std::size_t>(sp.owner - 1)],
                                       sp.cache_set);
      }
      if (!known) residual += power;
    }
    out[stream] = signal / (residual + noise);
  }
  return out;
}

}  // namespace testsupport
