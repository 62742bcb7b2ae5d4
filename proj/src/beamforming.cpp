#include "mimocc/beamforming.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "mimocc/error.hpp"

namespace mimocc {

namespace {

const ComplexMatrix& channel_of(const std::vector<ComplexMatrix>& channels, int user) {
  if (user < 1 || static_cast<std::size_t>(user) > channels.size()) {
    throw Error(ErrorCode::dimension_mismatch, "no channel for user " + std::to_string(user));
  }
  return channels[static_cast<std::size_t>(user - 1)];
}

CVector row_times(const CVector& u, const ComplexMatrix& h) {
  // h^H u, i.e. the equivalent channel (u^H H)^H
  return h.adjoint() * u;
}

}  // namespace

std::string to_string(LinkMode mode) { return mode == LinkMode::unicast ? "unicast" : "multicast"; }

std::vector<StreamLayout> stream_layout(const TransmissionVector& tx) {
  std::map<StreamId, StreamLayout> by_stream;
  for (std::size_t i = 0; i < tx.terms.size(); ++i) {
    for (const auto& s : tx.terms[i].served_streams()) {
      auto& l = by_stream[s];
      l.stream = s;
      l.desired.push_back(i);
    }
  }
  for (std::size_t i = 0; i < tx.terms.size(); ++i) {
    for (const auto& s : tx.terms[i].zf_set) {
      auto it = by_stream.find(s);
      if (it != by_stream.end()) it->second.interferers.push_back(i);
    }
  }
  std::vector<StreamLayout> out;
  out.reserve(by_stream.size());
  for (auto& [s, l] : by_stream) out.push_back(std::move(l));
  return out;
}

void check_link_mode(const TransmissionVector& tx, LinkMode mode) {
  for (const auto& term : tx.terms) {
    if (term.is_codeword() != (mode == LinkMode::multicast)) {
      throw Error(ErrorCode::mode_mismatch, "term " + to_string(term) + " does not fit " +
                                                to_string(mode) + " evaluation");
    }
  }
}

double BeamformerSet::total_power() const {
  double p = 0.0;
  for (const auto& w : transmit) p += squared_norm(w);
  return p;
}

void refresh_equivalent_channels(BeamformerSet& set, const std::vector<ComplexMatrix>& channels) {
  set.equivalent.clear();
  for (const auto& [s, u] : set.receive) set.equivalent[s] = row_times(u, channel_of(channels, s.user));
}

CVector strongest_eigenmode_receiver(const ComplexMatrix& h) {
  if (h.empty() || h.frobenius_norm() == 0.0) {
    throw Error(ErrorCode::zero_matrix, "strongest eigenmode of a zero channel");
  }
  return svd(h).u.column(0);
}

CVector zf_beamformer(const std::vector<CVector>& zf_channels, const CVector& serving_channel,
                      double power) {
  const std::size_t n = serving_channel.size();
  CVector direction = serving_channel;
  if (!zf_channels.empty()) {
    std::vector<CVector> rows;
    rows.reserve(zf_channels.size());
    for (const auto& h : zf_channels) {
      if (h.size() != n) throw Error(ErrorCode::dimension_mismatch, "zf channel length mismatch");
      // Row h^H so that the constraint reads h^H w = 0.
      CVector r(n);
      for (std::size_t i = 0; i < n; ++i) r[i] = std::conj(h[i]);
      rows.push_back(std::move(r));
    }
    const ComplexMatrix basis = null_space(ComplexMatrix::from_rows(rows));
    if (basis.cols() == 0) {
      throw Error(ErrorCode::degenerate_nullspace,
                  std::to_string(zf_channels.size()) + " zf constraints leave no null space in " +
                      std::to_string(n) + " dimensions");
    }
    // direction = B B^H h
    const CVector coeff = basis.adjoint() * serving_channel;
    direction = basis * coeff;
  }
  const double served = norm(serving_channel);
  const double len = norm(direction);
  if (served == 0.0 || len <= 1e-8 * served) {
    throw Error(ErrorCode::degenerate_nullspace,
                "served channel has no component outside the zf constraint span");
  }
  return scaled(direction, std::sqrt(power) / len);
}

CVector mmse_receiver(const ComplexMatrix& h, const std::vector<CVector>& serving_beamformers,
                      std::size_t target, double noise_power) {
  if (target >= serving_beamformers.size()) {
    throw Error(ErrorCode::out_of_range, "mmse target index outside the serving set");
  }
  const std::size_t m = h.rows();
  ComplexMatrix cov(m, m);
  for (std::size_t i = 0; i < m; ++i) cov(i, i) = noise_power;
  for (const auto& w : serving_beamformers) {
    const CVector hw = h * w;
    for (std::size_t r = 0; r < m; ++r) {
      for (std::size_t c = 0; c < m; ++c) cov(r, c) += hw[r] * std::conj(hw[c]);
    }
  }
  const CVector u = solve_hermitian(cov, h * serving_beamformers[target]);
  if (norm(u) == 0.0) throw Error(ErrorCode::zero_matrix, "mmse receiver collapsed to zero");
  return normalized(u);
}

namespace {

BeamformerSet design_zf_unicast(const TransmissionVector& tx,
                                const std::vector<ComplexMatrix>& channels, double total_power) {
  BeamformerSet bf;
  std::map<int, SvdResult> cache;
  auto receiver = [&](const StreamId& s) -> CVector {
    auto it = cache.find(s.user);
    if (it == cache.end()) it = cache.emplace(s.user, svd(channel_of(channels, s.user))).first;
    const auto& u = it->second.u;
    if (s.stream < 1 || static_cast<std::size_t>(s.stream) > u.cols()) {
      throw Error(ErrorCode::dimension_mismatch,
                  "stream " + to_string(s) + " exceeds the receive dimension");
    }
    return u.column(static_cast<std::size_t>(s.stream - 1));
  };
  for (const auto& term : tx.terms) {
    for (const auto& s : term.served_streams()) bf.receive.try_emplace(s, receiver(s));
    for (const auto& s : term.zf_set) bf.receive.try_emplace(s, receiver(s));
  }
  refresh_equivalent_channels(bf, channels);
  const double share = tx.terms.empty() ? 0.0 : total_power / static_cast<double>(tx.terms.size());
  for (const auto& term : tx.terms) {
    std::vector<CVector> zf;
    for (const auto& s : term.zf_set) zf.push_back(bf.equivalent.at(s));
    const auto served = term.served_streams();
    bf.transmit.push_back(zf_beamformer(zf, bf.equivalent.at(served.front()), share));
  }
  // Receivers for streams that are only constrained, never served, are not
  // part of the result.
  std::map<StreamId, CVector> kept;
  for (const auto& term : tx.terms) {
    for (const auto& s : term.served_streams()) kept[s] = bf.receive.at(s);
  }
  bf.receive = std::move(kept);
  refresh_equivalent_channels(bf, channels);
  return bf;
}

BeamformerSet design_zf_multicast(const TransmissionVector& tx,
                                  const std::vector<ComplexMatrix>& channels, double total_power) {
  BeamformerSet bf;
  const std::size_t g_count = tx.terms.size();
  for (const auto& term : tx.terms) {
    const auto& cw = std::get<CodewordId>(term.payload);
    if (cw.target_set != tx.serving_set) {
      throw Error(ErrorCode::unsupported_combination,
                  "zero-forcing multicast design needs every codeword to target the whole "
                  "serving set (eta = 1)");
    }
  }
  std::vector<CVector> rows;
  for (int k : tx.serving_set) {
    const auto& h = channel_of(channels, k);
    for (std::size_t r = 0; r < h.rows(); ++r) rows.push_back(h.row(r));
  }
  const SvdResult s = svd(ComplexMatrix::from_rows(rows));
  if (s.v.cols() < g_count) {
    throw Error(ErrorCode::degenerate_nullspace, "fewer transmit dimensions than codewords");
  }
  const double share = g_count == 0 ? 0.0 : total_power / static_cast<double>(g_count);
  for (std::size_t g = 0; g < g_count; ++g) {
    bf.transmit.push_back(scaled(s.v.column(g), std::sqrt(share)));
  }
  for (int k : tx.serving_set) {
    const auto& h = channel_of(channels, k);
    // M = H_k W, receivers are the columns of M (M^H M)^{-1}.
    std::vector<CVector> cols;
    for (const auto& w : bf.transmit) cols.push_back(h * w);
    const ComplexMatrix m = ComplexMatrix::from_columns(cols);
    const ComplexMatrix gram = m.adjoint() * m;
    for (std::size_t g = 0; g < g_count; ++g) {
      CVector e(g_count);
      e[g] = 1.0;
      CVector u;
      try {
        u = m * solve_hermitian(gram, e);
      } catch (const Error&) {
        throw Error(ErrorCode::degenerate_nullspace,
                    "user " + std::to_string(k) + " cannot separate the codeword streams");
      }
      bf.receive[StreamId{k, static_cast<int>(g + 1)}] = normalized(u);
    }
  }
  refresh_equivalent_channels(bf, channels);
  return bf;
}

}  // namespace

BeamformerSet design_zf(const TransmissionVector& tx, const std::vector<ComplexMatrix>& channels,
                        LinkMode mode, double total_power) {
  check_link_mode(tx, mode);
  return mode == LinkMode::unicast ? design_zf_unicast(tx, channels, total_power)
                                   : design_zf_multicast(tx, channels, total_power);
}

std::vector<StreamPowers> stream_powers(const TransmissionVector& tx, const BeamformerSet& bf,
                                        double noise_power) {
  if (bf.transmit.size() != tx.terms.size()) {
    throw Error(ErrorCode::dimension_mismatch, "beamformer count differs from term count");
  }
  std::vector<StreamPowers> out;
  for (const auto& layout : stream_layout(tx)) {
    const auto it = bf.equivalent.find(layout.stream);
    if (it == bf.equivalent.end()) {
      throw Error(ErrorCode::dimension_mismatch, "no receiver for " + to_string(layout.stream));
    }
    const CVector& h = it->second;
    StreamPowers p;
    p.stream = layout.stream;
    p.noise = noise_power;
    for (auto i : layout.desired) p.signal.push_back(std::norm(inner(h, bf.transmit[i])));
    for (auto i : layout.interferers) p.interference += std::norm(inner(h, bf.transmit[i]));
    out.push_back(std::move(p));
  }
  return out;
}

std::map<StreamId, double> compute_sinrs(const TransmissionVector& tx, const BeamformerSet& bf,
                                         double noise_power, LinkMode mode) {
  check_link_mode(tx, mode);
  std::map<StreamId, double> out;
  for (const auto& p : stream_powers(tx, bf, noise_power)) {
    if (p.signal.size() != 1) {
      throw Error(ErrorCode::mode_mismatch, "stream " + to_string(p.stream) + " decodes " +
                                                std::to_string(p.signal.size()) +
                                                " terms jointly; it has no single SINR");
    }
    out[p.stream] = p.signal.front() / (p.interference + p.noise);
  }
  return out;
}

double stream_rate(const StreamPowers& p) {
  const double floor = p.interference + p.noise;
  const std::size_t m = p.signal.size();
  if (m == 1) return std::log1p(p.signal.front() / floor);
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t mask = 1; mask < (std::size_t{1} << m); ++mask) {
    double sum = 0.0;
    int size = 0;
    for (std::size_t j = 0; j < m; ++j) {
      if (mask & (std::size_t{1} << j)) {
        sum += p.signal[j];
        ++size;
      }
    }
    best = std::min(best, std::log1p(sum / floor) / size);
  }
  return static_cast<double>(m) * best;
}

std::map<StreamId, double> stream_rates(const TransmissionVector& tx, const BeamformerSet& bf,
                                        double noise_power) {
  std::map<StreamId, double> out;
  for (const auto& p : stream_powers(tx, bf, noise_power)) out[p.stream] = stream_rate(p);
  return out;
}

}  // namespace mimocc
