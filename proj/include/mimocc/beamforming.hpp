#pragma once

// Transmit/receive beamformer construction and SINR evaluation for one
// scheduled transmission.
//
// Channels are passed per user (index k - 1). A real MIMO channel H_k is
// SfG x SfL; the virtual MISO reduction passes 1 x SfL rows instead, and
// everything below works unchanged with a single receive stream.
//
// At a served stream s the terms split into
//   desired      payload decoded at s,
//   interferers  terms whose zf_set contains s (nulled by ZF, residual otherwise),
//   the rest     rebuilt from the receiver's cache and subtracted.

#include <map>
#include <vector>

#include "mimocc/linalg.hpp"
#include "mimocc/scheme.hpp"

namespace mimocc {

enum class LinkMode { unicast, multicast };

std::string to_string(LinkMode mode);

struct StreamLayout {
  StreamId stream;
  std::vector<std::size_t> desired;
  std::vector<std::size_t> interferers;
};

std::vector<StreamLayout> stream_layout(const TransmissionVector& tx);

// Throws ModeMismatch if the payload kinds disagree with the mode.
void check_link_mode(const TransmissionVector& tx, LinkMode mode);

struct BeamformerSet {
  std::vector<CVector> transmit;          // one per term, length SfL
  std::map<StreamId, CVector> receive;    // unit norm, length = rows of H_k
  std::map<StreamId, CVector> equivalent; // h = H_k^H u

  double total_power() const;
  friend bool operator==(const BeamformerSet&, const BeamformerSet&) = default;
};

// Recomputes equivalent channels from the receivers.
void refresh_equivalent_channels(BeamformerSet& set, const std::vector<ComplexMatrix>& channels);

// Dominant left singular vector of H_k. Throws ZeroMatrix.
CVector strongest_eigenmode_receiver(const ComplexMatrix& h);

// Projection of the serving channel onto the null space of the stacked
// zf channels, scaled to the given power. Throws DegenerateNullspace.
CVector zf_beamformer(const std::vector<CVector>& zf_channels, const CVector& serving_channel,
                      double power);

// (H W W^H H^H + N0 I)^{-1} H w_target, unit norm. Throws SingularCovariance.
CVector mmse_receiver(const ComplexMatrix& h, const std::vector<CVector>& serving_beamformers,
                      std::size_t target, double noise_power);

// Zero-forcing design with uniform power P_T / (number of terms).
//   unicast:   receivers are the left singular vectors of H_k, transmit ZF.
//   multicast: transmit along the top-G right singular vectors of the
//              stacked serving channels, receivers zero-force the other
//              codewords. Needs eta = 1 (UnsupportedCombination otherwise).
BeamformerSet design_zf(const TransmissionVector& tx, const std::vector<ComplexMatrix>& channels,
                        LinkMode mode, double total_power);

struct StreamPowers {
  StreamId stream;
  std::vector<double> signal;  // one per desired term
  double interference = 0.0;
  double noise = 0.0;
};

std::vector<StreamPowers> stream_powers(const TransmissionVector& tx, const BeamformerSet& bf,
                                        double noise_power);

// Per-stream SINR. Streams decoding several terms at once have no single
// SINR and raise ModeMismatch; use stream_rates for those.
std::map<StreamId, double> compute_sinrs(const TransmissionVector& tx, const BeamformerSet& bf,
                                         double noise_power, LinkMode mode);

// Rate (nats) per stream. One desired term: log(1 + SINR). With m desired
// terms the stream is a multiple-access channel and carries m times the
// symmetric rate min_J (1/|J|) log(1 + sum_J p / (I + N0)).
double stream_rate(const StreamPowers& p);
std::map<StreamId, double> stream_rates(const TransmissionVector& tx, const BeamformerSet& bf,
                                        double noise_power);

}  // namespace mimocc
