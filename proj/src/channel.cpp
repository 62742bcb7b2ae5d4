#include "mimocc/channel.hpp"

#include <cmath>
#include <cstdio>
#include <random>
#include <sstream>

#include "mimocc/error.hpp"

namespace mimocc {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

ChannelRealization draw(const NetworkConfig& config, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, std::sqrt(0.5));
  ChannelRealization ch;
  const auto rows = static_cast<std::size_t>(config.rx_antennas);
  const auto cols = static_cast<std::size_t>(config.tx_antennas);
  for (int k = 0; k < config.users; ++k) {
    ComplexMatrix h(rows, cols);
    for (std::size_t r = 0; r < rows; ++r) {
      for (std::size_t c = 0; c < cols; ++c) {
        const double re = gauss(rng);
        const double im = gauss(rng);
        h(r, c) = Complex(re, im);
      }
    }
    ch.users.push_back(std::move(h));
  }
  return ch;
}

std::string fmt(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

[[noreturn]] void bad_dump(const std::string& detail) {
  throw Error(ErrorCode::parse_error, "channel dump: " + detail);
}

}  // namespace

ComplexMatrix ChannelRealization::stacked() const {
  std::vector<CVector> rows;
  for (const auto& h : users) {
    for (std::size_t r = 0; r < h.rows(); ++r) rows.push_back(h.row(r));
  }
  return ComplexMatrix::from_rows(rows);
}

std::uint64_t trial_seed(std::uint64_t master_seed, std::uint64_t trial) {
  return splitmix64(splitmix64(master_seed) ^ splitmix64(trial + 0x632BE59BD9B4E019ULL));
}

void check_channel_rank(const ChannelRealization& channel, int min_user_rank, int min_stacked_rank) {
  for (std::size_t k = 0; k < channel.users.size(); ++k) {
    const auto r = numerical_rank(channel.users[k]);
    if (static_cast<int>(r) < min_user_rank) {
      throw Error(ErrorCode::rank_deficient, "H_" + std::to_string(k + 1) + " has rank " +
                                                 std::to_string(r) + " < " +
                                                 std::to_string(min_user_rank));
    }
  }
  const auto r = numerical_rank(channel.stacked());
  if (static_cast<int>(r) < min_stacked_rank) {
    throw Error(ErrorCode::rank_deficient, "stacked channel has rank " + std::to_string(r) +
                                               " < " + std::to_string(min_stacked_rank));
  }
}

ChannelRealization generate_channel(const NetworkConfig& config, std::uint64_t master_seed,
                                    std::uint64_t trial, double noise_power) {
  validate(config);
  const std::uint64_t seed = trial_seed(master_seed, trial);
  std::mt19937_64 rng(seed);
  std::string last;
  for (int attempt = 0; attempt < kMaxChannelDraws; ++attempt) {
    ChannelRealization ch = draw(config, rng);
    ch.noise_power = noise_power;
    ch.trial_seed = seed;
    try {
      check_channel_rank(ch, config.rx_multiplexing, config.tx_multiplexing);
      return ch;
    } catch (const Error& e) {
      last = e.what();
    }
  }
  throw Error(ErrorCode::rank_deficient, "no admissible channel after " +
                                             std::to_string(kMaxChannelDraws) + " draws (" + last +
                                             ")");
}

std::string dump_channel(const ChannelRealization& channel) {
  std::ostringstream out;
  const std::size_t rows = channel.users.empty() ? 0 : channel.users.front().rows();
  const std::size_t cols = channel.users.empty() ? 0 : channel.users.front().cols();
  out << "mimocc-channel/1\n"
      << "users " << channel.users.size() << " rows " << rows << " cols " << cols << " noise "
      << fmt(channel.noise_power) << " seed " << channel.trial_seed << "\n";
  for (std::size_t k = 0; k < channel.users.size(); ++k) {
    out << "H " << (k + 1) << "\n";
    const auto& h = channel.users[k];
    for (std::size_t r = 0; r < h.rows(); ++r) {
      for (std::size_t c = 0; c < h.cols(); ++c) {
        out << (c ? " " : "") << fmt(h(r, c).real()) << " " << fmt(h(r, c).imag());
      }
      out << "\n";
    }
  }
  return out.str();
}

ChannelRealization parse_channel(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string magic;
  if (!(in >> magic) || magic != "mimocc-channel/1") bad_dump("missing header line");
  std::string kw[5];
  std::size_t users = 0, rows = 0, cols = 0;
  ChannelRealization ch;
  if (!(in >> kw[0] >> users >> kw[1] >> rows >> kw[2] >> cols >> kw[3] >> ch.noise_power >> kw[4] >>
        ch.trial_seed) ||
      kw[0] != "users" || kw[1] != "rows" || kw[2] != "cols" || kw[3] != "noise" || kw[4] != "seed") {
    bad_dump("malformed dimension line");
  }
  for (std::size_t k = 0; k < users; ++k) {
    std::string tag;
    std::size_t index = 0;
    if (!(in >> tag >> index) || tag != "H" || index != k + 1) {
      bad_dump("expected block 'H " + std::to_string(k + 1) + "'");
    }
    ComplexMatrix h(rows, cols);
    for (std::size_t r = 0; r < rows; ++r) {
      for (std::size_t c = 0; c < cols; ++c) {
        double re = 0, im = 0;
        if (!(in >> re >> im)) bad_dump("truncated entries in H " + std::to_string(k + 1));
        h(r, c) = Complex(re, im);
      }
    }
    ch.users.push_back(std::move(h));
  }
  std::string extra;
  if (in >> extra) bad_dump("trailing content '" + extra + "'");
  return ch;
}

}  // namespace mimocc
