#pragma once

#include <vector>

#include "oim/linalg.hpp"
#include "oim/rng.hpp"

namespace oim {

/// System parameters of the K-cell uplink: K cells, N users per cell,
/// M receive antennas per base station, S simultaneously transmitting
/// users per cell, and the linear SNR (transmit power over noise power).
struct NetworkConfig {
  int cells = 2;      // K
  int users = 1;      // N
  int antennas = 1;   // M
  int streams = 1;    // S
  double snr = 10.0;  // linear

  void validate() const;
};

/// One block-fading realization: channel vectors from every user to every
/// base station. block(i, k) holds, column per user, the M-dim vectors from
/// the users of cell k to base station i.
///
/// Entries are iid complex Gaussian with N(0, 1) real and imaginary parts,
/// so a squared channel norm over d complex entries is chi-square with 2d
/// degrees of freedom. This is the normalization under which the analytic
/// LIF distribution has its gamma(a, l/2) form.
class ChannelSet {
 public:
  ChannelSet(const NetworkConfig& config, RandomStream& rng);

  const NetworkConfig& config() const { return config_; }

  /// M x N matrix of channels from cell `cell`'s users into BS `bs`.
  const Matrix& block(int bs, int cell) const {
    return blocks_[static_cast<std::size_t>(bs) * config_.cells + cell];
  }

  /// Channel vector of user `user` of cell `cell` seen at BS `bs`.
  Vector vec(int bs, int cell, int user) const {
    return block(bs, cell).col(user);
  }

  /// Writable access, for constructing synthetic realizations.
  Matrix& block_mut(int bs, int cell) {
    return blocks_[static_cast<std::size_t>(bs) * config_.cells + cell];
  }

 private:
  NetworkConfig config_;
  std::vector<Matrix> blocks_;  // indexed bs * K + cell
};

/// Frequency-domain channels for the multi-carrier mode: a single antenna
/// per BS and Nsub iid subcarrier gains per link.
class FrequencyChannelSet {
 public:
  FrequencyChannelSet(int subcarriers, int cells, int users, RandomStream& rng);

  int subcarriers() const { return subcarriers_; }
  int cells() const { return cells_; }
  int users() const { return users_; }

  /// Nsub x N matrix of responses from cell `cell`'s users into BS `bs`.
  const Matrix& block(int bs, int cell) const {
    return blocks_[static_cast<std::size_t>(bs) * cells_ + cell];
  }

  Vector vec(int bs, int cell, int user) const {
    return block(bs, cell).col(user);
  }

 private:
  int subcarriers_;
  int cells_;
  int users_;
  std::vector<Matrix> blocks_;
};

}  // namespace oim
