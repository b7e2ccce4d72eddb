#include "oim/channel.hpp"

#include "oim/errors.hpp"

namespace oim {

void NetworkConfig::validate() const {
  if (cells < 1 || users < 1 || antennas < 1 || streams < 1) {
    throw ConfigError("NetworkConfig: K, N, M, S must all be >= 1");
  }
  if (streams > antennas) {
    throw ConfigError("NetworkConfig: S must not exceed M");
  }
  if (streams > users) {
    throw ConfigError("NetworkConfig: S must not exceed N");
  }
  if (!(snr > 0.0)) {
    throw ConfigError("NetworkConfig: snr must be positive");
  }
}

ChannelSet::ChannelSet(const NetworkConfig& config, RandomStream& rng)
    : config_(config) {
  config_.validate();
  blocks_.reserve(static_cast<std::size_t>(config_.cells) * config_.cells);
  for (int bs = 0; bs < config_.cells; ++bs) {
    for (int cell = 0; cell < config_.cells; ++cell) {
      Matrix H(config_.antennas, config_.users);
      for (int user = 0; user < config_.users; ++user) {
        for (int a = 0; a < config_.antennas; ++a) {
          H(a, user) = rng.next_cgaussian();
        }
      }
      blocks_.push_back(std::move(H));
    }
  }
}

FrequencyChannelSet::FrequencyChannelSet(int subcarriers, int cells, int users,
                                         RandomStream& rng)
    : subcarriers_(subcarriers), cells_(cells), users_(users) {
  if (subcarriers < 1 || cells < 1 || users < 1) {
    throw ConfigError("FrequencyChannelSet: Nsub, K, N must all be >= 1");
  }
  blocks_.reserve(static_cast<std::size_t>(cells) * cells);
  for (int bs = 0; bs < cells; ++bs) {
    for (int cell = 0; cell < cells; ++cell) {
      Matrix H(subcarriers, users);
      for (int user = 0; user < users; ++user) {
        for (int s = 0; s < subcarriers; ++s) {
          H(s, user) = rng.next_cgaussian();
        }
      }
      blocks_.push_back(std::move(H));
    }
  }
}

}  // namespace oim
