#include "oim/scheduling.hpp"

#include <algorithm>
#include <numeric>

#include "oim/errors.hpp"

namespace oim {

InterferenceBases draw_interference_bases(const NetworkConfig& config,
                                          RandomStream& rng) {
  config.validate();
  if (config.streams >= config.antennas) {
    throw ConfigError("draw_interference_bases: OIA requires S < M");
  }
  InterferenceBases bases;
  bases.directions.reserve(config.cells);
  bases.kernels.reserve(config.cells);
  for (int i = 0; i < config.cells; ++i) {
    OrthonormalBasis V = random_orthonormal(
        config.antennas, config.antennas - config.streams, rng);
    bases.kernels.push_back(null_space_basis(V));
    bases.directions.push_back(std::move(V));
  }
  return bases;
}

double lif_oin(const Vector& h) { return h.squaredNorm(); }

double lif_oia(const OrthonormalBasis& U, const Vector& h) {
  if (h.size() != U.ambient_dim()) {
    throw DimensionError("lif_oia: vector length mismatch");
  }
  return (U.columns.adjoint() * h).squaredNorm();
}

double scheduling_metric(int cell, int user, const ChannelSet& channels,
                         Mode mode, const InterferenceBases* bases) {
  if (mode == Mode::oia && bases == nullptr) {
    throw MissingBases("scheduling_metric: OIA mode requires bases");
  }
  double metric = 0.0;
  for (int other = 0; other < channels.config().cells; ++other) {
    if (other == cell) continue;
    const Vector h = channels.vec(other, cell, user);
    metric += mode == Mode::oin ? lif_oin(h) : lif_oia(bases->kernels[other], h);
  }
  return metric;
}

std::vector<double> cell_metrics(int cell, const ChannelSet& channels,
                                 Mode mode, const InterferenceBases* bases) {
  if (mode == Mode::oia && bases == nullptr) {
    throw MissingBases("cell_metrics: OIA mode requires bases");
  }
  const int users = channels.config().users;
  std::vector<double> metrics(users, 0.0);
  for (int other = 0; other < channels.config().cells; ++other) {
    if (other == cell) continue;
    const Matrix& H = channels.block(other, cell);
    if (mode == Mode::oin) {
      for (int j = 0; j < users; ++j) metrics[j] += H.col(j).squaredNorm();
    } else {
      const Matrix P = bases->kernels[other].columns.adjoint() * H;  // S x N
      for (int j = 0; j < users; ++j) metrics[j] += P.col(j).squaredNorm();
    }
  }
  return metrics;
}

namespace {

/// Indices of the `count` smallest values, ties by lowest index, ascending.
std::vector<int> smallest_indices(const std::vector<double>& values,
                                  int count) {
  std::vector<int> order(values.size());
  std::iota(order.begin(), order.end(), 0);
  const auto less = [&](int a, int b) {
    if (values[a] != values[b]) return values[a] < values[b];
    return a < b;
  };
  std::partial_sort(order.begin(), order.begin() + count, order.end(), less);
  order.resize(count);
  return order;
}

}  // namespace

ScheduleDecision select_users(const std::vector<std::vector<double>>& metrics,
                              int streams) {
  ScheduleDecision decision;
  decision.reserve(metrics.size());
  for (const auto& cell : metrics) {
    if (streams > static_cast<int>(cell.size())) {
      throw ConfigError("select_users: S exceeds the number of users");
    }
    CellSelection sel;
    sel.users = smallest_indices(cell, streams);
    sel.metrics.reserve(streams);
    for (int j : sel.users) sel.metrics.push_back(cell[j]);
    decision.push_back(std::move(sel));
  }
  return decision;
}

std::vector<double> scheduled_lif_sums(const ChannelSet& channels,
                                       const ScheduleDecision& schedule,
                                       Mode mode,
                                       const InterferenceBases* bases) {
  if (mode == Mode::oia && bases == nullptr) {
    throw MissingBases("scheduled_lif_sums: OIA mode requires bases");
  }
  const NetworkConfig& cfg = channels.config();
  std::vector<double> sums(cfg.cells, 0.0);
  for (int i = 0; i < cfg.cells; ++i) {
    for (int k = 0; k < cfg.cells; ++k) {
      if (k == i) continue;
      for (int user : schedule[k].users) {
        const Vector h = channels.vec(i, k, user);
        sums[i] += mode == Mode::oin ? lif_oin(h)
                                     : lif_oia(bases->kernels[i], h);
      }
    }
  }
  return sums;
}

ScheduleDecision two_step_select(const ChannelSet& channels, int window,
                                 Mode mode, const InterferenceBases* bases) {
  const NetworkConfig& cfg = channels.config();
  if (window < cfg.streams || window > cfg.users) {
    throw InvalidWindow("two_step_select: window must be in [S, N]");
  }
  ScheduleDecision decision;
  decision.reserve(cfg.cells);
  for (int i = 0; i < cfg.cells; ++i) {
    const std::vector<double> metrics = cell_metrics(i, channels, mode, bases);
    const std::vector<int> shortlist = smallest_indices(metrics, window);

    // Step 2: desired-channel gains, largest first, ties by lowest index.
    std::vector<double> gains(shortlist.size());
    const Matrix& intra = channels.block(i, i);
    for (std::size_t j = 0; j < shortlist.size(); ++j) {
      gains[j] = intra.col(shortlist[j]).squaredNorm();
    }
    std::vector<int> order(shortlist.size());
    std::iota(order.begin(), order.end(), 0);
    const auto better = [&](int a, int b) {
      if (gains[a] != gains[b]) return gains[a] > gains[b];
      return shortlist[a] < shortlist[b];
    };
    std::partial_sort(order.begin(), order.begin() + cfg.streams, order.end(),
                      better);

    CellSelection sel;
    for (int j = 0; j < cfg.streams; ++j) {
      sel.users.push_back(shortlist[order[j]]);
      sel.metrics.push_back(metrics[shortlist[order[j]]]);
    }
    decision.push_back(std::move(sel));
  }
  return decision;
}

}  // namespace oim
