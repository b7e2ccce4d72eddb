#pragma once

#include <vector>

#include "oim/channel.hpp"
#include "oim/linalg.hpp"

namespace oim {

/// OIN schedules S = M users on the raw cross-channel power; OIA schedules
/// S < M users on the power leaking out of the broadcast interference
/// directions.
enum class Mode { oin, oia };

/// Per-cell interference directions V (dimension M - S) and the kernel U
/// (dimension S) they leave free.
struct InterferenceBases {
  std::vector<OrthonormalBasis> directions;  // V_i, one per cell
  std::vector<OrthonormalBasis> kernels;     // U_i = null space of span(V_i)
};

/// Draws the per-cell random interference directions and their kernels.
/// Requires S < M (OIA only).
InterferenceBases draw_interference_bases(const NetworkConfig& config,
                                          RandomStream& rng);

/// LIF under OIN: total cross-channel power ||h||^2.
double lif_oin(const Vector& h);

/// LIF under OIA: power left after removing the interference directions,
/// ||Proj_U(h)||^2.
double lif_oia(const OrthonormalBasis& U, const Vector& h);

/// Scheduling metric of one user: the sum of its LIF values toward every
/// other cell's BS. In OIA mode the projection uses the *receiving* cell's
/// kernel. Returns 0 for a single-cell network.
double scheduling_metric(int cell, int user, const ChannelSet& channels,
                         Mode mode, const InterferenceBases* bases = nullptr);

/// Metrics of all N users of one cell, vectorized over the cell's blocks.
std::vector<double> cell_metrics(int cell, const ChannelSet& channels,
                                 Mode mode,
                                 const InterferenceBases* bases = nullptr);

struct CellSelection {
  std::vector<int> users;      // selected user indices
  std::vector<double> metrics; // their scheduling-metric values
};

using ScheduleDecision = std::vector<CellSelection>;

/// Per cell, the `streams` users with the smallest metrics, ties broken by
/// lowest user index; metrics returned ascending.
ScheduleDecision select_users(const std::vector<std::vector<double>>& metrics,
                              int streams);

/// Aggregate scheduled LIF per BS: for each cell i, the sum over the other
/// cells' selected users of their LIF toward BS i. This is the residual
/// interference term of the SINR lower bound.
std::vector<double> scheduled_lif_sums(const ChannelSet& channels,
                                       const ScheduleDecision& schedule,
                                       Mode mode,
                                       const InterferenceBases* bases = nullptr);

/// Two-step scheduler: keep the `window` smallest-LIF users, then pick the
/// S among them with the largest desired-channel gains. The returned
/// metrics are the step-1 LIF values of the finally selected users, in
/// selection order (descending desired gain).
ScheduleDecision two_step_select(const ChannelSet& channels, int window,
                                 Mode mode = Mode::oin,
                                 const InterferenceBases* bases = nullptr);

}  // namespace oim
