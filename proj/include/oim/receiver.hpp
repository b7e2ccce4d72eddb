#pragma once

#include <vector>

#include "oim/channel.hpp"
#include "oim/linalg.hpp"
#include "oim/scheduling.hpp"

namespace oim {

/// Zero-forcing receive filter of one cell. Rows are the filter vectors
/// g_m^H; G times the selected intra-cell channel matrix is the identity,
/// and in OIA mode G additionally annihilates the broadcast interference
/// directions.
struct ZfFilter {
  int cell = 0;
  Matrix rows;  // S x M
};

/// Per-stream link statistics for one fading block.
struct StreamReport {
  int cell = 0;
  int stream = 0;
  double sinr_exact = 0.0;
  double sinr_lower = 0.0;  // Cauchy-Schwarz bound via the scheduled LIFs
  double rate_bits = 0.0;   // log2(1 + sinr_exact)
  double leakage = 0.0;     // post-ZF interference power, desired gain = 1
};

/// OIN filter: pseudo-inverse of the M x M matrix of selected home-cell
/// channels.
ZfFilter zf_filter_oin(const Matrix& intra, int cell = 0);

/// OIA filter: the S rows of pinv([V | intra]) matching the intra columns,
/// so each row nulls span(V) and picks out exactly one desired stream.
ZfFilter zf_filter_oia(const OrthonormalBasis& V, const Matrix& intra,
                       int cell = 0);

/// Builds all K filters for a schedule. In OIA mode `bases` must be given.
std::vector<ZfFilter> build_filters(const ChannelSet& channels,
                                    const ScheduleDecision& schedule,
                                    Mode mode,
                                    const InterferenceBases* bases = nullptr);

/// Exact SINR, its LIF-based lower bound, rate, and per-stream leakage.
///
/// The noise convention: transmit power 1, noise variance 1/snr, so the
/// exact SINR is |g^H h_d|^2 snr / (||g||^2 + sum |g^H h_int|^2 snr) and
/// the lower bound divides through by ||g||^2 and replaces each
/// |g^H h_int|^2 by its Cauchy-Schwarz cap ||g||^2 L. The bound direction
/// holds stream by stream with no tolerance.
std::vector<StreamReport> compute_sinr(const std::vector<ZfFilter>& filters,
                                       const ChannelSet& channels,
                                       const ScheduleDecision& schedule,
                                       Mode mode,
                                       const InterferenceBases* bases,
                                       double snr);

/// Per-cell total post-ZF interference power from the other cells'
/// scheduled users, with the desired stream gain normalized to 1 by the ZF
/// construction.
std::vector<double> leakage_after_zf(const std::vector<ZfFilter>& filters,
                                     const ChannelSet& channels,
                                     const ScheduleDecision& schedule);

/// Sum over streams of log2(1 + exact SINR).
double sum_rate(const std::vector<StreamReport>& reports);

}  // namespace oim
