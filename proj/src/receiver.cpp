#include "oim/receiver.hpp"

#include <cmath>

#include "oim/errors.hpp"

namespace oim {

ZfFilter zf_filter_oin(const Matrix& intra, int cell) {
  if (intra.rows() != intra.cols()) {
    throw DimensionError("zf_filter_oin: intra matrix must be M x M");
  }
  return ZfFilter{cell, pseudo_inverse(intra)};
}

ZfFilter zf_filter_oia(const OrthonormalBasis& V, const Matrix& intra,
                       int cell) {
  const Eigen::Index m = intra.rows();
  const Eigen::Index s = intra.cols();
  if (V.ambient_dim() != m || V.basis_dim() + s != m) {
    throw DimensionError("zf_filter_oia: [V | intra] must be square");
  }
  Matrix stacked(m, m);
  stacked.leftCols(V.basis_dim()) = V.columns;
  stacked.rightCols(s) = intra;
  return ZfFilter{cell, pseudo_inverse(stacked).bottomRows(s)};
}

std::vector<ZfFilter> build_filters(const ChannelSet& channels,
                                    const ScheduleDecision& schedule,
                                    Mode mode, const InterferenceBases* bases) {
  const NetworkConfig& cfg = channels.config();
  if (mode == Mode::oia && bases == nullptr) {
    throw MissingBases("build_filters: OIA mode requires bases");
  }
  std::vector<ZfFilter> filters;
  filters.reserve(cfg.cells);
  for (int i = 0; i < cfg.cells; ++i) {
    Matrix intra(cfg.antennas, cfg.streams);
    for (int m = 0; m < cfg.streams; ++m) {
      intra.col(m) = channels.vec(i, i, schedule[i].users[m]);
    }
    filters.push_back(mode == Mode::oin
                          ? zf_filter_oin(intra, i)
                          : zf_filter_oia(bases->directions[i], intra, i));
  }
  return filters;
}

std::vector<StreamReport> compute_sinr(const std::vector<ZfFilter>& filters,
                                       const ChannelSet& channels,
                                       const ScheduleDecision& schedule,
                                       Mode mode,
                                       const InterferenceBases* bases,
                                       double snr) {
  const NetworkConfig& cfg = channels.config();
  if (static_cast<int>(filters.size()) != cfg.cells ||
      static_cast<int>(schedule.size()) != cfg.cells) {
    throw DimensionError("compute_sinr: filters/schedule size mismatch");
  }
  if (mode == Mode::oia && bases == nullptr) {
    throw MissingBases("compute_sinr: OIA mode requires bases");
  }
  const std::vector<double> lif_sums =
      scheduled_lif_sums(channels, schedule, mode, bases);
  std::vector<StreamReport> reports;
  reports.reserve(static_cast<std::size_t>(cfg.cells) * cfg.streams);
  for (int i = 0; i < cfg.cells; ++i) {
    if (filters[i].rows.cols() != cfg.antennas ||
        filters[i].rows.rows() != cfg.streams) {
      throw DimensionError("compute_sinr: filter dimensions mismatch");
    }
    for (int m = 0; m < cfg.streams; ++m) {
      const Eigen::RowVectorXcd g = filters[i].rows.row(m);
      const double gnorm2 = g.squaredNorm();
      const double desired =
          std::norm((g * channels.vec(i, i, schedule[i].users[m]))(0));
      double interference = 0.0;
      for (int k = 0; k < cfg.cells; ++k) {
        if (k == i) continue;
        for (int j = 0; j < cfg.streams; ++j) {
          interference +=
              std::norm((g * channels.vec(i, k, schedule[k].users[j]))(0));
        }
      }
      StreamReport r;
      r.cell = i;
      r.stream = m;
      r.sinr_exact = desired * snr / (gnorm2 + interference * snr);
      r.sinr_lower = (desired / gnorm2) * snr / (1.0 + lif_sums[i] * snr);
      r.rate_bits = std::log2(1.0 + r.sinr_exact);
      r.leakage = interference;
      reports.push_back(r);
    }
  }
  return reports;
}

std::vector<double> leakage_after_zf(const std::vector<ZfFilter>& filters,
                                     const ChannelSet& channels,
                                     const ScheduleDecision& schedule) {
  const NetworkConfig& cfg = channels.config();
  if (static_cast<int>(filters.size()) != cfg.cells ||
      static_cast<int>(schedule.size()) != cfg.cells) {
    throw DimensionError("leakage_after_zf: filters/schedule size mismatch");
  }
  std::vector<double> leakage(cfg.cells, 0.0);
  for (int i = 0; i < cfg.cells; ++i) {
    for (int k = 0; k < cfg.cells; ++k) {
      if (k == i) continue;
      for (int j = 0; j < cfg.streams; ++j) {
        leakage[i] += (filters[i].rows *
                       channels.vec(i, k, schedule[k].users[j]))
                          .squaredNorm();
      }
    }
  }
  return leakage;
}

double sum_rate(const std::vector<StreamReport>& reports) {
  double total = 0.0;
  for (const auto& r : reports) total += r.rate_bits;
  return total;
}

}  // namespace oim
