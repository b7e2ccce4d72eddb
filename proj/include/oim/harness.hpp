#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

namespace oim {

enum class ExperimentKind {
  leakage_sweep,
  cdf_check,
  bounds_check,
  dof_sweep,
  upper_bound,
  two_step,
  multicarrier_compare,
};

std::string to_string(ExperimentKind kind);
ExperimentKind experiment_kind_from_string(const std::string& name);

/// Full description of one experiment: the kind, the parameter grid
/// (cross product of the nonempty lists), trial count, and seed. Identical
/// specs produce byte-identical output files.
struct ExperimentSpec {
  ExperimentKind kind = ExperimentKind::leakage_sweep;
  // Empty lists fall back to kind-specific defaults; in a dof sweep an
  // empty user list means "derive N from snr".
  std::vector<int> cells{2};
  std::vector<int> users{};
  std::vector<int> antennas{};
  std::vector<int> streams{};
  std::vector<double> snrs{10.0};
  std::vector<int> subcarriers{2};
  std::vector<int> windows{};  // two-step M-tilde values
  long trials = 0;              // 0 = kind-specific default
  std::uint64_t seed = 1;
  double epsilon = 1.0;
  long user_cap = 1000000;      // guards derived N in dof sweeps
  int threads = 0;              // 0 = hardware concurrency

  long effective_trials() const;
};

void to_json(nlohmann::json& j, const ExperimentSpec& spec);
void from_json(const nlohmann::json& j, ExperimentSpec& spec);

/// Tabular result: one row per grid point, fixed columns per kind.
/// Aborted (rank-deficient) trials are redrawn and counted; every
/// statistic covers exactly `trials` successful trials.
struct ExperimentRecord {
  ExperimentSpec spec;
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
  long aborts = 0;
  double wall_seconds = 0.0;  // informational, never written to files
};

ExperimentRecord run_leakage_sweep(const ExperimentSpec& spec);
ExperimentRecord run_cdf_check(const ExperimentSpec& spec);
ExperimentRecord run_bounds_check(const ExperimentSpec& spec);
ExperimentRecord run_dof_sweep(const ExperimentSpec& spec);
ExperimentRecord run_upper_bound(const ExperimentSpec& spec);
ExperimentRecord run_two_step(const ExperimentSpec& spec);
ExperimentRecord run_multicarrier_compare(const ExperimentSpec& spec);

/// Dispatch on spec.kind.
ExperimentRecord run_experiment(const ExperimentSpec& spec);

enum class OutputFormat { csv, json };

/// Writes the record atomically (temp file + rename). CSV: documented
/// header row, '.' decimal separator, LF endings. JSON mirrors the record
/// losslessly, spec included.
void emit(const ExperimentRecord& record, OutputFormat format,
          const std::string& path);

}  // namespace oim
