// Experiment driver for the K-cell uplink opportunistic interference
// mitigation simulator. One subcommand per experiment kind; results go to
// CSV or JSON. A JSON spec file can seed the configuration, with flags
// overriding individual fields.

#include <cstdio>
#include <fstream>
#include <string>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "oim/errors.hpp"
#include "oim/harness.hpp"

namespace {

struct CliOptions {
  std::string spec_path;
  std::string out_path = "result.csv";
  std::string format = "csv";
};

void add_experiment(CLI::App& app, oim::ExperimentKind kind,
                    oim::ExperimentSpec& spec, CliOptions& opts,
                    oim::ExperimentKind& chosen, bool& ran) {
  CLI::App* sub = app.add_subcommand(oim::to_string(kind));
  sub->add_option("--spec", opts.spec_path, "JSON spec file (flags override)");
  sub->add_option("--cells", spec.cells, "cell count K (repeatable)");
  sub->add_option("--users", spec.users, "users per cell N (repeatable)");
  sub->add_option("--antennas", spec.antennas, "BS antennas M (repeatable)");
  sub->add_option("--streams", spec.streams, "streams per cell S (repeatable)");
  sub->add_option("--snr", spec.snrs, "linear SNR (repeatable)");
  sub->add_option("--subcarriers", spec.subcarriers,
                  "subcarrier count (repeatable)");
  sub->add_option("--window", spec.windows,
                  "two-step shortlist size (repeatable)");
  sub->add_option("--trials", spec.trials, "trials per grid point");
  sub->add_option("--seed", spec.seed, "master seed");
  sub->add_option("--epsilon", spec.epsilon, "residual-interference budget");
  sub->add_option("--user-cap", spec.user_cap, "largest allowed N");
  sub->add_option("--threads", spec.threads, "worker threads (0 = auto)");
  sub->add_option("--out", opts.out_path, "output file path");
  sub->add_option("--format", opts.format, "csv or json")
      ->check(CLI::IsMember({"csv", "json"}));
  sub->callback([&, kind, sub] {
    chosen = kind;
    ran = true;
    if (!opts.spec_path.empty()) {
      std::ifstream in(opts.spec_path);
      if (!in) throw oim::ConfigError("cannot read spec file " + opts.spec_path);
      nlohmann::json j;
      in >> j;
      oim::ExperimentSpec from_file = j.get<oim::ExperimentSpec>();
      // Flags override file values; anything untouched on the command line
      // keeps what the file said.
      auto keep = [&](const char* flag) { return sub->count(flag) == 0; };
      if (keep("--cells")) spec.cells = from_file.cells;
      if (keep("--users")) spec.users = from_file.users;
      if (keep("--antennas")) spec.antennas = from_file.antennas;
      if (keep("--streams")) spec.streams = from_file.streams;
      if (keep("--snr")) spec.snrs = from_file.snrs;
      if (keep("--subcarriers")) spec.subcarriers = from_file.subcarriers;
      if (keep("--window")) spec.windows = from_file.windows;
      if (keep("--trials")) spec.trials = from_file.trials;
      if (keep("--seed")) spec.seed = from_file.seed;
      if (keep("--epsilon")) spec.epsilon = from_file.epsilon;
      if (keep("--user-cap")) spec.user_cap = from_file.user_cap;
      if (keep("--threads")) spec.threads = from_file.threads;
    }
  });
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"K-cell uplink opportunistic interference mitigation simulator"};
  app.require_subcommand(1);

  oim::ExperimentSpec spec;
  CliOptions opts;
  oim::ExperimentKind chosen = oim::ExperimentKind::leakage_sweep;
  bool ran = false;
  for (oim::ExperimentKind kind :
       {oim::ExperimentKind::leakage_sweep, oim::ExperimentKind::cdf_check,
        oim::ExperimentKind::bounds_check, oim::ExperimentKind::dof_sweep,
        oim::ExperimentKind::upper_bound, oim::ExperimentKind::two_step,
        oim::ExperimentKind::multicarrier_compare}) {
    add_experiment(app, kind, spec, opts, chosen, ran);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const oim::ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  }
  if (!ran) return 2;

  spec.kind = chosen;
  try {
    const oim::ExperimentRecord record = oim::run_experiment(spec);
    const auto format = opts.format == "json" ? oim::OutputFormat::json
                                              : oim::OutputFormat::csv;
    oim::emit(record, format, opts.out_path);
    std::fprintf(stderr, "%s: %zu rows, %ld aborts, %.2fs -> %s\n",
                 oim::to_string(spec.kind).c_str(), record.rows.size(),
                 record.aborts, record.wall_seconds, opts.out_path.c_str());
  } catch (const oim::ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  } catch (const oim::ResourceError& e) {
    std::fprintf(stderr, "resource error: %s\n", e.what());
    return 3;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
