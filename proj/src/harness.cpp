#include "oim/harness.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <thread>

#include <nlohmann/json.hpp>

#include "oim/analysis.hpp"
#include "oim/channel.hpp"
#include "oim/errors.hpp"
#include "oim/multicarrier.hpp"
#include "oim/receiver.hpp"
#include "oim/rng.hpp"
#include "oim/scheduling.hpp"

namespace oim {

namespace {

using json = nlohmann::json;

std::uint64_t key_mix(std::uint64_t h, std::uint64_t v) {
  v *= 0xff51afd7ed558ccdULL;
  v ^= v >> 33;
  v *= 0xc4ceb9fe1a85ec53ULL;
  h ^= v;
  return h * 0x100000001b3ULL + 0x9e3779b97f4a7c15ULL;
}

/// Substream key of a grid point, built from its parameter values rather
/// than its position so reordering the grid leaves every statistic intact.
struct GridKey {
  std::uint64_t h = 0x243f6a8885a308d3ULL;
  GridKey& add(int v) { return add(static_cast<long>(v)); }
  GridKey& add(long v) {
    h = key_mix(h, static_cast<std::uint64_t>(v));
    return *this;
  }
  GridKey& add(double v) {
    h = key_mix(h, std::bit_cast<std::uint64_t>(v));
    return *this;
  }
};

int worker_count(const ExperimentSpec& spec) {
  if (spec.threads > 0) return spec.threads;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? static_cast<int>(hw) : 1;
}

template <typename Fn>
void parallel_for(long n, int threads, Fn&& fn) {
  threads = std::min<long>(threads, n);
  if (threads <= 1) {
    for (long i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<long> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto worker = [&] {
    for (;;) {
      const long i = next.fetch_add(1);
      if (i >= n) return;
      try {
        fn(i);
      } catch (...) {
        std::scoped_lock lock(error_mutex);
        if (!error) error = std::current_exception();
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

/// Runs one trial body, redrawing on rank-deficient channel draws. The
/// attempt index feeds the substream so a redraw never reuses entropy.
template <typename Body>
auto with_redraw(const RandomStream& master, std::uint64_t key, long trial,
                 std::atomic<long>& aborts, Body&& body) {
  for (std::uint64_t attempt = 0;; ++attempt) {
    RandomStream rng = master.derive(key, static_cast<std::uint64_t>(trial),
                                     attempt);
    try {
      return body(rng);
    } catch (const RankDeficient&) {
      aborts.fetch_add(1);
      if (attempt >= 64) throw;
    }
  }
}

Mode mode_for(const NetworkConfig& cfg) {
  cfg.validate();
  return cfg.streams == cfg.antennas ? Mode::oin : Mode::oia;
}

std::vector<int> or_default(const std::vector<int>& v,
                            const std::vector<int>& fallback) {
  return v.empty() ? fallback : v;
}

double mean(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return v.empty() ? 0.0 : s / static_cast<double>(v.size());
}

double median(std::vector<double> v) {
  if (v.empty()) return 0.0;
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 == 1 ? v[n / 2] : (v[n / 2 - 1] + v[n / 2]) / 2.0;
}

double percentile(std::vector<double> v, double p) {
  if (v.empty()) return 0.0;
  std::sort(v.begin(), v.end());
  const auto idx = static_cast<std::size_t>(
      std::ceil(p * static_cast<double>(v.size()))) ;
  return v[std::min(v.size() - 1, idx == 0 ? 0 : idx - 1)];
}

/// Kolmogorov-Smirnov sup-distance between sorted samples and a CDF.
template <typename Cdf>
double ks_distance(std::vector<double> samples, Cdf&& cdf) {
  std::sort(samples.begin(), samples.end());
  const double n = static_cast<double>(samples.size());
  double sup = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double f = cdf(samples[i]);
    sup = std::max(sup, std::abs(f - static_cast<double>(i + 1) / n));
    sup = std::max(sup, std::abs(f - static_cast<double>(i) / n));
  }
  return sup;
}

struct TrialContext {
  ChannelSet channels;
  std::optional<InterferenceBases> bases;
  Mode mode;

  TrialContext(const NetworkConfig& cfg, RandomStream& rng)
      : channels(cfg, rng), mode(mode_for(cfg)) {
    if (mode == Mode::oia) bases = draw_interference_bases(cfg, rng);
  }

  const InterferenceBases* bases_ptr() const {
    return bases ? &*bases : nullptr;
  }

  std::vector<std::vector<double>> all_metrics() const {
    std::vector<std::vector<double>> metrics;
    metrics.reserve(channels.config().cells);
    for (int i = 0; i < channels.config().cells; ++i) {
      metrics.push_back(cell_metrics(i, channels, mode, bases_ptr()));
    }
    return metrics;
  }
};

}  // namespace

std::string to_string(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::leakage_sweep: return "leakage-sweep";
    case ExperimentKind::cdf_check: return "cdf-check";
    case ExperimentKind::bounds_check: return "bounds-check";
    case ExperimentKind::dof_sweep: return "dof-sweep";
    case ExperimentKind::upper_bound: return "upper-bound";
    case ExperimentKind::two_step: return "two-step";
    case ExperimentKind::multicarrier_compare: return "multicarrier-compare";
  }
  throw ConfigError("unknown experiment kind");
}

ExperimentKind experiment_kind_from_string(const std::string& name) {
  for (ExperimentKind kind :
       {ExperimentKind::leakage_sweep, ExperimentKind::cdf_check,
        ExperimentKind::bounds_check, ExperimentKind::dof_sweep,
        ExperimentKind::upper_bound, ExperimentKind::two_step,
        ExperimentKind::multicarrier_compare}) {
    if (to_string(kind) == name) return kind;
  }
  throw ConfigError("unknown experiment kind: " + name);
}

long ExperimentSpec::effective_trials() const {
  if (trials > 0) return trials;
  return kind == ExperimentKind::cdf_check ? 100000 : 1000;
}

void to_json(json& j, const ExperimentSpec& spec) {
  j = json{{"kind", to_string(spec.kind)},
           {"cells", spec.cells},
           {"users", spec.users},
           {"antennas", spec.antennas},
           {"streams", spec.streams},
           {"snr", spec.snrs},
           {"subcarriers", spec.subcarriers},
           {"window", spec.windows},
           {"trials", spec.trials},
           {"seed", spec.seed},
           {"epsilon", spec.epsilon},
           {"user_cap", spec.user_cap},
           {"threads", spec.threads}};
}

void from_json(const json& j, ExperimentSpec& spec) {
  if (j.contains("kind")) {
    spec.kind = experiment_kind_from_string(j.at("kind").get<std::string>());
  }
  spec.cells = j.value("cells", spec.cells);
  spec.users = j.value("users", spec.users);
  spec.antennas = j.value("antennas", spec.antennas);
  spec.streams = j.value("streams", spec.streams);
  spec.snrs = j.value("snr", spec.snrs);
  spec.subcarriers = j.value("subcarriers", spec.subcarriers);
  spec.windows = j.value("window", spec.windows);
  spec.trials = j.value("trials", spec.trials);
  spec.seed = j.value("seed", spec.seed);
  spec.epsilon = j.value("epsilon", spec.epsilon);
  spec.user_cap = j.value("user_cap", spec.user_cap);
  spec.threads = j.value("threads", spec.threads);
}

ExperimentRecord run_leakage_sweep(const ExperimentSpec& spec) {
  ExperimentRecord rec;
  rec.spec = spec;
  rec.columns = {"K", "M", "S", "N", "snr", "trials", "mean_leakage",
                 "median_leakage", "mean_sum_rate", "aborts"};
  const long trials = spec.effective_trials();
  const RandomStream master(spec.seed);
  const auto users = or_default(spec.users, {16});
  for (int k : spec.cells)
    for (int m : or_default(spec.antennas, {2}))
      for (int s : or_default(spec.streams, {m}))
        for (int n : users)
          for (double snr : spec.snrs) {
            NetworkConfig cfg{k, n, m, s, snr};
            cfg.validate();
            const std::uint64_t key =
                GridKey().add(1).add(k).add(m).add(s).add(n).add(snr).h;
            std::vector<double> leak(trials), rate(trials);
            std::atomic<long> aborts{0};
            parallel_for(trials, worker_count(spec), [&](long t) {
              with_redraw(master, key, t, aborts, [&](RandomStream& rng) {
                TrialContext ctx(cfg, rng);
                const auto schedule = select_users(ctx.all_metrics(), s);
                const auto filters = build_filters(ctx.channels, schedule,
                                                   ctx.mode, ctx.bases_ptr());
                leak[t] =
                    mean(leakage_after_zf(filters, ctx.channels, schedule));
                rate[t] = sum_rate(compute_sinr(filters, ctx.channels,
                                                schedule, ctx.mode,
                                                ctx.bases_ptr(), snr));
              });
            });
            rec.aborts += aborts.load();
            rec.rows.push_back({double(k), double(m), double(s), double(n),
                                snr, double(trials), mean(leak), median(leak),
                                mean(rate), double(aborts.load())});
          }
  return rec;
}

ExperimentRecord run_cdf_check(const ExperimentSpec& spec) {
  ExperimentRecord rec;
  rec.spec = spec;
  rec.columns = {"K", "S", "M", "N", "samples", "sup_distance"};
  const long samples = spec.effective_trials();
  const RandomStream master(spec.seed);
  for (int k : spec.cells)
    for (int m : or_default(spec.antennas, {2}))
      for (int s : or_default(spec.streams, {m}))
        for (int n : or_default(spec.users, {1})) {
          NetworkConfig cfg{k, n, m, s, 1.0};
          cfg.validate();
          const std::uint64_t key =
              GridKey().add(2).add(k).add(m).add(s).add(n).h;
          const long per_draw = static_cast<long>(k) * n;
          const long draws = (samples + per_draw - 1) / per_draw;
          std::vector<double> values;
          values.reserve(draws * per_draw);
          std::atomic<long> aborts{0};
          for (long t = 0; t < draws; ++t) {
            with_redraw(master, key, t, aborts, [&](RandomStream& rng) {
              TrialContext ctx(cfg, rng);
              for (const auto& cell : ctx.all_metrics()) {
                values.insert(values.end(), cell.begin(), cell.end());
              }
            });
          }
          values.resize(samples);
          const double shape = static_cast<double>(k - 1) * s;
          const double sup =
              k == 1 ? 0.0
                     : ks_distance(std::move(values), [shape](double l) {
                         return lif_cdf(shape, l);
                       });
          rec.rows.push_back({double(k), double(s), double(m), double(n),
                              double(samples), sup});
        }
  return rec;
}

ExperimentRecord run_bounds_check(const ExperimentSpec& spec) {
  ExperimentRecord rec;
  rec.spec = spec;
  rec.columns = {"K", "S", "shape", "C1", "C2", "lemma1_ok", "gamma_ok"};
  std::vector<double> lemma_grid;
  for (int i = 1; i <= 199; ++i) lemma_grid.push_back(0.01 * i);
  std::vector<double> gamma_grid;
  for (int i = 1; i <= 100; ++i) gamma_grid.push_back((i - 0.5) / 100.0);
  for (int k : spec.cells)
    for (int s : or_default(spec.streams, {1})) {
      const BoundConstants bc = lemma1_constants(k, s);
      const double shape = static_cast<double>(k - 1) * s;
      const bool lemma_ok = check_lemma1(k, s, lemma_grid);
      const bool gamma_ok = check_gamma_inequalities(shape, gamma_grid);
      rec.rows.push_back({double(k), double(s), shape, bc.c1, bc.c2,
                          lemma_ok ? 1.0 : 0.0, gamma_ok ? 1.0 : 0.0});
    }
  return rec;
}

ExperimentRecord run_dof_sweep(const ExperimentSpec& spec) {
  ExperimentRecord rec;
  rec.spec = spec;
  rec.columns = {"K", "M", "S", "snr", "N", "trials", "mean_sum_rate",
                 "prelog", "p_oim", "mean_residual", "aborts"};
  const long trials = spec.effective_trials();
  const RandomStream master(spec.seed);
  for (int k : spec.cells)
    for (int m : or_default(spec.antennas, {1}))
      for (int s : or_default(spec.streams, {m}))
        for (double snr : spec.snrs) {
          std::vector<int> user_grid = spec.users;
          if (user_grid.empty()) {
            // Theorem-1 scaling: N grows like snr^{(K-1)S}.
            const double derived =
                std::ceil(std::pow(snr, double(k - 1) * s));
            if (!(derived <= static_cast<double>(spec.user_cap))) {
              throw ResourceError("dof-sweep: derived N exceeds user cap");
            }
            user_grid.push_back(std::max(s, static_cast<int>(derived)));
          }
          for (int n : user_grid) {
            if (n > spec.user_cap) {
              throw ResourceError("dof-sweep: N exceeds user cap");
            }
            NetworkConfig cfg{k, n, m, s, snr};
            cfg.validate();
            const std::uint64_t key =
                GridKey().add(3).add(k).add(m).add(s).add(n).add(snr).h;
            std::vector<double> rate(trials);
            std::vector<std::vector<double>> lif_sums(trials);
            std::atomic<long> aborts{0};
            parallel_for(trials, worker_count(spec), [&](long t) {
              with_redraw(master, key, t, aborts, [&](RandomStream& rng) {
                TrialContext ctx(cfg, rng);
                const auto schedule = select_users(ctx.all_metrics(), s);
                const auto filters = build_filters(ctx.channels, schedule,
                                                   ctx.mode, ctx.bases_ptr());
                rate[t] = sum_rate(compute_sinr(filters, ctx.channels,
                                                schedule, ctx.mode,
                                                ctx.bases_ptr(), snr));
                lif_sums[t] = scheduled_lif_sums(ctx.channels, schedule,
                                                 ctx.mode, ctx.bases_ptr());
              });
            });
            rec.aborts += aborts.load();
            std::vector<double> residuals;
            residuals.reserve(trials * k);
            for (const auto& cells : lif_sums) {
              for (double v : cells) residuals.push_back(v * snr);
            }
            rec.rows.push_back(
                {double(k), double(m), double(s), snr, double(n),
                 double(trials), mean(rate), mean(rate) / std::log2(snr),
                 estimate_p_oim(lif_sums, snr, spec.epsilon), mean(residuals),
                 double(aborts.load())});
          }
        }
  return rec;
}

ExperimentRecord run_upper_bound(const ExperimentSpec& spec) {
  ExperimentRecord rec;
  rec.spec = spec;
  rec.columns = {"K", "N", "M", "dof_upper", "genie", "gap"};
  for (int k : spec.cells)
    for (int n : or_default(spec.users, {16}))
      for (int m : or_default(spec.antennas, {2})) {
        const double bound = dof_upper_bound(k, n, m);
        const double genie = static_cast<double>(k) * m;
        rec.rows.push_back(
            {double(k), double(n), double(m), bound, genie, genie - bound});
      }
  return rec;
}

ExperimentRecord run_two_step(const ExperimentSpec& spec) {
  ExperimentRecord rec;
  rec.spec = spec;
  rec.columns = {"K", "M", "S", "N", "snr", "window", "trials",
                 "mean_desired_gain", "mean_sum_rate", "mean_selected_lif",
                 "p95_selected_lif", "aborts"};
  const long trials = spec.effective_trials();
  const RandomStream master(spec.seed);
  for (int k : spec.cells)
    for (int m : or_default(spec.antennas, {2}))
      for (int s : or_default(spec.streams, {m}))
        for (int n : or_default(spec.users, {64}))
          for (double snr : spec.snrs)
            for (int window : or_default(spec.windows, {std::min(n, 2 * m)})) {
              NetworkConfig cfg{k, n, m, s, snr};
              cfg.validate();
              const std::uint64_t key = GridKey()
                                            .add(4).add(k).add(m).add(s)
                                            .add(n).add(snr).add(window).h;
              std::vector<double> gain(trials), rate(trials);
              std::vector<std::vector<double>> lif(trials);
              std::atomic<long> aborts{0};
              parallel_for(trials, worker_count(spec), [&](long t) {
                with_redraw(master, key, t, aborts, [&](RandomStream& rng) {
                  TrialContext ctx(cfg, rng);
                  const auto schedule =
                      two_step_select(ctx.channels, window, ctx.mode,
                                      ctx.bases_ptr());
                  double g = 0.0;
                  long count = 0;
                  for (int i = 0; i < k; ++i) {
                    for (int user : schedule[i].users) {
                      g += ctx.channels.vec(i, i, user).squaredNorm();
                      ++count;
                    }
                    lif[t].insert(lif[t].end(), schedule[i].metrics.begin(),
                                  schedule[i].metrics.end());
                  }
                  gain[t] = g / static_cast<double>(count);
                  const auto filters = build_filters(
                      ctx.channels, schedule, ctx.mode, ctx.bases_ptr());
                  rate[t] = sum_rate(compute_sinr(filters, ctx.channels,
                                                  schedule, ctx.mode,
                                                  ctx.bases_ptr(), snr));
                });
              });
              rec.aborts += aborts.load();
              std::vector<double> all_lif;
              for (const auto& v : lif) {
                all_lif.insert(all_lif.end(), v.begin(), v.end());
              }
              rec.rows.push_back({double(k), double(m), double(s), double(n),
                                  snr, double(window), double(trials),
                                  mean(gain), mean(rate), mean(all_lif),
                                  percentile(all_lif, 0.95),
                                  double(aborts.load())});
            }
  return rec;
}

ExperimentRecord run_multicarrier_compare(const ExperimentSpec& spec) {
  ExperimentRecord rec;
  rec.spec = spec;
  rec.columns = {"K", "N", "S", "Nsub", "trials", "mean_opt_metric",
                 "mean_uniform_metric", "aborts"};
  const long trials = spec.effective_trials();
  const RandomStream master(spec.seed);
  for (int k : spec.cells)
    for (int n : or_default(spec.users, {16}))
      for (int s : or_default(spec.streams, {1}))
        for (int nsub : spec.subcarriers) {
          if (k < 2) throw ConfigError("multicarrier-compare: need K >= 2");
          if (s >= nsub || s > n) {
            throw ConfigError(
                "multicarrier-compare: need S < Nsub and S <= N");
          }
          const std::uint64_t key =
              GridKey().add(5).add(k).add(n).add(s).add(nsub).h;
          std::vector<double> opt(trials), uni(trials);
          std::atomic<long> aborts{0};
          const Vector uniform =
              Vector::Constant(nsub, Complex(1.0 / std::sqrt(double(nsub)), 0));
          parallel_for(trials, worker_count(spec), [&](long t) {
            with_redraw(master, key, t, aborts, [&](RandomStream& rng) {
              FrequencyChannelSet fcs(nsub, k, n, rng);
              std::vector<OrthonormalBasis> kernels;
              kernels.reserve(k);
              for (int i = 0; i < k; ++i) {
                kernels.push_back(
                    null_space_basis(random_orthonormal(nsub, nsub - s, rng)));
              }
              double opt_sel = 0.0;
              double uni_sel = 0.0;
              for (int i = 0; i < k; ++i) {
                std::vector<Vector> cross;
                std::vector<OrthonormalBasis> other_kernels;
                for (int l = 0; l < k; ++l) {
                  if (l == i) continue;
                  other_kernels.push_back(kernels[l]);
                }
                std::vector<double> opt_metrics(n), uni_metrics(n);
                for (int j = 0; j < n; ++j) {
                  cross.clear();
                  for (int l = 0; l < k; ++l) {
                    if (l == i) continue;
                    cross.push_back(fcs.vec(l, i, j));
                  }
                  opt_metrics[j] = optimize_weight(cross, other_kernels).second;
                  uni_metrics[j] =
                      weighted_metric({uniform}, cross, other_kernels);
                }
                const auto opt_pick = select_users({opt_metrics}, s);
                const auto uni_pick = select_users({uni_metrics}, s);
                opt_sel += mean(opt_pick[0].metrics);
                uni_sel += mean(uni_pick[0].metrics);
              }
              opt[t] = opt_sel / k;
              uni[t] = uni_sel / k;
            });
          });
          rec.aborts += aborts.load();
          rec.rows.push_back({double(k), double(n), double(s), double(nsub),
                              double(trials), mean(opt), mean(uni),
                              double(aborts.load())});
        }
  return rec;
}

ExperimentRecord run_experiment(const ExperimentSpec& spec) {
  const auto start = std::chrono::steady_clock::now();
  ExperimentRecord rec;
  switch (spec.kind) {
    case ExperimentKind::leakage_sweep: rec = run_leakage_sweep(spec); break;
    case ExperimentKind::cdf_check: rec = run_cdf_check(spec); break;
    case ExperimentKind::bounds_check: rec = run_bounds_check(spec); break;
    case ExperimentKind::dof_sweep: rec = run_dof_sweep(spec); break;
    case ExperimentKind::upper_bound: rec = run_upper_bound(spec); break;
    case ExperimentKind::two_step: rec = run_two_step(spec); break;
    case ExperimentKind::multicarrier_compare:
      rec = run_multicarrier_compare(spec);
      break;
  }
  rec.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
  return rec;
}

namespace {

std::string format_value(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void write_atomic(const std::string& path, const std::string& content) {
  const std::filesystem::path target(path);
  const std::filesystem::path tmp = target.string() + ".tmp";
  {
    std::FILE* f = std::fopen(tmp.c_str(), "wb");
    if (f == nullptr) {
      throw std::runtime_error("emit: cannot open " + tmp.string());
    }
    const std::size_t written = std::fwrite(content.data(), 1, content.size(), f);
    const int rc = std::fclose(f);
    if (written != content.size() || rc != 0) {
      std::filesystem::remove(tmp);
      throw std::runtime_error("emit: short write to " + tmp.string());
    }
  }
  std::filesystem::rename(tmp, target);
}

}  // namespace

void emit(const ExperimentRecord& record, OutputFormat format,
          const std::string& path) {
  std::string out;
  if (format == OutputFormat::csv) {
    for (std::size_t c = 0; c < record.columns.size(); ++c) {
      if (c > 0) out += ',';
      out += record.columns[c];
    }
    out += '\n';
    for (const auto& row : record.rows) {
      for (std::size_t c = 0; c < row.size(); ++c) {
        if (c > 0) out += ',';
        out += format_value(row[c]);
      }
      out += '\n';
    }
  } else {
    json j;
    j["spec"] = record.spec;
    j["columns"] = record.columns;
    j["rows"] = record.rows;
    j["aborts"] = record.aborts;
    out = j.dump(2);
    out += '\n';
  }
  write_atomic(path, out);
}

}  // namespace oim
