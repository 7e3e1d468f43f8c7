#ifndef GAUSSFIT_BENCH_HPP
#define GAUSSFIT_BENCH_HPP

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <fstream>
#include <limits>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include "gaussfit/csv.hpp"
#include "gaussfit/erf_table.hpp"
#include "gaussfit/error.hpp"
#include "gaussfit/methods.hpp"
#include "gaussfit/random.hpp"
#include "gaussfit/signal.hpp"

namespace gaussfit {

struct UniformRange {
  double lo = 0.0;
  double hi = 1.0;
};

/// Inclusive sweep start, start + step, ..., stop.
struct SweepGrid {
  double start = -10.0;
  double step = 0.5;
  double stop = 20.0;

  std::size_t count() const {
    return static_cast<std::size_t>(std::floor((stop - start) / step + 0.5)) + 1;
  }
  double at(std::size_t i) const { return start + static_cast<double>(i) * step; }
};

struct BenchConfig {
  double A_true = 1.0;
  UniformRange mu_dist{8.0, 9.0};
  UniformRange sigma_dist{1.0, 1.3};
  double x_min = 0.0;
  double x_max = 10.0;
  double delta_x = 0.01;
  SweepGrid snr_grid_db{};
  int trials = 1000;
  std::uint64_t master_seed = 7;
  std::vector<MethodId> methods{MethodId::M1, MethodId::M2, MethodId::M3, MethodId::M4,
                                MethodId::M5};
  std::vector<int> iter_sweep;  // iteration-count mode only
  double fixed_snr_db = 12.0;
  int stage2_iters = 2;
  int m5_iters = 12;
  InitConfig init{};
  std::optional<double> clamp_floor;
  unsigned threads = 1;
  bool timing = false;  // off keeps reports byte-reproducible (mean_time_us = 0)

  std::size_t n_samples() const {
    return static_cast<std::size_t>(std::floor((x_max - x_min) / delta_x + 0.5)) + 1;
  }

  MethodSpec method_spec(MethodId id) const {
    return {id, stage2_iters, m5_iters, init, clamp_floor};
  }

  void validate() const {
    const auto fail = [](const std::string& what) { throw FitError(Errc::InvalidConfig, what); };
    if (trials < 1) fail("trials must be at least 1");
    if (!(A_true > 0.0)) fail("amplitude must be positive");
    if (!(mu_dist.lo <= mu_dist.hi)) fail("mu distribution bounds out of order");
    if (!(sigma_dist.lo <= sigma_dist.hi) || !(sigma_dist.lo > 0.0)) fail("bad sigma distribution");
    if (!(delta_x > 0.0) || !(x_max > x_min)) fail("bad sampling grid");
    if (n_samples() < 3) fail("grid has fewer than 3 samples");
    if (!(snr_grid_db.step > 0.0) || !(snr_grid_db.stop >= snr_grid_db.start)) fail("bad SNR grid");
    if (methods.empty()) fail("no methods selected");
    if (stage2_iters < 1 || m5_iters < 1) fail("iteration counts must be at least 1");
    if (threads < 1) fail("threads must be at least 1");
    for (int it : iter_sweep) {
      if (it < 1) fail("iteration sweep entries must be at least 1");
    }
  }
};

enum class BenchMode { Snr, Iters };

inline constexpr std::array<std::string_view, 3> kParamNames{"A", "mu", "sigma"};

struct BenchRow {
  MethodId method = MethodId::M1;
  double sweep = 0.0;
  std::string param;
  double mse = 0.0;
  int trials = 0;
  int degenerate = 0;
  double mean_time_us = 0.0;
  std::uint64_t seed = 0;
};

struct BenchReport {
  BenchMode mode = BenchMode::Snr;
  std::vector<BenchRow> rows;

  const BenchRow* find(MethodId method, double sweep, std::string_view param) const {
    for (const auto& row : rows) {
      if (row.method == method && row.sweep == sweep && row.param == param) return &row;
    }
    return nullptr;
  }
  double mse(MethodId method, double sweep, std::string_view param) const {
    const BenchRow* row = find(method, sweep, param);
    if (row == nullptr) throw FitError(Errc::ShapeError, "no such report cell");
    return row->mse;
  }
};

/// Component-wise mean squared error over (A, mu, sigma).
inline std::array<double, 3> mse_aggregate(std::span<const GaussianParams> estimates,
                                           std::span<const GaussianParams> truths) {
  if (estimates.size() != truths.size() || estimates.empty()) {
    throw FitError(Errc::ShapeError, "estimates and truths must have equal, non-zero length");
  }
  std::array<double, 3> sum{};
  for (std::size_t i = 0; i < estimates.size(); ++i) {
    const double dA = estimates[i].A - truths[i].A;
    const double dm = estimates[i].mu - truths[i].mu;
    const double ds = estimates[i].sigma - truths[i].sigma;
    sum[0] += dA * dA;
    sum[1] += dm * dm;
    sum[2] += ds * ds;
  }
  const auto n = static_cast<double>(estimates.size());
  return {sum[0] / n, sum[1] / n, sum[2] / n};
}

inline std::uint64_t trial_seed(std::uint64_t master_seed, std::size_t sweep_index,
                                std::size_t trial) {
  return hash64(master_seed, sweep_index, trial);
}

struct Trial {
  GaussianParams truth;
  SampledSignal signal;
};

/// Draws (mu, sigma) and the noisy signal for one trial from its seed alone.
inline Trial make_trial(const BenchConfig& config, double snr_db, std::uint64_t seed) {
  const CounterStream draws(hash64(seed, 0));
  const GaussianParams truth{config.A_true,
                             draws.uniform(0, config.mu_dist.lo, config.mu_dist.hi),
                             draws.uniform(1, config.sigma_dist.lo, config.sigma_dist.hi)};
  GaussianParams shifted = truth;
  shifted.mu -= config.x_min;
  const SampledSignal raw = sample_gaussian(shifted, config.delta_x, config.n_samples(),
                                            NoiseSpec{snr_db, hash64(seed, 1)});
  std::vector<double> y(raw.samples().begin(), raw.samples().end());
  return {truth, SampledSignal(std::move(y), config.delta_x, config.x_min, raw.noise_power())};
}

namespace detail {

struct Outcome {
  std::optional<GaussianParams> estimate;
  bool degenerate = false;
  double time_us = 0.0;
};

inline Outcome outcome_of(const FitResult& r) {
  return {r.params, r.status != FitStatus::Converged, 0.0};
}

inline Outcome outcome_of(const FitError& e) { return {e.partial(), true, 0.0}; }

template <class F>
Outcome timed(bool timing, F&& body) {
  if (!timing) return body();
  const auto start = std::chrono::steady_clock::now();
  Outcome out = body();
  const auto stop = std::chrono::steady_clock::now();
  out.time_us = std::chrono::duration<double, std::micro>(stop - start).count();
  return out;
}

/// Runs work(i) for i in [0, count) on `threads` workers with a fixed
/// stride assignment; every result slot is written by exactly one worker.
template <class Work>
void parallel_for(std::size_t count, unsigned threads, const Work& work) {
  if (threads <= 1 || count <= 1) {
    for (std::size_t i = 0; i < count; ++i) work(i);
    return;
  }
  std::vector<std::jthread> pool;
  const std::size_t stride = threads;
  for (unsigned t = 0; t < threads; ++t) {
    pool.emplace_back([&, t] {
      for (std::size_t i = t; i < count; i += stride) work(i);
    });
  }
}

/// Outcomes laid out as [point][method][trial].
struct OutcomeGrid {
  std::size_t points = 0;
  std::size_t methods = 0;
  std::size_t trials = 0;
  std::vector<Outcome> cells;
  std::vector<GaussianParams> truths;  // [point][trial]

  OutcomeGrid(std::size_t p, std::size_t m, std::size_t t)
      : points(p), methods(m), trials(t), cells(p * m * t), truths(p * t) {}
  Outcome& at(std::size_t p, std::size_t m, std::size_t t) {
    return cells[(p * methods + m) * trials + t];
  }
  GaussianParams& truth(std::size_t p, std::size_t t) { return truths[p * trials + t]; }
};

/// Sums in trial order, so the result is independent of scheduling.
inline BenchReport aggregate(OutcomeGrid& grid, const BenchConfig& config, BenchMode mode,
                             const std::vector<double>& sweep_values) {
  BenchReport report;
  report.mode = mode;
  for (std::size_t m = 0; m < grid.methods; ++m) {
    for (std::size_t p = 0; p < grid.points; ++p) {
      std::array<double, 3> sum{};
      std::size_t included = 0;
      int degenerate = 0;
      double time_sum = 0.0;
      for (std::size_t t = 0; t < grid.trials; ++t) {
        const Outcome& o = grid.at(p, m, t);
        const GaussianParams& truth = grid.truth(p, t);
        if (o.degenerate) ++degenerate;
        time_sum += o.time_us;
        if (!o.estimate) continue;
        ++included;
        const std::array<double, 3> err{o.estimate->A - truth.A, o.estimate->mu - truth.mu,
                                        o.estimate->sigma - truth.sigma};
        for (int k = 0; k < 3; ++k) sum[k] += err[k] * err[k];
      }
      for (int k = 0; k < 3; ++k) {
        BenchRow row;
        row.method = config.methods[m];
        row.sweep = sweep_values[p];
        row.param = std::string(kParamNames[k]);
        row.mse = included > 0 ? sum[k] / static_cast<double>(included)
                               : std::numeric_limits<double>::quiet_NaN();
        row.trials = config.trials;
        row.degenerate = degenerate;
        row.mean_time_us = time_sum / static_cast<double>(grid.trials);
        row.seed = config.master_seed;
        report.rows.push_back(std::move(row));
      }
    }
  }
  return report;
}

inline Outcome run_once(const MethodSpec& spec, const SampledSignal& signal,
                        const ErfTable& table, bool timing) {
  return timed(timing, [&]() -> Outcome {
    try {
      return outcome_of(run_method(spec, signal, table));
    } catch (const FitError& e) {
      return outcome_of(e);
    }
  });
}

}  // namespace detail

/// MSE versus SNR: every method sees the same noisy signal within a trial.
/// Trials with no estimate at all are left out of the MSE and counted as
/// degenerate; failed trials with a partial estimate are included.
inline BenchReport run_bench_snr(const BenchConfig& config, const ErfTable& table) {
  config.validate();
  const std::size_t points = config.snr_grid_db.count();
  const auto trials = static_cast<std::size_t>(config.trials);
  detail::OutcomeGrid grid(points, config.methods.size(), trials);
  std::vector<MethodSpec> specs;
  for (MethodId id : config.methods) specs.push_back(config.method_spec(id));

  detail::parallel_for(points * trials, config.threads, [&](std::size_t job) {
    const std::size_t p = job / trials;
    const std::size_t t = job % trials;
    const Trial trial =
        make_trial(config, config.snr_grid_db.at(p), trial_seed(config.master_seed, p, t));
    grid.truth(p, t) = trial.truth;
    for (std::size_t m = 0; m < specs.size(); ++m) {
      grid.at(p, m, t) = detail::run_once(specs[m], trial.signal, table, config.timing);
    }
  });

  std::vector<double> sweep(points);
  for (std::size_t p = 0; p < points; ++p) sweep[p] = config.snr_grid_db.at(p);
  return detail::aggregate(grid, config, BenchMode::Snr, sweep);
}

/// MSE versus iteration count at a fixed SNR. One WLS trace per trial and
/// method supplies every sweep point; M1 and M3 do not iterate and repeat
/// their single estimate at every point.
inline BenchReport run_bench_iters(const BenchConfig& config, const ErfTable& table) {
  config.validate();
  if (config.iter_sweep.empty()) throw FitError(Errc::InvalidConfig, "empty iteration sweep");
  const std::size_t points = config.iter_sweep.size();
  const auto trials = static_cast<std::size_t>(config.trials);
  const int max_iters = *std::max_element(config.iter_sweep.begin(), config.iter_sweep.end());
  detail::OutcomeGrid grid(points, config.methods.size(), trials);

  detail::parallel_for(trials, config.threads, [&](std::size_t t) {
    const Trial trial =
        make_trial(config, config.fixed_snr_db, trial_seed(config.master_seed, 0, t));
    for (std::size_t p = 0; p < points; ++p) grid.truth(p, t) = trial.truth;
    for (std::size_t m = 0; m < config.methods.size(); ++m) {
      const MethodId id = config.methods[m];
      const MethodSpec spec = config.method_spec(id);
      if (id == MethodId::M1 || id == MethodId::M3) {
        const detail::Outcome o = detail::run_once(spec, trial.signal, table, config.timing);
        for (std::size_t p = 0; p < points; ++p) grid.at(p, m, t) = o;
        continue;
      }
      std::optional<StagedRun> run;
      const detail::Outcome timing_only = detail::timed(config.timing, [&]() -> detail::Outcome {
        try {
          run = staged_wls(spec, trial.signal, table, max_iters);
        } catch (const FitError&) {
        }
        return {};
      });
      for (std::size_t p = 0; p < points; ++p) {
        detail::Outcome o;
        o.time_us = timing_only.time_us;
        o.degenerate = true;
        if (run) {
          const auto& params = run->wls.trace.params;
          const auto wanted = static_cast<std::size_t>(config.iter_sweep[p]);
          if (params.size() >= wanted) {
            o.estimate = params[wanted - 1];
            o.degenerate = run->status != FitStatus::Converged;
          } else if (!params.empty()) {
            o.estimate = params.back();
          }
        }
        grid.at(p, m, t) = o;
      }
    }
  });

  std::vector<double> sweep(points);
  for (std::size_t p = 0; p < points; ++p) sweep[p] = config.iter_sweep[p];
  return detail::aggregate(grid, config, BenchMode::Iters, sweep);
}

inline void write_report_csv(std::ostream& out, const BenchReport& report) {
  out << "method,sweep,param,mse,trials,degenerate,mean_time_us,seed\n";
  for (const auto& row : report.rows) {
    out << to_string(row.method) << ',' << format_double(row.sweep) << ',' << row.param << ','
        << format_double(row.mse) << ',' << row.trials << ',' << row.degenerate << ','
        << format_double(row.mean_time_us) << ',' << row.seed << '\n';
  }
}

inline void write_report_csv(const std::string& path, const BenchReport& report) {
  std::ofstream out(path);
  if (!out) throw FitError(Errc::ParseError, "cannot write " + path);
  write_report_csv(out, report);
}

}  // namespace gaussfit

#endif  // GAUSSFIT_BENCH_HPP
