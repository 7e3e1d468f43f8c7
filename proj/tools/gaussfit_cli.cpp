// gaussfit command-line front end: fit, bench snr, bench iters, erftable.

#include <CLI11.hpp>
#include <json.hpp>

#include <charconv>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "gaussfit/gaussfit.hpp"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitFitFailure = 3;

gaussfit::SweepGrid parse_range(const std::string& text) {
  std::vector<double> parts;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ':')) {
    try {
      std::size_t used = 0;
      parts.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw gaussfit::FitError(gaussfit::Errc::InvalidConfig, "bad range '" + text + "'");
    }
  }
  if (parts.size() == 1) return {parts[0], 1.0, parts[0]};
  if (parts.size() != 3) {
    throw gaussfit::FitError(gaussfit::Errc::InvalidConfig,
                             "range must be start:step:stop, got '" + text + "'");
  }
  return {parts[0], parts[1], parts[2]};
}

std::vector<gaussfit::MethodId> parse_methods(const std::string& text) {
  std::vector<gaussfit::MethodId> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(gaussfit::parse_method_id(item));
  }
  return out;
}

struct FitOptions {
  std::string input;
  std::string method = "M4";
  std::optional<int> iters;
  int window_l = 3;
  std::optional<double> clamp_floor;
  std::string erf_table;
  std::string output;
};

int run_fit(const FitOptions& opt) {
  gaussfit::MethodSpec spec;
  gaussfit::SampledSignal signal = [&] {
    spec.id = gaussfit::parse_method_id(opt.method);
    spec.init.window_L = opt.window_l;
    spec.clamp_floor = opt.clamp_floor;
    if (opt.iters) {
      if (*opt.iters < 1) throw gaussfit::FitError(gaussfit::Errc::InvalidConfig, "--iters must be >= 1");
      spec.stage2_iters = *opt.iters;
      spec.m5_iters = *opt.iters;
    }
    return gaussfit::read_signal_csv(opt.input);
  }();
  const gaussfit::ErfTable table = opt.erf_table.empty()
                                       ? gaussfit::build_erf_table(spec.init.k_grid)
                                       : gaussfit::read_erf_table_csv(opt.erf_table);

  nlohmann::ordered_json out;
  int code = 0;
  try {
    const gaussfit::FitResult r = gaussfit::run_method(spec, signal, table);
    out["A"] = r.params.A;
    out["mu"] = r.params.mu;
    out["sigma"] = r.params.sigma;
    out["method"] = std::string(to_string(r.method));
    out["iterations_run"] = r.iterations_run;
    out["status"] = std::string(to_string(r.status));
    for (const auto& [key, value] : r.diagnostics.entries()) out["diagnostics." + key] = value;
  } catch (const gaussfit::FitError& e) {
    out["method"] = opt.method;
    out["status"] = std::string(to_string(gaussfit::FitStatus::Failed));
    out["error"] = std::string(to_string(e.code()));
    out["error_stage"] = e.stage();
    out["message"] = e.what();
    code = kExitFitFailure;
  }
  std::ofstream file(opt.output);
  if (!file) throw gaussfit::FitError(gaussfit::Errc::InvalidConfig, "cannot write " + opt.output);
  file << out.dump(2) << '\n';
  if (code != 0) std::cerr << "fit failed: " << out["message"].get<std::string>() << '\n';
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Log-domain Gaussian fitting with erf-table initialisation"};
  app.require_subcommand(1);

  FitOptions fit;
  auto* fit_cmd = app.add_subcommand("fit", "Fit one Gaussian to an x,y CSV signal");
  fit_cmd->add_option("--input", fit.input, "Signal CSV with header x,y")->required();
  fit_cmd->add_option("--method", fit.method, "M1|M2|M3|M4|M5")->capture_default_str();
  fit_cmd->add_option("--iters", fit.iters,
                      "WLS iterations (stage 2 of M2/M4, default 2; M5, default 12)");
  fit_cmd->add_option("--window-l", fit.window_l, "Peak averaging window L (default 3)")
      ->capture_default_str();
  fit_cmd->add_option("--clamp-floor", fit.clamp_floor,
                      "Floor applied before the log (default max(y) * 1e-6)");
  fit_cmd->add_option("--erf-table", fit.erf_table,
                      "Lookup table CSV (default: built for k = 0.1:0.01:10)");
  fit_cmd->add_option("--output", fit.output, "Result JSON path")->required();

  gaussfit::BenchConfig bench;
  std::string methods = "M1,M2,M3,M4,M5";
  std::string snr_range = "-10:0.5:20";
  std::string iter_range = "1:1:12";
  std::string bench_out;
  auto* bench_cmd = app.add_subcommand("bench", "Seeded Monte Carlo benchmarks");
  bench_cmd->require_subcommand(1);
  const auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--trials", bench.trials, "Trials per sweep point")->capture_default_str();
    cmd->add_option("--seed", bench.master_seed, "Master seed")->capture_default_str();
    cmd->add_option("--methods", methods, "Comma-separated subset of M1..M5")->capture_default_str();
    cmd->add_option("--stage2-iters", bench.stage2_iters,
                    "Iterations in stage 2 of M2/M4 (default 2)")->capture_default_str();
    cmd->add_option("--m5-iters", bench.m5_iters, "Iterations for M5 (default 12)")
        ->capture_default_str();
    cmd->add_option("--window-l", bench.init.window_L, "Peak averaging window L (default 3)")
        ->capture_default_str();
    cmd->add_option("--threads", bench.threads, "Worker threads")->capture_default_str();
    cmd->add_flag("--timing", bench.timing, "Record mean_time_us (output is then not reproducible)");
    cmd->add_option("--out", bench_out, "Report CSV path")->required();
  };
  auto* snr_cmd = bench_cmd->add_subcommand(
      "snr", "MSE vs SNR; A = 1, mu ~ U[8,9], sigma ~ U[1,1.3], x in [0,10], dx = 0.01");
  add_common(snr_cmd);
  snr_cmd->add_option("--snr", snr_range, "SNR sweep start:step:stop in dB (default -10:0.5:20)")
      ->capture_default_str();
  auto* iters_cmd = bench_cmd->add_subcommand("iters", "MSE vs WLS iteration count at fixed SNR");
  add_common(iters_cmd);
  iters_cmd->add_option("--snr-db", bench.fixed_snr_db, "SNR in dB (default 12)")
      ->capture_default_str();
  iters_cmd->add_option("--iter-sweep", iter_range, "Iteration counts start:step:stop (default 1:1:12)")
      ->capture_default_str();

  double kmin = 0.1;
  double kstep = 0.01;
  double kmax = 10.0;
  std::string erf_out;
  auto* erf_cmd = app.add_subcommand("erftable", "Write the erf(k/sqrt 2) lookup table");
  erf_cmd->add_option("--kmin", kmin, "First k (default 0.1)")->capture_default_str();
  erf_cmd->add_option("--kstep", kstep, "k step (default 0.01)")->capture_default_str();
  erf_cmd->add_option("--kmax", kmax, "Last k (default 10)")->capture_default_str();
  erf_cmd->add_option("--out", erf_out, "Table CSV path")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    if (*fit_cmd) return run_fit(fit);
    if (*erf_cmd) {
      gaussfit::write_erf_table_csv(erf_out,
                                    gaussfit::build_erf_table(gaussfit::KGrid::spanning(kmin, kstep, kmax)));
      return 0;
    }
    bench.methods = parse_methods(methods);
    const gaussfit::ErfTable table = gaussfit::build_erf_table(bench.init.k_grid);
    gaussfit::BenchReport report;
    if (*snr_cmd) {
      bench.snr_grid_db = parse_range(snr_range);
      report = gaussfit::run_bench_snr(bench, table);
    } else {
      const gaussfit::SweepGrid sweep = parse_range(iter_range);
      bench.iter_sweep.clear();
      for (std::size_t i = 0; i < sweep.count(); ++i) {
        bench.iter_sweep.push_back(static_cast<int>(std::lround(sweep.at(i))));
      }
      report = gaussfit::run_bench_iters(bench, table);
    }
    gaussfit::write_report_csv(bench_out, report);
    return 0;
  } catch (const gaussfit::FitError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConfig;
  }
}
