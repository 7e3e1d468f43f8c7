#ifndef GAUSSFIT_METHODS_HPP
#define GAUSSFIT_METHODS_HPP

#include <cmath>
#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include "gaussfit/erf_table.hpp"
#include "gaussfit/error.hpp"
#include "gaussfit/fit_result.hpp"
#include "gaussfit/initfit.hpp"
#include "gaussfit/linfit.hpp"
#include "gaussfit/signal.hpp"

namespace gaussfit {

struct MethodSpec {
  MethodId id = MethodId::M4;
  int stage2_iters = 2;
  int m5_iters = 12;
  InitConfig init{};
  std::optional<double> clamp_floor;  // default: max(y) * 1e-6
};

inline double resolve_clamp_floor(const MethodSpec& spec, const SampledSignal& signal) {
  return spec.clamp_floor ? *spec.clamp_floor : default_clamp_floor(signal);
}

/// Gaussian template A exp(-(x - mu)^2 / (2 sigma^2)) on the signal grid.
inline WeightVector template_weights(const GaussianParams& p, const SampledSignal& signal) {
  std::vector<double> w(signal.size());
  for (std::size_t n = 0; n < signal.size(); ++n) w[n] = eval_gaussian(p, signal.x(n));
  return WeightVector(std::move(w));
}

/// Iterative WLS seeded with weights built from an initial Gaussian estimate.
inline std::pair<FitResult, WlsTrace> two_stage(const GaussianParams& init,
                                                const SampledSignal& signal, int iters,
                                                double clamp_floor) {
  if (!init.valid()) throw FitError(Errc::InvalidConfig, "initial estimate is not a valid Gaussian");
  return wls_iterate(signal, template_weights(init, signal), iters, clamp_floor);
}

namespace detail {

inline FitResult run_m1(const SampledSignal& signal) {
  PeakEstimate peak;
  try {
    peak = naive_peak(signal);
  } catch (FitError& e) {
    throw e.with_stage("peak");
  }
  double sigma = 0.0;
  try {
    sigma = sigma_area_m1(signal, peak.A_hat);
  } catch (FitError& e) {
    throw e.with_stage("sigma");
  }
  if (!(sigma > 0.0) || !std::isfinite(sigma)) {
    throw FitError(Errc::InvalidWidth, "sample sum gives a non-positive width").with_stage("sigma");
  }
  FitResult result;
  result.method = MethodId::M1;
  result.params = {peak.A_hat, peak.mu_hat, sigma};
  return result;
}

}  // namespace detail

/// Stage 1 (if any) plus an iterative WLS that may stop early. Used by the
/// M2, M4 and M5 pipelines and by the iteration-sweep benchmark.
struct StagedRun {
  FitStatus status = FitStatus::Converged;
  Diagnostics diagnostics;
  WlsRun wls;
};

inline StagedRun staged_wls(const MethodSpec& spec, const SampledSignal& signal,
                            const ErfTable& table, int iters) {
  if (iters < 1) throw FitError(Errc::InvalidConfig, "iteration count must be at least 1");
  const double clamp = resolve_clamp_floor(spec, signal);
  StagedRun run;
  std::optional<GaussianParams> init;
  if (spec.id == MethodId::M2 || spec.id == MethodId::M4) {
    try {
      FitResult stage1 = spec.id == MethodId::M2 ? detail::run_m1(signal)
                                                 : m3_initial_fit(signal, spec.init, table);
      if (stage1.params.valid()) init = stage1.params;
      run.diagnostics = std::move(stage1.diagnostics);
    } catch (const FitError&) {
    }
    if (!init) {
      run.status = FitStatus::DegenerateFallback;
      run.diagnostics.set("stage1_failed", 1.0);
    }
  } else if (spec.id != MethodId::M5) {
    throw FitError(Errc::UnknownMethod, "method has no WLS stage");
  }
  const WeightVector w0 =
      init ? template_weights(*init, signal) : WeightVector(clamped_samples(signal, clamp));
  run.wls = wls_run(signal, w0, iters, clamp);
  return run;
}

/// Runs one of the five benchmarked pipelines.
inline FitResult run_method(const MethodSpec& spec, const SampledSignal& signal,
                            const ErfTable& table) {
  FitResult result;
  switch (spec.id) {
    case MethodId::M1:
      result = detail::run_m1(signal);
      break;
    case MethodId::M3:
      result = m3_initial_fit(signal, spec.init, table);
      break;
    case MethodId::M2:
    case MethodId::M4:
    case MethodId::M5: {
      const int iters = spec.id == MethodId::M5 ? spec.m5_iters : spec.stage2_iters;
      StagedRun run = staged_wls(spec, signal, table, iters);
      if (run.wls.error) throw run.wls.error->with_stage("stage2");
      result.params = run.wls.trace.params.back();
      result.coeffs = run.wls.trace.coeffs.back();
      result.iterations_run = iters;
      result.diagnostics = std::move(run.diagnostics);
      result.status = run.status;
      break;
    }
    default:
      throw FitError(Errc::UnknownMethod, "method " + std::string(to_string(spec.id)) +
                                              " is not one of M1..M5");
  }
  result.method = spec.id;
  if (!result.params.valid()) {
    throw FitError(Errc::InvalidWidth, "fit produced an invalid Gaussian").with_stage("result");
  }
  return result;
}

}  // namespace gaussfit

#endif  // GAUSSFIT_METHODS_HPP
