#ifndef GAUSSFIT_LINFIT_HPP
#define GAUSSFIT_LINFIT_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "gaussfit/error.hpp"
#include "gaussfit/fit_result.hpp"
#include "gaussfit/signal.hpp"
#include "gaussfit/types.hpp"

namespace gaussfit {

/// Per-row multipliers of the weighted log-domain system. Rows are scaled by
/// w[n], so the solve minimises sum w[n]^2 (ln y[n] - a - b x - c x^2)^2.
class WeightVector {
 public:
  WeightVector() = default;
  explicit WeightVector(std::vector<double> weights) : w_(std::move(weights)) {
    for (double w : w_) {
      if (!(w >= 0.0) || !std::isfinite(w)) {
        throw FitError(Errc::InvalidWeights, "weights must be finite and non-negative");
      }
    }
  }
  static WeightVector ones(std::size_t n) { return WeightVector(std::vector<double>(n, 1.0)); }

  std::span<const double> values() const noexcept { return w_; }
  std::size_t size() const noexcept { return w_.size(); }
  double operator[](std::size_t n) const noexcept { return w_[n]; }

 private:
  std::vector<double> w_;
};

/// Per-iteration estimates of an iterative WLS run.
struct WlsTrace {
  std::vector<LogPolyCoeffs> coeffs;
  std::vector<GaussianParams> params;

  std::size_t size() const noexcept { return params.size(); }
};

namespace detail {

/// Coefficients of ln f in the shifted variable t = x - center.
struct CenteredFit {
  LogPolyCoeffs k;
  double center = 0.0;
};

inline LogPolyCoeffs uncenter(const LogPolyCoeffs& k, double center) {
  return {k.a - k.b * center + k.c * center * center, k.b - 2.0 * k.c * center, k.c};
}

inline GaussianParams params_from_centered(const CenteredFit& fit) {
  GaussianParams p = params_from_coeffs(fit.k);
  p.mu += fit.center;
  if (!p.valid()) {
    throw FitError(Errc::InvalidWidth, "fitted coefficients map to non-finite parameters");
  }
  return p;
}

/// Solves the symmetric 3x3 system by elimination with partial pivoting.
inline std::array<double, 3> solve3(std::array<std::array<double, 3>, 3> m,
                                    std::array<double, 3> r) {
  double scale = 0.0;
  for (const auto& row : m) {
    for (double v : row) scale = std::max(scale, std::abs(v));
  }
  if (!(scale > 0.0) || !std::isfinite(scale)) {
    throw FitError(Errc::SingularSystem, "normal matrix is zero or non-finite");
  }
  for (int col = 0; col < 3; ++col) {
    int pivot = col;
    for (int row = col + 1; row < 3; ++row) {
      if (std::abs(m[row][col]) > std::abs(m[pivot][col])) pivot = row;
    }
    if (std::abs(m[pivot][col]) <= 1e-14 * scale) {
      throw FitError(Errc::SingularSystem, "weighted normal matrix is rank deficient");
    }
    std::swap(m[col], m[pivot]);
    std::swap(r[col], r[pivot]);
    for (int row = col + 1; row < 3; ++row) {
      const double f = m[row][col] / m[col][col];
      for (int k = col; k < 3; ++k) m[row][k] -= f * m[col][k];
      r[row] -= f * r[col];
    }
  }
  std::array<double, 3> out{};
  for (int row = 2; row >= 0; --row) {
    double acc = r[row];
    for (int k = row + 1; k < 3; ++k) acc -= m[row][k] * out[k];
    out[row] = acc / m[row][row];
  }
  return out;
}

/// Weighted normal-equation solve about the grid midpoint. Weights are
/// rescaled by their maximum first, which leaves the minimiser unchanged.
inline CenteredFit solve_centered(const SampledSignal& signal, std::span<const double> log_y,
                                  std::span<const double> weights) {
  if (weights.size() != signal.size() || log_y.size() != signal.size()) {
    throw FitError(Errc::ShapeError, "weights and samples differ in length");
  }
  const double w_max = *std::max_element(weights.begin(), weights.end());
  const auto positive = std::count_if(weights.begin(), weights.end(), [](double w) { return w > 0.0; });
  if (positive < 3 || !(w_max > 0.0)) {
    throw FitError(Errc::SingularSystem,
                   "only " + std::to_string(positive) + " rows carry positive weight");
  }
  const double center = signal.x_mid();
  std::array<double, 5> moments{};  // sum u^2 t^j, j = 0..4
  std::array<double, 3> rhs{};      // sum u^2 t^j ln y, j = 0..2
  for (std::size_t n = 0; n < signal.size(); ++n) {
    const double u = weights[n] / w_max;
    const double u2 = u * u;
    if (u2 == 0.0) continue;
    const double t = signal.x(n) - center;
    const double t2 = t * t;
    moments[0] += u2;
    moments[1] += u2 * t;
    moments[2] += u2 * t2;
    moments[3] += u2 * t2 * t;
    moments[4] += u2 * t2 * t2;
    rhs[0] += u2 * log_y[n];
    rhs[1] += u2 * t * log_y[n];
    rhs[2] += u2 * t2 * log_y[n];
  }
  const std::array<std::array<double, 3>, 3> m{{{moments[0], moments[1], moments[2]},
                                                {moments[1], moments[2], moments[3]},
                                                {moments[2], moments[3], moments[4]}}};
  const auto theta = solve3(m, rhs);
  return {{theta[0], theta[1], theta[2]}, center};
}

/// exp(a + b t + c t^2) shifted so the largest weight is 1.
inline std::vector<double> centered_weights(const CenteredFit& fit, const SampledSignal& signal) {
  std::vector<double> logw(signal.size());
  double peak = -std::numeric_limits<double>::infinity();
  for (std::size_t n = 0; n < signal.size(); ++n) {
    const double t = signal.x(n) - fit.center;
    logw[n] = fit.k.a + fit.k.b * t + fit.k.c * t * t;
    if (std::isfinite(logw[n])) peak = std::max(peak, logw[n]);
  }
  for (double& v : logw) {
    const double w = std::exp(v - peak);
    v = std::isfinite(w) ? w : 0.0;
  }
  return logw;
}

}  // namespace detail

/// Minimiser of sum w[n]^2 (ln y[n] - a - b x[n] - c x[n]^2)^2, returned in the
/// signal's own x coordinates.
inline LogPolyCoeffs weighted_ls_solve(const SampledSignal& signal, const WeightVector& weights,
                                       double clamp_floor) {
  const auto log_y = log_transform(signal, clamp_floor);
  const auto fit = detail::solve_centered(signal, log_y, weights.values());
  return detail::uncenter(fit.k, fit.center);
}

/// Unweighted log-domain least squares.
inline FitResult ls_fit(const SampledSignal& signal, double clamp_floor) {
  const auto log_y = log_transform(signal, clamp_floor);
  const std::vector<double> ones(signal.size(), 1.0);
  const auto fit = detail::solve_centered(signal, log_y, ones);
  FitResult result;
  result.params = detail::params_from_centered(fit);
  result.coeffs = detail::uncenter(fit.k, fit.center);
  result.method = MethodId::LS;
  result.iterations_run = 1;
  return result;
}

/// Reconstructed Gaussian exp(a + b x + c x^2) on the signal grid. Entries that
/// overflow are set to zero.
inline WeightVector weights_from_params(const LogPolyCoeffs& coeffs, const SampledSignal& signal) {
  std::vector<double> w(signal.size());
  for (std::size_t n = 0; n < signal.size(); ++n) {
    const double x = signal.x(n);
    const double v = std::exp(coeffs.a + coeffs.b * x + coeffs.c * x * x);
    w[n] = std::isfinite(v) ? v : 0.0;
  }
  return WeightVector(std::move(w));
}

/// Outcome of an iterative WLS run that may stop early. `trace` holds every
/// iteration that completed; `error` is set when iteration trace.size() failed.
struct WlsRun {
  WlsTrace trace;
  std::optional<FitError> error;
};

/// Iterative WLS without throwing on solver failure.
inline WlsRun wls_run(const SampledSignal& signal, const WeightVector& initial_weights,
                      int num_iters, double clamp_floor) {
  if (num_iters < 1) {
    throw FitError(Errc::InvalidConfig, "iterative WLS needs at least one iteration");
  }
  const auto log_y = log_transform(signal, clamp_floor);
  WlsRun run;
  run.trace.coeffs.reserve(static_cast<std::size_t>(num_iters));
  run.trace.params.reserve(static_cast<std::size_t>(num_iters));

  std::vector<double> weights(initial_weights.values().begin(), initial_weights.values().end());
  for (int i = 0; i < num_iters; ++i) {
    detail::CenteredFit fit;
    try {
      fit = detail::solve_centered(signal, log_y, weights);
      run.trace.params.push_back(detail::params_from_centered(fit));
    } catch (FitError& e) {
      e.with_stage("wls").with_iteration(i);
      if (!run.trace.params.empty()) e.with_partial(run.trace.params.back());
      run.error = e;
      return run;
    }
    run.trace.coeffs.push_back(detail::uncenter(fit.k, fit.center));
    if (i + 1 < num_iters) weights = detail::centered_weights(fit, signal);
  }
  return run;
}

/// Iterative WLS: iteration 0 uses `initial_weights`, every later iteration
/// rebuilds the weights from the previous estimate. Failures carry the
/// iteration index and the last valid estimate.
inline std::pair<FitResult, WlsTrace> wls_iterate(const SampledSignal& signal,
                                                  const WeightVector& initial_weights,
                                                  int num_iters, double clamp_floor) {
  WlsRun run = wls_run(signal, initial_weights, num_iters, clamp_floor);
  if (run.error) throw *run.error;
  FitResult result;
  result.params = run.trace.params.back();
  result.coeffs = run.trace.coeffs.back();
  result.method = MethodId::WLS;
  result.iterations_run = num_iters;
  return {std::move(result), std::move(run.trace)};
}

}  // namespace gaussfit

#endif  // GAUSSFIT_LINFIT_HPP
