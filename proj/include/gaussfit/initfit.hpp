#ifndef GAUSSFIT_INITFIT_HPP
#define GAUSSFIT_INITFIT_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numbers>
#include <optional>
#include <string>

#include "gaussfit/erf_table.hpp"
#include "gaussfit/error.hpp"
#include "gaussfit/fit_result.hpp"
#include "gaussfit/signal.hpp"
#include "gaussfit/types.hpp"

namespace gaussfit {

struct PeakEstimate {
  std::size_t n_hat = 0;  // start of the winning window (the sample itself for naive_peak)
  double mu_hat = 0.0;
  double A_hat = 0.0;
};

struct PartialAreas {
  double s_beta = 0.0;   // samples before the peak index
  double s_alpha = 0.0;  // peak index and after
};

struct InitConfig {
  int window_L = 3;
  KGrid k_grid{};
};

struct SigmaEstimate {
  double sigma = 0.0;
  double k_star = 0.0;
  std::size_t k_index = 0;
  bool boundary = false;  // k* sits on the first or last grid point
};

/// Largest sample and its index; ties go to the smallest index.
inline PeakEstimate naive_peak(const SampledSignal& signal) {
  const auto ys = signal.samples();
  const auto it = std::max_element(ys.begin(), ys.end());
  if (!(*it > 0.0)) throw FitError(Errc::NoPeak, "signal has no positive sample");
  const auto n = static_cast<std::size_t>(it - ys.begin());
  return {n, signal.x(n), *it};
}

/// Area-based width for a completely sampled Gaussian: sum y dx / (A sqrt(2 pi)).
inline double sigma_area_m1(const SampledSignal& signal, double A_hat) {
  if (!(A_hat > 0.0)) throw FitError(Errc::InvalidAmplitude, "amplitude estimate must be positive");
  double sum = 0.0;
  for (double y : signal.samples()) sum += y;
  return sum * signal.delta_x() / (A_hat * std::sqrt(2.0 * std::numbers::pi));
}

/// Peak of the L-sample moving average. mu and A are read at the window
/// centre n_hat + floor(L/2).
inline PeakEstimate windowed_peak(const SampledSignal& signal, int L) {
  const std::size_t N = signal.size();
  if (L < 1 || static_cast<std::size_t>(L) >= N) {
    throw FitError(Errc::InvalidWindow, "window length " + std::to_string(L) +
                                            " outside [1, " + std::to_string(N - 1) + "]");
  }
  const auto len = static_cast<std::size_t>(L);
  const double weight = 1.0 / static_cast<double>(L);
  std::size_t best = 0;
  double best_sum = -std::numeric_limits<double>::infinity();
  for (std::size_t n = 0; n + len <= N; ++n) {
    double sum = 0.0;
    for (std::size_t l = 0; l < len; ++l) sum += weight * signal[n + l];
    if (sum > best_sum) {
      best_sum = sum;
      best = n;
    }
  }
  const std::size_t centre = best + len / 2;
  return {best, signal.x(centre), signal[centre]};
}

inline PartialAreas partial_areas(const SampledSignal& signal, std::size_t n_hat) {
  if (n_hat >= signal.size()) throw FitError(Errc::InvalidGrid, "peak index outside the signal");
  double before = 0.0;
  double after = 0.0;
  for (std::size_t n = 0; n < n_hat; ++n) before += signal[n];
  for (std::size_t n = n_hat; n < signal.size(); ++n) after += signal[n];
  return {before * signal.delta_x(), after * signal.delta_x()};
}

/// Full scan of (S - sqrt(2 pi) A h / (2k) erf(k / sqrt 2))^2 over the table;
/// sigma = h / k*. Ties go to the smaller k.
inline SigmaEstimate sigma_from_area(double S, double half_width, double A_hat,
                                     const ErfTable& table) {
  if (!(S > 0.0)) throw FitError(Errc::DegenerateArea, "partial area is not positive");
  if (!(half_width > 0.0)) throw FitError(Errc::DegenerateArea, "empty side of the peak");
  if (!(A_hat > 0.0)) throw FitError(Errc::InvalidAmplitude, "amplitude estimate must be positive");
  const double scale = std::sqrt(2.0 * std::numbers::pi) * A_hat * half_width / 2.0;
  std::size_t best = 0;
  double best_cost = std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < table.size(); ++j) {
    const double r = S - scale / table.k(j) * table.value(j);
    const double cost = r * r;
    if (cost < best_cost) {
      best_cost = cost;
      best = j;
    }
  }
  const double k_star = table.k(best);
  return {half_width / k_star, k_star, best, best == 0 || best + 1 == table.size()};
}

/// Peak index implied by a location estimate, clipped to the grid.
inline std::size_t index_of(const SampledSignal& signal, double mu_hat) {
  const double idx = std::round((mu_hat - signal.x0()) / signal.delta_x());
  if (!(idx > 0.0)) return 0;
  const auto last = static_cast<double>(signal.size() - 1);
  return static_cast<std::size_t>(std::min(idx, last));
}

/// Sample-based surrogate for the CRLB-optimal combination weight.
inline double rho_from_samples(const SampledSignal& signal, double mu_hat) {
  const std::size_t n_hat = index_of(signal, mu_hat);
  double upper = 0.0;
  double total = 0.0;
  for (std::size_t n = 0; n < signal.size(); ++n) {
    const double d = mu_hat - signal.x(n);
    const double d2 = d * d;
    const double term = signal[n] * signal[n] * d2 * d2;
    total += term;
    if (n >= n_hat) upper += term;
  }
  if (!(total > 0.0) || !std::isfinite(total)) {
    throw FitError(Errc::DegenerateRho, "weighted sample energy is zero");
  }
  return std::clamp(upper / total, 0.0, 1.0);
}

inline double combine_sigma(double sigma_alpha, double sigma_beta, double rho) {
  return rho * sigma_alpha + (1.0 - rho) * sigma_beta;
}

/// Least-squares amplitude for the fixed template exp(-(x - mu)^2 / (2 sigma^2)).
inline double refine_amplitude(const SampledSignal& signal, double mu_hat, double sigma_hat) {
  if (!(sigma_hat > 0.0) || !std::isfinite(sigma_hat)) {
    throw FitError(Errc::InvalidWidth, "width estimate must be positive");
  }
  double num = 0.0;
  double den = 0.0;
  for (std::size_t n = 0; n < signal.size(); ++n) {
    const double d = signal.x(n) - mu_hat;
    const double g = std::exp(-d * d / (2.0 * sigma_hat * sigma_hat));
    num += g * signal[n];
    den += g * g;
  }
  if (!(den > 0.0)) throw FitError(Errc::InvalidAmplitude, "template vanishes on the grid");
  return num / den;
}

/// Proposed initial fit: windowed peak, split areas, erf-table widths on both
/// sides, rho-weighted combination, then amplitude refinement.
inline FitResult m3_initial_fit(const SampledSignal& signal, const InitConfig& config,
                                const ErfTable& table) {
  const std::size_t N = signal.size();
  const double dx = signal.delta_x();
  FitResult result;
  result.method = MethodId::M3;
  Diagnostics& diag = result.diagnostics;

  PeakEstimate peak;
  try {
    peak = windowed_peak(signal, config.window_L);
  } catch (FitError& e) {
    throw e.with_stage("peak");
  }
  if (!(peak.A_hat > 0.0)) {
    throw FitError(Errc::NoPeak, "windowed peak sample is not positive").with_stage("peak");
  }
  const std::size_t n_hat = index_of(signal, peak.mu_hat);
  const PartialAreas areas = partial_areas(signal, n_hat);
  diag.set("S_beta", areas.s_beta);
  diag.set("S_alpha", areas.s_alpha);

  const auto side = [&](double S, double half_width) -> std::optional<SigmaEstimate> {
    try {
      return sigma_from_area(S, half_width, peak.A_hat, table);
    } catch (const FitError& e) {
      if (e.code() == Errc::DegenerateArea) return std::nullopt;
      throw;
    }
  };
  const auto beta = side(areas.s_beta, static_cast<double>(n_hat) * dx);
  const auto alpha = side(areas.s_alpha, static_cast<double>(N - n_hat) * dx);
  if (!beta && !alpha) {
    throw FitError(Errc::DegenerateArea, "both partial areas are degenerate").with_stage("sigma");
  }

  double rho = 0.0;
  bool flagged = false;
  if (beta && alpha) {
    try {
      rho = rho_from_samples(signal, peak.mu_hat);
    } catch (FitError& e) {
      throw e.with_stage("rho");
    }
  } else {
    rho = alpha ? 1.0 : 0.0;
    flagged = true;
    diag.set("fallback", 1.0);
  }
  if (beta) {
    diag.set("k_star_beta", beta->k_star);
    diag.set("sigma_beta", beta->sigma);
    diag.set("boundary_beta", beta->boundary ? 1.0 : 0.0);
    flagged = flagged || beta->boundary;
  }
  if (alpha) {
    diag.set("k_star_alpha", alpha->k_star);
    diag.set("sigma_alpha", alpha->sigma);
    diag.set("boundary_alpha", alpha->boundary ? 1.0 : 0.0);
    flagged = flagged || alpha->boundary;
  }
  diag.set("rho", rho);

  const double sigma = combine_sigma(alpha ? alpha->sigma : 0.0, beta ? beta->sigma : 0.0, rho);
  double A = 0.0;
  try {
    A = refine_amplitude(signal, peak.mu_hat, sigma);
  } catch (FitError& e) {
    throw e.with_stage("amplitude");
  }
  if (!(A > 0.0)) {
    throw FitError(Errc::InvalidAmplitude, "refined amplitude is not positive")
        .with_stage("amplitude");
  }
  result.params = {A, peak.mu_hat, sigma};
  result.status = flagged ? FitStatus::DegenerateFallback : FitStatus::Converged;
  return result;
}

}  // namespace gaussfit

#endif  // GAUSSFIT_INITFIT_HPP
