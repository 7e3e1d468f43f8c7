#ifndef GAUSSFIT_SIGNAL_HPP
#define GAUSSFIT_SIGNAL_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "gaussfit/error.hpp"
#include "gaussfit/random.hpp"
#include "gaussfit/types.hpp"

namespace gaussfit {

/// Relative clamp floor applied below the log when none is given.
inline constexpr double kDefaultClampRatio = 1e-6;

/// Uniformly sampled signal y[n] at x[n] = x0 + n * delta_x.
class SampledSignal {
 public:
  SampledSignal(std::vector<double> samples, double delta_x, double x0 = 0.0,
                std::optional<double> noise_power = std::nullopt)
      : samples_(std::move(samples)), delta_x_(delta_x), x0_(x0), noise_power_(noise_power) {
    if (samples_.size() < 3) {
      throw FitError(Errc::InvalidGrid,
                     "signal needs at least 3 samples, got " + std::to_string(samples_.size()));
    }
    if (!(delta_x_ > 0.0) || !std::isfinite(delta_x_)) {
      throw FitError(Errc::InvalidGrid, "sampling interval must be positive and finite");
    }
    if (!std::isfinite(x0_)) throw FitError(Errc::InvalidGrid, "x0 must be finite");
    for (double y : samples_) {
      if (!std::isfinite(y)) throw FitError(Errc::InvalidGrid, "samples must be finite");
    }
  }

  std::span<const double> samples() const noexcept { return samples_; }
  std::size_t size() const noexcept { return samples_.size(); }
  double operator[](std::size_t n) const noexcept { return samples_[n]; }
  double delta_x() const noexcept { return delta_x_; }
  double x0() const noexcept { return x0_; }
  double x(std::size_t n) const noexcept { return x0_ + static_cast<double>(n) * delta_x_; }
  /// Abscissa of the grid midpoint; fits are formed around it.
  double x_mid() const noexcept { return x(0) + 0.5 * static_cast<double>(size() - 1) * delta_x_; }
  std::optional<double> noise_power() const noexcept { return noise_power_; }
  double max_sample() const noexcept { return *std::max_element(samples_.begin(), samples_.end()); }

  SampledSignal scaled(double factor) const {
    std::vector<double> out(samples_);
    for (double& y : out) y *= factor;
    return SampledSignal(std::move(out), delta_x_, x0_, noise_power_);
  }

 private:
  std::vector<double> samples_;
  double delta_x_;
  double x0_;
  std::optional<double> noise_power_;
};

/// Additive white noise at a given SNR = 10 log10(A^2 / noise power).
struct NoiseSpec {
  double snr_db = 12.0;
  std::uint64_t seed = 0;
};

inline double noise_power_for(double amplitude, double snr_db) {
  return amplitude * amplitude / std::pow(10.0, snr_db / 10.0);
}

inline double eval_gaussian(const GaussianParams& p, double x) {
  const double d = x - p.mu;
  return p.A * std::exp(-d * d / (2.0 * p.sigma * p.sigma));
}

inline LogPolyCoeffs coeffs_from_params(const GaussianParams& p) {
  const double s2 = p.sigma * p.sigma;
  return {std::log(p.A) - p.mu * p.mu / (2.0 * s2), p.mu / s2, -1.0 / (2.0 * s2)};
}

inline GaussianParams params_from_coeffs(const LogPolyCoeffs& k) {
  if (!(k.c < 0.0)) {
    throw FitError(Errc::InvalidWidth, "quadratic coefficient c = " + std::to_string(k.c) +
                                           " is not negative");
  }
  return {std::exp(k.a - k.b * k.b / (4.0 * k.c)), -k.b / (2.0 * k.c),
          std::sqrt(-1.0 / (2.0 * k.c))};
}

/// Samples f(n delta_x), n = 0..N-1, plus seeded normal noise when requested.
inline SampledSignal sample_gaussian(const GaussianParams& p, double delta_x,
                                     std::size_t n_samples,
                                     std::optional<NoiseSpec> noise = std::nullopt) {
  if (!(delta_x > 0.0) || n_samples < 3) {
    throw FitError(Errc::InvalidGrid, "need delta_x > 0 and at least 3 samples");
  }
  std::vector<double> y(n_samples);
  for (std::size_t n = 0; n < n_samples; ++n) {
    y[n] = eval_gaussian(p, static_cast<double>(n) * delta_x);
  }
  std::optional<double> power;
  if (noise) {
    power = noise_power_for(p.A, noise->snr_db);
    const double scale = std::sqrt(*power);
    const CounterStream stream(noise->seed);
    for (std::size_t n = 0; n < n_samples; ++n) y[n] += scale * stream.normal(n);
  }
  return SampledSignal(std::move(y), delta_x, 0.0, power);
}

inline double default_clamp_floor(const SampledSignal& signal) {
  const double floor = signal.max_sample() * kDefaultClampRatio;
  if (!(floor > 0.0)) {
    throw FitError(Errc::InvalidClamp, "signal has no positive sample to derive a clamp floor");
  }
  return floor;
}

/// ln(max(y[n], clamp_floor)) for every sample.
inline std::vector<double> log_transform(const SampledSignal& signal, double clamp_floor) {
  if (!(clamp_floor > 0.0) || !std::isfinite(clamp_floor)) {
    throw FitError(Errc::InvalidClamp, "clamp floor must be positive and finite");
  }
  std::vector<double> out(signal.size());
  for (std::size_t n = 0; n < signal.size(); ++n) {
    out[n] = std::log(std::max(signal[n], clamp_floor));
  }
  return out;
}

/// Clamped raw samples max(y[n], floor), i.e. exp of the log transform.
inline std::vector<double> clamped_samples(const SampledSignal& signal, double clamp_floor) {
  if (!(clamp_floor > 0.0) || !std::isfinite(clamp_floor)) {
    throw FitError(Errc::InvalidClamp, "clamp floor must be positive and finite");
  }
  std::vector<double> out(signal.size());
  for (std::size_t n = 0; n < signal.size(); ++n) out[n] = std::max(signal[n], clamp_floor);
  return out;
}

}  // namespace gaussfit

#endif  // GAUSSFIT_SIGNAL_HPP
