#ifndef GAUSSFIT_CRLB_HPP
#define GAUSSFIT_CRLB_HPP

#include <cmath>
#include <cstddef>

#include "gaussfit/error.hpp"
#include "gaussfit/signal.hpp"
#include "gaussfit/types.hpp"

// Cramer-Rao bounds for the width with amplitude and location known. Used for
// analysis and tests; fitting pipelines never call into this header.

namespace gaussfit {

struct CrlbQuery {
  GaussianParams params;
  double delta_x = 0.01;
  std::size_t n_lo = 0;  // half-open [n_lo, n_hi)
  std::size_t n_hi = 0;
  double noise_power = 1.0;
};

/// sum over [n_lo, n_hi) of f[n]^2 (mu - n dx)^4, with f sampled at n dx.
inline double fisher_sum(const GaussianParams& p, double delta_x, std::size_t n_lo,
                         std::size_t n_hi) {
  double sum = 0.0;
  for (std::size_t n = n_lo; n < n_hi; ++n) {
    const double x = static_cast<double>(n) * delta_x;
    const double f = eval_gaussian(p, x);
    const double d2 = (p.mu - x) * (p.mu - x);
    sum += f * f * d2 * d2;
  }
  return sum;
}

inline double crlb_sigma(const CrlbQuery& q) {
  if (q.n_hi <= q.n_lo) throw FitError(Errc::InvalidGrid, "empty index range");
  if (!(q.noise_power > 0.0)) throw FitError(Errc::InvalidConfig, "noise power must be positive");
  const double info = fisher_sum(q.params, q.delta_x, q.n_lo, q.n_hi);
  if (!(info > 0.0)) throw FitError(Errc::DegenerateFisher, "range carries no information on sigma");
  const double s3 = q.params.sigma * q.params.sigma * q.params.sigma;
  return q.noise_power * s3 * s3 / info;
}

namespace detail {

inline void check_split(std::size_t n_hat, std::size_t n_total) {
  if (n_hat == 0 || n_hat >= n_total) {
    throw FitError(Errc::InvalidGrid, "split index must satisfy 0 < n_hat < N");
  }
}

}  // namespace detail

/// CRLB(beta) / CRLB(alpha): the alpha-side information over the beta-side.
inline double crlb_ratio(const GaussianParams& p, double delta_x, std::size_t n_hat,
                         std::size_t n_total) {
  detail::check_split(n_hat, n_total);
  const double beta = fisher_sum(p, delta_x, 0, n_hat);
  const double alpha = fisher_sum(p, delta_x, n_hat, n_total);
  if (!(beta > 0.0) || !(alpha > 0.0)) {
    throw FitError(Errc::DegenerateFisher, "one side carries no information on sigma");
  }
  return alpha / beta;
}

/// rho* = CRLB(beta) / (CRLB(beta) + CRLB(alpha)).
inline double optimal_rho_oracle(const GaussianParams& p, double delta_x, std::size_t n_hat,
                                 std::size_t n_total) {
  detail::check_split(n_hat, n_total);
  const double beta = fisher_sum(p, delta_x, 0, n_hat);
  const double alpha = fisher_sum(p, delta_x, n_hat, n_total);
  if (!(beta > 0.0) || !(alpha > 0.0)) {
    throw FitError(Errc::DegenerateFisher, "one side carries no information on sigma");
  }
  return alpha / (alpha + beta);
}

}  // namespace gaussfit

#endif  // GAUSSFIT_CRLB_HPP
