#ifndef GAUSSFIT_TYPES_HPP
#define GAUSSFIT_TYPES_HPP

#include <cmath>

namespace gaussfit {

/// Height, location and width of A*exp(-(x-mu)^2 / (2 sigma^2)).
struct GaussianParams {
  double A = 1.0;
  double mu = 0.0;
  double sigma = 1.0;

  bool valid() const noexcept {
    return std::isfinite(A) && std::isfinite(mu) && std::isfinite(sigma) && A > 0.0 &&
           sigma > 0.0;
  }
  friend bool operator==(const GaussianParams&, const GaussianParams&) = default;
};

/// Coefficients of ln f(x) = a + b x + c x^2.
struct LogPolyCoeffs {
  double a = 0.0;
  double b = 0.0;
  double c = 0.0;

  friend bool operator==(const LogPolyCoeffs&, const LogPolyCoeffs&) = default;
};

}  // namespace gaussfit

#endif  // GAUSSFIT_TYPES_HPP
