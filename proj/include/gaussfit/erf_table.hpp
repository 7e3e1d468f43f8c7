#ifndef GAUSSFIT_ERF_TABLE_HPP
#define GAUSSFIT_ERF_TABLE_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <utility>
#include <vector>

#include "gaussfit/error.hpp"

namespace gaussfit {

namespace detail {

template <class F>
double simpson_step(const F& f, double a, double fa, double b, double fb, double m, double fm,
                    double whole, double tol, int depth) {
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = f(lm);
  const double frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double delta = left + right - whole;
  if (depth <= 0 || std::abs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
  return simpson_step(f, a, fa, m, fm, lm, flm, left, 0.5 * tol, depth - 1) +
         simpson_step(f, m, fm, b, fb, rm, frm, right, 0.5 * tol, depth - 1);
}

/// Adaptive Simpson quadrature with Richardson extrapolation.
template <class F>
double adaptive_simpson(const F& f, double a, double b, double tol, int max_depth = 48) {
  const double m = 0.5 * (a + b);
  const double fa = f(a);
  const double fb = f(b);
  const double fm = f(m);
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return simpson_step(f, a, fa, b, fb, m, fm, whole, tol, max_depth);
}

inline double erf_integrand(double t) { return std::exp(-t * t); }

}  // namespace detail

/// erf(z) = 2/sqrt(pi) * integral_0^z exp(-t^2) dt, by adaptive quadrature.
inline double erf_by_quadrature(double z, double tol = 1e-15) {
  if (z == 0.0) return 0.0;
  if (z < 0.0) return -erf_by_quadrature(-z, tol);
  return 2.0 / std::sqrt(std::numbers::pi) *
         detail::adaptive_simpson(detail::erf_integrand, 0.0, z, tol);
}

/// Grid k_j = start + j * step, j = 0..count-1.
struct KGrid {
  double start = 0.1;
  double step = 0.01;
  std::size_t count = 991;

  /// Grid covering [kmin, kmax] inclusive.
  static KGrid spanning(double kmin, double kstep, double kmax) {
    if (!(kstep > 0.0) || !(kmax >= kmin)) {
      throw FitError(Errc::InvalidGrid, "k grid needs kstep > 0 and kmax >= kmin");
    }
    const auto count = static_cast<std::size_t>(std::floor((kmax - kmin) / kstep + 0.5)) + 1;
    return {kmin, kstep, count};
  }

  double at(std::size_t j) const noexcept { return start + static_cast<double>(j) * step; }
};

/// Lookup table of erf(k / sqrt 2) over a positive, increasing k grid.
///
/// Values are accumulated interval by interval, so they never decrease. Above
/// k of roughly 8.3 every value rounds to 1.0 in double precision.
class ErfTable {
 public:
  ErfTable(std::vector<double> ks, std::vector<double> values)
      : ks_(std::move(ks)), values_(std::move(values)) {
    if (ks_.empty() || ks_.size() != values_.size()) {
      throw FitError(Errc::InvalidGrid, "erf table needs matching, non-empty k and value columns");
    }
    if (!(ks_.front() > 0.0)) throw FitError(Errc::InvalidGrid, "k grid must be positive");
    for (std::size_t j = 1; j < ks_.size(); ++j) {
      if (!(ks_[j] > ks_[j - 1])) throw FitError(Errc::InvalidGrid, "k grid must increase");
    }
    for (std::size_t j = 0; j < values_.size(); ++j) {
      if (!(values_[j] > 0.0 && values_[j] <= 1.0) || (j > 0 && values_[j] < values_[j - 1])) {
        throw FitError(Errc::InvalidGrid, "erf values must be non-decreasing within (0, 1]");
      }
    }
  }

  std::size_t size() const noexcept { return ks_.size(); }
  double k(std::size_t j) const noexcept { return ks_[j]; }
  double value(std::size_t j) const noexcept { return values_[j]; }
  const std::vector<double>& ks() const noexcept { return ks_; }
  const std::vector<double>& values() const noexcept { return values_; }
  double k_start() const noexcept { return ks_.front(); }
  double k_step() const noexcept {
    return ks_.size() > 1 ? (ks_.back() - ks_.front()) / static_cast<double>(ks_.size() - 1) : 0.0;
  }

  friend bool operator==(const ErfTable&, const ErfTable&) = default;

 private:
  std::vector<double> ks_;
  std::vector<double> values_;
};

inline ErfTable build_erf_table(const KGrid& grid = {}) {
  if (!(grid.start > 0.0) || !(grid.step > 0.0) || grid.count == 0 ||
      !std::isfinite(grid.at(grid.count - 1))) {
    throw FitError(Errc::InvalidGrid, "k grid must be positive and increasing");
  }
  constexpr double kScale = std::numbers::sqrt2 * std::numbers::inv_sqrtpi;
  // Substituting t = u / sqrt 2: erf(k/sqrt 2) = sqrt(2/pi) integral_0^k exp(-u^2/2) du.
  const auto integrand = [](double u) { return std::exp(-0.5 * u * u); };
  std::vector<double> ks(grid.count);
  std::vector<double> values(grid.count);
  double lower = 0.0;
  double acc = 0.0;
  for (std::size_t j = 0; j < grid.count; ++j) {
    ks[j] = grid.at(j);
    acc += detail::adaptive_simpson(integrand, lower, ks[j], 1e-16);
    values[j] = std::min(kScale * acc, 1.0);
    lower = ks[j];
  }
  return ErfTable(std::move(ks), std::move(values));
}

}  // namespace gaussfit

#endif  // GAUSSFIT_ERF_TABLE_HPP
