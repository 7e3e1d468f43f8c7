#ifndef GAUSSFIT_FIT_RESULT_HPP
#define GAUSSFIT_FIT_RESULT_HPP

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "gaussfit/error.hpp"
#include "gaussfit/types.hpp"

namespace gaussfit {

/// Fitting pipelines. M1..M5 are the benchmarked methods; LS and WLS label
/// results of the bare linear solvers.
enum class MethodId { M1, M2, M3, M4, M5, LS, WLS };

inline std::string_view to_string(MethodId id) {
  switch (id) {
    case MethodId::M1: return "M1";
    case MethodId::M2: return "M2";
    case MethodId::M3: return "M3";
    case MethodId::M4: return "M4";
    case MethodId::M5: return "M5";
    case MethodId::LS: return "LS";
    case MethodId::WLS: return "WLS";
  }
  return "?";
}

/// Parses one of the benchmarked method names M1..M5.
inline MethodId parse_method_id(std::string_view name) {
  if (name == "M1") return MethodId::M1;
  if (name == "M2") return MethodId::M2;
  if (name == "M3") return MethodId::M3;
  if (name == "M4") return MethodId::M4;
  if (name == "M5") return MethodId::M5;
  throw FitError(Errc::UnknownMethod, "unknown method '" + std::string(name) + "'");
}

enum class FitStatus { Converged, DegenerateFallback, Failed };

inline std::string_view to_string(FitStatus s) {
  switch (s) {
    case FitStatus::Converged: return "converged";
    case FitStatus::DegenerateFallback: return "degenerate-fallback";
    case FitStatus::Failed: return "failed";
  }
  return "?";
}

/// Ordered name/value pairs; keys are prefixed with the stage that set them.
class Diagnostics {
 public:
  void set(std::string key, double value) {
    for (auto& [k, v] : entries_) {
      if (k == key) {
        v = value;
        return;
      }
    }
    entries_.emplace_back(std::move(key), value);
  }
  std::optional<double> get(std::string_view key) const {
    for (const auto& [k, v] : entries_) {
      if (k == key) return v;
    }
    return std::nullopt;
  }
  const std::vector<std::pair<std::string, double>>& entries() const noexcept { return entries_; }
  void merge(const Diagnostics& other) {
    for (const auto& [k, v] : other.entries_) set(k, v);
  }

  friend bool operator==(const Diagnostics&, const Diagnostics&) = default;

 private:
  std::vector<std::pair<std::string, double>> entries_;
};

struct FitResult {
  GaussianParams params;
  std::optional<LogPolyCoeffs> coeffs;
  MethodId method = MethodId::LS;
  int iterations_run = 0;
  Diagnostics diagnostics;
  FitStatus status = FitStatus::Converged;

  friend bool operator==(const FitResult&, const FitResult&) = default;
};

}  // namespace gaussfit

#endif  // GAUSSFIT_FIT_RESULT_HPP
