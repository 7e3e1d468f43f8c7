#ifndef GAUSSFIT_ERROR_HPP
#define GAUSSFIT_ERROR_HPP

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

#include "gaussfit/types.hpp"

namespace gaussfit {

enum class Errc {
  InvalidWidth,
  InvalidGrid,
  InvalidClamp,
  InvalidAmplitude,
  InvalidWindow,
  InvalidWeights,
  InvalidConfig,
  SingularSystem,
  NoPeak,
  DegenerateArea,
  DegenerateRho,
  DegenerateFisher,
  UnknownMethod,
  ShapeError,
  ParseError,
};

inline std::string_view to_string(Errc code) {
  switch (code) {
    case Errc::InvalidWidth: return "InvalidWidth";
    case Errc::InvalidGrid: return "InvalidGrid";
    case Errc::InvalidClamp: return "InvalidClamp";
    case Errc::InvalidAmplitude: return "InvalidAmplitude";
    case Errc::InvalidWindow: return "InvalidWindow";
    case Errc::InvalidWeights: return "InvalidWeights";
    case Errc::InvalidConfig: return "InvalidConfig";
    case Errc::SingularSystem: return "SingularSystem";
    case Errc::NoPeak: return "NoPeak";
    case Errc::DegenerateArea: return "DegenerateArea";
    case Errc::DegenerateRho: return "DegenerateRho";
    case Errc::DegenerateFisher: return "DegenerateFisher";
    case Errc::UnknownMethod: return "UnknownMethod";
    case Errc::ShapeError: return "ShapeError";
    case Errc::ParseError: return "ParseError";
  }
  return "Unknown";
}

/// Typed failure raised by every fitting stage.
///
/// `stage` names the pipeline step that failed (empty for leaf operations),
/// `iteration` is set for WLS failures, and `partial` holds the last valid
/// estimate produced before the failure, if any.
class FitError : public std::runtime_error {
 public:
  FitError(Errc code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

  Errc code() const noexcept { return code_; }
  const std::string& stage() const noexcept { return stage_; }
  int iteration() const noexcept { return iteration_; }
  const std::optional<GaussianParams>& partial() const noexcept { return partial_; }

  FitError& with_stage(std::string stage) {
    if (stage_.empty()) stage_ = std::move(stage);
    return *this;
  }
  FitError& with_iteration(int iteration) {
    iteration_ = iteration;
    return *this;
  }
  FitError& with_partial(std::optional<GaussianParams> partial) {
    partial_ = partial;
    return *this;
  }

 private:
  Errc code_;
  std::string stage_;
  int iteration_ = -1;
  std::optional<GaussianParams> partial_;
};

}  // namespace gaussfit

#endif  // GAUSSFIT_ERROR_HPP
