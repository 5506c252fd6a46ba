#pragma once

#include <stdexcept>
#include <string>

namespace casimir {

/// Raised when a numerical procedure cannot meet its requested accuracy
/// (quadrature budget exhausted, non-convergent series, bad fit).
/// `diagnostics` carries a short machine-readable description.
class NumericalError : public std::runtime_error {
public:
  NumericalError(const std::string &what, std::string diagnostics = {})
      : std::runtime_error(what), diagnostics_(std::move(diagnostics)) {}

  const std::string &diagnostics() const noexcept { return diagnostics_; }

private:
  std::string diagnostics_;
};

class FitError : public NumericalError {
public:
  enum class Kind { InsufficientSamples, IllConditioned, ResidualTooLarge };

  FitError(Kind kind, const std::string &what, std::string diagnostics = {})
      : NumericalError(what, std::move(diagnostics)), kind_(kind) {}

  Kind kind() const noexcept { return kind_; }

private:
  Kind kind_;
};

} // namespace casimir
