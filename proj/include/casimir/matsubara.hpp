#pragma once

// Sums over the Matsubara grid K_n = 2 pi n / beta, n in Z, and their
// zero-temperature limit.

#include "casimir/numerics.hpp"

#include <cstdint>
#include <functional>
#include <string>

namespace casimir {

enum class TailPolicy { None, PowerLaw };

struct ThermalState {
  /// Inverse temperature in units of 1/(hbar c), i.e. a length.
  double beta = 1.0;
  std::int64_t max_index = 10'000'000;
  TailPolicy tail_policy = TailPolicy::PowerLaw;
  /// Stop once successive estimates agree to this fraction of the sum.
  double rel_tol = 1e-10;
  /// Threads used to evaluate terms; results do not depend on this value.
  unsigned workers = 1;
};

struct SumResult {
  double value = 0.0;
  double truncation_error_estimate = 0.0;
  std::int64_t terms_used = 0;
  /// Contribution of |n| > terms_used added by the tail model.
  double tail_estimate = 0.0;
  /// Fitted decay exponent p of the terms (c / n^p); 0 when not fitted.
  double tail_exponent = 0.0;
};

/// K_n = 2 pi |n| / beta.
double matsubara_wavenumber(std::int64_t n, double beta);

/// x coth x with x = beta hbar omega0 / 2: the closed form of
/// sum_n (hbar omega0)^2 / ((hbar omega0)^2 + K_n^2).
double oscillator_sum_closed(double beta, double hbar_omega0);

using MatsubaraSummand = std::function<double(double)>;

/// sum over n in Z of f(K_n) for even f decaying at least like K^-2. The
/// n = 0 term carries full weight. The truncation index doubles from 32
/// until the tail-corrected estimate stops moving; the tail is modelled by a
/// power law c / n^p fitted over the last decade of terms and summed with
/// the Euler-Maclaurin formula. Throws NumericalError past max_index.
SumResult matsubara_sum(const MatsubaraSummand &f, const ThermalState &state);

/// The beta -> infinity limit of (1/beta) sum_n g(K_n), namely
/// (1/pi) integral_0^inf g(kappa) dkappa. `scale` sets the kappa scale of
/// the semi-infinite map; `tol` is relative. Throws NumericalError when the
/// quadrature misses it.
numerics::QuadratureResult zero_T_integral(const std::function<double(double)> &g,
                                           double tol = 1e-10, double scale = 1.0);

} // namespace casimir
