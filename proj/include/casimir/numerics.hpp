#pragma once

// Shared numerical infrastructure: adaptive Gauss-Kronrod quadrature in one
// dimension (finite, semi-infinite, logarithmic and oscillatory variants),
// Genz-Malik adaptive cubature on 2D/3D boxes, Richardson extrapolation,
// scaled linear least squares and seeded Monte Carlo sampling.
//
// Every routine is deterministic: subdivision order, heap order and the final
// reduction order depend only on the inputs.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <random>
#include <span>
#include <utility>
#include <vector>

namespace casimir::numerics {

struct QuadratureResult {
  double value = 0.0;
  double error_estimate = 0.0;
  std::size_t evaluations = 0;
  std::size_t cells = 0;
  bool converged = true;
};

struct QuadratureOptions {
  double abs_tol = 1e-12;
  double rel_tol = 1e-10;
  std::size_t max_cells = 5000;
  /// When false, budget exhaustion returns the partial result with
  /// converged == false instead of throwing NumericalError.
  bool throw_on_failure = true;
};

using Integrand = std::function<double(double)>;

/// Pairwise (cascade) summation; error grows as O(log n) ulps.
double pairwise_sum(std::span<const double> values);

/// 21-point Gauss-Kronrod rule on [-1, 1]. Gauss weights are zero at the
/// Kronrod-only nodes so both rules can share one set of evaluations.
struct GaussKronrod21 {
  std::array<double, 21> nodes{};
  std::array<double, 21> kronrod_weights{};
  std::array<double, 21> gauss_weights{};

  static const GaussKronrod21 &get();
};

QuadratureResult integrate(const Integrand &f, double a, double b,
                           const QuadratureOptions &opts = {});

/// Global adaptive integration seeded with the partition given by
/// `breakpoints` (sorted, at least two entries).
QuadratureResult integrate(const Integrand &f,
                           std::span<const double> breakpoints,
                           const QuadratureOptions &opts = {});

/// Integral over [a, inf) through x = a + scale * t / (1 - t).
QuadratureResult integrate_semi_infinite(const Integrand &f, double a,
                                         double scale,
                                         const QuadratureOptions &opts = {});

/// Integral over [a, b], 0 < a < b, through x = exp(u). Suited to integrands
/// with power-law growth towards the lower endpoint.
QuadratureResult integrate_log(const Integrand &f, double a, double b,
                               const QuadratureOptions &opts = {});

struct OscillatoryOptions {
  double abs_tol = 1e-10;
  double rel_tol = 1e-10;
  std::size_t min_intervals = 8;
  std::size_t max_intervals = 20000;
  /// Number of trailing partial sums handed to the epsilon algorithm.
  std::size_t window = 40;
  bool throw_on_failure = true;
};

/// Integral over [a, inf) of an oscillatory integrand. The range is cut into
/// intervals of length `half_period` (placed at the integrand's zeros when
/// they are equally spaced), each interval is integrated adaptively and the
/// sequence of partial sums is accelerated with Wynn's epsilon algorithm.
QuadratureResult integrate_oscillatory(const Integrand &f, double a,
                                       double half_period,
                                       const OscillatoryOptions &opts = {});

/// Wynn epsilon extrapolation of a sequence of partial sums. Returns the
/// estimate and the difference to the previous diagonal as an error proxy.
std::pair<double, double> wynn_epsilon(std::span<const double> partial_sums);

template <std::size_t N> struct Box {
  std::array<double, N> lower{};
  std::array<double, N> upper{};
};

using Integrand2 = std::function<double(const std::array<double, 2> &)>;
using Integrand3 = std::function<double(const std::array<double, 3> &)>;

/// Genz-Malik degree-7/5 embedded cubature with adaptive bisection along the
/// coordinate with the largest fourth difference.
QuadratureResult integrate_box(const Integrand2 &f, const Box<2> &box,
                               const QuadratureOptions &opts = {});
QuadratureResult integrate_box(const Integrand3 &f, const Box<3> &box,
                               const QuadratureOptions &opts = {});

struct RichardsonResult {
  double limit = 0.0;
  double error_estimate = 0.0;
  bool monotone = true;
};

/// Extrapolates v(h) -> v(0) assuming v(h) = L + sum_j c_j h^{p_j} with the
/// exponents in `exponents` (ascending). With exactly exponents.size() + 1
/// samples the model is interpolated; with more it is fitted in the least
/// squares sense.
RichardsonResult
richardson_extrapolate(std::span<const std::pair<double, double>> samples,
                       std::span<const double> exponents);

struct FitResult {
  std::vector<double> coefficients;
  double condition_number = 0.0;
  /// Weighted 2-norm of the residual vector.
  double residual_norm = 0.0;
  /// residual_norm divided by the weighted 2-norm of the data.
  double relative_residual = 0.0;
};

struct FitOptions {
  double max_condition = 1e12;
};

using BasisFunction = std::function<double(double)>;

/// Weighted linear least squares y ~ sum_j c_j phi_j(x). Columns are scaled
/// to unit norm before the SVD so the reported condition number reflects the
/// geometry of the basis rather than its units.
FitResult linear_fit(std::span<const BasisFunction> basis,
                     std::span<const std::pair<double, double>> samples,
                     std::span<const double> weights = {},
                     const FitOptions &opts = {});

struct MonteCarloResult {
  double mean = 0.0;
  double standard_error = 0.0;
  std::size_t samples = 0;
};

/// Plain Monte Carlo average of f over a box with a fixed-seed Mersenne
/// twister. Intended for test oracles only.
template <std::size_t N, class F>
MonteCarloResult monte_carlo_mean(F &&f, const Box<N> &box,
                                  std::size_t samples, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  double sum = 0.0, sum_sq = 0.0;
  std::array<double, N> x{};
  for (std::size_t s = 0; s < samples; ++s) {
    for (std::size_t d = 0; d < N; ++d)
      x[d] = box.lower[d] + (box.upper[d] - box.lower[d]) * unit(gen);
    const double v = f(x);
    sum += v;
    sum_sq += v * v;
  }
  const double n = static_cast<double>(samples);
  const double mean = sum / n;
  const double var = std::max(0.0, sum_sq / n - mean * mean);
  return {mean, std::sqrt(var / n), samples};
}

} // namespace casimir::numerics
