#pragma once

// Reference values computed independently of the library routes.

#include <cmath>
#include <cstdint>
#include <numbers>

namespace oracle {

/// sum over n in Z of w^2 / (w^2 + (2 pi n / beta)^2): explicit sum over
/// |n| <= N in long double, plus the Euler-Maclaurin tail of the rest.
inline double oscillator_brute_force(double beta, double w, std::int64_t N = 1'000'000) {
  const long double A = std::pow(static_cast<long double>(beta) * w / (2.0L * std::numbers::pi_v<long double>), 2);
  auto f = [&](long double n) { return A / (A + n * n); };
  long double s = 0.0L;
  for (std::int64_t n = N; n >= 1; --n)
    s += f(static_cast<long double>(n));
  const long double sa = std::sqrt(A);
  const long double tail =
      sa * (std::numbers::pi_v<long double> / 2.0L - std::atan(static_cast<long double>(N) / sa)) -
      0.5L * f(static_cast<long double>(N));
  return static_cast<double>(1.0L + 2.0L * (s + tail));
}

/// -23 alpha^2 / (4 pi r^7).
inline double pair_T0(double r, double alpha) {
  return -23.0 * alpha * alpha / (4.0 * std::numbers::pi * std::pow(r, 7));
}

/// 23 (eps - 1)^2 / (1536 pi a).
inline double sphere_finite(double a, double eps_minus_1) {
  return 23.0 * eps_minus_1 * eps_minus_1 / (1536.0 * std::numbers::pi * a);
}

} // namespace oracle
