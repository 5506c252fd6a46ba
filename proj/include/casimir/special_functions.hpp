#pragma once

#include <cmath>
#include <cstddef>

// Spherical Bessel functions of low order. Near the origin the closed forms
// lose digits to cancellation, so the power series is summed instead.

namespace casimir::special {

namespace detail {

// sum_k prod_{i<=k} (-x^2 / d_i), evaluated in Horner form from the inside out.
template <std::size_t N>
inline double alternating_series(double x2, const double (&denominators)[N]) {
  double acc = 1.0;
  for (std::size_t i = N; i-- > 0;)
    acc = 1.0 - x2 / denominators[i] * acc;
  return acc;
}

} // namespace detail

inline double sph_j0(double x) {
  if (std::abs(x) < 1e-3) {
    static constexpr double d[] = {6.0, 20.0, 42.0};
    return detail::alternating_series(x * x, d);
  }
  return std::sin(x) / x;
}

/// 3 j1(x) / x, the normalised form factor of a uniform ball; equals 1 at 0.
inline double ball_form_factor(double x) {
  if (std::abs(x) < 0.5) {
    static constexpr double d[] = {10.0, 28.0, 54.0, 88.0, 130.0, 180.0, 238.0};
    return detail::alternating_series(x * x, d);
  }
  return 3.0 * (std::sin(x) / x - std::cos(x)) / (x * x);
}

inline double sph_j1(double x) { return x / 3.0 * ball_form_factor(x); }

inline double sph_j2(double x) {
  if (std::abs(x) < 1.0) {
    static constexpr double d[] = {14.0, 36.0, 66.0, 104.0, 150.0, 204.0, 266.0, 336.0};
    return x * x / 15.0 * detail::alternating_series(x * x, d);
  }
  const double s = std::sin(x), c = std::cos(x);
  return ((3.0 / (x * x) - 1.0) * s - 3.0 * c / x) / x;
}

} // namespace casimir::special
