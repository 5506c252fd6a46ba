#pragma once

// Pair-distance measure and Fourier form factor of a uniform ball.

#include "casimir/numerics.hpp"

#include <functional>

namespace casimir {

class SphereSpec {
public:
  explicit SphereSpec(double radius);

  double radius() const noexcept { return a_; }
  double volume() const noexcept;
  double surface() const noexcept;

private:
  double a_;
};

/// Volume of the intersection of a ball of radius a with its translate by r:
/// (pi/12)(4a + r)(2a - r)^2 for r <= 2a, zero beyond.
double overlap_volume(double r, double a);

/// int_{r_min}^{2a} 4 pi r^2 V_ov(r, a) h(r) dr, the reduction of a double
/// volume integral over the ball of a function of |r1 - r2|. `tol` is
/// relative. When r_min > 0 the quadrature runs on a logarithmic grid so
/// that strongly singular h stays resolved.
numerics::QuadratureResult pair_measure_integral(const std::function<double(double)> &h, double a,
                                                 double r_min, double tol = 1e-12);

/// V 3 j1(qa) / (qa), the Fourier transform of the ball's indicator.
double sphere_form_factor(double q, double a);

} // namespace casimir
