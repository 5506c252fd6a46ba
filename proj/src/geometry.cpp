#include "casimir/geometry.hpp"

#include "casimir/special_functions.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace casimir {

namespace {

constexpr double kPi = std::numbers::pi;

void require_radius(double a) {
  if (!std::isfinite(a) || !(a > 0.0))
    throw std::invalid_argument("sphere radius must be finite and positive");
}

} // namespace

SphereSpec::SphereSpec(double radius) : a_(radius) { require_radius(radius); }

double SphereSpec::volume() const noexcept { return 4.0 * kPi / 3.0 * a_ * a_ * a_; }

double SphereSpec::surface() const noexcept { return 4.0 * kPi * a_ * a_; }

double overlap_volume(double r, double a) {
  require_radius(a);
  if (!std::isfinite(r) || r < 0.0)
    throw std::invalid_argument("overlap_volume: r must be finite and >= 0");
  if (r >= 2.0 * a)
    return 0.0;
  const double gap = 2.0 * a - r;
  return kPi / 12.0 * (4.0 * a + r) * gap * gap;
}

numerics::QuadratureResult pair_measure_integral(const std::function<double(double)> &h, double a,
                                                 double r_min, double tol) {
  require_radius(a);
  if (!std::isfinite(r_min) || r_min < 0.0 || r_min >= 2.0 * a)
    throw std::invalid_argument("pair_measure_integral: need 0 <= r_min < 2a");
  numerics::QuadratureOptions opts;
  opts.abs_tol = 0.0;
  opts.rel_tol = tol;
  opts.max_cells = 20000;

  // Above r = a the integral runs in d = 2a - r so that the d^2 zero of the
  // overlap volume is resolved without cancellation.
  const double split = std::max(r_min, a);
  auto upper_integrand = [&](double d) {
    const double r = 2.0 * a - d;
    return 4.0 * kPi * r * r * (kPi / 12.0) * (6.0 * a - d) * d * d * h(r);
  };
  auto result = numerics::integrate(upper_integrand, 0.0, 2.0 * a - split, opts);
  if (r_min >= a)
    return result;

  auto weighted = [&](double r) { return 4.0 * kPi * r * r * overlap_volume(r, a) * h(r); };
  numerics::QuadratureResult lower;
  if (r_min == 0.0) {
    lower = numerics::integrate(weighted, 0.0, a, opts);
  } else {
    // One seed panel per factor of two in r keeps every panel well scaled.
    const double upper = std::log(a);
    const double lo = std::log(r_min);
    const auto panels = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil((upper - lo) / std::log(2.0))));
    std::vector<double> breaks(panels + 1);
    for (std::size_t i = 0; i <= panels; ++i)
      breaks[i] = lo + (upper - lo) * static_cast<double>(i) / static_cast<double>(panels);
    auto mapped = [&](double u) {
      const double r = std::exp(u);
      return weighted(r) * r;
    };
    lower = numerics::integrate(mapped, breaks, opts);
  }
  result.value += lower.value;
  result.error_estimate += lower.error_estimate;
  result.evaluations += lower.evaluations;
  result.cells += lower.cells;
  result.converged = result.converged && lower.converged;
  return result;
}

double sphere_form_factor(double q, double a) {
  require_radius(a);
  if (!std::isfinite(q) || q < 0.0)
    throw std::invalid_argument("sphere_form_factor: q must be finite and >= 0");
  return 4.0 * kPi / 3.0 * a * a * a * special::ball_form_factor(q * a);
}

} // namespace casimir
