#include "casimir/pair_energy.hpp"

#include "casimir/errors.hpp"
#include "casimir/special_functions.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace casimir {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr std::size_t kMaxNodesPerAxis = 60000;

void require_positive(double v, const char *what) {
  if (!std::isfinite(v) || !(v > 0.0))
    throw std::invalid_argument(std::string(what) + " must be finite and positive");
}

void require_alpha(double alpha) {
  if (!std::isfinite(alpha) || alpha < 0.0)
    throw std::invalid_argument("alpha must be finite and >= 0");
}

struct AxisNodes {
  std::vector<double> k, wk, wg, a0, a2;
};

AxisNodes build_axis(double r, double lambda, double cell, double k_max) {
  const auto &gk = numerics::GaussKronrod21::get();
  const auto cells = static_cast<std::size_t>(std::ceil(k_max / cell));
  AxisNodes ax;
  const std::size_t n = cells * gk.nodes.size();
  ax.k.reserve(n);
  ax.wk.reserve(n);
  ax.wg.reserve(n);
  ax.a0.reserve(n);
  ax.a2.reserve(n);
  for (std::size_t c = 0; c < cells; ++c) {
    const double lo = c * cell, half = 0.5 * cell, mid = lo + half;
    for (std::size_t i = 0; i < gk.nodes.size(); ++i) {
      const double k = mid + half * gk.nodes[i];
      const double radial = k * k * k * std::exp(-lambda * k);
      ax.k.push_back(k);
      ax.wk.push_back(half * gk.kronrod_weights[i]);
      ax.wg.push_back(half * gk.gauss_weights[i]);
      ax.a0.push_back(radial * special::sph_j0(k * r));
      ax.a2.push_back(radial * special::sph_j2(k * r));
    }
  }
  return ax;
}

} // namespace

double Medium::gamma() const noexcept { return 4.0 * kPi * rho * alpha; }

std::string_view to_string(PairRoute route) noexcept {
  switch (route) {
  case PairRoute::RSpaceSum:
    return "rspace-sum";
  case PairRoute::RSpaceT0Closed:
    return "closed";
  case PairRoute::RSpaceT0Numeric:
    return "rspace-T0-numeric";
  case PairRoute::KSpace:
    return "kspace";
  case PairRoute::RSpaceDamped:
    return "rspace-damped";
  }
  return "unknown";
}

double pair_summand(double r, double kappa, double alpha) {
  const KernelPair k = r_space_kernels(r, ImagWavenumber(kappa));
  return 1.5 * alpha * alpha * orientation_averaged_square(k);
}

PairEnergy pair_free_energy(double r, const Medium &medium, const ThermalState &state) {
  require_positive(r, "r");
  require_alpha(medium.alpha);
  const double alpha = medium.alpha;
  const SumResult s = matsubara_sum([&](double K) { return pair_summand(r, K, alpha); }, state);
  PairEnergy out;
  out.value = -s.value / state.beta;
  out.error_estimate = s.truncation_error_estimate / state.beta;
  out.route = PairRoute::RSpaceSum;
  out.terms_used = s.terms_used;
  return out;
}

PairEnergy pair_energy_T0(double r, double alpha) {
  require_positive(r, "r");
  require_alpha(alpha);
  PairEnergy out;
  out.value = -23.0 * alpha * alpha / (4.0 * kPi * std::pow(r, 7));
  out.route = PairRoute::RSpaceT0Closed;
  return out;
}

PairEnergy pair_energy_T0_numeric(double r, double alpha, double tol) {
  require_positive(r, "r");
  require_alpha(alpha);
  PairEnergy out;
  out.route = PairRoute::RSpaceT0Numeric;
  if (alpha == 0.0)
    return out;
  const auto q = zero_T_integral([&](double kappa) { return pair_summand(r, kappa, alpha); },
                                 tol, 1.0 / r);
  out.value = -q.value;
  out.error_estimate = q.error_estimate;
  out.evaluations = q.evaluations;
  return out;
}

PairEnergy kspace_pair_energy(double r, double alpha, double lambda, double tol) {
  require_positive(r, "r");
  require_positive(lambda, "lambda");
  require_alpha(alpha);
  PairEnergy out;
  out.route = PairRoute::KSpace;
  // k^3 e^{-lambda k} has dropped below 1e-25 of its peak at lambda k = 70.
  const double k_max = 70.0 / lambda;
  double cell = std::min(kPi / r, 2.0 / lambda);

  for (int refinement = 0;; ++refinement) {
    const AxisNodes ax = build_axis(r, lambda, cell, k_max);
    const std::size_t n = ax.k.size();
    if (n > kMaxNodesPerAxis) {
      std::ostringstream diag;
      diag << "lambda=" << lambda << " r=" << r << " nodes_per_axis=" << n;
      throw NumericalError("lambda too small for the k-space node budget", diag.str());
    }
    // Symmetric integrand: accumulate the strict upper triangle twice.
    std::vector<double> row_k(n), row_g(n), row_abs(n);
    for (std::size_t i = 0; i < n; ++i) {
      double sk = 0.0, sg = 0.0, sa = 0.0;
      const double b0 = (4.0 / 3.0) * ax.a0[i], b2 = (2.0 / 3.0) * ax.a2[i];
      for (std::size_t j = i; j < n; ++j) {
        const double v = (b0 * ax.a0[j] + b2 * ax.a2[j]) / (ax.k[i] + ax.k[j]);
        const double m = j == i ? 1.0 : 2.0;
        sk += m * ax.wk[j] * v;
        sg += m * ax.wg[j] * v;
        sa += m * ax.wk[j] * std::abs(v);
      }
      row_k[i] = ax.wk[i] * sk;
      row_g[i] = ax.wg[i] * sg;
      row_abs[i] = ax.wk[i] * sa;
    }
    const double ik = numerics::pairwise_sum(row_k);
    const double ig = numerics::pairwise_sum(row_g);
    const double roundoff =
        64.0 * std::numeric_limits<double>::epsilon() * numerics::pairwise_sum(row_abs);
    const double err = std::max(std::abs(ik - ig), roundoff);

    out.value = -(alpha * alpha / (kPi * kPi)) * ik;
    out.error_estimate = (alpha * alpha / (kPi * kPi)) * err;
    out.evaluations = n;
    // Refining cannot beat the rounding floor of the double sum.
    if (err <= tol * std::abs(ik) || roundoff >= std::abs(ik - ig) || refinement >= 2)
      break;
    cell *= 0.5;
  }
  return out;
}

KSpaceExtrapolation kspace_pair_energy_extrapolated(double r, double alpha,
                                                    std::vector<double> lambdas,
                                                    std::vector<double> exponents, double tol) {
  if (lambdas.size() < exponents.size() + 1)
    throw std::invalid_argument("kspace extrapolation needs more lambda values than exponents");
  KSpaceExtrapolation out;
  double sample_error = 0.0;
  for (double l : lambdas) {
    const PairEnergy e = kspace_pair_energy(r, alpha, l, tol);
    out.samples.emplace_back(l, e.value);
    sample_error = std::max(sample_error, e.error_estimate);
  }
  const auto rr = numerics::richardson_extrapolate(out.samples, exponents);
  out.value = rr.limit;
  out.error_estimate = rr.error_estimate + sample_error;
  out.monotone = rr.monotone;
  return out;
}

PairEnergy damped_pair_energy_T0(double r, double alpha, double lambda, double tol) {
  if (!std::isfinite(r) || r < 0.0)
    throw std::invalid_argument("r must be finite and >= 0");
  require_positive(lambda, "lambda");
  require_alpha(alpha);
  PairEnergy out;
  out.route = PairRoute::RSpaceDamped;
  if (alpha == 0.0)
    return out;
  const double length = std::max(r, lambda);
  TransformOptions topts;
  topts.abs_tol = 1e-3 * tol / (length * length * length);
  std::size_t kernel_evals = 0;
  auto g = [&](double kappa) {
    const DampedKernels d = damped_r_space_kernels(r, ImagWavenumber(kappa), lambda, topts);
    ++kernel_evals;
    return 1.5 * alpha * alpha * orientation_averaged_square(d.kernels);
  };
  const auto q = zero_T_integral(g, tol, 1.0 / length);
  out.value = -q.value;
  out.error_estimate = q.error_estimate;
  out.evaluations = kernel_evals;
  return out;
}

double shielded_pair_energy_T0(double r, double alpha, double lambda) {
  if (!std::isfinite(r) || r < 0.0)
    throw std::invalid_argument("r must be finite and >= 0");
  if (!std::isfinite(lambda) || lambda < 0.0)
    throw std::invalid_argument("lambda must be finite and >= 0");
  require_alpha(alpha);
  if (r == 0.0 && lambda == 0.0)
    throw std::invalid_argument("shielded pair energy diverges at r = lambda = 0");
  const double pre = -alpha * alpha / (3.0 * kPi * kPi);
  if (r == 0.0)
    return pre * 144.0 / (7.0 * std::pow(lambda, 7));
  // With x = r tan t the integrand becomes r^-7 [16 (3 s^2 - c^2)^2 c^6 + 128 c^10].
  auto integrand = [](double t) {
    const double s = std::sin(t), c = std::cos(t);
    const double c2 = c * c, c6 = c2 * c2 * c2;
    const double u = 3.0 * s * s - c2;
    return 16.0 * u * u * c6 + 128.0 * c6 * c2 * c2;
  };
  numerics::QuadratureOptions opts;
  opts.abs_tol = 0.0;
  opts.rel_tol = 1e-14;
  const double t0 = std::atan2(lambda, r);
  if (t0 >= 0.5 * kPi)
    return 0.0;
  const auto q = numerics::integrate(integrand, t0, 0.5 * kPi, opts);
  return pre * q.value / std::pow(r, 7);
}

} // namespace casimir
