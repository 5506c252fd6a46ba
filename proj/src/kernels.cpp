#include "casimir/kernels.hpp"

#include "casimir/errors.hpp"
#include "casimir/numerics.hpp"
#include "casimir/special_functions.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace casimir {

namespace {

constexpr double kPi = std::numbers::pi;

void require_finite(double v, const char *what) {
  if (!std::isfinite(v))
    throw std::invalid_argument(std::string(what) + " must be finite");
}

} // namespace

ImagWavenumber::ImagWavenumber(double kappa) : kappa_(kappa) {
  if (!std::isfinite(kappa) || kappa < 0.0)
    throw std::invalid_argument("ImagWavenumber: kappa must be finite and >= 0");
}

ImagWavenumber ImagWavenumber::from_matsubara(std::int64_t n, double beta) {
  if (!(beta > 0.0) || !std::isfinite(beta))
    throw std::invalid_argument("ImagWavenumber: beta must be finite and positive");
  return ImagWavenumber(2.0 * kPi * std::abs(static_cast<double>(n)) / beta);
}

CouplingEigenvalues eigencouplings(const KernelPair &k) noexcept {
  return {2.0 * k.psi_D + k.psi_Delta, k.psi_Delta - k.psi_D};
}

KernelPair k_space_kernels(double k, ImagWavenumber kappa, Theta theta, double lambda) {
  require_finite(k, "k");
  require_finite(theta.value, "theta");
  require_finite(lambda, "lambda");
  if (!(k > 0.0))
    throw std::invalid_argument("k_space_kernels: k must be positive");
  if (lambda < 0.0)
    throw std::invalid_argument("k_space_kernels: lambda must be >= 0");
  const double kap = kappa.value();
  // k^2 / (k^2 + kappa^2), written to stay accurate for kappa >> k.
  const double transverse = 1.0 / (1.0 + (kap / k) * (kap / k));
  const double shield = std::exp(-lambda * k);
  const double amp = 4.0 * kPi / 3.0;
  return {-amp * transverse * shield, amp * (2.0 * transverse - (2.0 + theta.value)) * shield};
}

KernelPair r_space_kernels(double r, ImagWavenumber kappa) {
  require_finite(r, "r");
  if (!(r > 0.0))
    throw std::invalid_argument("r_space_kernels: r must be positive (contact term excluded)");
  const double kap = kappa.value();
  const double x = kap * r;
  const double decay = std::exp(-x);
  const double psi_D = (1.0 + x + x * x / 3.0) * decay / (r * r * r);
  const double psi_Delta = -(2.0 / 3.0) * kap * kap * decay / r;
  return {psi_D, psi_Delta};
}

TransformResult oracle_inverse_transform(ImagWavenumber kappa, double r,
                                         KernelComponent component,
                                         const TransformOptions &opts) {
  require_finite(r, "r");
  if (!(r > 0.0))
    throw std::invalid_argument("oracle_inverse_transform: r must be positive");
  const double kap = kappa.value();
  const double kap2 = kap * kap;

  // Both components reduce to kappa^2 * integral of k^2/(k^2+kappa^2) j_l(kr).
  const double prefactor = component == KernelComponent::D ? -(2.0 / (3.0 * kPi)) * kap2
                                                           : -(4.0 / (3.0 * kPi)) * kap2;
  const double abel_part = component == KernelComponent::D ? 1.0 / (r * r * r) : 0.0;
  if (kap2 == 0.0)
    return {abel_part, 0.0, 0};

  auto integrand = [&](double k) {
    const double weight = k * k / (k * k + kap2);
    return component == KernelComponent::D ? weight * special::sph_j2(k * r)
                                           : weight * special::sph_j0(k * r);
  };
  numerics::OscillatoryOptions o;
  const double scale = std::abs(prefactor);
  o.abs_tol = 1e-3 * opts.abs_tol / scale;
  o.rel_tol = std::max(1e-12, 1e-3 * opts.rel_tol);
  o.throw_on_failure = false;
  const auto q = numerics::integrate_oscillatory(integrand, 0.0, kPi / r, o);

  TransformResult out{abel_part + prefactor * q.value, scale * q.error_estimate, q.evaluations};
  const double tol = std::max(opts.abs_tol, opts.rel_tol * std::abs(out.value));
  if (!q.converged || !(out.error_estimate <= tol)) {
    std::ostringstream diag;
    diag << "kappa=" << kap << " r=" << r << " error_estimate=" << out.error_estimate
         << " tol=" << tol;
    throw NumericalError("inverse transform oracle missed its tolerance", diag.str());
  }
  return out;
}

DampedKernels damped_r_space_kernels(double r, ImagWavenumber kappa, double lambda,
                                     const TransformOptions &opts) {
  require_finite(r, "r");
  require_finite(lambda, "lambda");
  if (r < 0.0)
    throw std::invalid_argument("damped_r_space_kernels: r must be >= 0");
  if (!(lambda > 0.0))
    throw std::invalid_argument("damped_r_space_kernels: lambda must be positive");
  const double kap2 = kappa.value() * kappa.value();
  auto weight = [&](double k) { return k * k * (k * k / (k * k + kap2)) * std::exp(-lambda * k); };

  numerics::OscillatoryOptions o;
  o.abs_tol = 1e-3 * opts.abs_tol;
  o.rel_tol = std::max(1e-12, 1e-3 * opts.rel_tol);
  const double period = r > 0.0 ? std::min(kPi / r, 2.0 / lambda) : 2.0 / lambda;

  auto d_part = [&](double k) { return weight(k) * special::sph_j2(k * r); };
  auto delta_part = [&](double k) { return weight(k) * special::sph_j0(k * r); };

  DampedKernels out;
  double err = 0.0;
  if (r > 0.0) {
    const auto qd = numerics::integrate_oscillatory(d_part, 0.0, period, o);
    out.kernels.psi_D = 2.0 / (3.0 * kPi) * qd.value;
    err += 2.0 / (3.0 * kPi) * qd.error_estimate;
  }
  const auto qdelta = numerics::integrate_oscillatory(delta_part, 0.0, period, o);
  out.kernels.psi_Delta = 4.0 / (3.0 * kPi) * qdelta.value;
  err += 4.0 / (3.0 * kPi) * qdelta.error_estimate;
  out.error_estimate = err;
  return out;
}

} // namespace casimir
