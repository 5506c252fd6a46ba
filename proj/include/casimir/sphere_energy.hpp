#pragma once

// Interaction energy of a dilute dielectric ball built from pair energies,
// under a hard-core or an exponential wavenumber cutoff, with its split into
// cutoff-dependent divergences and the finite 1/a part.

#include "casimir/geometry.hpp"
#include "casimir/matsubara.hpp"
#include "casimir/pair_energy.hpp"

#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

namespace casimir {

struct HardCore {
  double r_min = 0.0;
};

struct Exponential {
  double lambda = 0.0;
};

using Cutoff = std::variant<HardCore, Exponential>;

struct DielectricState {
  double epsilon = 1.0;
  double n_refr = 1.0;
  double gamma = 0.0;
};

/// Solves (eps - 1) / ((1 - Theta) eps + 2 + Theta) = (4 pi / 3) rho alpha.
/// Throws std::domain_error when no solution with eps >= 1 exists.
DielectricState epsilon_relation(const Medium &medium);

/// Medium with rho = 1 and 4 pi rho alpha = eps - 1, the leading dilute order.
Medium dilute_medium(double eps_minus_1);

/// 23 (eps - 1)^2 / (1536 pi a), in units of hbar c.
double finite_part_prediction(double a, double eps_minus_1);

struct EnergyBreakdown {
  double total = 0.0;
  double c_vol = 0.0;
  double c_surf = 0.0;
  double c_lin = 0.0;
  double finite_1_over_a = 0.0;
  double residual = 0.0;
  double condition_number = 0.0;
};

/// Exact hard-core decomposition
///   total = c_vol / r_min^4 + c_surf / r_min^3 + c_lin / r_min + finite_1_over_a
/// from antidifferentiating the polynomial pieces of 4 pi r^2 V_ov(r) r^-7.
/// There are no higher-order terms in r_min.
EnergyBreakdown hardcore_breakdown_analytic(double a, const Medium &medium, double r_min);

struct HardCoreEnergy {
  double r_min = 0.0;
  /// (1/2) rho^2 int 4 pi r^2 V_ov(r) F(r) dr by quadrature.
  double total = 0.0;
  double error_estimate = 0.0;
  EnergyBreakdown analytic;
};

HardCoreEnergy sphere_energy_rspace(double a, const Medium &medium, double r_min,
                                    double tol = 1e-14);

/// Finite-temperature counterpart of sphere_energy_rspace using the
/// Matsubara pair energy at every quadrature node. Not checked against any
/// reference value.
HardCoreEnergy sphere_energy_rspace_thermal(double a, const Medium &medium, double r_min,
                                            const ThermalState &state, double tol = 1e-8);

struct DecomposeOptions {
  std::size_t min_samples = 6;
  double min_decades = 2.0;
  /// Every r_min must be below this fraction of a.
  double max_r_min_over_a = 0.1;
  double max_relative_residual = 1e-8;
  double max_condition = 1e12;
};

/// Least-squares fit of (r_min, total) samples to the hard-core model, done
/// as total x^4 = b0 + b1 x + b2 x^3 + b3 x^4 in x = r_min / a. Throws
/// FitError on too few or too narrowly spread samples, ill-conditioning or a
/// residual above tolerance.
EnergyBreakdown decompose_fit(std::span<const std::pair<double, double>> samples, double a,
                              const DecomposeOptions &opts = {});

struct HardCoreSweep {
  std::vector<HardCoreEnergy> points;
  EnergyBreakdown fit;
  double finite_analytic = 0.0;
  /// |fit - analytic| / analytic for the finite part.
  double finite_disagreement = 0.0;
};

/// Evaluates sphere_energy_rspace on every r_min, fits the decomposition and
/// compares the fitted finite part with the analytic one. Disagreement
/// beyond `agreement_tol` (relative) throws NumericalError.
HardCoreSweep hardcore_sweep(double a, const Medium &medium, std::span<const double> r_mins,
                             double agreement_tol = 1e-2, const DecomposeOptions &opts = {},
                             unsigned workers = 1);

enum class KSpaceSphereMethod {
  /// Angular and inner wavenumber integrals done in closed form, leaving a
  /// one-dimensional integral over |k + k'|.
  Reduced,
  /// Direct adaptive cubature over (k, k', cos theta). Low precision.
  Cubature,
};

struct KSpaceSphereOptions {
  KSpaceSphereMethod method = KSpaceSphereMethod::Reduced;
  double tol = 1e-13;
  std::size_t max_cells = 400000;
};

struct SphereEnergyValue {
  double value = 0.0;
  double error_estimate = 0.0;
  std::size_t evaluations = 0;
};

/// Exponential-cutoff energy
///   -(rho^2 alpha^2 / (4 pi^2)) int dk dk' dc k^3 k'^3 e^{-lambda (k + k')} / (k + k')
///       (c^2 + 1) |V(|k + k'|)|^2
/// with c the cosine between k and k'.
SphereEnergyValue sphere_energy_kspace(double a, const Medium &medium, double lambda,
                                       const KSpaceSphereOptions &opts = {});

enum class ShieldedKernelRoute {
  /// Closed-form kappa and wavenumber integrals (shielded_pair_energy_T0).
  Closed,
  /// Numerically transformed shielded kernels (damped_pair_energy_T0).
  Transform,
};

/// (1/2) rho^2 int 4 pi r^2 V_ov(r) F_lambda(r) dr with the shielded pair
/// energy, the r-space counterpart of sphere_energy_kspace.
SphereEnergyValue sphere_energy_rspace_shielded(double a, const Medium &medium, double lambda,
                                                ShieldedKernelRoute route, double tol = 1e-10);

enum class ExpBasisTerm {
  VolumeQuartic,      // V / lambda^4
  SurfaceCubic,       // S / lambda^3
  CurvatureQuadratic, // a / lambda^2
  InverseLinear,      // 1 / lambda
  Finite,             // 1 / a
  LinearCorrection,   // lambda / a^2
  CubicCorrection,    // lambda^3 / a^4
};

std::string_view to_string(ExpBasisTerm term) noexcept;
ExpBasisTerm exp_basis_term_from_string(std::string_view name);

/// V/lambda^4, S/lambda^3, 1/lambda, 1/a, lambda/a^2, lambda^3/a^4. Splitting
/// the pair-distance integral at 2a shows the divergent part comes only from
/// the r^2, r^3 and r^5 pieces of the measure (no a/lambda^2 term) and the
/// remainder is odd in lambda.
std::vector<ExpBasisTerm> default_exponential_basis();

struct ExponentialBreakdown {
  std::vector<ExpBasisTerm> basis;
  std::vector<double> coefficients;
  double finite_1_over_a = 0.0;
  double residual = 0.0;
  double condition_number = 0.0;
};

/// Relative-weighted least-squares fit of (lambda, total) samples to the
/// chosen basis. The basis must contain ExpBasisTerm::Finite.
ExponentialBreakdown decompose_exponential_fit(std::span<const std::pair<double, double>> samples,
                                               double a, std::span<const ExpBasisTerm> basis,
                                               double max_condition = 1e13);

struct ExponentialSweep {
  std::vector<std::pair<double, double>> points;
  std::vector<double> errors;
  ExponentialBreakdown fit;
};

ExponentialSweep exponential_sweep(double a, const Medium &medium, std::span<const double> lambdas,
                                   std::span<const ExpBasisTerm> basis,
                                   const KSpaceSphereOptions &opts = {}, unsigned workers = 1);

struct SelfEnergy {
  /// -gamma (3 / (2 pi^2)) V / lambda^4.
  double closed = 0.0;
  /// The same from the numerically integrated kernel sum.
  double numeric = 0.0;
  /// (1/beta) sum_K psi_Delta(0), expected 4 / (pi lambda^4).
  double kernel_sum = 0.0;
  double kernel_sum_error = 0.0;
};

/// First-order single-particle energy. Reported on its own: it belongs to
/// the free particles and is never part of an EnergyBreakdown total.
SelfEnergy self_energy(double volume, double gamma, double lambda, double tol = 1e-12);

/// Runs `job(i)` for i in [0, count) on up to `workers` threads.
void parallel_for(std::size_t count, unsigned workers, const std::function<void(std::size_t)> &job);

} // namespace casimir
