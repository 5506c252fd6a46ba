#pragma once

// Mutual free energy of two identical polarizable particles at separation r.
// Energies are in units of hbar c / length; alpha is a volume.

#include "casimir/kernels.hpp"
#include "casimir/matsubara.hpp"
#include "casimir/numerics.hpp"

#include <cstddef>
#include <cstdint>
#include <string_view>
#include <utility>
#include <vector>

namespace casimir {

struct Medium {
  double alpha = 0.0;
  double rho = 0.0;
  Theta theta{};

  /// 4 pi rho alpha.
  double gamma() const noexcept;
};

enum class PairRoute { RSpaceSum, RSpaceT0Closed, RSpaceT0Numeric, KSpace, RSpaceDamped };

std::string_view to_string(PairRoute route) noexcept;

struct PairEnergy {
  double value = 0.0;
  PairRoute route = PairRoute::RSpaceT0Closed;
  double error_estimate = 0.0;
  std::int64_t terms_used = 0;
  std::size_t evaluations = 0;
};

/// (3/2) alpha^2 (2 psi_D^2 + psi_Delta^2) at imaginary wavenumber kappa,
/// the summand of -beta F.
double pair_summand(double r, double kappa, double alpha);

/// F = -(1/beta) sum_K pair_summand over the Matsubara grid.
PairEnergy pair_free_energy(double r, const Medium &medium, const ThermalState &state);

/// F = -23 alpha^2 / (4 pi r^7).
PairEnergy pair_energy_T0(double r, double alpha);

/// The zero-temperature limit of pair_free_energy by quadrature over kappa.
PairEnergy pair_energy_T0_numeric(double r, double alpha, double tol = 1e-10);

/// Zero-temperature energy from the double wavenumber integral
///   F = -(alpha^2 / pi^2) int int k^3 k'^3 e^{-lambda (k + k')} / (k + k')
///       [ (4/3) j0(kr) j0(k'r) + (2/3) j2(kr) j2(k'r) ] dk dk'
/// obtained by reducing the angular factor [(k.k')^2 + 1] e^{i(k+k').r}.
/// Product Gauss-Kronrod quadrature on half-period cells; `tol` is relative.
/// Throws NumericalError when lambda is too small for the node budget.
PairEnergy kspace_pair_energy(double r, double alpha, double lambda, double tol = 1e-8);

struct KSpaceExtrapolation {
  double value = 0.0;
  double error_estimate = 0.0;
  bool monotone = true;
  std::vector<std::pair<double, double>> samples;
};

/// lambda -> 0 limit of kspace_pair_energy by Richardson extrapolation. The
/// difference F_lambda - F_0 is odd in lambda, hence the default exponents.
KSpaceExtrapolation kspace_pair_energy_extrapolated(double r, double alpha,
                                                    std::vector<double> lambdas = {0.1, 0.05, 0.025},
                                                    std::vector<double> exponents = {1.0, 3.0},
                                                    double tol = 1e-8);

/// Zero-temperature energy with the exp(-lambda k) shielded kernels
/// transformed to r-space numerically and integrated over kappa.
PairEnergy damped_pair_energy_T0(double r, double alpha, double lambda, double tol = 1e-7);

/// Shielded zero-temperature energy with the kappa and wavenumber integrals
/// done in closed form, leaving
///   F = -(alpha^2 / (3 pi^2)) int_lambda^inf [16 (3x^2 - r^2)^2 + 128 r^4] / (x^2 + r^2)^6 dx,
/// evaluated by quadrature after x = r tan(t). Valid for r >= 0, lambda >= 0,
/// not both zero.
double shielded_pair_energy_T0(double r, double alpha, double lambda);

} // namespace casimir
