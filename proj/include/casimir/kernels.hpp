#pragma once

// Radiating dipole-dipole interaction at imaginary frequency.
//
// In r-space the interaction between two fluctuating dipoles is
//   psi_D(r) D(12) + psi_Delta(r) Delta(12),
//   D(12) = 3 (r.a1)(r.a2) - a1.a2,   Delta(12) = a1.a2,
// and in k-space the same decomposition holds with r replaced by k. All
// quantities use natural units hbar = c = 1 and a single arbitrary length
// unit; kappa is the imaginary wavenumber |K| / (hbar c).

#include <cstddef>
#include <cstdint>

namespace casimir {

class ImagWavenumber {
public:
  explicit ImagWavenumber(double kappa);

  /// kappa_n = 2 pi |n| / (beta hbar c).
  static ImagWavenumber from_matsubara(std::int64_t n, double beta);

  double value() const noexcept { return kappa_; }

private:
  double kappa_;
};

/// Weight of the contact term in the k-space Delta kernel. The default -2
/// removes the longitudinal part of the interaction; other values are only
/// meaningful for the dielectric relation.
struct Theta {
  double value = -2.0;

  bool is_transverse() const noexcept { return value == -2.0; }
};

struct KernelPair {
  double psi_D = 0.0;
  double psi_Delta = 0.0;
};

/// Eigenvalues of the coupling tensor psi_D (3 r r - 1) + psi_Delta 1:
/// f_par for dipoles along r, f_perp (twice degenerate) across it.
struct CouplingEigenvalues {
  double f_par = 0.0;
  double f_perp = 0.0;
};

CouplingEigenvalues eigencouplings(const KernelPair &k) noexcept;

/// 2 psi_D^2 + psi_Delta^2, the orientation average entering the pair free
/// energy. Equals (f_par^2 + 2 f_perp^2) / 3.
inline double orientation_averaged_square(const KernelPair &k) noexcept {
  return 2.0 * k.psi_D * k.psi_D + k.psi_Delta * k.psi_Delta;
}

/// k-space amplitudes with an optional exp(-lambda k) shielding factor:
///   psi_D     = -(4 pi / 3) k^2 / (k^2 + kappa^2) e^{-lambda k}
///   psi_Delta =  (4 pi / 3) (2 k^2 / (k^2 + kappa^2) - (2 + Theta)) e^{-lambda k}
KernelPair k_space_kernels(double k, ImagWavenumber kappa, Theta theta = {},
                           double lambda = 0.0);

/// Closed-form r-space amplitudes for Theta = -2 and no shielding:
///   psi_D     = (1 + x + x^2 / 3) e^{-x} / r^3,  x = kappa r
///   psi_Delta = -(2 / 3) kappa^2 e^{-x} / r
/// The contact term at r = 0 is excluded; r must be positive.
KernelPair r_space_kernels(double r, ImagWavenumber kappa);

enum class KernelComponent { D, Delta };

struct TransformOptions {
  double abs_tol = 1e-6;
  double rel_tol = 0.0;
};

struct TransformResult {
  double value = 0.0;
  double error_estimate = 0.0;
  std::size_t evaluations = 0;
};

/// Independent numerical inverse Fourier transform of the k-space amplitudes
/// (Theta = -2, no shielding). Delta uses the order-0 radial transform and D
/// the order-2 transform matching the D(12) tensor. The k^2 growth of the D
/// amplitude is removed through its Abel-summed transform 3 pi / (2 r^3), the
/// remaining conditionally convergent integrals are summed over half periods
/// and accelerated with the epsilon algorithm. Throws NumericalError when
/// the estimated error exceeds the requested tolerance.
TransformResult oracle_inverse_transform(ImagWavenumber kappa, double r,
                                         KernelComponent component,
                                         const TransformOptions &opts = {});

struct DampedKernels {
  KernelPair kernels;
  double error_estimate = 0.0;
};

/// r-space amplitudes of the exp(-lambda k) shielded k-space kernels,
/// obtained by numerical inverse transform. Defined for r >= 0, lambda > 0.
/// The shielded contact part of psi_Delta is retained, so the result is the
/// exact r-space counterpart of the shielded k-space interaction.
DampedKernels damped_r_space_kernels(double r, ImagWavenumber kappa, double lambda,
                                     const TransformOptions &opts = {});

} // namespace casimir
