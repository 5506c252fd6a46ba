#include "casimir/kernels.hpp"
#include "casimir/special_functions.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

using namespace casimir;
using std::numbers::pi;

TEST(KSpaceKernels, StaticLimit) {
  const auto k = k_space_kernels(1.0, ImagWavenumber(0.0));
  EXPECT_NEAR(k.psi_D, -4.0 * pi / 3.0, 1e-14);
  EXPECT_NEAR(k.psi_Delta, 8.0 * pi / 3.0, 1e-14);
}

TEST(KSpaceKernels, HalfWeightAtKappaEqualK) {
  const auto k = k_space_kernels(1.0, ImagWavenumber(1.0));
  EXPECT_NEAR(k.psi_D, -2.0 * pi / 3.0, 1e-14);
  EXPECT_NEAR(k.psi_Delta, 4.0 * pi / 3.0, 1e-14);
}

TEST(KSpaceKernels, ShieldingMultipliesByExponential) {
  const auto k = k_space_kernels(1.0, ImagWavenumber(0.0), Theta{}, 1.0);
  EXPECT_NEAR(k.psi_D, -(4.0 * pi / 3.0) * std::exp(-1.0), 1e-14);
}

TEST(RSpaceKernels, StaticDipole) {
  const auto k = r_space_kernels(1.0, ImagWavenumber(0.0));
  EXPECT_DOUBLE_EQ(k.psi_D, 1.0);
  EXPECT_DOUBLE_EQ(k.psi_Delta, 0.0);
}

TEST(RSpaceKernels, ClosedValues) {
  const auto k1 = r_space_kernels(1.0, ImagWavenumber(1.0));
  EXPECT_NEAR(k1.psi_D, 0.858385, 1e-6);
  EXPECT_NEAR(k1.psi_Delta, -0.245253, 1e-6);
  const auto k2 = r_space_kernels(1.0, ImagWavenumber(2.0));
  EXPECT_NEAR(k2.psi_D, 0.586453, 1e-6);
  EXPECT_NEAR(k2.psi_Delta, -0.360894, 1e-6);
}

TEST(OracleTransform, MatchesClosedForm) {
  TransformOptions o;
  o.abs_tol = 1e-10;
  for (double kappa : {0.3, 1.0, 2.5}) {
    for (double r : {0.5, 1.0, 2.0}) {
      const ImagWavenumber k(kappa);
      const auto c = r_space_kernels(r, k);
      EXPECT_NEAR(oracle_inverse_transform(k, r, KernelComponent::D, o).value, c.psi_D, 1e-8)
          << kappa << " " << r;
      EXPECT_NEAR(oracle_inverse_transform(k, r, KernelComponent::Delta, o).value, c.psi_Delta, 1e-8)
          << kappa << " " << r;
    }
  }
}

TEST(OracleTransform, DeltaAtKappa2) {
  const auto v = oracle_inverse_transform(ImagWavenumber(1.0), 2.0, KernelComponent::Delta).value;
  EXPECT_NEAR(v, -0.0451118, 1e-4);
}

TEST(OracleTransform, DeltaVanishesWithoutKappa) {
  const auto v = oracle_inverse_transform(ImagWavenumber(1e-8), 1.0, KernelComponent::Delta).value;
  EXPECT_NEAR(v, 0.0, 1e-6);
}

TEST(DampedKernels, ReduceToUndampedAtSmallLambda) {
  const ImagWavenumber k(1.0);
  TransformOptions o;
  o.abs_tol = 1e-9;
  const auto d = damped_r_space_kernels(1.0, k, 1e-4, o);
  const auto c = r_space_kernels(1.0, k);
  EXPECT_NEAR(d.kernels.psi_D, c.psi_D, 1e-3);
  EXPECT_NEAR(d.kernels.psi_Delta, c.psi_Delta, 1e-3);
}

TEST(Eigencouplings, OrientationAverage) {
  const KernelPair p{0.7, -0.2};
  const auto e = eigencouplings(p);
  // Tensor psi_D (3 rr - 1) + psi_Delta: eigenvalues 2 psi_D + psi_Delta once, -psi_D + psi_Delta twice.
  EXPECT_NEAR(e.f_par, 2 * 0.7 - 0.2, 1e-15);
  EXPECT_NEAR(e.f_perp, -0.7 - 0.2, 1e-15);
  EXPECT_NEAR(orientation_averaged_square(p), (e.f_par * e.f_par + 2 * e.f_perp * e.f_perp) / 3.0, 1e-14);
}

TEST(SpecialFunctions, BesselSeriesAndClosedFormsAgree) {
  for (double x : {1e-6, 1e-3, 0.3, 0.49, 0.51, 1.0, 7.0, 40.0}) {
    const double j0 = std::sin(x) / x;
    const double j1 = std::sin(x) / (x * x) - std::cos(x) / x;
    EXPECT_NEAR(special::sph_j0(x), j0, 1e-13);
    if (x > 1e-2) {
      const double j2 = (3.0 / (x * x) - 1.0) * std::sin(x) / x - 3.0 * std::cos(x) / (x * x);
      EXPECT_NEAR(special::sph_j1(x), j1, 1e-12);
      EXPECT_NEAR(special::sph_j2(x), j2, 1e-11);
    }
  }
  EXPECT_NEAR(special::ball_form_factor(pi), 3.0 / (pi * pi), 1e-15);
  EXPECT_DOUBLE_EQ(special::ball_form_factor(0.0), 1.0);
}
