#include "casimir/numerics.hpp"
#include "casimir/pair_energy.hpp"
#include "casimir/special_functions.hpp"

#include "oracles.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

using namespace casimir;
using std::numbers::pi;

TEST(PairT0, ClosedValues) {
  EXPECT_NEAR(pair_energy_T0(1.0, 1.0).value, -1.8302822, 1e-6);
  EXPECT_NEAR(pair_energy_T0(10.0, 1.0).value, -1.8302822e-7, 1e-13);
  EXPECT_EQ(pair_energy_T0(1.0, 0.0).value, 0.0);
}

TEST(PairT0, NumericMatchesClosed) {
  for (double r : {0.5, 1.0, 2.0}) {
    const auto e = pair_energy_T0_numeric(r, 1.0, 1e-10);
    EXPECT_NEAR(e.value / oracle::pair_T0(r, 1.0), 1.0, 1e-8) << r;
  }
  EXPECT_EQ(pair_energy_T0_numeric(1.0, 0.0).value, 0.0);
}

TEST(PairFiniteT, ColdLimit) {
  Medium m;
  m.alpha = 1.0;
  ThermalState st;
  st.beta = 2e6;
  EXPECT_NEAR(pair_free_energy(2.0, m, st).value / -0.01429908, 1.0, 1e-4);
}

TEST(PairFiniteT, ClassicalLimit) {
  Medium m;
  m.alpha = 1.0;
  ThermalState st;
  st.beta = 1e-3;
  EXPECT_NEAR(pair_free_energy(1.0, m, st).value / (-3.0 / 1e-3), 1.0, 1e-4);
}

TEST(PairFiniteT, MonotoneInTemperature) {
  // |F| grows with temperature between the quantum and classical limits.
  Medium m;
  m.alpha = 1.0;
  double prev = 0.0;
  for (double beta : {100.0, 10.0, 1.0, 0.1}) {
    ThermalState st;
    st.beta = beta;
    const double f = pair_free_energy(1.0, m, st).value;
    EXPECT_LT(f, prev);
    prev = f;
  }
}

// The k-space integrand carries the angular factor [(k.k')^2 + 1] e^{i(k + k').r};
// integrated over both directions it should reduce to
// (4 pi)^2 [(4/3) j0 j0' + (2/3) j2 j2'].
TEST(KSpacePair, AngularReductionOracle) {
  const double r = 1.0;
  for (auto [k, kp] : {std::pair{0.7, 1.9}, std::pair{2.5, 0.4}, std::pair{3.0, 3.0}}) {
    auto integrand = [&](const std::array<double, 3> &x) {
      const double c1 = x[0], c2 = x[1], dphi = x[2];
      const double s1 = std::sqrt(1.0 - c1 * c1), s2 = std::sqrt(1.0 - c2 * c2);
      const double dot = s1 * s2 * std::cos(dphi) + c1 * c2;
      return (dot * dot + 1.0) * std::cos((k * c1 + kp * c2) * r);
    };
    numerics::QuadratureOptions o;
    o.rel_tol = 1e-7;
    o.abs_tol = 1e-9;
    o.max_cells = 400000;
    const auto q = numerics::integrate_box(integrand, {{-1.0, -1.0, 0.0}, {1.0, 1.0, 2.0 * pi}}, o);
    const double angular = 2.0 * pi * q.value;
    const double reduced = 16.0 * pi * pi *
                           ((4.0 / 3.0) * special::sph_j0(k * r) * special::sph_j0(kp * r) +
                            (2.0 / 3.0) * special::sph_j2(k * r) * special::sph_j2(kp * r));
    EXPECT_NEAR(angular, reduced, 1e-6 * 16.0 * pi * pi) << k << " " << kp;
  }
}

TEST(KSpacePair, ExtrapolatesToClosedForm) {
  const auto ex = kspace_pair_energy_extrapolated(1.0, 1.0);
  EXPECT_NEAR(ex.value / oracle::pair_T0(1.0, 1.0), 1.0, 1e-3);
  EXPECT_EQ(ex.samples.size(), 3u);
}

TEST(KSpacePair, MatchesShieldedClosedIntegral) {
  for (double lambda : {0.3, 0.1}) {
    const double k = kspace_pair_energy(1.0, 1.0, lambda, 1e-9).value;
    EXPECT_NEAR(k / shielded_pair_energy_T0(1.0, 1.0, lambda), 1.0, 1e-7) << lambda;
  }
}

TEST(KSpacePair, LargeLambdaVanishes) {
  EXPECT_LT(std::abs(kspace_pair_energy(1.0, 1.0, 50.0).value), 1e-9);
}

TEST(KSpacePair, MatchesDampedRSpaceRoute) {
  const double k = kspace_pair_energy(1.0, 1.0, 0.1).value;
  const double d = damped_pair_energy_T0(1.0, 1.0, 0.1, 1e-6).value;
  EXPECT_NEAR(d / k, 1.0, 1e-3);
}

TEST(ShieldedPair, ZeroSeparation) {
  const double lambda = 0.5;
  EXPECT_NEAR(shielded_pair_energy_T0(0.0, 1.0, lambda),
              -(1.0 / (3.0 * pi * pi)) * 144.0 / (7.0 * std::pow(lambda, 7)), 1e-10);
}
