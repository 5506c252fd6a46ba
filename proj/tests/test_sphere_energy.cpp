#include "casimir/errors.hpp"
#include "casimir/sphere_energy.hpp"

#include "oracles.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

using namespace casimir;
using std::numbers::pi;

namespace {

std::vector<double> decade_grid(double lo_exp, double hi_exp, int n) {
  std::vector<double> v;
  for (int i = 0; i < n; ++i)
    v.push_back(std::pow(10.0, lo_exp + (hi_exp - lo_exp) * i / (n - 1)));
  return v;
}

} // namespace

TEST(Dielectric, TransverseContactTermGivesGammaRelation) {
  std::mt19937_64 gen(3);
  std::uniform_real_distribution<double> u(0.0, 0.999 / (4.0 * pi));
  for (int i = 0; i < 200; ++i) {
    Medium m;
    m.rho = 1.0;
    m.alpha = u(gen);
    const auto d = epsilon_relation(m);
    EXPECT_NEAR((d.epsilon - 1.0) / d.epsilon, 4.0 * pi * m.alpha, 1e-12);
    EXPECT_NEAR(d.n_refr * d.n_refr, d.epsilon, 1e-12);
  }
}

TEST(Dielectric, ClausiusMossottiForm) {
  std::mt19937_64 gen(5);
  std::uniform_real_distribution<double> u(0.0, 0.999 / (4.0 * pi / 3.0));
  for (int i = 0; i < 200; ++i) {
    Medium m;
    m.rho = 1.0;
    m.alpha = u(gen);
    m.theta.value = 0.0;
    const double eps = epsilon_relation(m).epsilon;
    EXPECT_NEAR((eps - 1.0) / (eps + 2.0), (4.0 * pi / 3.0) * m.alpha, 1e-12);
  }
  Medium m;
  m.rho = 1.0;
  m.theta.value = 0.0;
  m.alpha = 0.1 / (4.0 * pi / 3.0);
  EXPECT_NEAR(epsilon_relation(m).epsilon, 1.2 / 0.9, 1e-13);
}

TEST(Dielectric, VacuumAndUnphysical) {
  Medium m;
  m.rho = 1.0;
  EXPECT_EQ(epsilon_relation(m).epsilon, 1.0);
  EXPECT_EQ(epsilon_relation(m).gamma, 0.0);
  m.alpha = 1e-9;
  EXPECT_NEAR(epsilon_relation(m).epsilon, 1.0, 1e-7);
  m.alpha = 1.0 / (4.0 * pi);
  EXPECT_THROW(epsilon_relation(m), std::domain_error);
}

TEST(HardCore, FinitePartPrediction) {
  EXPECT_NEAR(finite_part_prediction(1.0, 0.1), 4.7664e-5, 1e-9);
  EXPECT_NEAR(finite_part_prediction(2.0, 0.3), oracle::sphere_finite(2.0, 0.3), 1e-18);
}

TEST(HardCore, QuadratureMatchesAnalytic) {
  const Medium m = dilute_medium(0.1);
  for (double r_min : {1e-4, 1e-3, 1e-2, 0.5, 1.9}) {
    const auto e = sphere_energy_rspace(1.0, m, r_min);
    EXPECT_NEAR(e.total / e.analytic.total, 1.0, 1e-12) << r_min;
  }
}

TEST(HardCore, AnalyticCoefficients) {
  const Medium m = dilute_medium(0.1);
  const double C = 23.0 * m.alpha * m.alpha / (4.0 * pi);
  const double V = 4.0 * pi / 3.0;
  const auto b = hardcore_breakdown_analytic(1.0, m, 1e-3);
  EXPECT_NEAR(b.c_vol / (-(pi / 2.0) * m.rho * m.rho * C * V), 1.0, 1e-12);
  EXPECT_NEAR(b.finite_1_over_a / oracle::sphere_finite(1.0, 0.1), 1.0, 1e-12);
  EXPECT_NEAR(b.total / -7.626e8, 1.0, 1e-3);
}

TEST(HardCore, VanishesAtContact) {
  const auto e = sphere_energy_rspace(1.0, dilute_medium(0.1), 2.0 - 1e-9);
  EXPECT_NEAR(e.total, 0.0, 1e-12);
}

TEST(DecomposeFit, SyntheticQuartet) {
  const double a = 1.5, cv = -3.0, cs = 2.0, cl = -0.5, fin = 0.25;
  std::vector<std::pair<double, double>> s;
  for (double r : decade_grid(-4, -1.3, 10))
    s.emplace_back(r, cv / std::pow(r, 4) + cs / std::pow(r, 3) + cl / r + fin / a);
  const auto b = decompose_fit(s, a);
  EXPECT_NEAR(b.c_vol / cv, 1.0, 1e-6);
  EXPECT_NEAR(b.c_surf / cs, 1.0, 1e-6);
  EXPECT_NEAR(b.c_lin / cl, 1.0, 1e-6);
  EXPECT_NEAR(b.finite_1_over_a / (fin / a), 1.0, 1e-6);
}

TEST(DecomposeFit, DegenerateSamples) {
  std::vector<std::pair<double, double>> s(8, {1e-3, -1.0});
  try {
    decompose_fit(s, 1.0);
    FAIL() << "expected FitError";
  } catch (const FitError &e) {
    EXPECT_EQ(e.kind(), FitError::Kind::IllConditioned);
  }
}

TEST(DecomposeFit, TooFewSamples) {
  std::vector<std::pair<double, double>> s = {{1e-4, -1.0}, {1e-3, -1.0}, {1e-2, -1.0}};
  EXPECT_THROW(decompose_fit(s, 1.0), FitError);
}

TEST(HardCoreSweep, RecoversFinitePart) {
  const auto sw = hardcore_sweep(1.0, dilute_medium(0.1), decade_grid(-4, -2, 9));
  EXPECT_NEAR(sw.fit.finite_1_over_a / oracle::sphere_finite(1.0, 0.1), 1.0, 1e-2);
  EXPECT_LT(sw.finite_disagreement, 1e-2);
}

TEST(HardCoreSweep, WorkersGiveIdenticalResults) {
  const auto g = decade_grid(-4, -2, 9);
  const auto a = hardcore_sweep(1.0, dilute_medium(0.1), g, 1e-2, {}, 1);
  const auto b = hardcore_sweep(1.0, dilute_medium(0.1), g, 1e-2, {}, 4);
  EXPECT_EQ(a.fit.finite_1_over_a, b.fit.finite_1_over_a);
}

TEST(HardCore, QuadraticResponse) {
  const auto full = hardcore_breakdown_analytic(1.0, dilute_medium(0.1), 1e-3);
  const auto half = hardcore_breakdown_analytic(1.0, dilute_medium(0.05), 1e-3);
  EXPECT_NEAR(full.total / half.total, 4.0, 1e-12);
  EXPECT_NEAR(full.finite_1_over_a / half.finite_1_over_a, 4.0, 1e-12);
}

TEST(KSpaceSphere, ReducedMatchesShieldedRSpace) {
  const Medium m = dilute_medium(0.1);
  for (double lambda : {0.3, 0.1}) {
    const auto k = sphere_energy_kspace(1.0, m, lambda);
    const auto r = sphere_energy_rspace_shielded(1.0, m, lambda, ShieldedKernelRoute::Closed);
    EXPECT_NEAR(k.value / r.value, 1.0, 1e-9) << lambda;
  }
}

TEST(KSpaceSphere, CubatureOracle) {
  const Medium m = dilute_medium(0.1);
  KSpaceSphereOptions o;
  o.method = KSpaceSphereMethod::Cubature;
  o.tol = 1e-3;
  const auto c = sphere_energy_kspace(1.0, m, 0.3, o);
  const auto k = sphere_energy_kspace(1.0, m, 0.3);
  EXPECT_NEAR(c.value / k.value, 1.0, 2e-3);
}

TEST(KSpaceSphere, LargeLambdaVanishes) {
  const auto k = sphere_energy_kspace(1.0, dilute_medium(0.1), 100.0);
  EXPECT_LT(std::abs(k.value), 1e-12);
}

TEST(ExponentialFit, BasisNames) {
  for (auto t : default_exponential_basis())
    EXPECT_EQ(exp_basis_term_from_string(to_string(t)), t);
  EXPECT_THROW(exp_basis_term_from_string("nope"), std::invalid_argument);
}

TEST(ExponentialFit, RecoversFinitePart) {
  std::vector<double> lambdas;
  for (int i = 0; i < 8; ++i)
    lambdas.push_back(0.05 + 0.05 * i);
  const auto sw = exponential_sweep(1.0, dilute_medium(0.1), lambdas, default_exponential_basis());
  EXPECT_NEAR(sw.fit.finite_1_over_a / oracle::sphere_finite(1.0, 0.1), 1.0, 5e-2);
}

TEST(SelfEnergy, ClosedAndNumeric) {
  const auto s = self_energy(1.0, 0.1, 1.0);
  EXPECT_NEAR(s.closed, -1.51982e-2, 1e-7);
  EXPECT_NEAR(s.numeric / s.closed, 1.0, 1e-8);
  EXPECT_NEAR(s.kernel_sum, 4.0 / pi, 1e-10);
  EXPECT_LT(std::abs(self_energy(1.0, 0.1, 1e3).closed), 1e-13);
}
