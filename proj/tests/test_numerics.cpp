#include "casimir/errors.hpp"
#include "casimir/geometry.hpp"
#include "casimir/numerics.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

using namespace casimir;
using namespace casimir::numerics;
using std::numbers::pi;

TEST(Quadrature, Polynomial) {
  const auto r = integrate([](double x) { return x * x; }, 0.0, 1.0);
  EXPECT_NEAR(r.value, 1.0 / 3.0, 1e-14);
  EXPECT_TRUE(r.converged);
}

TEST(Quadrature, SemiInfiniteGamma4) {
  const auto r = integrate_semi_infinite([](double k) { return k * k * k * std::exp(-k); }, 0.0, 1.0);
  EXPECT_NEAR(r.value, 6.0, 1e-10);
}

TEST(Quadrature, LogarithmicSingularEndpoint) {
  // int_eps^1 x^-4 dx = (eps^-3 - 1) / 3
  const double eps = 1e-4;
  const auto r = integrate_log([](double x) { return std::pow(x, -4.0); }, eps, 1.0);
  EXPECT_NEAR(r.value / ((std::pow(eps, -3.0) - 1.0) / 3.0), 1.0, 1e-11);
}

TEST(Quadrature, OscillatorySinOverX) {
  OscillatoryOptions opts;
  const auto r = integrate_oscillatory([](double x) { return x == 0.0 ? 1.0 : std::sin(x) / x; }, 0.0, pi, opts);
  EXPECT_NEAR(r.value, pi / 2.0, 1e-9);
}

TEST(Quadrature, BudgetFailureThrows) {
  QuadratureOptions o;
  o.max_cells = 3;
  o.rel_tol = 1e-15;
  o.abs_tol = 0.0;
  EXPECT_THROW(integrate([](double x) { return std::sin(200.0 * x); }, 0.0, 10.0, o), NumericalError);
  o.throw_on_failure = false;
  EXPECT_FALSE(integrate([](double x) { return std::sin(200.0 * x); }, 0.0, 10.0, o).converged);
}

TEST(Quadrature, PairMeasureNormalization) {
  const double v = 4.0 * pi / 3.0;
  const auto r = pair_measure_integral([](double) { return 1.0; }, 1.0, 0.0);
  EXPECT_NEAR(r.value, v * v, 1e-12 * v * v);
}

TEST(Cubature, Box3MatchesProduct) {
  Box<3> box{{0.0, 0.0, 0.0}, {1.0, 2.0, pi}};
  QuadratureOptions o;
  o.rel_tol = 1e-10;
  const auto r = integrate_box([](const std::array<double, 3> &x) { return x[0] * x[1] * x[1] * std::sin(x[2]); }, box, o);
  EXPECT_NEAR(r.value, 0.5 * (8.0 / 3.0) * 2.0, 1e-9);
}

TEST(Cubature, MonteCarloAgreesWithinThreeSigma) {
  Box<2> box{{-1.0, -1.0}, {1.0, 1.0}};
  const auto mc = monte_carlo_mean([](const std::array<double, 2> &x) { return x[0] * x[0] + x[1] * x[1] < 1.0 ? 1.0 : 0.0; },
                                   box, 200000, 7);
  EXPECT_NEAR(4.0 * mc.mean, pi, 3.0 * 4.0 * mc.standard_error);
}

TEST(Richardson, ExactOnModelClass) {
  std::vector<std::pair<double, double>> s;
  for (double h : {0.4, 0.2, 0.1})
    s.emplace_back(h, 1.0 + 2.0 * h + 3.0 * h * h);
  const std::vector<double> p = {1.0, 2.0};
  EXPECT_NEAR(richardson_extrapolate(s, p).limit, 1.0, 1e-12);
}

TEST(Richardson, LinearModel) {
  std::vector<std::pair<double, double>> s = {{0.5, 1.5}, {0.25, 1.25}};
  const std::vector<double> p = {1.0};
  EXPECT_NEAR(richardson_extrapolate(s, p).limit, 1.0, 1e-14);
}

TEST(LinearFit, RecoversCoefficients) {
  const std::vector<BasisFunction> basis = {[](double) { return 1.0; }, [](double x) { return x; },
                                            [](double x) { return x * x * x; }};
  std::vector<std::pair<double, double>> s;
  for (int i = 0; i < 10; ++i) {
    const double x = 0.1 * i;
    s.emplace_back(x, 2.0 - 3.0 * x + 0.5 * x * x * x);
  }
  const auto f = linear_fit(basis, s);
  EXPECT_NEAR(f.coefficients[0], 2.0, 1e-12);
  EXPECT_NEAR(f.coefficients[1], -3.0, 1e-12);
  EXPECT_NEAR(f.coefficients[2], 0.5, 1e-11);
}

TEST(LinearFit, DegenerateSamplesAreIllConditioned) {
  const std::vector<BasisFunction> basis = {[](double) { return 1.0; }, [](double x) { return x; }};
  std::vector<std::pair<double, double>> s(5, {0.3, 1.0});
  try {
    linear_fit(basis, s);
    FAIL() << "expected FitError";
  } catch (const FitError &e) {
    EXPECT_EQ(e.kind(), FitError::Kind::IllConditioned);
  }
}

TEST(PairwiseSum, MatchesLongDouble) {
  std::vector<double> v;
  long double ref = 0.0L;
  for (int i = 1; i <= 100000; ++i) {
    v.push_back(1.0 / i);
    ref += 1.0L / i;
  }
  EXPECT_NEAR(pairwise_sum(v), static_cast<double>(ref), 1e-13);
}
