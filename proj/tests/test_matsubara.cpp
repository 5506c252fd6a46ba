#include "casimir/errors.hpp"
#include "casimir/matsubara.hpp"

#include "oracles.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

using namespace casimir;
using std::numbers::pi;

TEST(OscillatorSum, ClosedFormAgainstBruteForce) {
  for (double bw : {0.01, 2.0, 100.0})
    EXPECT_NEAR(oscillator_sum_closed(bw, 1.0) / oracle::oscillator_brute_force(bw, 1.0), 1.0, 1e-10) << bw;
}

TEST(OscillatorSum, Limits) {
  EXPECT_NEAR(oscillator_sum_closed(1e-8, 1.0), 1.0, 1e-15);
  EXPECT_NEAR(oscillator_sum_closed(2.0, 1.0), 1.3130353, 1e-7);
  EXPECT_NEAR(oscillator_sum_closed(50.0, 1.0), 25.0, 1e-12);
}

TEST(MatsubaraSum, CothIdentity) {
  ThermalState st;
  st.beta = 2.0 * pi;
  const auto s = matsubara_sum([](double k) { return 1.0 / (1.0 + k * k); }, st);
  EXPECT_NEAR(s.value / (pi / std::tanh(pi)), 1.0, 1e-10);
  EXPECT_GT(s.terms_used, 0);
}

TEST(MatsubaraSum, OnlyZeroTerm) {
  ThermalState st;
  st.beta = 3.0;
  const auto s = matsubara_sum([](double k) { return k == 0.0 ? 1.0 : 0.0; }, st);
  EXPECT_DOUBLE_EQ(s.value, 1.0);
}

TEST(MatsubaraSum, MatchesOscillatorClosedForm) {
  for (double bw : {0.01, 0.1, 1.0, 10.0, 100.0}) {
    ThermalState st;
    st.beta = bw;
    st.rel_tol = 1e-12;
    const auto s = matsubara_sum([](double k) { return 1.0 / (1.0 + k * k); }, st);
    EXPECT_NEAR(s.value / oscillator_sum_closed(bw, 1.0), 1.0, 1e-10) << bw;
  }
}

TEST(MatsubaraSum, WorkersDoNotChangeResult) {
  ThermalState a, b;
  a.beta = b.beta = 40.0;
  b.workers = 4;
  auto f = [](double k) { return 1.0 / (1.0 + k * k * k); };
  EXPECT_EQ(matsubara_sum(f, a).value, matsubara_sum(f, b).value);
}

TEST(MatsubaraSum, ThrowsPastIndexCap) {
  ThermalState st;
  st.beta = 1e9;
  st.max_index = 1000;
  EXPECT_THROW(matsubara_sum([](double k) { return 1.0 / (1.0 + k * k); }, st), NumericalError);
}

TEST(ZeroTemperature, AnalyticIntegrals) {
  EXPECT_NEAR(zero_T_integral([](double k) { return std::exp(-2.0 * k); }).value, 0.5 / pi, 1e-12);
  EXPECT_NEAR(zero_T_integral([](double k) { return k * k * std::exp(-k); }).value, 2.0 / pi, 1e-11);
}

TEST(ZeroTemperature, LimitOfMatsubaraSum) {
  // (1/beta) sum f(K_n) -> (1/pi) int_0^inf f for large beta.
  auto f = [](double k) { return 1.0 / (1.0 + k * k); };
  ThermalState st;
  st.beta = 1e3;
  const double sum = matsubara_sum(f, st).value / st.beta;
  EXPECT_NEAR(sum, zero_T_integral(f).value, 1e-4);
}
