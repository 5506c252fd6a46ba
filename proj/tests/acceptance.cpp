// Exit gate: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include "casimir/cli.hpp"
#include "casimir/kernels.hpp"
#include "casimir/matsubara.hpp"
#include "casimir/pair_energy.hpp"
#include "casimir/sphere_energy.hpp"

#include "json.hpp"
#include "oracles.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>

using namespace casimir;
using std::numbers::pi;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

double rel(double v, double ref) { return std::abs(v - ref) / std::abs(ref); }

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(const char *f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

std::vector<double> log_grid(double lo, double hi, int n) {
  std::vector<double> v;
  for (int i = 0; i < n; ++i)
    v.push_back(lo * std::pow(hi / lo, static_cast<double>(i) / (n - 1)));
  return v;
}

Outcome pair_law() {
  double worst_sum = 0.0, worst_num = 0.0, slowest = 0.0;
  Medium m;
  m.alpha = 1.0;
  for (double r : {0.5, 1.0, 2.0, 5.0}) {
    const double ref = oracle::pair_T0(r, 1.0);
    ThermalState st;
    st.beta = 1e6 * r;
    const auto t0 = std::chrono::steady_clock::now();
    worst_sum = std::max(worst_sum, rel(pair_free_energy(r, m, st).value, ref));
    slowest = std::max(slowest, seconds_since(t0));
    worst_num = std::max(worst_num, rel(pair_energy_T0_numeric(r, 1.0, 1e-10).value, ref));
  }
  return {worst_sum <= 1e-4 && worst_num <= 1e-8 && slowest < 1.0,
          fmt("sum rel %.2e (tol 1e-4), T=0 numeric rel %.2e (tol 1e-8), slowest point %.2f s (limit 1 s)",
              worst_sum, worst_num, slowest)};
}

Outcome matsubara_identity() {
  double worst = 0.0;
  for (double bw : {0.01, 0.1, 1.0, 10.0, 100.0})
    worst = std::max(worst, rel(oscillator_sum_closed(bw, 1.0), oracle::oscillator_brute_force(bw, 1.0)));
  return {worst <= 1e-10, fmt("closed vs brute-force symmetric sum rel %.2e (tol 1e-10)", worst)};
}

Outcome classical_limit() {
  Medium m;
  m.alpha = 1.0;
  double worst = 0.0;
  for (double r : {0.5, 1.0, 2.0}) {
    ThermalState st;
    st.beta = 1e-3 * r;
    worst = std::max(worst, rel(pair_free_energy(r, m, st).value, -3.0 / (st.beta * std::pow(r, 6))));
  }
  return {worst <= 1e-4, fmt("rel %.2e vs -3 alpha^2/(beta r^6) (tol 1e-4)", worst)};
}

Outcome kernel_oracle() {
  const auto t0 = std::chrono::steady_clock::now();
  double worst = 0.0;
  for (double kappa : log_grid(0.05, 3.0, 10)) {
    for (double r : log_grid(0.25, 4.0, 10)) {
      const ImagWavenumber k(kappa);
      const auto c = r_space_kernels(r, k);
      // The oracle's tolerance is absolute; ask for 1e-7 of each magnitude.
      TransformOptions od, odl;
      od.abs_tol = 1e-7 * std::abs(c.psi_D);
      odl.abs_tol = 1e-7 * std::abs(c.psi_Delta);
      worst = std::max(worst, rel(oracle_inverse_transform(k, r, KernelComponent::D, od).value, c.psi_D));
      worst = std::max(worst, rel(oracle_inverse_transform(k, r, KernelComponent::Delta, odl).value, c.psi_Delta));
    }
  }
  const double t = seconds_since(t0);
  return {worst <= 1e-4 && t < 60.0,
          fmt("10x10 (kappa, r) grid, max rel %.2e (tol 1e-4), %.1f s (limit 60 s)", worst, t)};
}

Outcome sphere_finite_part() {
  const auto t0 = std::chrono::steady_clock::now();
  const double eps_minus_1 = 0.1;
  const Medium m = dilute_medium(eps_minus_1);
  const double theory = oracle::sphere_finite(1.0, eps_minus_1);
  const auto sw = hardcore_sweep(1.0, m, log_grid(1e-4, 1e-2, 9));
  const double fit_err = rel(sw.fit.finite_1_over_a, theory);
  const auto exact = hardcore_breakdown_analytic(1.0, m, 1e-3);
  const double analytic_err = rel(exact.finite_1_over_a, theory);
  const double C = 23.0 * m.alpha * m.alpha / (4.0 * pi);
  const double cvol_err = rel(exact.c_vol, -(pi / 2.0) * m.rho * m.rho * C * (4.0 * pi / 3.0));
  const double t = seconds_since(t0);
  return {fit_err <= 1e-2 && analytic_err <= 1e-6 && cvol_err <= 1e-6 && t < 60.0,
          fmt("fit rel %.2e (tol 1e-2), analytic rel %.2e (tol 1e-6), c_vol rel %.2e (tol 1e-6)",
              fit_err, analytic_err, cvol_err)};
}

Outcome scheme_independence() {
  const auto t0 = std::chrono::steady_clock::now();
  std::vector<double> lambdas;
  for (int i = 0; i < 8; ++i)
    lambdas.push_back(0.05 + 0.05 * i);
  const auto sw = exponential_sweep(1.0, dilute_medium(0.1), lambdas, default_exponential_basis());
  const double err = rel(sw.fit.finite_1_over_a, oracle::sphere_finite(1.0, 0.1));
  const double t = seconds_since(t0);
  return {err <= 5e-2 && t < 600.0,
          fmt("lambda in [0.05, 0.4] fit finite part rel %.2e (tol 5e-2), %.1f s", err, t)};
}

Outcome self_energy_check() {
  const auto s = self_energy(1.0, 0.1, 1.0);
  const double route_err = rel(s.numeric, s.closed);
  std::ostringstream out, err;
  const int code = cli::run_subcommand({"self-energy", "--gamma", "0.1", "--volume", "1", "--lambda", "1"}, out, err);
  double cli_value = NAN;
  if (code == 0)
    cli_value = nlohmann::json::parse(out.str())["results"]["value"].get<double>();
  const double ref = -0.1 * 3.0 / (2.0 * pi * pi);
  const double cli_err = rel(cli_value, ref);
  return {route_err <= 1e-8 && cli_err <= 1e-12 && rel(cli_value, -1.51982e-2) <= 1e-5,
          fmt("closed vs numeric rel %.2e (tol 1e-8), CLI value %.6e", route_err, cli_value)};
}

Outcome dielectric_relations() {
  std::mt19937_64 gen(2024);
  double worst_t = 0.0, worst_cm = 0.0;
  for (int i = 0; i < 1000; ++i) {
    Medium m;
    m.rho = std::uniform_real_distribution<double>(0.1, 10.0)(gen);
    m.alpha = std::uniform_real_distribution<double>(0.0, 0.999)(gen) / (4.0 * pi * m.rho);
    const auto d = epsilon_relation(m);
    worst_t = std::max(worst_t, std::abs((d.epsilon - 1.0) / d.epsilon - 4.0 * pi * m.rho * m.alpha));
    m.theta.value = 0.0;
    m.alpha = std::uniform_real_distribution<double>(0.0, 0.999)(gen) / ((4.0 * pi / 3.0) * m.rho);
    const double eps = epsilon_relation(m).epsilon;
    worst_cm = std::max(worst_cm, std::abs((eps - 1.0) / (eps + 2.0) - (4.0 * pi / 3.0) * m.rho * m.alpha));
  }
  Medium vac;
  vac.rho = 1.0;
  vac.alpha = 1e-12;
  const double vac_err = std::abs(epsilon_relation(vac).epsilon - 1.0);
  return {worst_t <= 1e-12 && worst_cm <= 1e-12 && vac_err <= 1e-10,
          fmt("1000 random media: Theta=-2 err %.1e, Theta=0 err %.1e (tol 1e-12), rho alpha->0 err %.1e",
              worst_t, worst_cm, vac_err)};
}

Outcome route_equivalence() {
  const auto ex = kspace_pair_energy_extrapolated(1.0, 1.0);
  const double pair_err = rel(ex.value, oracle::pair_T0(1.0, 1.0));
  const Medium m = dilute_medium(0.1);
  const auto k = sphere_energy_kspace(1.0, m, 0.3);
  const auto r = sphere_energy_rspace_shielded(1.0, m, 0.3, ShieldedKernelRoute::Transform, 1e-7);
  const double sphere_err = rel(k.value, r.value);
  return {pair_err <= 1e-3 && sphere_err <= 1e-2,
          fmt("pair lambda->0 rel %.2e (tol 1e-3), sphere k-space vs r-space at lambda=0.3 rel %.2e (tol 1e-2)",
              pair_err, sphere_err)};
}

Outcome scaling() {
  double worst_r = 0.0;
  const double f1 = pair_energy_T0_numeric(1.0, 1.0, 1e-12).value;
  for (double s : {0.5, 2.0, 3.0, 5.0})
    worst_r = std::max(worst_r, rel(pair_energy_T0_numeric(s, 1.0, 1e-12).value, f1 / std::pow(s, 7)));

  const auto decades = log_grid(1e-4, 1e-2, 9);
  auto fitted = [&](double a, double eps_minus_1) {
    std::vector<double> r_mins;
    for (double x : decades)
      r_mins.push_back(x * a);
    return hardcore_sweep(a, dilute_medium(eps_minus_1), r_mins).fit.finite_1_over_a;
  };
  // One-parameter least squares through the origin, then worst relative deviation.
  auto spread = [](const std::vector<double> &x, const std::vector<double> &y) {
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      num += x[i] * y[i];
      den += x[i] * x[i];
    }
    double worst = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i)
      worst = std::max(worst, rel(num / den * x[i], y[i]));
    return worst;
  };
  std::vector<double> xa, ya, xe, ye;
  for (double a : {0.5, 1.0, 2.0, 4.0}) {
    xa.push_back(1.0 / a);
    ya.push_back(fitted(a, 0.1));
  }
  for (double e : {0.025, 0.05, 0.1, 0.2}) {
    xe.push_back(e * e);
    ye.push_back(fitted(1.0, e));
  }
  const double worst_a = spread(xa, ya), worst_e = spread(xe, ye);
  return {worst_r <= 1e-8 && worst_a <= 1e-3 && worst_e <= 1e-3,
          fmt("r^-7 rel %.2e (tol 1e-8), finite vs c/a %.2e (tol 1e-3), vs c (eps-1)^2 %.2e (tol 1e-3)",
              worst_r, worst_a, worst_e)};
}

} // namespace

int main() {
  std::setvbuf(stdout, nullptr, _IONBF, 0);
  const std::vector<std::pair<const char *, std::function<Outcome()>>> criteria = {
      {"pair law at low temperature", pair_law},
      {"Matsubara oscillator identity", matsubara_identity},
      {"classical limit", classical_limit},
      {"kernel inverse-transform oracle", kernel_oracle},
      {"sphere finite part (hard core)", sphere_finite_part},
      {"scheme independence (exponential cutoff)", scheme_independence},
      {"self-energy", self_energy_check},
      {"dielectric relations", dielectric_relations},
      {"route equivalence", route_equivalence},
      {"scaling properties", scaling},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception &e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failed += o.pass ? 0 : 1;
    std::printf("%s %2zu %s: %s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first, o.detail.c_str());
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
