#include "command.hpp"

#include "casimir/cli.hpp"
#include "casimir/geometry.hpp"
#include "casimir/kernels.hpp"
#include "casimir/matsubara.hpp"
#include "casimir/pair_energy.hpp"
#include "casimir/sphere_energy.hpp"

#include <cmath>
#include <numbers>
#include <ostream>
#include <sstream>

namespace casimir::cli {

namespace {

using std::numbers::pi;

struct Check {
  std::string name;
  double value = 0.0;
  double reference = 0.0;
  double tolerance = 0.0;
  bool relative = true;

  bool passed() const {
    if (!std::isfinite(value))
      return false;
    const double d = std::abs(value - reference);
    return relative ? d <= tolerance * std::abs(reference) : d <= tolerance;
  }
};

using Checks = std::vector<Check>;

struct KernelRow {
  double kappa, r;
  double d_closed, d_oracle, delta_closed, delta_oracle;
};

std::vector<KernelRow> kernel_table() {
  std::vector<KernelRow> rows;
  for (double kappa : {0.0, 0.5, 1.0, 2.0}) {
    for (double r : {0.5, 1.0, 2.0, 4.0}) {
      const ImagWavenumber k(kappa);
      const auto c = r_space_kernels(r, k);
      const double d = oracle_inverse_transform(k, r, KernelComponent::D).value;
      const double dl = oracle_inverse_transform(k, r, KernelComponent::Delta).value;
      rows.push_back({kappa, r, c.psi_D, d, c.psi_Delta, dl});
    }
  }
  return rows;
}

Checks kernel_checks() {
  Checks out;
  double worst_d = 0.0, worst_delta = 0.0;
  for (const auto &row : kernel_table()) {
    worst_d = std::max(worst_d, std::abs(row.d_oracle - row.d_closed));
    worst_delta = std::max(worst_delta, std::abs(row.delta_oracle - row.delta_closed));
  }
  out.push_back({"kernels: max |oracle - closed| psi_D", worst_d, 0.0, 1e-6, false});
  out.push_back({"kernels: max |oracle - closed| psi_Delta", worst_delta, 0.0, 1e-6, false});
  const auto k1 = r_space_kernels(1.0, ImagWavenumber(1.0));
  out.push_back({"kernels: psi_D(r=1, kappa=1)", k1.psi_D, 7.0 / 3.0 * std::exp(-1.0), 1e-12});
  out.push_back({"kernels: psi_Delta(r=1, kappa=1)", k1.psi_Delta, -2.0 / 3.0 * std::exp(-1.0), 1e-12});
  const auto kk = k_space_kernels(1.0, ImagWavenumber(0.0), Theta{}, 1.0);
  out.push_back({"kernels: damped static psi_D(k=1, lambda=1)", kk.psi_D,
                 -(4.0 * pi / 3.0) * std::exp(-1.0), 1e-12});
  return out;
}

Checks matsubara_checks() {
  Checks out;
  for (double bw : {0.01, 2.0, 100.0}) {
    ThermalState st;
    st.beta = bw;
    const auto s = matsubara_sum([](double k) { return 1.0 / (1.0 + k * k); }, st);
    const double x = bw / 2.0;
    std::ostringstream name;
    name << "matsubara: oscillator sum at beta*hbar*omega0=" << bw;
    out.push_back({name.str(), s.value, x / std::tanh(x), 1e-8});
  }
  ThermalState st;
  st.beta = 2.0 * pi;
  const auto s = matsubara_sum([](double k) { return 1.0 / (1.0 + k * k); }, st);
  out.push_back({"matsubara: sum 1/(1+n^2) = pi coth pi", s.value, pi / std::tanh(pi), 1e-8});
  const auto z = zero_T_integral([](double k) { return std::exp(-2.0 * k); });
  out.push_back({"matsubara: zero-T limit of exp(-2 kappa)", z.value, 0.5 / pi, 1e-10});
  return out;
}

Checks pair_checks() {
  Checks out;
  const double closed = -23.0 / (4.0 * pi);
  out.push_back({"pair: closed T=0 at r=1", pair_energy_T0(1.0, 1.0).value, -1.8302822, 1e-6});
  out.push_back({"pair: numeric T=0 vs closed", pair_energy_T0_numeric(1.0, 1.0).value, closed, 1e-8});
  out.push_back({"pair: r^-7 scaling at r=10", pair_energy_T0(10.0, 1.0).value, closed * 1e-7, 1e-12});
  Medium m;
  m.alpha = 1.0;
  ThermalState cold;
  cold.beta = 1e6;
  out.push_back({"pair: Matsubara sum at beta=1e6 approaches T=0", pair_free_energy(1.0, m, cold).value,
                 closed, 1e-4});
  ThermalState hot;
  hot.beta = 1e-3;
  out.push_back({"pair: classical limit -3 alpha^2/(beta r^6)", pair_free_energy(1.0, m, hot).value,
                 -3.0 / 1e-3, 1e-4});
  out.push_back({"pair: k-space extrapolation lambda->0",
                 kspace_pair_energy_extrapolated(1.0, 1.0).value, closed, 1e-3});
  return out;
}

Checks geometry_checks() {
  Checks out;
  const double v = 4.0 * pi / 3.0;
  out.push_back({"geometry: overlap at r=0", overlap_volume(0.0, 1.0), v, 1e-14});
  out.push_back({"geometry: overlap at r=2a", overlap_volume(2.0, 1.0), 0.0, 1e-14, false});
  out.push_back({"geometry: overlap at r=a", overlap_volume(1.0, 1.0), 5.0 * pi / 12.0, 1e-14});
  out.push_back({"geometry: pair measure normalization V^2",
                 pair_measure_integral([](double) { return 1.0; }, 1.0, 0.0).value, v * v, 1e-12});
  out.push_back({"geometry: form factor at q=0", sphere_form_factor(0.0, 1.0), v, 1e-14});
  out.push_back({"geometry: form factor at qa=pi", sphere_form_factor(pi, 1.0), v * 3.0 / (pi * pi),
                 1e-12});
  return out;
}

Checks sphere_checks() {
  Checks out;
  const double eps_minus_1 = 0.1;
  const Medium m = dilute_medium(eps_minus_1);
  const double theory = finite_part_prediction(1.0, eps_minus_1);
  out.push_back({"sphere: finite part prediction", theory, 4.7664e-5, 1e-4});

  const auto single = sphere_energy_rspace(1.0, m, 1e-3);
  out.push_back({"sphere: hard-core quadrature vs analytic", single.total, single.analytic.total, 1e-10});
  out.push_back({"sphere: analytic finite part", single.analytic.finite_1_over_a, theory, 1e-6});
  const double c_big = 23.0 * m.alpha * m.alpha / (4.0 * pi);
  out.push_back({"sphere: analytic c_vol", single.analytic.c_vol,
                 -(pi / 2.0) * m.rho * m.rho * c_big * (4.0 * pi / 3.0), 1e-6});

  std::vector<double> r_mins;
  for (int i = 0; i <= 8; ++i)
    r_mins.push_back(std::pow(10.0, -4.0 + 0.25 * i));
  const auto sw = hardcore_sweep(1.0, m, r_mins);
  out.push_back({"sphere: hard-core sweep fit finite part", sw.fit.finite_1_over_a, theory, 1e-2});

  std::vector<double> lambdas;
  for (int i = 0; i < 8; ++i)
    lambdas.push_back(0.05 + 0.05 * i);
  const auto ex = exponential_sweep(1.0, m, lambdas, default_exponential_basis());
  out.push_back({"sphere: exponential sweep fit finite part", ex.fit.finite_1_over_a, theory, 5e-2});

  const auto ks = sphere_energy_kspace(1.0, m, 0.3);
  const auto rs = sphere_energy_rspace_shielded(1.0, m, 0.3, ShieldedKernelRoute::Closed);
  out.push_back({"sphere: k-space vs shielded r-space at lambda=0.3", ks.value, rs.value, 1e-8});
  return out;
}

Checks self_energy_checks() {
  Checks out;
  const auto s = self_energy(1.0, 0.1, 1.0);
  out.push_back({"self-energy: closed form", s.closed, -1.51982e-2, 1e-5});
  out.push_back({"self-energy: numeric kernel sum", s.numeric, s.closed, 1e-9});
  out.push_back({"self-energy: kernel sum 4/(pi lambda^4)", s.kernel_sum, 4.0 / pi, 1e-9});
  return out;
}

Checks dielectric_checks() {
  Checks out;
  Medium m;
  m.rho = 1.0;
  m.alpha = 0.1 / (4.0 * pi);
  out.push_back({"dielectric: transverse contact term", epsilon_relation(m).epsilon, 1.0 / 0.9, 1e-12});
  m.theta.value = 0.0;
  m.alpha = 0.1 / (4.0 * pi / 3.0);
  out.push_back({"dielectric: Clausius-Mossotti form", epsilon_relation(m).epsilon, 1.2 / 0.9, 1e-12});
  m.alpha = 0.0;
  out.push_back({"dielectric: vacuum", epsilon_relation(m).epsilon, 1.0, 1e-15});
  return out;
}

} // namespace

int run_verify(const std::vector<std::string> &args, std::ostream &out) {
  Command cmd("verify", "Oracle and invariant checks");
  std::string target, output;
  cmd.positional("target", target, "kernels | matsubara | pair | geometry | sphere | self-energy | dielectric | all");
  cmd.flag("diagnostics", cmd.diagnostics, "Include timing-free diagnostics in the record");
  cmd.output_path("output", output, "Write the record here instead of stdout");
  if (!cmd.parse(args, out))
    return kExitOk;

  if (target == "kernels") {
    std::ostringstream csv;
    csv << "# schema_version=" << kSchemaVersion << "\n";
    csv << "# inputs=" << cmd.inputs().dump() << "\n";
    csv << "kappa,r,psi_D_closed,psi_D_oracle,abs_err,rel_err,psi_Delta_closed,psi_Delta_oracle,"
           "abs_err_Delta,rel_err_Delta\n";
    bool ok = true;
    for (const auto &row : kernel_table()) {
      const double e_d = std::abs(row.d_oracle - row.d_closed);
      const double e_dl = std::abs(row.delta_oracle - row.delta_closed);
      ok = ok && e_d <= 1e-6 && e_dl <= 1e-6;
      csv << csv_number(row.kappa) << "," << csv_number(row.r) << "," << csv_number(row.d_closed)
          << "," << csv_number(row.d_oracle) << "," << csv_number(e_d) << ","
          << csv_number(row.d_closed != 0.0 ? e_d / std::abs(row.d_closed) : NAN) << ","
          << csv_number(row.delta_closed) << "," << csv_number(row.delta_oracle) << ","
          << csv_number(e_dl) << ","
          << csv_number(row.delta_closed != 0.0 ? e_dl / std::abs(row.delta_closed) : NAN) << "\n";
    }
    emit(output, csv.str(), out);
    return ok ? kExitOk : kExitNumerical;
  }

  Checks checks;
  auto add = [&](Checks c) { checks.insert(checks.end(), c.begin(), c.end()); };
  const bool all = target == "all";
  bool known = all;
  auto want = [&](const char *name) {
    if (all || target == name) {
      known = true;
      return true;
    }
    return false;
  };
  if (all)
    add(kernel_checks());
  if (want("matsubara"))
    add(matsubara_checks());
  if (want("pair"))
    add(pair_checks());
  if (want("geometry"))
    add(geometry_checks());
  if (want("sphere"))
    add(sphere_checks());
  if (want("self-energy"))
    add(self_energy_checks());
  if (want("dielectric"))
    add(dielectric_checks());
  if (!known)
    throw UsageError("unknown verify target '" + target + "'");

  json list = json::array();
  bool all_passed = true;
  for (const auto &c : checks) {
    all_passed = all_passed && c.passed();
    list.push_back({{"name", c.name},
                    {"passed", c.passed()},
                    {"value", json_number(c.value)},
                    {"reference", c.reference},
                    {"tolerance", c.tolerance},
                    {"tolerance_kind", c.relative ? "relative" : "absolute"}});
  }
  json results = {{"checks", list}, {"all_passed", all_passed}};
  emit(output, make_record("verify", cmd, results, json::object()).dump(2) + "\n", out);
  return all_passed ? kExitOk : kExitNumerical;
}

} // namespace casimir::cli
