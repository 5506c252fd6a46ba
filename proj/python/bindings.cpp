#include "casimir/errors.hpp"
#include "casimir/kernels.hpp"
#include "casimir/matsubara.hpp"
#include "casimir/pair_energy.hpp"
#include "casimir/sphere_energy.hpp"

#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <string>
#include <vector>

namespace py = pybind11;
using namespace casimir;

namespace {

py::dict breakdown_dict(const EnergyBreakdown &b) {
  py::dict d;
  d["c_vol"] = b.c_vol;
  d["c_surf"] = b.c_surf;
  d["c_lin"] = b.c_lin;
  d["finite_1_over_a"] = b.finite_1_over_a;
  d["residual"] = b.residual;
  return d;
}

py::dict pair_dict(const PairEnergy &e) {
  py::dict d;
  d["value"] = e.value;
  d["route"] = std::string(to_string(e.route));
  d["error_estimate"] = e.error_estimate;
  d["terms_used"] = e.terms_used;
  return d;
}

} // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Casimir energies of dilute dielectric balls (natural units, hbar = c = 1)";
  py::register_exception<NumericalError>(m, "NumericalError", PyExc_RuntimeError);

  m.def(
      "kernels_r",
      [](double r, double kappa) {
        const auto k = r_space_kernels(r, ImagWavenumber(kappa));
        return py::make_tuple(k.psi_D, k.psi_Delta);
      },
      py::arg("r"), py::arg("kappa"), "(psi_D, psi_Delta) at separation r and imaginary wavenumber kappa.");

  m.def(
      "kernels_k",
      [](double k, double kappa, double theta, double lam) {
        const auto v = k_space_kernels(k, ImagWavenumber(kappa), Theta{theta}, lam);
        return py::make_tuple(v.psi_D, v.psi_Delta);
      },
      py::arg("k"), py::arg("kappa"), py::arg("theta") = -2.0, py::arg("lam") = 0.0);

  m.def("oscillator_sum_closed", &oscillator_sum_closed, py::arg("beta"), py::arg("hbar_omega0"));

  m.def(
      "matsubara_sum",
      [](const std::function<double(double)> &f, double beta, double rel_tol, std::int64_t max_index) {
        ThermalState st;
        st.beta = beta;
        st.rel_tol = rel_tol;
        st.max_index = max_index;
        const auto s = matsubara_sum(f, st);
        py::dict d;
        d["value"] = s.value;
        d["truncation_error_estimate"] = s.truncation_error_estimate;
        d["terms_used"] = s.terms_used;
        d["tail_estimate"] = s.tail_estimate;
        return d;
      },
      py::arg("f"), py::arg("beta"), py::arg("rel_tol") = 1e-10, py::arg("max_index") = 10'000'000,
      "Sum of f(K_n) over n in Z with K_n = 2 pi |n| / beta.");

  m.def(
      "pair_energy",
      [](double r, double alpha, std::optional<double> beta, const std::string &route, double tol) {
        if (route == "closed") {
          if (beta)
            throw std::invalid_argument("the closed route is zero-temperature only");
          return pair_dict(pair_energy_T0(r, alpha));
        }
        if (route != "rspace")
          throw std::invalid_argument("route must be 'closed' or 'rspace'");
        if (!beta)
          return pair_dict(pair_energy_T0_numeric(r, alpha, tol));
        ThermalState st;
        st.beta = *beta;
        st.rel_tol = tol;
        Medium med;
        med.alpha = alpha;
        return pair_dict(pair_free_energy(r, med, st));
      },
      py::arg("r"), py::arg("alpha"), py::arg("beta") = py::none(), py::arg("route") = "closed",
      py::arg("tol") = 1e-10);

  m.def(
      "pair_energy_kspace",
      [](double r, double alpha, std::optional<double> lam) {
        py::dict d;
        if (lam) {
          const auto e = kspace_pair_energy(r, alpha, *lam);
          d["value"] = e.value;
          d["error_estimate"] = e.error_estimate;
        } else {
          const auto e = kspace_pair_energy_extrapolated(r, alpha);
          d["value"] = e.value;
          d["error_estimate"] = e.error_estimate;
          d["samples"] = e.samples;
        }
        return d;
      },
      py::arg("r"), py::arg("alpha"), py::arg("lam") = py::none(),
      "Double wavenumber-integral route; lam=None extrapolates to zero shielding.");

  m.def("finite_part_prediction", &finite_part_prediction, py::arg("a"), py::arg("eps_minus_1"));

  m.def(
      "sphere_energy",
      [](double a, double eps_minus_1, const std::string &cutoff, double value) {
        const Medium med = dilute_medium(eps_minus_1);
        py::dict d;
        if (cutoff == "hardcore") {
          const auto e = sphere_energy_rspace(a, med, value);
          d["total"] = e.total;
          d["error_estimate"] = e.error_estimate;
          d["breakdown"] = breakdown_dict(e.analytic);
        } else if (cutoff == "exp") {
          const auto e = sphere_energy_kspace(a, med, value);
          d["total"] = e.value;
          d["error_estimate"] = e.error_estimate;
        } else {
          throw std::invalid_argument("cutoff must be 'hardcore' or 'exp'");
        }
        return d;
      },
      py::arg("a"), py::arg("eps_minus_1"), py::arg("cutoff"), py::arg("value"));

  m.def(
      "sphere_energy_hardcore_sweep",
      [](double a, double eps_minus_1, const std::vector<double> &r_mins) {
        const auto sw = hardcore_sweep(a, dilute_medium(eps_minus_1), r_mins);
        py::dict d;
        std::vector<std::pair<double, double>> pts;
        for (const auto &p : sw.points)
          pts.emplace_back(p.r_min, p.total);
        d["points"] = pts;
        d["fit"] = breakdown_dict(sw.fit);
        d["finite_analytic"] = sw.finite_analytic;
        return d;
      },
      py::arg("a"), py::arg("eps_minus_1"), py::arg("r_mins"));

  m.def(
      "sphere_energy_exponential_sweep",
      [](double a, double eps_minus_1, const std::vector<double> &lambdas,
         std::optional<std::vector<std::string>> basis) {
        std::vector<ExpBasisTerm> terms;
        if (basis)
          for (const auto &t : *basis)
            terms.push_back(exp_basis_term_from_string(t));
        else
          terms = default_exponential_basis();
        const auto sw = exponential_sweep(a, dilute_medium(eps_minus_1), lambdas, terms);
        py::dict coeffs;
        for (std::size_t i = 0; i < terms.size(); ++i)
          coeffs[py::str(std::string(to_string(terms[i])))] = sw.fit.coefficients[i];
        py::dict d;
        d["points"] = sw.points;
        d["coefficients"] = coeffs;
        d["finite_1_over_a"] = sw.fit.finite_1_over_a;
        d["residual"] = sw.fit.residual;
        return d;
      },
      py::arg("a"), py::arg("eps_minus_1"), py::arg("lambdas"), py::arg("basis") = py::none());

  m.def(
      "self_energy",
      [](double gamma, double volume, double lam) {
        const auto s = self_energy(volume, gamma, lam);
        py::dict d;
        d["value"] = s.closed;
        d["numeric"] = s.numeric;
        d["kernel_sum"] = s.kernel_sum;
        return d;
      },
      py::arg("gamma"), py::arg("volume"), py::arg("lam"));

  m.def(
      "dielectric",
      [](double rho_alpha, double theta) {
        Medium med;
        med.rho = 1.0;
        med.alpha = rho_alpha;
        med.theta = Theta{theta};
        const auto s = epsilon_relation(med);
        py::dict d;
        d["epsilon"] = s.epsilon;
        d["n_refr"] = s.n_refr;
        d["gamma"] = s.gamma;
        return d;
      },
      py::arg("rho_alpha"), py::arg("theta") = -2.0);
}
