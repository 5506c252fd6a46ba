#include "command.hpp"

#include "casimir/cli.hpp"
#include "casimir/errors.hpp"
#include "casimir/pair_energy.hpp"
#include "casimir/sphere_energy.hpp"

#include <cmath>
#include <numbers>
#include <ostream>
#include <sstream>

namespace casimir::cli {

namespace {

struct CutoffChoice {
  bool hardcore = true;
  std::optional<double> value;
};

CutoffChoice parse_cutoff(const std::string &spec) {
  CutoffChoice c;
  const auto colon = spec.find(':');
  const std::string scheme = spec.substr(0, colon);
  if (scheme == "hardcore")
    c.hardcore = true;
  else if (scheme == "exp")
    c.hardcore = false;
  else
    throw UsageError("--cutoff must be hardcore:<r_min> or exp:<lambda>");
  if (colon != std::string::npos) {
    const auto grid = parse_grid(spec.substr(colon + 1));
    if (grid.size() != 1)
      throw UsageError("--cutoff takes a single value");
    if (!(grid[0] > 0.0))
      throw UsageError("cutoff length must be positive");
    c.value = grid[0];
  }
  return c;
}

std::vector<ExpBasisTerm> parse_basis(const std::string &spec) {
  std::vector<ExpBasisTerm> out;
  std::stringstream ss(spec);
  for (std::string t; std::getline(ss, t, ',');) {
    try {
      out.push_back(exp_basis_term_from_string(t));
    } catch (const std::invalid_argument &e) {
      throw UsageError(e.what());
    }
  }
  if (out.empty())
    throw UsageError("--basis is empty");
  return out;
}

std::string basis_string(const std::vector<ExpBasisTerm> &basis) {
  std::string s;
  for (auto t : basis) {
    if (!s.empty())
      s += ",";
    s += to_string(t);
  }
  return s;
}

json breakdown_json(const EnergyBreakdown &b, double scale) {
  return {{"c_vol", json_number(b.c_vol * scale)},
          {"c_surf", json_number(b.c_surf * scale)},
          {"c_lin", json_number(b.c_lin * scale)},
          {"finite_1_over_a", json_number(b.finite_1_over_a * scale)},
          {"residual", json_number(b.residual)}};
}

json exponential_json(const ExponentialBreakdown &f, double a, double scale) {
  const SphereSpec s(a);
  auto coeff = [&](ExpBasisTerm t) {
    for (std::size_t i = 0; i < f.basis.size(); ++i)
      if (f.basis[i] == t)
        return f.coefficients[i];
    return 0.0;
  };
  json terms = json::object();
  for (std::size_t i = 0; i < f.basis.size(); ++i)
    terms[std::string(to_string(f.basis[i]))] = f.coefficients[i] * scale;
  return {{"c_vol", coeff(ExpBasisTerm::VolumeQuartic) * s.volume() * scale},
          {"c_surf", coeff(ExpBasisTerm::SurfaceCubic) * s.surface() * scale},
          {"c_lin", coeff(ExpBasisTerm::InverseLinear) * scale},
          {"finite_1_over_a", f.finite_1_over_a * scale},
          {"residual", f.residual},
          {"condition_number", f.condition_number},
          {"terms", terms}};
}

void print_record(const json &record, const std::string &path, std::ostream &out) {
  emit(path, record.dump(2) + "\n", out);
}

} // namespace

int run_pair(const std::vector<std::string> &args, std::ostream &out) {
  Command cmd("pair", "Mutual free energy of two polarizable particles");
  double r = 0.0, alpha = 0.0;
  std::optional<double> beta, lambda;
  std::string route, lambdas = "0.1,0.05,0.025", output;
  std::int64_t max_index = 10'000'000;
  cmd.number("r", r, "Separation", true);
  cmd.number("alpha", alpha, "Polarizability (volume)", true);
  cmd.optional_number("beta", beta, "Inverse temperature as a length, 1/(k_B T) in units of hbar*c; omit for T = 0");
  cmd.text("route", route, "rspace | kspace | closed (default: rspace with --beta, closed without)");
  cmd.optional_number("lambda", lambda, "Shielding length for the kspace route; omit to extrapolate to 0");
  cmd.text("lambdas", lambdas, "Shielding lengths used for the lambda -> 0 extrapolation");
  cmd.integer("max-index", max_index, "Largest Matsubara index before giving up");
  cmd.common(1e-10);
  cmd.output_path("output", output, "Write the JSON record here instead of stdout");
  if (!cmd.parse(args, out))
    return kExitOk;

  if (route.empty())
    route = beta ? "rspace" : "closed";
  if (!(r > 0.0))
    throw UsageError("--r must be positive");
  if (!(alpha >= 0.0))
    throw UsageError("--alpha must be >= 0");
  if (beta && !(*beta > 0.0))
    throw UsageError("--beta must be positive");
  if (lambda && !(*lambda > 0.0))
    throw UsageError("--lambda must be positive");

  const double scale = cmd.energy_scale();
  json results, diag = json::object();
  if (route == "closed") {
    if (beta)
      throw UsageError("the closed route is zero-temperature only; drop --beta or use --route rspace");
    const PairEnergy e = pair_energy_T0(r, alpha);
    results = {{"value", e.value * scale}, {"route", to_string(e.route)}, {"error_estimate", 0.0}};
  } else if (route == "rspace") {
    PairEnergy e;
    if (beta) {
      ThermalState st;
      st.beta = *beta;
      st.max_index = max_index;
      st.rel_tol = cmd.tol;
      st.workers = cmd.worker_count();
      Medium m;
      m.alpha = alpha;
      e = pair_free_energy(r, m, st);
      diag["terms_used"] = e.terms_used;
    } else {
      e = pair_energy_T0_numeric(r, alpha, cmd.tol);
      diag["evaluations"] = e.evaluations;
    }
    results = {{"value", e.value * scale},
               {"route", to_string(e.route)},
               {"error_estimate", e.error_estimate * scale}};
  } else if (route == "kspace") {
    if (beta)
      throw UsageError("the kspace route is zero-temperature only");
    if (lambda) {
      const PairEnergy e = kspace_pair_energy(r, alpha, *lambda, cmd.tol);
      results = {{"value", e.value * scale},
                 {"route", to_string(e.route)},
                 {"error_estimate", e.error_estimate * scale},
                 {"lambda", *lambda}};
      diag["nodes_per_axis"] = e.evaluations;
    } else {
      const auto grid = parse_grid(lambdas);
      const auto ex = kspace_pair_energy_extrapolated(r, alpha, grid, {1.0, 3.0}, cmd.tol);
      json samples = json::array();
      for (const auto &[l, v] : ex.samples)
        samples.push_back({{"lambda", l}, {"value", v * scale}});
      results = {{"value", ex.value * scale},
                 {"route", "kspace-extrapolated"},
                 {"error_estimate", ex.error_estimate * scale},
                 {"samples", samples}};
      diag["monotone"] = ex.monotone;
    }
  } else {
    throw UsageError("--route must be rspace, kspace or closed");
  }
  print_record(make_record("pair", cmd, results, diag), output, out);
  return kExitOk;
}

int run_sphere(const std::vector<std::string> &args, std::ostream &out) {
  Command cmd("sphere", "Interaction energy of a dilute dielectric ball");
  double a = 0.0, eps_minus_1 = 0.0;
  std::string cutoff, basis = basis_string(default_exponential_basis()), method = "reduced", output;
  std::optional<std::string> sweep;
  std::optional<double> beta;
  bool fit = false;
  cmd.number("a", a, "Ball radius", true);
  cmd.number("eps-minus-1", eps_minus_1, "Dielectric constant minus one (dilute)", true);
  cmd.text("cutoff", cutoff, "hardcore:<r_min> or exp:<lambda>", true);
  cmd.optional_text("sweep", sweep, "Grid of cutoff values replacing the one in --cutoff");
  cmd.flag("fit", fit, "Fit the swept totals to the divergence model");
  cmd.text("basis", basis, "Exponential-cutoff fit basis (comma separated)");
  cmd.text("kspace-method", method, "reduced | cubature");
  cmd.optional_number("beta", beta, "Finite temperature (hard core only, unvalidated)");
  cmd.common(1e-13);
  cmd.output_path("output", output, "Write the JSON record here instead of stdout");
  if (!cmd.parse(args, out))
    return kExitOk;

  if (!(a > 0.0))
    throw UsageError("--a must be positive");
  if (!(eps_minus_1 >= 0.0))
    throw UsageError("--eps-minus-1 must be >= 0");
  const CutoffChoice cut = parse_cutoff(cutoff);
  if (!sweep && !cut.value)
    throw UsageError("--cutoff needs a value unless --sweep is given");
  if (fit && !sweep)
    throw UsageError("--fit needs --sweep");
  if (beta && (!cut.hardcore || fit))
    throw UsageError("--beta is only available for a single hard-core evaluation");
  if (method != "reduced" && method != "cubature")
    throw UsageError("--kspace-method must be reduced or cubature");
  const auto fit_basis = parse_basis(basis);

  const Medium medium = dilute_medium(eps_minus_1);
  const double scale = cmd.energy_scale();
  KSpaceSphereOptions kopts;
  kopts.method = method == "reduced" ? KSpaceSphereMethod::Reduced : KSpaceSphereMethod::Cubature;
  kopts.tol = cmd.tol;
  const unsigned workers = cmd.worker_count();

  json results;
  json diag = json::object();
  results["scheme"] = cut.hardcore ? "hardcore" : "exp";
  results["prediction"] = {{"finite_theory", finite_part_prediction(a, eps_minus_1) * scale}};

  if (!sweep) {
    const double c = *cut.value;
    results["cutoff"] = c;
    if (cut.hardcore) {
      if (!(c < 2.0 * a))
        throw UsageError("r_min must be below 2a");
      if (beta) {
        ThermalState st;
        st.beta = *beta;
        st.rel_tol = std::max(cmd.tol, 1e-10);
        const auto e = sphere_energy_rspace_thermal(a, medium, c, st, std::max(cmd.tol, 1e-8));
        results["total"] = e.total * scale;
        results["error_estimate"] = e.error_estimate * scale;
        results["breakdown"] = nullptr;
        results["validated"] = false;
      } else {
        const auto e = sphere_energy_rspace(a, medium, c, cmd.tol);
        results["total"] = e.total * scale;
        results["error_estimate"] = e.error_estimate * scale;
        results["breakdown"] = breakdown_json(e.analytic, scale);
      }
    } else {
      const auto e = sphere_energy_kspace(a, medium, c, kopts);
      results["total"] = e.value * scale;
      results["error_estimate"] = e.error_estimate * scale;
      results["breakdown"] = nullptr;
      diag["evaluations"] = e.evaluations;
    }
  } else {
    const auto grid = parse_grid(*sweep);
    for (double g : grid)
      if (!(g > 0.0) || (cut.hardcore && !(g < 2.0 * a)))
        throw UsageError("sweep values must be positive (and below 2a for the hard core)");
    json points = json::array();
    if (cut.hardcore) {
      HardCoreSweep sw;
      if (fit) {
        sw = hardcore_sweep(a, medium, grid, 1e-2, {}, workers);
      } else {
        sw.points.resize(grid.size());
        parallel_for(grid.size(), workers, [&](std::size_t i) {
          sw.points[i] = sphere_energy_rspace(a, medium, grid[i], cmd.tol);
        });
      }
      for (const auto &p : sw.points)
        points.push_back({{"cutoff", p.r_min},
                          {"total", p.total * scale},
                          {"error_estimate", p.error_estimate * scale}});
      results["total"] = sw.points.front().total * scale;
      results["error_estimate"] = sw.points.front().error_estimate * scale;
      results["breakdown_analytic"] = breakdown_json(sw.points.front().analytic, scale);
      if (fit) {
        results["breakdown"] = breakdown_json(sw.fit, scale);
        results["finite_disagreement"] = sw.finite_disagreement;
        diag["condition_number"] = sw.fit.condition_number;
      } else {
        results["breakdown"] = nullptr;
      }
    } else {
      const auto sw = [&] {
        if (fit)
          return exponential_sweep(a, medium, grid, fit_basis, kopts, workers);
        ExponentialSweep s;
        s.points.resize(grid.size());
        s.errors.resize(grid.size());
        parallel_for(grid.size(), workers, [&](std::size_t i) {
          const auto v = sphere_energy_kspace(a, medium, grid[i], kopts);
          s.points[i] = {grid[i], v.value};
          s.errors[i] = v.error_estimate;
        });
        return s;
      }();
      for (std::size_t i = 0; i < sw.points.size(); ++i)
        points.push_back({{"cutoff", sw.points[i].first},
                          {"total", sw.points[i].second * scale},
                          {"error_estimate", sw.errors[i] * scale}});
      results["total"] = sw.points.front().second * scale;
      results["error_estimate"] = sw.errors.front() * scale;
      results["breakdown"] = fit ? exponential_json(sw.fit, a, scale) : json(nullptr);
    }
    results["points"] = points;
  }
  print_record(make_record("sphere", cmd, results, diag), output, out);
  return kExitOk;
}

int run_self_energy(const std::vector<std::string> &args, std::ostream &out) {
  Command cmd("self-energy", "First-order single-particle energy with exponential shielding");
  double gamma = 0.0, volume = 0.0, lambda = 0.0;
  std::string output;
  cmd.number("gamma", gamma, "4 pi rho alpha", true);
  cmd.number("volume", volume, "Volume", true);
  cmd.number("lambda", lambda, "Shielding length", true);
  cmd.common(1e-12);
  cmd.output_path("output", output, "Write the JSON record here instead of stdout");
  if (!cmd.parse(args, out))
    return kExitOk;
  if (!(lambda > 0.0))
    throw UsageError("--lambda must be positive");
  if (!(volume >= 0.0))
    throw UsageError("--volume must be >= 0");
  const double scale = cmd.energy_scale();
  const SelfEnergy s = self_energy(volume, gamma, lambda, cmd.tol);
  const double rel = s.closed != 0.0 ? std::abs(s.numeric - s.closed) / std::abs(s.closed) : 0.0;
  json results = {{"value", s.closed * scale},
                  {"closed", s.closed * scale},
                  {"numeric", s.numeric * scale},
                  {"kernel_sum", s.kernel_sum},
                  {"relative_difference", rel}};
  json diag = {{"kernel_sum_error", s.kernel_sum_error}};
  print_record(make_record("self-energy", cmd, results, diag), output, out);
  return kExitOk;
}

int run_dielectric(const std::vector<std::string> &args, std::ostream &out) {
  Command cmd("dielectric", "Dielectric constant from rho*alpha and the contact parameter");
  double theta = -2.0, rho_alpha = 0.0;
  std::string output;
  cmd.number("theta", theta, "Contact-term parameter");
  cmd.number("rho-alpha", rho_alpha, "Product of number density and polarizability", true);
  cmd.flag("diagnostics", cmd.diagnostics, "Include solver diagnostics in the record");
  cmd.output_path("output", output, "Write the JSON record here instead of stdout");
  if (!cmd.parse(args, out))
    return kExitOk;
  if (!(rho_alpha >= 0.0))
    throw UsageError("--rho-alpha must be >= 0");
  Medium m;
  m.rho = 1.0;
  m.alpha = rho_alpha;
  m.theta.value = theta;
  const DielectricState d = epsilon_relation(m);
  json results = {{"epsilon", d.epsilon}, {"n_refr", d.n_refr}, {"gamma", d.gamma}};
  print_record(make_record("dielectric", cmd, results, json::object()), output, out);
  return kExitOk;
}

int run_subcommand(const std::vector<std::string> &args, std::ostream &out, std::ostream &err) {
  auto report = [&](const char *kind, const std::string &message, const std::string &details) {
    json e = {{"error", {{"kind", kind}, {"message", message}}}};
    if (!details.empty())
      e["error"]["diagnostics"] = details;
    err << e.dump() << "\n";
  };
  if (args.empty() || args[0] == "-h" || args[0] == "--help") {
    std::ostream &dest = args.empty() ? err : out;
    dest << "usage: casimir <pair|sphere|self-energy|dielectric|sweep|verify> [options]\n"
            "       casimir <subcommand> --help\n";
    return args.empty() ? kExitUsage : kExitOk;
  }
  const std::string sub = args[0];
  const std::vector<std::string> rest(args.begin() + 1, args.end());
  try {
    if (sub == "pair")
      return run_pair(rest, out);
    if (sub == "sphere")
      return run_sphere(rest, out);
    if (sub == "self-energy")
      return run_self_energy(rest, out);
    if (sub == "dielectric")
      return run_dielectric(rest, out);
    if (sub == "sweep")
      return run_sweep(rest, out, err);
    if (sub == "verify")
      return run_verify(rest, out);
    report("usage", "unknown subcommand '" + sub + "'", "");
    return kExitUsage;
  } catch (const UsageError &e) {
    report("usage", e.what(), "");
    return kExitUsage;
  } catch (const std::invalid_argument &e) {
    report("usage", e.what(), "");
    return kExitUsage;
  } catch (const NumericalError &e) {
    report("numerical", e.what(), e.diagnostics());
    return kExitNumerical;
  } catch (const std::exception &e) {
    report("numerical", e.what(), "");
    return kExitNumerical;
  }
}

} // namespace casimir::cli
