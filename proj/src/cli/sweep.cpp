#include "command.hpp"

#include "casimir/cli.hpp"
#include "casimir/errors.hpp"
#include "casimir/numerics.hpp"
#include "casimir/pair_energy.hpp"
#include "casimir/sphere_energy.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <ostream>
#include <sstream>

namespace casimir::cli {

namespace {

constexpr std::size_t kMaxRows = 10000;

struct Axis {
  std::string name;
  std::vector<double> values;
};

std::string canonical_axis(std::string name) {
  std::replace(name.begin(), name.end(), '-', '_');
  if (name == "r" || name == "beta" || name == "a" || name == "r_min" || name == "lambda" ||
      name == "eps_minus_1")
    return name;
  throw UsageError("unknown grid axis '" + name + "' (r, beta, a, r_min, lambda, eps_minus_1)");
}

Axis parse_axis(const std::string &spec) {
  const auto eq = spec.find('=');
  if (eq == std::string::npos)
    throw UsageError("--grid expects name=values, got '" + spec + "'");
  Axis ax{canonical_axis(spec.substr(0, eq)), parse_grid(spec.substr(eq + 1))};
  for (double v : ax.values)
    if (!(v > 0.0) && !(ax.name == "eps_minus_1" && v == 0.0))
      throw UsageError("grid '" + ax.name + "' needs positive values");
  return ax;
}

struct PairRow {
  double r = 0.0;
  std::optional<double> beta;
  PairEnergy e;
};

struct SphereRow {
  double a = 0.0;
  double eps_minus_1 = 0.0;
  double cutoff = 0.0;
  double total = 0.0;
  double error_estimate = 0.0;
  std::optional<EnergyBreakdown> breakdown;
  std::string finite_source;
};

EnergyBreakdown from_exponential(const ExponentialBreakdown &f, double a) {
  const SphereSpec s(a);
  EnergyBreakdown b;
  for (std::size_t i = 0; i < f.basis.size(); ++i) {
    switch (f.basis[i]) {
    case ExpBasisTerm::VolumeQuartic: b.c_vol = f.coefficients[i] * s.volume(); break;
    case ExpBasisTerm::SurfaceCubic: b.c_surf = f.coefficients[i] * s.surface(); break;
    case ExpBasisTerm::InverseLinear: b.c_lin = f.coefficients[i]; break;
    default: break;
    }
  }
  b.finite_1_over_a = f.finite_1_over_a;
  b.residual = f.residual;
  b.condition_number = f.condition_number;
  return b;
}

json pair_fit(const std::vector<PairRow> &rows, double scale) {
  std::vector<std::pair<double, double>> pts;
  for (const auto &r : rows) {
    if (!(r.e.value < 0.0))
      throw NumericalError("power-law fit needs negative energies");
    pts.emplace_back(std::log(r.r), std::log(-r.e.value));
  }
  const std::vector<numerics::BasisFunction> basis = {[](double) { return 1.0; },
                                                      [](double x) { return x; }};
  const auto f = numerics::linear_fit(basis, pts);
  return {{"model", "F = -A r^p"},
          {"prefactor", std::exp(f.coefficients[0]) * scale},
          {"exponent", f.coefficients[1]},
          {"relative_residual", f.relative_residual}};
}

} // namespace

int run_sweep(const std::vector<std::string> &args, std::ostream &out, std::ostream &err) {
  (void)err;
  Command cmd("sweep", "Grid of pair or sphere evaluations written as CSV");
  std::string quantity = "sphere", cutoff, route, basis_spec, output, fit_output;
  std::vector<std::string> grids;
  std::optional<std::string> inner;
  double r = 1.0, alpha = 1.0, a = 1.0, eps_minus_1 = 0.1, r_min = 1e-3, lambda = 0.3;
  std::optional<double> beta;
  bool fit = false;
  cmd.text("quantity", quantity, "pair | sphere");
  cmd.texts("grid", grids, "Axis as name=values; one or two of r, beta, a, r_min, lambda, eps_minus_1");
  cmd.number("r", r, "Pair separation when not swept");
  cmd.number("alpha", alpha, "Pair polarizability");
  cmd.optional_number("beta", beta, "Pair inverse temperature when not swept; omit for T = 0");
  cmd.text("route", route, "Pair route: rspace | closed (default: rspace with beta, closed without)");
  cmd.number("a", a, "Ball radius when not swept");
  cmd.number("eps-minus-1", eps_minus_1, "Dielectric constant minus one when not swept");
  cmd.text("cutoff", cutoff, "hardcore | exp (implied by an r_min or lambda grid)");
  cmd.number("r-min", r_min, "Hard-core distance when not swept");
  cmd.number("lambda", lambda, "Exponential shielding length when not swept");
  cmd.optional_text("inner-sweep", inner,
                    "Cutoff grid in units of a fitted for each row to fill the breakdown columns");
  cmd.text("basis", basis_spec, "Exponential-cutoff fit basis (comma separated)");
  cmd.flag("fit", fit, "Fit the sweep and append the summary");
  cmd.common(1e-10);
  cmd.output_path("output", output, "CSV destination (default stdout)");
  cmd.output_path("fit-output", fit_output, "JSON fit summary destination (default: a trailing # line)");
  if (!cmd.parse(args, out))
    return kExitOk;

  if (grids.empty())
    throw UsageError("--grid is required");
  if (grids.size() > 2)
    throw UsageError("at most two --grid axes");
  std::vector<Axis> axes;
  for (const auto &g : grids)
    axes.push_back(parse_axis(g));
  if (axes.size() == 2 && axes[0].name == axes[1].name)
    throw UsageError("grid axes must differ");
  std::size_t rows_total = 1;
  for (const auto &ax : axes) {
    if (ax.values.empty())
      throw UsageError("empty grid");
    rows_total *= ax.values.size();
  }
  if (rows_total > kMaxRows)
    throw UsageError("grid has " + std::to_string(rows_total) + " points; the budget is " +
                     std::to_string(kMaxRows));
  auto has_axis = [&](const std::string &n) {
    return std::any_of(axes.begin(), axes.end(), [&](const Axis &ax) { return ax.name == n; });
  };

  // Row-major over the axes: the first grid is the outer loop.
  auto point = [&](std::size_t idx) {
    std::map<std::string, double> p;
    std::size_t stride = rows_total;
    for (const auto &ax : axes) {
      stride /= ax.values.size();
      p[ax.name] = ax.values[(idx / stride) % ax.values.size()];
    }
    return p;
  };
  auto get = [](const std::map<std::string, double> &p, const std::string &k, double fallback) {
    const auto it = p.find(k);
    return it == p.end() ? fallback : it->second;
  };

  const unsigned workers = cmd.worker_count();
  const double scale = cmd.energy_scale();
  std::ostringstream csv;
  csv << "# schema_version=" << kSchemaVersion << "\n";
  csv << "# inputs=" << cmd.inputs().dump() << "\n";
  json fit_results;

  if (quantity == "pair") {
    for (const auto &ax : axes)
      if (ax.name != "r" && ax.name != "beta")
        throw UsageError("pair sweeps take r and beta grids only");
    const bool thermal = beta.has_value() || has_axis("beta");
    const std::string pair_route = route.empty() ? (thermal ? "rspace" : "closed") : route;
    if (pair_route != "rspace" && pair_route != "closed")
      throw UsageError("--route must be rspace or closed for sweeps");
    if (pair_route == "closed" && thermal)
      throw UsageError("the closed route is zero-temperature only");
    if (!(alpha >= 0.0))
      throw UsageError("--alpha must be >= 0");
    if (fit && (axes.size() != 1 || axes[0].name != "r"))
      throw UsageError("pair --fit needs a single r grid");

    std::vector<PairRow> rows(rows_total);
    parallel_for(rows_total, workers, [&](std::size_t i) {
      const auto p = point(i);
      PairRow row;
      row.r = get(p, "r", r);
      if (p.count("beta"))
        row.beta = p.at("beta");
      else
        row.beta = beta;
      if (pair_route == "closed") {
        row.e = pair_energy_T0(row.r, alpha);
      } else if (row.beta) {
        ThermalState st;
        st.beta = *row.beta;
        st.rel_tol = cmd.tol;
        Medium m;
        m.alpha = alpha;
        row.e = pair_free_energy(row.r, m, st);
      } else {
        row.e = pair_energy_T0_numeric(row.r, alpha, cmd.tol);
      }
      rows[i] = row;
    });
    csv << "r,beta,value,error_estimate,route,terms_used\n";
    for (const auto &row : rows)
      csv << csv_number(row.r) << "," << (row.beta ? csv_number(*row.beta) : "") << ","
          << csv_number(row.e.value * scale) << "," << csv_number(row.e.error_estimate * scale)
          << "," << to_string(row.e.route) << "," << row.e.terms_used << "\n";
    if (fit)
      fit_results = pair_fit(rows, scale);
  } else if (quantity == "sphere") {
    for (const auto &ax : axes)
      if (ax.name == "r" || ax.name == "beta")
        throw UsageError("sphere sweeps take a, r_min, lambda and eps_minus_1 grids only");
    if (has_axis("r_min") && has_axis("lambda"))
      throw UsageError("r_min and lambda grids belong to different cutoff schemes");
    std::string scheme = cutoff;
    const std::string implied = has_axis("r_min") ? "hardcore" : has_axis("lambda") ? "exp" : "";
    if (scheme.empty())
      scheme = implied.empty() ? "hardcore" : implied;
    if (scheme != "hardcore" && scheme != "exp")
      throw UsageError("--cutoff must be hardcore or exp");
    if (!implied.empty() && implied != scheme)
      throw UsageError("--cutoff " + scheme + " conflicts with the swept cutoff axis");
    const bool hardcore = scheme == "hardcore";
    const auto fit_basis = [&] {
      if (basis_spec.empty())
        return default_exponential_basis();
      std::vector<ExpBasisTerm> b;
      std::stringstream ss(basis_spec);
      for (std::string t; std::getline(ss, t, ',');)
        b.push_back(exp_basis_term_from_string(t));
      return b;
    }();
    std::vector<double> inner_grid;
    if (inner) {
      if (has_axis("r_min") || has_axis("lambda"))
        throw UsageError("--inner-sweep cannot be combined with a swept cutoff");
      inner_grid = parse_grid(*inner);
    }
    if (fit && axes.size() != 1)
      throw UsageError("sphere --fit needs a single grid");
    if (fit && axes[0].name == "a" && !hardcore && !inner)
      throw UsageError("an a-grid fit with the exponential cutoff needs --inner-sweep");
    if (fit && axes[0].name == "eps_minus_1" && !hardcore && !inner)
      throw UsageError("an eps_minus_1 fit with the exponential cutoff needs --inner-sweep");

    KSpaceSphereOptions kopts;
    kopts.tol = std::max(cmd.tol, 1e-13);
    std::vector<SphereRow> rows(rows_total);
    // Rows run concurrently; per-row inner sweeps stay serial.
    parallel_for(rows_total, workers, [&](std::size_t i) {
      const auto p = point(i);
      SphereRow row;
      row.a = get(p, "a", a);
      row.eps_minus_1 = get(p, "eps_minus_1", eps_minus_1);
      row.cutoff = hardcore ? get(p, "r_min", r_min) : get(p, "lambda", lambda);
      const Medium medium = dilute_medium(row.eps_minus_1);
      if (hardcore) {
        if (!(row.cutoff < 2.0 * row.a))
          throw UsageError("r_min must be below 2a");
        const auto e = sphere_energy_rspace(row.a, medium, row.cutoff, std::max(cmd.tol, 1e-14));
        row.total = e.total;
        row.error_estimate = e.error_estimate;
        row.breakdown = e.analytic;
        row.finite_source = "analytic";
        if (inner) {
          std::vector<double> rm;
          for (double x : inner_grid)
            rm.push_back(x * row.a);
          row.breakdown = hardcore_sweep(row.a, medium, rm).fit;
          row.finite_source = "fit";
        }
      } else {
        const auto e = sphere_energy_kspace(row.a, medium, row.cutoff, kopts);
        row.total = e.value;
        row.error_estimate = e.error_estimate;
        if (inner) {
          std::vector<double> lm;
          for (double x : inner_grid)
            lm.push_back(x * row.a);
          row.breakdown = from_exponential(exponential_sweep(row.a, medium, lm, fit_basis, kopts).fit, row.a);
          row.finite_source = "fit";
        }
      }
      rows[i] = row;
    });

    csv << "a,eps_minus_1,scheme,cutoff,total,error_estimate,c_vol,c_surf,c_lin,finite_1_over_a,"
           "residual,finite_source\n";
    for (const auto &row : rows) {
      csv << csv_number(row.a) << "," << csv_number(row.eps_minus_1) << "," << scheme << ","
          << csv_number(row.cutoff) << "," << csv_number(row.total * scale) << ","
          << csv_number(row.error_estimate * scale);
      if (row.breakdown) {
        const auto &b = *row.breakdown;
        csv << "," << csv_number(b.c_vol * scale) << "," << csv_number(b.c_surf * scale) << ","
            << csv_number(b.c_lin * scale) << "," << csv_number(b.finite_1_over_a * scale) << ","
            << csv_number(b.residual);
      } else {
        csv << ",,,,,";
      }
      csv << "," << row.finite_source << "\n";
    }

    if (fit) {
      const std::string axis = axes[0].name;
      std::vector<std::pair<double, double>> pts;
      if (axis == "r_min") {
        for (const auto &row : rows)
          pts.emplace_back(row.cutoff, row.total);
        const auto b = decompose_fit(pts, a);
        const auto exact = hardcore_breakdown_analytic(a, dilute_medium(eps_minus_1), rows.front().cutoff);
        fit_results = {{"model", "c_vol/r_min^4 + c_surf/r_min^3 + c_lin/r_min + finite/a"},
                       {"c_vol", b.c_vol * scale},
                       {"c_surf", b.c_surf * scale},
                       {"c_lin", b.c_lin * scale},
                       {"finite_1_over_a", b.finite_1_over_a * scale},
                       {"finite_analytic", exact.finite_1_over_a * scale},
                       {"finite_theory", finite_part_prediction(a, eps_minus_1) * scale},
                       {"relative_residual", b.residual},
                       {"condition_number", b.condition_number}};
      } else if (axis == "lambda") {
        for (const auto &row : rows)
          pts.emplace_back(row.cutoff, row.total);
        const auto f = decompose_exponential_fit(pts, a, fit_basis);
        json terms = json::object();
        for (std::size_t i = 0; i < f.basis.size(); ++i)
          terms[std::string(to_string(f.basis[i]))] = f.coefficients[i] * scale;
        fit_results = {{"model", "exponential-cutoff basis"},
                       {"terms", terms},
                       {"finite_1_over_a", f.finite_1_over_a * scale},
                       {"finite_theory", finite_part_prediction(a, eps_minus_1) * scale},
                       {"relative_residual", f.residual},
                       {"condition_number", f.condition_number}};
      } else {
        // One-parameter fits of the per-row finite parts: c / a or c (eps - 1)^2.
        const bool over_a = axis == "a";
        double num = 0.0, den = 0.0;
        for (const auto &row : rows) {
          const double x = over_a ? 1.0 / row.a : row.eps_minus_1 * row.eps_minus_1;
          num += x * row.breakdown->finite_1_over_a;
          den += x * x;
        }
        if (!(den > 0.0))
          throw NumericalError("degenerate grid for the scaling fit");
        const double c = num / den;
        double worst = 0.0;
        for (const auto &row : rows) {
          const double x = over_a ? 1.0 / row.a : row.eps_minus_1 * row.eps_minus_1;
          const double f = row.breakdown->finite_1_over_a;
          if (f != 0.0)
            worst = std::max(worst, std::abs(c * x - f) / std::abs(f));
        }
        fit_results = {{"model", over_a ? "finite = c / a" : "finite = c (eps - 1)^2"},
                       {"c", c * scale},
                       {"max_relative_deviation", worst}};
      }
    }
  } else {
    throw UsageError("--quantity must be pair or sphere");
  }

  if (fit) {
    const json record = make_record("sweep-fit", cmd, fit_results, json::object());
    if (fit_output.empty())
      csv << "# fit=" << record.dump() << "\n";
    else
      emit(fit_output, record.dump(2) + "\n", out);
  }
  emit(output, csv.str(), out);
  return kExitOk;
}

} // namespace casimir::cli
