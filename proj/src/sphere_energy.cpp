#include "casimir/sphere_energy.hpp"

#include "casimir/errors.hpp"

#include <boost/math/special_functions/expint.hpp>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace casimir {

namespace {

constexpr double kPi = std::numbers::pi;

void require_positive(double v, const char *what) {
  if (!std::isfinite(v) || !(v > 0.0))
    throw std::invalid_argument(std::string(what) + " must be finite and positive");
}

void require_medium(const Medium &m) {
  if (!std::isfinite(m.alpha) || m.alpha < 0.0 || !std::isfinite(m.rho) || m.rho < 0.0)
    throw std::invalid_argument("medium: alpha and rho must be finite and >= 0");
}

// C in F(r) = -C / r^7.
double pair_constant(const Medium &m) { return 23.0 * m.alpha * m.alpha / (4.0 * kPi); }

// Inner integrals of the k-space ball energy over s = k + k' >= q, with the
// d = k - k' integral already done:
//   G(q) = int_q^inf e^{-lambda s} / s [q s^4 / 4 - q^3 s^2 / 2 + (23/60) q^5] ds.
double reduced_inner(double q, double lambda) {
  const double x = lambda * q;
  const double l2 = lambda * lambda, l3 = l2 * lambda, l4 = l3 * lambda;
  const double q2 = q * q, q3 = q2 * q, q4 = q3 * q;
  const double poly = -q4 / (4.0 * lambda) + q3 / (4.0 * l2) + 1.5 * q2 / l3 + 1.5 * q / l4;
  const double e1 = x > 0.0 ? boost::math::expint(1, x) : 0.0;
  return std::exp(-x) * poly + (23.0 / 60.0) * q4 * q * e1;
}

SphereEnergyValue kspace_reduced(double a, const Medium &m, double lambda, double tol) {
  // Oscillation of |V(q)|^2 has period pi / a; everything beyond
  // lambda q = 80 is below double precision relative to the peak.
  const double q_max = 80.0 / lambda;
  const double step = std::min(kPi / a, 2.0 / lambda);
  const auto panels = static_cast<std::size_t>(std::ceil(q_max / step));
  std::vector<double> breaks(panels + 1);
  for (std::size_t i = 0; i <= panels; ++i)
    breaks[i] = step * static_cast<double>(i);
  auto integrand = [&](double q) {
    if (q == 0.0)
      return 0.0;
    const double v = sphere_form_factor(q, a);
    return q * v * v * reduced_inner(q, lambda);
  };
  numerics::QuadratureOptions opts;
  opts.abs_tol = 0.0;
  opts.rel_tol = tol;
  opts.max_cells = std::max<std::size_t>(20000, 4 * panels);
  const auto r = numerics::integrate(integrand, breaks, opts);
  const double pre = -m.rho * m.rho * m.alpha * m.alpha / (8.0 * kPi * kPi);
  return {pre * r.value, std::abs(pre) * r.error_estimate, r.evaluations};
}

SphereEnergyValue kspace_cubature(double a, const Medium &m, double lambda, double tol,
                                  std::size_t max_cells) {
  const double k_max = 40.0 / lambda;
  auto integrand = [&](const std::array<double, 3> &p) {
    const double k = p[0], kp = p[1], c = p[2];
    const double s = k + kp;
    if (s == 0.0)
      return 0.0;
    const double q = std::sqrt(std::max(0.0, k * k + kp * kp + 2.0 * k * kp * c));
    const double v = sphere_form_factor(q, a);
    const double k3 = k * k * k, kp3 = kp * kp * kp;
    return k3 * kp3 * std::exp(-lambda * s) / s * (c * c + 1.0) * v * v;
  };
  numerics::QuadratureOptions opts;
  opts.abs_tol = 0.0;
  opts.rel_tol = tol;
  opts.max_cells = max_cells;
  const numerics::Box<3> box{{0.0, 0.0, -1.0}, {k_max, k_max, 1.0}};
  const auto r = numerics::integrate_box(integrand, box, opts);
  const double pre = -m.rho * m.rho * m.alpha * m.alpha / (4.0 * kPi * kPi);
  return {pre * r.value, std::abs(pre) * r.error_estimate, r.evaluations};
}

double basis_value(ExpBasisTerm t, double lambda, double a) {
  const SphereSpec s(a);
  switch (t) {
  case ExpBasisTerm::VolumeQuartic:
    return s.volume() / std::pow(lambda, 4);
  case ExpBasisTerm::SurfaceCubic:
    return s.surface() / std::pow(lambda, 3);
  case ExpBasisTerm::CurvatureQuadratic:
    return a / (lambda * lambda);
  case ExpBasisTerm::InverseLinear:
    return 1.0 / lambda;
  case ExpBasisTerm::Finite:
    return 1.0 / a;
  case ExpBasisTerm::LinearCorrection:
    return lambda / (a * a);
  case ExpBasisTerm::CubicCorrection:
    return std::pow(lambda, 3) / std::pow(a, 4);
  }
  return 0.0;
}

} // namespace

DielectricState epsilon_relation(const Medium &medium) {
  require_medium(medium);
  const double theta = medium.theta.value;
  if (!std::isfinite(theta))
    throw std::invalid_argument("theta must be finite");
  const double y = 4.0 * kPi / 3.0 * medium.rho * medium.alpha;
  const double num = 1.0 + y * (2.0 + theta);
  const double den = 1.0 - y * (1.0 - theta);
  if (!(den > 0.0))
    throw std::domain_error("dielectric relation has no solution: denominator is not positive");
  const double eps = num / den;
  if (!std::isfinite(eps) || eps < 1.0)
    throw std::domain_error("dielectric relation has no solution with eps >= 1");
  return {eps, std::sqrt(eps), 4.0 * kPi * medium.rho * medium.alpha};
}

Medium dilute_medium(double eps_minus_1) {
  if (!std::isfinite(eps_minus_1) || eps_minus_1 < 0.0)
    throw std::invalid_argument("eps - 1 must be finite and >= 0");
  Medium m;
  m.rho = 1.0;
  m.alpha = eps_minus_1 / (4.0 * kPi);
  return m;
}

double finite_part_prediction(double a, double eps_minus_1) {
  require_positive(a, "a");
  return 23.0 * eps_minus_1 * eps_minus_1 / (1536.0 * kPi * a);
}

EnergyBreakdown hardcore_breakdown_analytic(double a, const Medium &medium, double r_min) {
  require_positive(a, "a");
  require_positive(r_min, "r_min");
  require_medium(medium);
  const double rc = medium.rho * medium.rho * pair_constant(medium);
  const double V = SphereSpec(a).volume();
  EnergyBreakdown b;
  b.c_vol = -0.5 * kPi * rc * V;
  b.c_surf = 2.0 * kPi * kPi / 3.0 * rc * a * a;
  b.c_lin = -kPi * kPi / 6.0 * rc;
  b.finite_1_over_a = rc * kPi * kPi / (24.0 * a);
  if (r_min < 2.0 * a) {
    const double r3 = r_min * r_min * r_min;
    b.total = b.c_vol / (r3 * r_min) + b.c_surf / r3 + b.c_lin / r_min + b.finite_1_over_a;
  }
  return b;
}

HardCoreEnergy sphere_energy_rspace(double a, const Medium &medium, double r_min, double tol) {
  require_positive(a, "a");
  require_positive(r_min, "r_min");
  require_medium(medium);
  if (r_min >= 2.0 * a)
    throw std::invalid_argument("sphere_energy_rspace: r_min must be below 2a");
  HardCoreEnergy out;
  out.r_min = r_min;
  out.analytic = hardcore_breakdown_analytic(a, medium, r_min);
  if (medium.alpha == 0.0 || medium.rho == 0.0)
    return out;
  const double C = pair_constant(medium);
  const auto q = pair_measure_integral([&](double r) { return -C / std::pow(r, 7); }, a, r_min, tol);
  const double half_rho2 = 0.5 * medium.rho * medium.rho;
  out.total = half_rho2 * q.value;
  out.error_estimate = half_rho2 * q.error_estimate;
  return out;
}

HardCoreEnergy sphere_energy_rspace_thermal(double a, const Medium &medium, double r_min,
                                            const ThermalState &state, double tol) {
  require_positive(a, "a");
  require_positive(r_min, "r_min");
  require_medium(medium);
  if (r_min >= 2.0 * a)
    throw std::invalid_argument("sphere_energy_rspace_thermal: r_min must be below 2a");
  HardCoreEnergy out;
  out.r_min = r_min;
  out.analytic = hardcore_breakdown_analytic(a, medium, r_min);
  if (medium.alpha == 0.0 || medium.rho == 0.0)
    return out;
  const auto q = pair_measure_integral(
      [&](double r) { return pair_free_energy(r, medium, state).value; }, a, r_min, tol);
  const double half_rho2 = 0.5 * medium.rho * medium.rho;
  out.total = half_rho2 * q.value;
  out.error_estimate = half_rho2 * q.error_estimate;
  return out;
}

EnergyBreakdown decompose_fit(std::span<const std::pair<double, double>> samples, double a,
                              const DecomposeOptions &opts) {
  require_positive(a, "a");
  if (samples.size() < opts.min_samples) {
    std::ostringstream diag;
    diag << "samples=" << samples.size() << " required=" << opts.min_samples;
    throw FitError(FitError::Kind::InsufficientSamples, "too few r_min samples", diag.str());
  }
  std::vector<std::pair<double, double>> scaled;
  scaled.reserve(samples.size());
  double lo = INFINITY, hi = 0.0;
  for (const auto &[r_min, total] : samples) {
    if (!(r_min > 0.0) || !std::isfinite(total))
      throw std::invalid_argument("decompose_fit: samples need r_min > 0 and finite totals");
    if (r_min > opts.max_r_min_over_a * a)
      throw FitError(FitError::Kind::InsufficientSamples, "r_min samples must be small compared to a");
    const double x = r_min / a;
    scaled.emplace_back(x, total * x * x * x * x);
    lo = std::min(lo, r_min);
    hi = std::max(hi, r_min);
  }
  const std::vector<numerics::BasisFunction> basis = {
      [](double) { return 1.0; }, [](double x) { return x; },
      [](double x) { return x * x * x; }, [](double x) { return x * x * x * x; }};
  numerics::FitOptions fo;
  fo.max_condition = opts.max_condition;
  const auto fit = numerics::linear_fit(basis, scaled, {}, fo);
  if (std::log10(hi / lo) < opts.min_decades - 1e-9) {
    std::ostringstream diag;
    diag << "decades=" << std::log10(hi / lo) << " required=" << opts.min_decades;
    throw FitError(FitError::Kind::InsufficientSamples, "r_min samples span too narrow a range",
                   diag.str());
  }
  if (fit.relative_residual > opts.max_relative_residual) {
    std::ostringstream diag;
    diag << "relative_residual=" << fit.relative_residual << " max=" << opts.max_relative_residual;
    throw FitError(FitError::Kind::ResidualTooLarge, "hard-core fit residual too large", diag.str());
  }
  EnergyBreakdown b;
  const double a3 = a * a * a;
  b.c_vol = fit.coefficients[0] * a3 * a;
  b.c_surf = fit.coefficients[1] * a3;
  b.c_lin = fit.coefficients[2] * a;
  b.finite_1_over_a = fit.coefficients[3];
  b.residual = fit.relative_residual;
  b.condition_number = fit.condition_number;
  const double r = lo;
  b.total = b.c_vol / std::pow(r, 4) + b.c_surf / std::pow(r, 3) + b.c_lin / r + b.finite_1_over_a;
  return b;
}

HardCoreSweep hardcore_sweep(double a, const Medium &medium, std::span<const double> r_mins,
                             double agreement_tol, const DecomposeOptions &opts, unsigned workers) {
  HardCoreSweep out;
  out.points.resize(r_mins.size());
  parallel_for(r_mins.size(), workers,
               [&](std::size_t i) { out.points[i] = sphere_energy_rspace(a, medium, r_mins[i]); });
  std::vector<std::pair<double, double>> samples;
  for (const auto &p : out.points)
    samples.emplace_back(p.r_min, p.total);
  out.fit = decompose_fit(samples, a, opts);
  out.finite_analytic = hardcore_breakdown_analytic(a, medium, r_mins.front()).finite_1_over_a;
  out.finite_disagreement =
      out.finite_analytic != 0.0
          ? std::abs(out.fit.finite_1_over_a - out.finite_analytic) / std::abs(out.finite_analytic)
          : std::abs(out.fit.finite_1_over_a);
  if (!(out.finite_disagreement <= agreement_tol)) {
    std::ostringstream diag;
    diag << "fit=" << out.fit.finite_1_over_a << " analytic=" << out.finite_analytic
         << " disagreement=" << out.finite_disagreement << " tol=" << agreement_tol;
    throw NumericalError("fitted and analytic finite parts disagree", diag.str());
  }
  return out;
}

SphereEnergyValue sphere_energy_kspace(double a, const Medium &medium, double lambda,
                                       const KSpaceSphereOptions &opts) {
  require_positive(a, "a");
  require_positive(lambda, "lambda");
  require_medium(medium);
  if (medium.alpha == 0.0 || medium.rho == 0.0)
    return {};
  if (opts.method == KSpaceSphereMethod::Cubature)
    return kspace_cubature(a, medium, lambda, opts.tol, opts.max_cells);
  return kspace_reduced(a, medium, lambda, opts.tol);
}

SphereEnergyValue sphere_energy_rspace_shielded(double a, const Medium &medium, double lambda,
                                                ShieldedKernelRoute route, double tol) {
  require_positive(a, "a");
  require_positive(lambda, "lambda");
  require_medium(medium);
  if (medium.alpha == 0.0 || medium.rho == 0.0)
    return {};
  std::size_t evaluations = 0;
  auto pair = [&](double r) {
    ++evaluations;
    if (route == ShieldedKernelRoute::Closed)
      return shielded_pair_energy_T0(r, medium.alpha, lambda);
    return damped_pair_energy_T0(r, medium.alpha, lambda, std::max(tol, 1e-9)).value;
  };
  const auto q = pair_measure_integral(pair, a, 0.0, tol);
  const double half_rho2 = 0.5 * medium.rho * medium.rho;
  return {half_rho2 * q.value, half_rho2 * q.error_estimate, evaluations};
}

std::string_view to_string(ExpBasisTerm term) noexcept {
  switch (term) {
  case ExpBasisTerm::VolumeQuartic:
    return "V/lambda^4";
  case ExpBasisTerm::SurfaceCubic:
    return "S/lambda^3";
  case ExpBasisTerm::CurvatureQuadratic:
    return "a/lambda^2";
  case ExpBasisTerm::InverseLinear:
    return "1/lambda";
  case ExpBasisTerm::Finite:
    return "1/a";
  case ExpBasisTerm::LinearCorrection:
    return "lambda/a^2";
  case ExpBasisTerm::CubicCorrection:
    return "lambda^3/a^4";
  }
  return "unknown";
}

ExpBasisTerm exp_basis_term_from_string(std::string_view name) {
  for (auto t : {ExpBasisTerm::VolumeQuartic, ExpBasisTerm::SurfaceCubic,
                 ExpBasisTerm::CurvatureQuadratic, ExpBasisTerm::InverseLinear,
                 ExpBasisTerm::Finite, ExpBasisTerm::LinearCorrection,
                 ExpBasisTerm::CubicCorrection})
    if (to_string(t) == name)
      return t;
  throw std::invalid_argument("unknown exponential basis term: " + std::string(name));
}

std::vector<ExpBasisTerm> default_exponential_basis() {
  return {ExpBasisTerm::VolumeQuartic, ExpBasisTerm::SurfaceCubic,
          ExpBasisTerm::InverseLinear,  ExpBasisTerm::Finite,
          ExpBasisTerm::LinearCorrection, ExpBasisTerm::CubicCorrection};
}

ExponentialBreakdown decompose_exponential_fit(std::span<const std::pair<double, double>> samples,
                                               double a, std::span<const ExpBasisTerm> basis,
                                               double max_condition) {
  require_positive(a, "a");
  const auto finite_it = std::find(basis.begin(), basis.end(), ExpBasisTerm::Finite);
  if (finite_it == basis.end())
    throw std::invalid_argument("exponential fit basis must contain the 1/a term");
  if (samples.size() <= basis.size()) {
    std::ostringstream diag;
    diag << "samples=" << samples.size() << " basis=" << basis.size();
    throw FitError(FitError::Kind::InsufficientSamples, "too few lambda samples", diag.str());
  }
  std::vector<numerics::BasisFunction> fns;
  for (auto t : basis)
    fns.emplace_back([t, a](double l) { return basis_value(t, l, a); });
  std::vector<double> weights;
  for (const auto &[l, total] : samples) {
    if (!(l > 0.0) || !std::isfinite(total) || total == 0.0)
      throw std::invalid_argument("exponential fit: samples need lambda > 0 and nonzero totals");
    weights.push_back(1.0 / std::abs(total));
  }
  numerics::FitOptions fo;
  fo.max_condition = max_condition;
  const auto fit = numerics::linear_fit(fns, samples, weights, fo);
  ExponentialBreakdown out;
  out.basis.assign(basis.begin(), basis.end());
  out.coefficients = fit.coefficients;
  out.finite_1_over_a = fit.coefficients[static_cast<std::size_t>(finite_it - basis.begin())] / a;
  out.residual = fit.relative_residual;
  out.condition_number = fit.condition_number;
  return out;
}

ExponentialSweep exponential_sweep(double a, const Medium &medium, std::span<const double> lambdas,
                                   std::span<const ExpBasisTerm> basis,
                                   const KSpaceSphereOptions &opts, unsigned workers) {
  ExponentialSweep out;
  out.points.resize(lambdas.size());
  out.errors.resize(lambdas.size());
  parallel_for(lambdas.size(), workers, [&](std::size_t i) {
    const auto v = sphere_energy_kspace(a, medium, lambdas[i], opts);
    out.points[i] = {lambdas[i], v.value};
    out.errors[i] = v.error_estimate;
  });
  out.fit = decompose_exponential_fit(out.points, a, basis);
  return out;
}

SelfEnergy self_energy(double volume, double gamma, double lambda, double tol) {
  if (!std::isfinite(volume) || volume < 0.0)
    throw std::invalid_argument("volume must be finite and >= 0");
  if (!std::isfinite(gamma))
    throw std::invalid_argument("gamma must be finite");
  require_positive(lambda, "lambda");
  SelfEnergy out;
  out.closed = -gamma * 3.0 / (2.0 * kPi * kPi) * volume / std::pow(lambda, 4);
  // (4 pi / 3) / (2 pi)^3 times the solid-angle integral of k e^{-lambda k} d^3k.
  numerics::QuadratureOptions opts;
  opts.abs_tol = 0.0;
  opts.rel_tol = tol;
  const auto q = numerics::integrate_semi_infinite(
      [&](double k) { return k * k * k * std::exp(-lambda * k); }, 0.0, 1.0 / lambda, opts);
  const double pre = (4.0 * kPi / 3.0) / std::pow(2.0 * kPi, 3) * 4.0 * kPi;
  out.kernel_sum = pre * q.value;
  out.kernel_sum_error = pre * q.error_estimate;
  // -(1/2) rho V <a^2> sum psi_Delta(0) with <a^2> = 3 alpha / beta, gamma = 4 pi rho alpha.
  out.numeric = -0.5 * volume * 3.0 * gamma / (4.0 * kPi) * out.kernel_sum;
  return out;
}

void parallel_for(std::size_t count, unsigned workers, const std::function<void(std::size_t)> &job) {
  if (workers <= 1 || count <= 1) {
    for (std::size_t i = 0; i < count; ++i)
      job(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> errors(count);
  std::vector<std::thread> pool;
  const unsigned n = static_cast<unsigned>(std::min<std::size_t>(workers, count));
  for (unsigned w = 0; w < n; ++w)
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) {
        try {
          job(i);
        } catch (...) {
          errors[i] = std::current_exception();
        }
      }
    });
  for (auto &t : pool)
    t.join();
  // Report the failure of the lowest index so the outcome is deterministic.
  for (auto &e : errors)
    if (e)
      std::rethrow_exception(e);
}

} // namespace casimir
