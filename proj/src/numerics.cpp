#include "casimir/numerics.hpp"

#include "casimir/errors.hpp"

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

namespace casimir::numerics {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

double pairwise_sum_range(const double *p, std::size_t n) {
  if (n <= 8) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      s += p[i];
    return s;
  }
  const std::size_t half = n / 2;
  return pairwise_sum_range(p, half) + pairwise_sum_range(p + half, n - half);
}

struct Panel {
  double a = 0.0;
  double b = 0.0;
  double value = 0.0;
  double error = 0.0;
  double floor = 0.0; // roundoff-limited error level
};

// QUADPACK-style error estimate for one application of the 21-point rule.
Panel apply_gk21(const Integrand &f, double a, double b) {
  const auto &rule = GaussKronrod21::get();
  const double centre = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  std::array<double, 21> fv{};
  for (std::size_t i = 0; i < 21; ++i)
    fv[i] = f(centre + half * rule.nodes[i]);

  double kronrod = 0.0, gauss = 0.0, resabs = 0.0;
  for (std::size_t i = 0; i < 21; ++i) {
    kronrod += rule.kronrod_weights[i] * fv[i];
    gauss += rule.gauss_weights[i] * fv[i];
    resabs += rule.kronrod_weights[i] * std::abs(fv[i]);
  }
  const double mean = 0.5 * kronrod;
  double resasc = 0.0;
  for (std::size_t i = 0; i < 21; ++i)
    resasc += rule.kronrod_weights[i] * std::abs(fv[i] - mean);

  kronrod *= half;
  gauss *= half;
  resabs *= std::abs(half);
  resasc *= std::abs(half);

  double err = std::abs(kronrod - gauss);
  if (resasc != 0.0 && err != 0.0)
    err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
  const double floor = 4.0 * kEps * resabs;
  err = std::max(err, floor);
  if (!std::isfinite(kronrod))
    err = std::numeric_limits<double>::infinity();
  return {a, b, kronrod, err, floor};
}

struct ByError {
  bool operator()(const Panel &x, const Panel &y) const {
    if (x.error != y.error)
      return x.error < y.error;
    return x.a > y.a;
  }
};

QuadratureResult adaptive(const Integrand &f, std::span<const double> breaks,
                          const QuadratureOptions &opts) {
  if (breaks.size() < 2)
    throw std::invalid_argument("integrate: need at least two breakpoints");
  std::vector<Panel> heap;
  heap.reserve(std::max<std::size_t>(opts.max_cells + 1, breaks.size()));
  std::size_t evaluations = 0;
  for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
    if (!(breaks[i] <= breaks[i + 1]) || !std::isfinite(breaks[i]) ||
        !std::isfinite(breaks[i + 1]))
      throw std::invalid_argument("integrate: breakpoints must be finite and sorted");
    if (breaks[i] == breaks[i + 1])
      continue;
    heap.push_back(apply_gk21(f, breaks[i], breaks[i + 1]));
    evaluations += 21;
  }
  if (heap.empty())
    return {0.0, 0.0, evaluations, 0, true};
  std::make_heap(heap.begin(), heap.end(), ByError{});

  auto totals = [&heap]() {
    double value = 0.0, error = 0.0;
    for (const auto &p : heap) {
      value += p.value;
      error += p.error;
    }
    return std::pair{value, error};
  };

  auto [value, error] = totals();
  bool converged = true;
  while (error > std::max(opts.abs_tol, opts.rel_tol * std::abs(value))) {
    const Panel &worst = heap.front();
    // Nothing left to gain: the worst panel is at its roundoff floor or can
    // no longer be split in floating point.
    const double mid = 0.5 * (worst.a + worst.b);
    if (worst.error <= worst.floor * 1.0000001 || !(mid > worst.a && mid < worst.b))
      break;
    if (heap.size() >= opts.max_cells || !std::isfinite(error)) {
      converged = false;
      break;
    }
    std::pop_heap(heap.begin(), heap.end(), ByError{});
    const Panel parent = heap.back();
    heap.pop_back();
    Panel left = apply_gk21(f, parent.a, mid);
    Panel right = apply_gk21(f, mid, parent.b);
    evaluations += 42;
    value += left.value + right.value - parent.value;
    error += left.error + right.error - parent.error;
    heap.push_back(left);
    std::push_heap(heap.begin(), heap.end(), ByError{});
    heap.push_back(right);
    std::push_heap(heap.begin(), heap.end(), ByError{});
    // Re-accumulate periodically to stop drift in the running totals.
    if (heap.size() % 64 == 0)
      std::tie(value, error) = totals();
  }

  std::sort(heap.begin(), heap.end(),
            [](const Panel &x, const Panel &y) { return x.a < y.a; });
  std::vector<double> values(heap.size()), errors(heap.size());
  for (std::size_t i = 0; i < heap.size(); ++i) {
    values[i] = heap[i].value;
    errors[i] = heap[i].error;
  }
  QuadratureResult out{pairwise_sum(values), pairwise_sum(errors), evaluations,
                       heap.size(), converged && std::isfinite(error)};
  if (!out.converged && opts.throw_on_failure) {
    std::ostringstream diag;
    diag << "cells=" << out.cells << " value=" << out.value
         << " error_estimate=" << out.error_estimate;
    throw NumericalError("adaptive quadrature budget exhausted", diag.str());
  }
  return out;
}

} // namespace

double pairwise_sum(std::span<const double> values) {
  return pairwise_sum_range(values.data(), values.size());
}

const GaussKronrod21 &GaussKronrod21::get() {
  static const GaussKronrod21 rule = [] {
    using boost::math::quadrature::gauss;
    using boost::math::quadrature::gauss_kronrod;
    const auto &x = gauss_kronrod<double, 21>::abscissa();
    const auto &wk = gauss_kronrod<double, 21>::weights();
    const auto &wg = gauss<double, 10>::weights();
    GaussKronrod21 r;
    r.nodes[10] = x[0];
    r.kronrod_weights[10] = wk[0];
    for (std::size_t i = 1; i < x.size(); ++i) {
      r.nodes[10 + i] = x[i];
      r.nodes[10 - i] = -x[i];
      r.kronrod_weights[10 + i] = r.kronrod_weights[10 - i] = wk[i];
      // The 10-point Gauss nodes sit at the odd Kronrod positions.
      if (i % 2 == 1)
        r.gauss_weights[10 + i] = r.gauss_weights[10 - i] = wg[i / 2];
    }
    return r;
  }();
  return rule;
}

QuadratureResult integrate(const Integrand &f, double a, double b,
                           const QuadratureOptions &opts) {
  if (a == b)
    return {};
  if (a > b) {
    auto r = integrate(f, b, a, opts);
    r.value = -r.value;
    return r;
  }
  const std::array<double, 2> breaks{a, b};
  return adaptive(f, breaks, opts);
}

QuadratureResult integrate(const Integrand &f, std::span<const double> breakpoints,
                           const QuadratureOptions &opts) {
  return adaptive(f, breakpoints, opts);
}

QuadratureResult integrate_semi_infinite(const Integrand &f, double a, double scale,
                                         const QuadratureOptions &opts) {
  if (!(scale > 0.0))
    throw std::invalid_argument("integrate_semi_infinite: scale must be positive");
  auto mapped = [&](double t) {
    const double u = 1.0 - t;
    if (u <= 0.0)
      return 0.0;
    const double x = a + scale * t / u;
    const double v = f(x) * scale / (u * u);
    return std::isfinite(v) ? v : 0.0;
  };
  return integrate(mapped, 0.0, 1.0, opts);
}

QuadratureResult integrate_log(const Integrand &f, double a, double b,
                               const QuadratureOptions &opts) {
  if (!(a > 0.0) || !(b > a))
    throw std::invalid_argument("integrate_log: need 0 < a < b");
  auto mapped = [&](double u) {
    const double x = std::exp(u);
    return f(x) * x;
  };
  return integrate(mapped, std::log(a), std::log(b), opts);
}

std::pair<double, double> wynn_epsilon(std::span<const double> s) {
  const std::size_t n = s.size();
  if (n == 0)
    return {0.0, 0.0};
  if (n < 3)
    return {s.back(), n == 2 ? std::abs(s[1] - s[0]) : 0.0};

  // prev = eps_{k-1}, cur = eps_k, column by column.
  std::vector<double> prev(n + 1, 0.0), cur(s.begin(), s.end());
  double best = s.back();
  double best_prev = s[n - 2];
  for (std::size_t k = 0; cur.size() > 1; ++k) {
    std::vector<double> next(cur.size() - 1);
    bool ok = true;
    for (std::size_t i = 0; i + 1 < cur.size(); ++i) {
      const double diff = cur[i + 1] - cur[i];
      if (diff == 0.0 || !std::isfinite(diff)) {
        ok = false;
        break;
      }
      next[i] = prev[i + 1] + 1.0 / diff;
    }
    if (!ok)
      break;
    prev = std::move(cur);
    cur = std::move(next);
    // Even columns (k + 1 odd here means eps_{k+1} with k+1 even) are the
    // sequence estimates.
    if ((k + 1) % 2 == 0 && !cur.empty()) {
      best_prev = cur.size() > 1 ? cur[cur.size() - 2] : best;
      best = cur.back();
    }
  }
  return {best, std::abs(best - best_prev)};
}

QuadratureResult integrate_oscillatory(const Integrand &f, double a, double half_period,
                                       const OscillatoryOptions &opts) {
  if (!(half_period > 0.0) || !std::isfinite(half_period))
    throw std::invalid_argument("integrate_oscillatory: half_period must be positive");
  QuadratureOptions local;
  local.abs_tol = 0.01 * opts.abs_tol;
  local.rel_tol = std::min(1e-12, opts.rel_tol);
  local.max_cells = 400;
  local.throw_on_failure = opts.throw_on_failure;

  std::vector<double> partial;
  partial.reserve(256);
  double running = 0.0;
  double abs_running = 0.0;
  double local_error = 0.0;
  std::size_t evaluations = 0;
  double last_estimate = 0.0, last_change = std::numeric_limits<double>::infinity();
  std::size_t small_terms = 0;

  for (std::size_t n = 0; n < opts.max_intervals; ++n) {
    const double lo = a + static_cast<double>(n) * half_period;
    const double hi = lo + half_period;
    const auto piece = integrate(f, lo, hi, local);
    evaluations += piece.evaluations;
    local_error += piece.error_estimate;
    running += piece.value;
    abs_running += std::abs(piece.value);
    partial.push_back(running);

    const double tol = std::max(opts.abs_tol, opts.rel_tol * std::abs(running));
    small_terms = std::abs(piece.value) <= 1e-3 * tol ? small_terms + 1 : 0;
    if (n + 1 < opts.min_intervals)
      continue;
    if (small_terms >= 4) // contributions have died out; plain sum is final
      return {running, local_error + 4.0 * std::abs(piece.value), evaluations, n + 1, true};

    const std::size_t w = std::min(opts.window, partial.size());
    const auto [estimate, diagonal_change] =
        wynn_epsilon(std::span<const double>(partial).last(w));
    const double change = std::abs(estimate - last_estimate);
    const double tol_e = std::max(opts.abs_tol, opts.rel_tol * std::abs(estimate));
    if (change <= tol_e && last_change <= tol_e) {
      const double err = std::max(change, last_change) + local_error +
                         64.0 * kEps * abs_running;
      return {estimate, err, evaluations, n + 1, true};
    }
    (void)diagonal_change;
    last_change = change;
    last_estimate = estimate;
  }
  if (opts.throw_on_failure) {
    std::ostringstream diag;
    diag << "intervals=" << opts.max_intervals << " last_estimate=" << last_estimate
         << " last_change=" << last_change;
    throw NumericalError("oscillatory quadrature did not converge", diag.str());
  }
  return {last_estimate, last_change + local_error, evaluations, opts.max_intervals, false};
}

namespace {

template <std::size_t N> struct Region {
  std::array<double, N> centre{};
  std::array<double, N> half{};
  double value = 0.0;
  double error = 0.0;
  std::size_t split_dim = 0;
};

template <std::size_t N>
using BoxIntegrand = std::function<double(const std::array<double, N> &)>;

// Genz & Malik (1980) degree-7 rule with embedded degree-5 error estimate.
template <std::size_t N>
void apply_genz_malik(const BoxIntegrand<N> &f, Region<N> &reg, std::size_t &evals) {
  static_assert(N >= 2, "Genz-Malik needs at least two dimensions");
  const double n = static_cast<double>(N);
  const double l2 = std::sqrt(9.0 / 70.0);
  const double l3 = std::sqrt(9.0 / 10.0);
  const double l4 = std::sqrt(9.0 / 10.0);
  const double l5 = std::sqrt(9.0 / 19.0);
  const double w1 = (12824.0 - 9120.0 * n + 400.0 * n * n) / 19683.0;
  const double w2 = 980.0 / 6561.0;
  const double w3 = (1820.0 - 400.0 * n) / 19683.0;
  const double w4 = 200.0 / 19683.0;
  const double w5 = 6859.0 / 19683.0 / static_cast<double>(1u << N);
  const double v1 = (729.0 - 950.0 * n + 50.0 * n * n) / 729.0;
  const double v2 = 245.0 / 486.0;
  const double v3 = (265.0 - 100.0 * n) / 1458.0;
  const double v4 = 25.0 / 729.0;

  double volume = 1.0;
  for (std::size_t d = 0; d < N; ++d)
    volume *= 2.0 * reg.half[d];

  auto eval = [&](const std::array<double, N> &x) {
    ++evals;
    return f(x);
  };
  const double f0 = eval(reg.centre);
  double s2 = 0.0, s3 = 0.0, s4 = 0.0, s5 = 0.0;
  std::size_t split = 0;
  double best_diff = -1.0;
  const double ratio = (l2 * l2) / (l3 * l3);
  for (std::size_t d = 0; d < N; ++d) {
    auto x = reg.centre;
    x[d] = reg.centre[d] + l2 * reg.half[d];
    const double p2 = eval(x);
    x[d] = reg.centre[d] - l2 * reg.half[d];
    const double m2 = eval(x);
    x[d] = reg.centre[d] + l3 * reg.half[d];
    const double p3 = eval(x);
    x[d] = reg.centre[d] - l3 * reg.half[d];
    const double m3 = eval(x);
    s2 += p2 + m2;
    s3 += p3 + m3;
    const double diff = std::abs(p2 + m2 - 2.0 * f0 - ratio * (p3 + m3 - 2.0 * f0));
    if (diff > best_diff) {
      best_diff = diff;
      split = d;
    }
  }
  for (std::size_t i = 0; i < N; ++i)
    for (std::size_t j = i + 1; j < N; ++j)
      for (int si : {-1, 1})
        for (int sj : {-1, 1}) {
          auto x = reg.centre;
          x[i] += si * l4 * reg.half[i];
          x[j] += sj * l4 * reg.half[j];
          s4 += eval(x);
        }
  for (std::size_t mask = 0; mask < (1u << N); ++mask) {
    auto x = reg.centre;
    for (std::size_t d = 0; d < N; ++d)
      x[d] += ((mask >> d) & 1u ? 1.0 : -1.0) * l5 * reg.half[d];
    s5 += eval(x);
  }
  const double r7 = volume * (w1 * f0 + w2 * s2 + w3 * s3 + w4 * s4 + w5 * s5);
  const double r5 = volume * (v1 * f0 + v2 * s2 + v3 * s3 + v4 * s4);
  reg.value = r7;
  reg.error = std::abs(r7 - r5);
  if (!std::isfinite(r7))
    reg.error = std::numeric_limits<double>::infinity();
  reg.split_dim = split;
}

template <std::size_t N>
QuadratureResult adaptive_box(const BoxIntegrand<N> &f, const Box<N> &box,
                              const QuadratureOptions &opts) {
  Region<N> root;
  for (std::size_t d = 0; d < N; ++d) {
    if (!(box.upper[d] > box.lower[d]))
      throw std::invalid_argument("integrate_box: empty or inverted box");
    root.centre[d] = 0.5 * (box.lower[d] + box.upper[d]);
    root.half[d] = 0.5 * (box.upper[d] - box.lower[d]);
  }
  std::size_t evals = 0;
  apply_genz_malik<N>(f, root, evals);
  auto cmp = [](const Region<N> &x, const Region<N> &y) {
    if (x.error != y.error)
      return x.error < y.error;
    return x.centre < y.centre;
  };
  std::vector<Region<N>> heap{root};
  double value = root.value, error = root.error;
  bool converged = true;
  while (error > std::max(opts.abs_tol, opts.rel_tol * std::abs(value))) {
    if (heap.size() >= opts.max_cells || !std::isfinite(error)) {
      converged = false;
      break;
    }
    std::pop_heap(heap.begin(), heap.end(), cmp);
    Region<N> parent = heap.back();
    heap.pop_back();
    const std::size_t d = parent.split_dim;
    Region<N> lo = parent, hi = parent;
    lo.half[d] = hi.half[d] = 0.5 * parent.half[d];
    lo.centre[d] = parent.centre[d] - lo.half[d];
    hi.centre[d] = parent.centre[d] + hi.half[d];
    apply_genz_malik<N>(f, lo, evals);
    apply_genz_malik<N>(f, hi, evals);
    value += lo.value + hi.value - parent.value;
    error += lo.error + hi.error - parent.error;
    heap.push_back(lo);
    std::push_heap(heap.begin(), heap.end(), cmp);
    heap.push_back(hi);
    std::push_heap(heap.begin(), heap.end(), cmp);
  }
  std::sort(heap.begin(), heap.end(),
            [](const Region<N> &x, const Region<N> &y) { return x.centre < y.centre; });
  std::vector<double> values(heap.size()), errors(heap.size());
  for (std::size_t i = 0; i < heap.size(); ++i) {
    values[i] = heap[i].value;
    errors[i] = heap[i].error;
  }
  QuadratureResult out{pairwise_sum(values), pairwise_sum(errors), evals, heap.size(),
                       converged};
  if (!converged && opts.throw_on_failure) {
    std::ostringstream diag;
    diag << "cells=" << out.cells << " value=" << out.value
         << " error_estimate=" << out.error_estimate;
    throw NumericalError("adaptive cubature budget exhausted", diag.str());
  }
  return out;
}

} // namespace

QuadratureResult integrate_box(const Integrand2 &f, const Box<2> &box,
                               const QuadratureOptions &opts) {
  return adaptive_box<2>(f, box, opts);
}

QuadratureResult integrate_box(const Integrand3 &f, const Box<3> &box,
                               const QuadratureOptions &opts) {
  return adaptive_box<3>(f, box, opts);
}

namespace {

// Solves for L in v(h) = L + sum_j c_j h^{p_j} by least squares (exact when
// the system is square).
double extrapolate_limit(std::span<const std::pair<double, double>> samples,
                         std::span<const double> exponents) {
  const auto rows = static_cast<Eigen::Index>(samples.size());
  const auto cols = static_cast<Eigen::Index>(exponents.size() + 1);
  Eigen::MatrixXd A(rows, cols);
  Eigen::VectorXd y(rows);
  double h_max = 0.0;
  for (const auto &s : samples)
    h_max = std::max(h_max, std::abs(s.first));
  for (Eigen::Index i = 0; i < rows; ++i) {
    const double h = samples[static_cast<std::size_t>(i)].first / h_max;
    A(i, 0) = 1.0;
    for (Eigen::Index j = 1; j < cols; ++j)
      A(i, j) = std::pow(h, exponents[static_cast<std::size_t>(j - 1)]);
    y(i) = samples[static_cast<std::size_t>(i)].second;
  }
  const Eigen::VectorXd c = A.colPivHouseholderQr().solve(y);
  return c(0);
}

} // namespace

RichardsonResult richardson_extrapolate(std::span<const std::pair<double, double>> samples,
                                        std::span<const double> exponents) {
  if (samples.size() < 2)
    throw std::invalid_argument("richardson_extrapolate: need at least two samples");
  std::vector<std::pair<double, double>> sorted(samples.begin(), samples.end());
  std::sort(sorted.begin(), sorted.end(),
            [](const auto &x, const auto &y) { return x.first > y.first; });
  for (std::size_t i = 0; i + 1 < sorted.size(); ++i)
    if (!(sorted[i].first > sorted[i + 1].first) || !(sorted[i + 1].first > 0.0))
      throw std::invalid_argument("richardson_extrapolate: step sizes must be distinct and positive");

  const std::size_t m = std::min(exponents.size(), sorted.size() - 1);
  const auto used = exponents.first(m);
  RichardsonResult out;
  out.limit = extrapolate_limit(sorted, used);

  if (sorted.size() >= m + 2) {
    // Over-determined: compare against the fit without the coarsest sample.
    out.error_estimate = std::abs(
        out.limit - extrapolate_limit(std::span(sorted).subspan(1), used));
  } else if (m >= 1) {
    // Square: compare against one order lower on the finest samples.
    out.error_estimate = std::abs(
        out.limit - extrapolate_limit(std::span(sorted).subspan(1), used.first(m - 1)));
  } else {
    out.error_estimate = std::abs(sorted.back().second - sorted.front().second);
  }

  double prev_diff = 0.0;
  for (std::size_t i = 0; i + 1 < sorted.size(); ++i) {
    const double diff = sorted[i + 1].second - sorted[i].second;
    if (i > 0 && (diff * prev_diff < 0.0 || std::abs(diff) > std::abs(prev_diff)))
      out.monotone = false;
    prev_diff = diff;
  }
  return out;
}

FitResult linear_fit(std::span<const BasisFunction> basis,
                     std::span<const std::pair<double, double>> samples,
                     std::span<const double> weights, const FitOptions &opts) {
  const auto rows = static_cast<Eigen::Index>(samples.size());
  const auto cols = static_cast<Eigen::Index>(basis.size());
  if (cols == 0)
    throw std::invalid_argument("linear_fit: empty basis");
  if (rows <= cols)
    throw FitError(FitError::Kind::InsufficientSamples,
                   "linear_fit: need more samples than basis functions");
  if (!weights.empty() && weights.size() != samples.size())
    throw std::invalid_argument("linear_fit: weights/samples size mismatch");

  Eigen::MatrixXd A(rows, cols);
  Eigen::VectorXd y(rows);
  for (Eigen::Index i = 0; i < rows; ++i) {
    const auto &[x, v] = samples[static_cast<std::size_t>(i)];
    const double w = weights.empty() ? 1.0 : weights[static_cast<std::size_t>(i)];
    for (Eigen::Index j = 0; j < cols; ++j)
      A(i, j) = w * basis[static_cast<std::size_t>(j)](x);
    y(i) = w * v;
  }
  if (!A.allFinite() || !y.allFinite())
    throw std::invalid_argument("linear_fit: non-finite design matrix or data");

  Eigen::VectorXd scale(cols);
  for (Eigen::Index j = 0; j < cols; ++j) {
    scale(j) = A.col(j).norm();
    if (scale(j) == 0.0)
      throw FitError(FitError::Kind::IllConditioned, "linear_fit: basis column vanishes on samples");
    A.col(j) /= scale(j);
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(A, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto &sv = svd.singularValues();
  const double cond = sv(sv.size() - 1) > 0.0 ? sv(0) / sv(sv.size() - 1)
                                              : std::numeric_limits<double>::infinity();
  if (!(cond <= opts.max_condition)) {
    std::ostringstream diag;
    diag << "condition_number=" << cond;
    throw FitError(FitError::Kind::IllConditioned, "linear_fit: ill-conditioned design",
                   diag.str());
  }
  const Eigen::VectorXd c_scaled = svd.solve(y);
  const Eigen::VectorXd resid = A * c_scaled - y;

  FitResult out;
  out.coefficients.resize(static_cast<std::size_t>(cols));
  for (Eigen::Index j = 0; j < cols; ++j)
    out.coefficients[static_cast<std::size_t>(j)] = c_scaled(j) / scale(j);
  out.condition_number = cond;
  out.residual_norm = resid.norm();
  out.relative_residual = y.norm() > 0.0 ? out.residual_norm / y.norm() : out.residual_norm;
  return out;
}

} // namespace casimir::numerics
