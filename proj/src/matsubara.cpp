#include "casimir/matsubara.hpp"

#include "casimir/errors.hpp"

#include <cmath>
#include <exception>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <thread>
#include <vector>

namespace casimir {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr std::int64_t kFirstBlock = 32;
// Below this fitted exponent the tail sum is treated as not yet asymptotic.
constexpr double kMinTailExponent = 1.05;

struct TailFit {
  bool valid = false;
  double exponent = 0.0;
  double value = 0.0;   // contribution of both signs of n beyond N
  double bound = 0.0;   // crude magnitude used when no fit is possible
};

void evaluate_terms(const MatsubaraSummand &f, double beta, std::int64_t first,
                    std::vector<double> &out, unsigned workers) {
  const std::size_t count = out.size();
  auto run = [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i)
      out[i] = f(matsubara_wavenumber(first + static_cast<std::int64_t>(i), beta));
  };
  if (workers <= 1 || count < 4096) {
    run(0, count);
    return;
  }
  const std::size_t chunk = (count + workers - 1) / workers;
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(workers);
  for (unsigned w = 0; w < workers; ++w) {
    const std::size_t begin = std::min(count, w * chunk);
    const std::size_t end = std::min(count, begin + chunk);
    pool.emplace_back([&, w, begin, end] {
      try {
        run(begin, end);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto &t : pool)
    t.join();
  for (auto &e : errors)
    if (e)
      std::rethrow_exception(e);
}

// Least-squares fit of log|t_n| = log c - p log n on nine points spread
// over the decade ending at N.
TailFit fit_tail(const MatsubaraSummand &f, double beta, std::int64_t N) {
  TailFit fit;
  std::vector<double> xs, ys;
  int sign = 0;
  bool degenerate = false;
  double last = 0.0;
  for (int j = 0; j <= 8; ++j) {
    const auto n = static_cast<std::int64_t>(std::llround(static_cast<double>(N) * std::pow(10.0, -j / 8.0)));
    const double t = f(matsubara_wavenumber(n, beta));
    if (j == 0)
      last = t;
    if (t == 0.0 || !std::isfinite(t)) {
      degenerate = true;
      continue;
    }
    const int s = t > 0.0 ? 1 : -1;
    if (sign != 0 && s != sign)
      degenerate = true;
    sign = s;
    xs.push_back(std::log(static_cast<double>(n)));
    ys.push_back(std::log(std::abs(t)));
  }
  fit.bound = 2.0 * std::abs(last) * static_cast<double>(N);
  if (degenerate || xs.size() < 3)
    return fit;

  const double m = static_cast<double>(xs.size());
  double sx = 0, sy = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sx += xs[i];
    sy += ys[i];
  }
  const double mx = sx / m, my = sy / m;
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
  }
  const double p = -sxy / sxx;
  fit.exponent = p;
  if (!(p > kMinTailExponent))
    return fit;

  const double Nd = static_cast<double>(N);
  const double logc = my + p * mx;
  const double tN = sign * std::exp(logc - p * std::log(Nd));
  // Euler-Maclaurin: sum_{n>N} c n^-p = c [N^{1-p}/(p-1) - N^-p/2 + p N^{-p-1}/12].
  fit.value = 2.0 * tN * (Nd / (p - 1.0) - 0.5 + p / (12.0 * Nd));
  fit.valid = true;
  return fit;
}

} // namespace

double matsubara_wavenumber(std::int64_t n, double beta) {
  return 2.0 * kPi * std::abs(static_cast<double>(n)) / beta;
}

double oscillator_sum_closed(double beta, double hbar_omega0) {
  if (!(beta > 0.0) || !std::isfinite(beta))
    throw std::invalid_argument("oscillator_sum_closed: beta must be finite and positive");
  if (!(hbar_omega0 >= 0.0) || !std::isfinite(hbar_omega0))
    throw std::invalid_argument("oscillator_sum_closed: hbar_omega0 must be finite and >= 0");
  const double x = 0.5 * beta * hbar_omega0;
  if (x < 1e-4)
    return 1.0 + x * x / 3.0 - x * x * x * x / 45.0;
  // tanh(x) rounds to 1 well before x = 20.
  if (x > 20.0)
    return x;
  return x / std::tanh(x);
}

SumResult matsubara_sum(const MatsubaraSummand &f, const ThermalState &state) {
  if (!(state.beta > 0.0) || !std::isfinite(state.beta))
    throw std::invalid_argument("matsubara_sum: beta must be finite and positive");
  if (state.max_index < kFirstBlock)
    throw std::invalid_argument("matsubara_sum: max_index too small");

  const double f0 = f(0.0);
  std::vector<double> block_sums;
  std::vector<double> terms;
  std::int64_t N = 0;
  double previous = 0.0;
  bool have_previous = false;
  std::ostringstream history;

  for (std::int64_t next = kFirstBlock;; next *= 2) {
    if (next > state.max_index) {
      std::ostringstream diag;
      diag << "terms_used=" << N << " max_index=" << state.max_index
           << " history=[" << history.str() << "]";
      throw NumericalError("Matsubara sum did not converge", diag.str());
    }
    terms.assign(static_cast<std::size_t>(next - N), 0.0);
    evaluate_terms(f, state.beta, N + 1, terms, state.workers);
    block_sums.push_back(numerics::pairwise_sum(terms));
    N = next;

    const double partial = f0 + 2.0 * numerics::pairwise_sum(block_sums);
    const TailFit tail = fit_tail(f, state.beta, N);

    double estimate = partial;
    double tail_size = tail.valid ? std::abs(tail.value) : tail.bound;
    if (state.tail_policy == TailPolicy::PowerLaw && tail.valid)
      estimate += tail.value;
    history << (history.tellp() > 0 ? "," : "") << N << ":" << estimate;

    const double tol = state.rel_tol * std::abs(estimate);
    bool converged = false;
    double error = 0.0;
    if (state.tail_policy == TailPolicy::PowerLaw) {
      const double change = have_previous ? std::abs(estimate - previous) : INFINITY;
      const bool tail_ok = tail.valid || tail.bound <= tol;
      converged = have_previous && tail_ok && change <= tol;
      error = change;
    } else {
      converged = tail_size <= tol;
      error = tail_size;
    }
    if (converged) {
      SumResult out;
      out.value = estimate;
      out.truncation_error_estimate = error;
      out.terms_used = N;
      out.tail_estimate = state.tail_policy == TailPolicy::PowerLaw && tail.valid ? tail.value : 0.0;
      out.tail_exponent = tail.valid ? tail.exponent : 0.0;
      return out;
    }
    previous = estimate;
    have_previous = true;
  }
}

numerics::QuadratureResult zero_T_integral(const std::function<double(double)> &g, double tol,
                                           double scale) {
  if (!(tol > 0.0))
    throw std::invalid_argument("zero_T_integral: tol must be positive");
  if (!(scale > 0.0))
    throw std::invalid_argument("zero_T_integral: scale must be positive");
  numerics::QuadratureOptions opts;
  opts.abs_tol = 1e-300;
  opts.rel_tol = tol;
  auto q = numerics::integrate_semi_infinite(g, 0.0, scale, opts);
  q.value /= kPi;
  q.error_estimate /= kPi;
  if (q.error_estimate > tol * std::abs(q.value) && q.error_estimate > 1e-300) {
    std::ostringstream diag;
    diag << "value=" << q.value << " error_estimate=" << q.error_estimate << " tol=" << tol;
    throw NumericalError("zero-temperature integral missed its tolerance", diag.str());
  }
  return q;
}

} // namespace casimir
