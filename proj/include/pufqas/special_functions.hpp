// special_functions.hpp
// Log-space binomial coefficients, the regularized incomplete beta and gamma
// functions (continued-fraction evaluation in the Numerical Recipes style),
// and the exact binomial / Poisson tail helpers built on them.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>

namespace pufqas {

inline double log_factorial(std::int64_t n) {
  if (n < 0) throw std::domain_error("log_factorial: n must be >= 0");
  return std::lgamma(static_cast<double>(n) + 1.0);
}

// log C(n, k); exact to ~1e-14 relative for n up to ~1e6.
inline double log_binomial(std::int64_t n, std::int64_t k) {
  if (k < 0 || n < 0 || k > n) throw std::domain_error("log_binomial: need 0 <= k <= n");
  return log_factorial(n) - log_factorial(k) - log_factorial(n - k);
}

namespace detail {

// Continued fraction for the incomplete beta function (modified Lentz).
inline double beta_cf(double a, double b, double x) {
  constexpr int kMaxIter = 500;
  constexpr double kEps = 1e-15;
  constexpr double kTiny = 1e-300;
  const double qab = a + b;
  const double qap = a + 1.0;
  const double qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::abs(d) < kTiny) d = kTiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= kMaxIter; ++m) {
    const int m2 = 2 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < kEps) break;
  }
  return h;
}

// Lower regularized incomplete gamma via its series expansion (x < a + 1).
inline double gamma_p_series(double a, double x) {
  double ap = a;
  double sum = 1.0 / a;
  double del = sum;
  for (int n = 0; n < 1000; ++n) {
    ap += 1.0;
    del *= x / ap;
    sum += del;
    if (std::abs(del) < std::abs(sum) * 1e-16) break;
  }
  return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

// Upper regularized incomplete gamma via continued fraction (x >= a + 1).
inline double gamma_q_cf(double a, double x) {
  constexpr double kTiny = 1e-300;
  double b = x + 1.0 - a;
  double c = 1.0 / kTiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i <= 1000; ++i) {
    const double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < kTiny) d = kTiny;
    c = b + an / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < 1e-16) break;
  }
  return h * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

}  // namespace detail

// Regularized incomplete beta function I_x(a, b). Uses the continued
// fraction directly where it converges fast and the symmetry
// I_x(a, b) = 1 - I_{1-x}(b, a) elsewhere. Absolute error below ~1e-13.
inline double reg_inc_beta(double x, double a, double b) {
  if (a <= 0.0 || b <= 0.0) throw std::domain_error("reg_inc_beta: a and b must be > 0");
  if (x < 0.0 || x > 1.0) throw std::domain_error("reg_inc_beta: x must lie in [0, 1]");
  if (x == 0.0) return 0.0;
  if (x == 1.0) return 1.0;
  const double front = std::exp(std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                                a * std::log(x) + b * std::log1p(-x));
  if (x < (a + 1.0) / (a + b + 2.0)) return front * detail::beta_cf(a, b, x) / a;
  return 1.0 - front * detail::beta_cf(b, a, 1.0 - x) / b;
}

// Upper tail of a Binomial(trials, p): sum_{k=k_from}^{trials} C(trials,k)
// p^k (1-p)^{trials-k}, accumulated term by term in log space.
inline double binomial_tail_sum(std::int64_t trials, std::int64_t k_from, double p) {
  if (trials < 1) throw std::domain_error("binomial_tail_sum: trials must be >= 1");
  if (p < 0.0 || p > 1.0) throw std::domain_error("binomial_tail_sum: p must lie in [0, 1]");
  if (k_from <= 0) return 1.0;
  if (k_from > trials) return 0.0;
  if (p == 0.0) return 0.0;
  if (p == 1.0) return 1.0;
  const double lp = std::log(p);
  const double lq = std::log1p(-p);
  double sum = 0.0;
  for (std::int64_t k = k_from; k <= trials; ++k)
    sum += std::exp(log_binomial(trials, k) + k * lp + (trials - k) * lq);
  return std::min(1.0, sum);
}

// P(X <= k) for X ~ Binomial(trials, p), through the beta identity
// P(X <= k) = I_{1-p}(trials - k, k + 1).
inline double binomial_cdf(std::int64_t k, std::int64_t trials, double p) {
  if (trials < 1) throw std::domain_error("binomial_cdf: trials must be >= 1");
  if (p < 0.0 || p > 1.0) throw std::domain_error("binomial_cdf: p must lie in [0, 1]");
  if (k < 0) return 0.0;
  if (k >= trials) return 1.0;
  if (p == 0.0) return 1.0;
  if (p == 1.0) return 0.0;  // k < trials here
  return reg_inc_beta(1.0 - p, static_cast<double>(trials - k), static_cast<double>(k + 1));
}

// P(X >= k) for X ~ Binomial(trials, p), through I_p(k, trials - k + 1).
inline double binomial_sf(std::int64_t k, std::int64_t trials, double p) {
  if (trials < 1) throw std::domain_error("binomial_sf: trials must be >= 1");
  if (p < 0.0 || p > 1.0) throw std::domain_error("binomial_sf: p must lie in [0, 1]");
  if (k <= 0) return 1.0;
  if (k > trials) return 0.0;
  if (p == 0.0) return 0.0;
  if (p == 1.0) return 1.0;
  return reg_inc_beta(p, static_cast<double>(k), static_cast<double>(trials - k + 1));
}

// Lower regularized incomplete gamma P(a, x).
inline double gamma_p(double a, double x) {
  if (a <= 0.0) throw std::domain_error("gamma_p: a must be > 0");
  if (x < 0.0) throw std::domain_error("gamma_p: x must be >= 0");
  if (x == 0.0) return 0.0;
  if (x < a + 1.0) return detail::gamma_p_series(a, x);
  return 1.0 - detail::gamma_q_cf(a, x);
}

inline double gamma_q(double a, double x) { return 1.0 - gamma_p(a, x); }

// P(X <= k) for X ~ Poisson(mean), via the gamma identity Q(k + 1, mean).
inline double poisson_cdf(std::int64_t k, double mean) {
  if (mean < 0.0) throw std::domain_error("poisson_cdf: mean must be >= 0");
  if (k < 0) return 0.0;
  if (mean == 0.0) return 1.0;
  return gamma_q(static_cast<double>(k) + 1.0, mean);
}

// log pmf of Poisson(mean) at k.
inline double poisson_log_pmf(std::int64_t k, double mean) {
  if (k < 0 || mean <= 0.0) throw std::domain_error("poisson_log_pmf: bad arguments");
  return static_cast<double>(k) * std::log(mean) - mean - log_factorial(k);
}

}  // namespace pufqas
