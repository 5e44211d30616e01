// bounds.hpp
// Closed-form attack analysis: single-clone fidelity of the optimal
// universal N->M cloner, the measure-and-prepare (estimation) ceiling, the
// phase-covariant 1->2 cloner, the false-accept probability of the
// threshold verification test, and its average over a random photon-number
// source. Also grid monotonicity checks and the equatorial challenge type.

#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "pufqas/errors.hpp"
#include "pufqas/quantum.hpp"
#include "pufqas/special_functions.hpp"

namespace pufqas {

namespace detail {

// Core fidelity expression with a real copy count; used both for integer
// inputs and for mean-photon-number substitution, where it is a bound and
// may legitimately exceed 1.
inline double uqcm_fidelity_core(double n, double m, double d) {
  return (m - n + n * (m + d)) / (m * (n + d));
}

}  // namespace detail

// Mean single-clone fidelity of the optimal universal N->M cloner on qudits.
inline double uqcm_fidelity(std::int64_t n, std::int64_t m, std::int64_t d) {
  if (n < 1 || m < n) throw std::domain_error("uqcm_fidelity: require 1 <= N <= M");
  if (d < 2) throw invalid_dimension("uqcm_fidelity: d must be >= 2");
  return detail::uqcm_fidelity_core(static_cast<double>(n), static_cast<double>(m),
                                    static_cast<double>(d));
}

// Best mean fidelity achievable by measuring N copies and repreparing:
// (N + 1) / (N + d). This is the infinite-M limit of the cloner.
inline double est_fidelity(std::int64_t n, std::int64_t d) {
  if (n < 1) throw std::domain_error("est_fidelity: N must be >= 1");
  if (d < 2) throw invalid_dimension("est_fidelity: d must be >= 2");
  return (static_cast<double>(n) + 1.0) / (static_cast<double>(n) + static_cast<double>(d));
}

// Mean fidelity of the optimal phase-covariant 1->2 cloner on equatorial
// qudit states. Strictly above the universal 1->2 value for every d.
inline double pqcm_fidelity_1to2(std::int64_t d) {
  if (d < 2) throw invalid_dimension("pqcm_fidelity_1to2: d must be >= 2");
  const double dd = static_cast<double>(d);
  return 1.0 / dd + (dd - 2.0 + std::sqrt(dd * dd + 4.0 * dd - 4.0)) / (4.0 * dd);
}

// Probability that an adversary whose photons each pass independently with
// probability p clears the threshold test: accept iff at least
// ceil(N*m*(1-eps)) of the N*m detected photons pass. Noninteger thresholds
// reduce to the regularized incomplete beta form with n = floor(N*m*(1-eps));
// at integer thresholds the ceiling-indexed direct sum is authoritative and
// is evaluated in log space.
inline double total_false_accept(double p_single, std::int64_t n, std::int64_t m,
                                 double epsilon) {
  if (p_single < 0.0 || p_single > 1.0)
    throw std::domain_error("total_false_accept: p must lie in [0, 1]");
  if (epsilon < 0.0 || epsilon > 1.0)
    throw std::domain_error("total_false_accept: epsilon must lie in [0, 1]");
  if (n < 1 || m < 1) throw std::domain_error("total_false_accept: require N >= 1 and m >= 1");
  const std::int64_t photons = n * m;
  const double threshold = static_cast<double>(photons) * (1.0 - epsilon);
  const double snapped = std::round(threshold);
  const bool integer_threshold =
      std::abs(threshold - snapped) <= 1e-9 * std::max(1.0, std::abs(threshold));
  if (integer_threshold)
    return binomial_tail_sum(photons, static_cast<std::int64_t>(snapped), p_single);
  const std::int64_t below = static_cast<std::int64_t>(std::floor(threshold));
  if (p_single == 0.0) return 0.0;
  if (p_single == 1.0) return 1.0;
  return reg_inc_beta(p_single, static_cast<double>(below) + 1.0,
                      static_cast<double>(photons - below));
}

struct PhotonAvgBound {
  double exact = 0.0;   // expectation of the per-clone fidelity over the source
  double jensen = 0.0;  // closed form at the mean photon number; an upper bound
};

// Average cloner fidelity under a Poisson(mean) photon-number source.
// Vacuum pulses contribute zero; pulses with more photons than clones are
// clamped to N = M (no cloning needed). The expectation is truncated once
// the remaining Poisson mass is below 1e-12, and by concavity it never
// exceeds the mean-substituted closed form.
inline PhotonAvgBound poisson_avg_bound(double mean, std::int64_t m, std::int64_t d) {
  if (mean <= 0.0) throw std::domain_error("poisson_avg_bound: mean must be > 0");
  if (m < 1) throw std::domain_error("poisson_avg_bound: M must be >= 1");
  if (d < 2) throw invalid_dimension("poisson_avg_bound: d must be >= 2");
  const double jensen = detail::uqcm_fidelity_core(mean, static_cast<double>(m),
                                                   static_cast<double>(d));
  const std::int64_t hard_stop =
      static_cast<std::int64_t>(mean + 40.0 * std::sqrt(mean + 1.0) + 100.0);
  double exact = 0.0;
  double mass = 0.0;
  for (std::int64_t k = 0; k <= hard_stop; ++k) {
    const double pk = std::exp(poisson_log_pmf(k, mean));
    mass += pk;
    if (k >= 1) {
      const std::int64_t n_eff = std::min(k, m);
      exact += pk * uqcm_fidelity(n_eff, m, d);
    }
    if (mass >= 1.0 - 1e-12 && static_cast<double>(k) >= mean) break;
  }
  if (exact > jensen + 1e-12)
    throw numeric_error("poisson_avg_bound: averaged value exceeded its bound");
  return {exact, jensen};
}

// Degenerate (variance-free) source emitting exactly n photons per pulse.
// For 1 <= n <= M the average and the bound coincide.
inline PhotonAvgBound fixed_source_avg_bound(std::int64_t n, std::int64_t m,
                                             std::int64_t d) {
  if (n < 1) throw std::domain_error("fixed_source_avg_bound: N must be >= 1");
  if (m < 1) throw std::domain_error("fixed_source_avg_bound: M must be >= 1");
  if (d < 2) throw invalid_dimension("fixed_source_avg_bound: d must be >= 2");
  const double exact = uqcm_fidelity(std::min(n, m), m, d);
  const double jensen = detail::uqcm_fidelity_core(static_cast<double>(n),
                                                   static_cast<double>(m),
                                                   static_cast<double>(d));
  return {exact, jensen};
}

// Validated parameter record for batch bound evaluation. Fields are optional
// so one record can describe any subset of the closed forms.
struct AttackBoundInputs {
  std::optional<std::int64_t> n_photons;
  std::optional<std::int64_t> m_clones;
  std::optional<std::int64_t> d;
  std::optional<double> n_avg;
  std::optional<std::int64_t> m_rounds;
  std::optional<double> epsilon;
  std::optional<double> p_single;

  void validate() const {
    if (n_photons && *n_photons < 1)
      throw std::domain_error("attack bound inputs: N must be >= 1");
    if (m_clones && *m_clones < 1)
      throw std::domain_error("attack bound inputs: M must be >= 1");
    if (n_photons && m_clones && *n_photons > *m_clones)
      throw std::domain_error("attack bound inputs: N must not exceed M");
    if (d && *d < 2) throw std::domain_error("attack bound inputs: d must be >= 2");
    if (n_avg && *n_avg <= 0.0)
      throw std::domain_error("attack bound inputs: mean photon number must be > 0");
    if (m_rounds && *m_rounds < 1)
      throw std::domain_error("attack bound inputs: round count must be >= 1");
    if (epsilon && (*epsilon < 0.0 || *epsilon > 1.0))
      throw std::domain_error("attack bound inputs: epsilon must lie in [0, 1]");
    if (p_single && (*p_single < 0.0 || *p_single > 1.0))
      throw std::domain_error("attack bound inputs: p must lie in [0, 1]");
  }
};

// Challenge state with unit-modulus phases on every basis level, indexed
// symmetrically around zero (levels -l .. l for odd d = 2l + 1). The raw
// amplitude vector uses the as-printed 1/d prefactor, whose square norm is
// 1/d; to_state() applies the explicit normalization and is what the
// protocol consumes.
struct EquatorialState {
  int d;
  std::vector<double> phases;  // phi_l for l = -(d-1)/2 .. (d-1)/2, in level order

  EquatorialState(int dim, std::vector<double> phi) : d(dim), phases(std::move(phi)) {
    if (d < 1 || d % 2 == 0)
      throw invalid_dimension("equatorial state: d must be odd and positive");
    if (static_cast<int>(phases.size()) != d)
      throw dimension_mismatch("equatorial state: need exactly d phases");
  }

  Vector raw_amplitudes() const {
    Vector v(d);
    for (int j = 0; j < d; ++j)
      v(j) = std::polar(1.0 / static_cast<double>(d), phases[static_cast<std::size_t>(j)]);
    return v;
  }

  PureState to_state(const NumericPolicy& policy = {}) const {
    Vector v = raw_amplitudes();
    v /= v.norm();
    return PureState(std::move(v), d, 1, policy);
  }
};

struct MonotonicityViolation {
  std::string quantity;  // which closed form and direction failed
  std::string detail;    // offending grid point and values
};

struct MonotonicityReport {
  std::int64_t checks = 0;
  std::vector<MonotonicityViolation> violations;
  bool ok() const { return violations.empty(); }
};

struct MonotonicityGrid {
  std::vector<std::int64_t> n_values;
  std::vector<std::int64_t> m_values;
  std::vector<std::int64_t> d_values;
  std::vector<double> p_values;
  // Context for the false-accept direction.
  std::int64_t p_check_photons = 5;
  std::int64_t p_check_rounds = 20;
  double p_check_epsilon = 0.3;
};

// Sign checks for the four monotone directions: cloner fidelity rises with
// N, falls with M and with d (the d direction is checked only where N < M,
// where it is strict), and the false-accept probability rises with p. The
// fidelity directions are checked strictly; the p direction flags only
// decreases, because the tail probability saturates at exactly 1.0 in
// double precision and adjacent grid points then legitimately tie.
inline MonotonicityReport monotonicity_report(const MonotonicityGrid& grid) {
  MonotonicityReport report;
  auto fail = [&report](const std::string& q, const std::string& det) {
    report.violations.push_back({q, det});
  };
  auto point = [](std::int64_t n, std::int64_t m, std::int64_t d) {
    return "(N=" + std::to_string(n) + ", M=" + std::to_string(m) +
           ", d=" + std::to_string(d) + ")";
  };

  for (const auto m : grid.m_values)
    for (const auto d : grid.d_values)
      for (std::size_t i = 0; i + 1 < grid.n_values.size(); ++i) {
        const auto n0 = grid.n_values[i];
        const auto n1 = grid.n_values[i + 1];
        if (n1 > m) continue;
        ++report.checks;
        if (!(uqcm_fidelity(n1, m, d) > uqcm_fidelity(n0, m, d)))
          fail("uqcm_fidelity increasing in N", point(n1, m, d));
      }

  for (const auto n : grid.n_values)
    for (const auto d : grid.d_values)
      for (std::size_t i = 0; i + 1 < grid.m_values.size(); ++i) {
        const auto m0 = grid.m_values[i];
        const auto m1 = grid.m_values[i + 1];
        if (n > m0) continue;
        ++report.checks;
        if (!(uqcm_fidelity(n, m1, d) < uqcm_fidelity(n, m0, d)))
          fail("uqcm_fidelity decreasing in M", point(n, m1, d));
      }

  for (const auto n : grid.n_values)
    for (const auto m : grid.m_values) {
      if (n >= m) continue;  // at N = M the fidelity is 1 for every d
      for (std::size_t i = 0; i + 1 < grid.d_values.size(); ++i) {
        const auto d0 = grid.d_values[i];
        const auto d1 = grid.d_values[i + 1];
        ++report.checks;
        if (!(uqcm_fidelity(n, m, d1) < uqcm_fidelity(n, m, d0)))
          fail("uqcm_fidelity decreasing in d", point(n, m, d1));
      }
    }

  for (std::size_t i = 0; i + 1 < grid.p_values.size(); ++i) {
    const double p0 = grid.p_values[i];
    const double p1 = grid.p_values[i + 1];
    ++report.checks;
    const double t0 = total_false_accept(p0, grid.p_check_photons, grid.p_check_rounds,
                                         grid.p_check_epsilon);
    const double t1 = total_false_accept(p1, grid.p_check_photons, grid.p_check_rounds,
                                         grid.p_check_epsilon);
    if (t1 < t0)
      fail("total_false_accept increasing in p",
           "p=" + std::to_string(p1) + " vs p=" + std::to_string(p0));
  }

  return report;
}

}  // namespace pufqas
