// cloning.hpp
// Symmetric subspace machinery and the optimal universal N->M cloning
// channel on qudits, realized densely as
//   rho = (D_N / D_M) * S_M (sigma tensor 1^{M-N}) S_M,
// with S_M the symmetric-subspace projector and D_k the subspace dimension.
// Everything here is deliberately brute force so it can serve as an
// independent oracle for the closed-form fidelities at small dimension.

#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <vector>

#include "pufqas/quantum.hpp"

namespace pufqas {

struct CloneParams {
  int n_in;
  int m_out;
  int d;

  CloneParams(int n, int m, int dim) : n_in(n), m_out(m), d(dim) {
    if (n < 1 || m < n) throw std::domain_error("clone params: require 1 <= N <= M");
    if (dim < 2) throw invalid_dimension("clone params: d must be >= 2");
  }
};

// Dimension of the symmetric subspace of k qudits, C(k + d - 1, k), exact.
inline std::int64_t sym_dim(int k, int d) {
  if (k < 0) throw std::domain_error("sym_dim: k must be >= 0");
  if (d < 2) throw invalid_dimension("sym_dim: d must be >= 2");
  unsigned __int128 r = 1;
  for (int i = 1; i <= k; ++i) {
    r = r * static_cast<unsigned __int128>(d - 1 + i);
    r /= static_cast<unsigned __int128>(i);  // exact at every step
    if (r > static_cast<unsigned __int128>(INT64_MAX))
      throw capacity_error("sym_dim: value exceeds the 64-bit range");
  }
  return static_cast<std::int64_t>(r);
}

namespace detail {

// Basis index permutation: output digit t takes input digit perm[t].
inline std::int64_t permute_index(std::int64_t x, const std::vector<int>& perm,
                                  int d, int k) {
  std::vector<int> digit(k);
  std::int64_t rest = x;
  for (int t = k - 1; t >= 0; --t) {
    digit[t] = static_cast<int>(rest % d);
    rest /= d;
  }
  std::int64_t y = 0;
  for (int t = 0; t < k; ++t) y = y * d + digit[perm[t]];
  return y;
}

}  // namespace detail

// Permutation operator on (C^d)^{tensor k} for the given rearrangement.
inline Matrix permutation_operator(const std::vector<int>& perm, int d) {
  const int k = static_cast<int>(perm.size());
  const std::int64_t dim = detail::pow_i64(d, k);
  Matrix p = Matrix::Zero(dim, dim);
  for (std::int64_t x = 0; x < dim; ++x)
    p(detail::permute_index(x, perm, d, k), x) = Complex(1.0, 0.0);
  return p;
}

// Projector onto the symmetric subspace of k qudits, averaged over all k!
// permutation operators.
class SymmetricProjector {
 public:
  SymmetricProjector(int k, int d, const NumericPolicy& policy = {})
      : k_(k), d_(d) {
    if (k < 1) throw std::domain_error("symmetric projector: k must be >= 1");
    if (d < 2) throw invalid_dimension("symmetric projector: d must be >= 2");
    if (k > policy.sym_factor_cap)
      throw capacity_error("symmetric projector: factor count exceeds the permutation cap");
    const std::int64_t dim = detail::pow_checked(d, k, policy.clone_dim_cap,
                                                 "symmetric projector");
    matrix_ = Matrix::Zero(dim, dim);
    std::vector<int> perm(k);
    std::iota(perm.begin(), perm.end(), 0);
    double count = 0.0;
    do {
      for (std::int64_t x = 0; x < dim; ++x)
        matrix_(detail::permute_index(x, perm, d, k), x) += Complex(1.0, 0.0);
      count += 1.0;
    } while (std::next_permutation(perm.begin(), perm.end()));
    matrix_ /= count;
  }

  int k() const { return k_; }
  int d() const { return d_; }
  std::int64_t dim() const { return matrix_.rows(); }
  const Matrix& matrix() const { return matrix_; }

 private:
  int k_;
  int d_;
  Matrix matrix_;
};

inline SymmetricProjector sym_projector(int k, int d, const NumericPolicy& policy = {}) {
  return SymmetricProjector(k, d, policy);
}

// Optimal universal N->M cloning of |psi>, with a prebuilt projector for
// callers that loop. The output is an M-factor density operator supported
// on the symmetric subspace.
inline DensityOperator uqcm_clone(const PureState& psi, const CloneParams& params,
                                  const SymmetricProjector& sym,
                                  const NumericPolicy& policy = {}) {
  if (psi.factors() != 1)
    throw std::invalid_argument("uqcm_clone: input must be a single-factor state");
  if (psi.local_dim() != params.d)
    throw dimension_mismatch("uqcm_clone: state dimension does not match params");
  if (sym.k() != params.m_out || sym.d() != params.d)
    throw dimension_mismatch("uqcm_clone: projector does not match params");

  const PureState psi_n = tensor_power(psi, params.n_in, policy);
  const Matrix sigma = psi_n.amplitudes() * psi_n.amplitudes().adjoint();
  const std::int64_t dim_rest = detail::pow_i64(params.d, params.m_out - params.n_in);
  const Matrix extended =
      detail::kron(sigma, Matrix::Identity(dim_rest, dim_rest));
  Matrix out = sym.matrix() * extended * sym.matrix();
  out *= static_cast<double>(sym_dim(params.n_in, params.d)) /
         static_cast<double>(sym_dim(params.m_out, params.d));
  out = 0.5 * (out + out.adjoint().eval());  // scrub round-off asymmetry
  return DensityOperator(std::move(out), params.d, params.m_out, policy);
}

inline DensityOperator uqcm_clone(const PureState& psi, const CloneParams& params,
                                  const NumericPolicy& policy = {}) {
  return uqcm_clone(psi, params, SymmetricProjector(params.m_out, params.d, policy),
                    policy);
}

// Reduced state of one clone. All single-factor marginals of a cloner output
// must agree; disagreement beyond tolerance raises.
inline DensityOperator single_clone_state(const DensityOperator& rho_m,
                                          const NumericPolicy& policy = {}) {
  if (rho_m.factors() == 1) return rho_m;
  DensityOperator first = partial_trace(rho_m, {0}, policy);
  for (int t = 1; t < rho_m.factors(); ++t) {
    const DensityOperator other = partial_trace(rho_m, {t}, policy);
    const double dev = (first.matrix() - other.matrix()).cwiseAbs().maxCoeff();
    if (dev > policy.sym_tol)
      throw symmetry_violation("single_clone_state: marginals disagree across factors");
  }
  return first;
}

struct McEstimate {
  double mean = 0.0;
  double std_error = 0.0;
  std::int64_t samples = 0;
};

// Monte Carlo mean single-clone fidelity over Haar-random inputs. Every
// sample runs on its own derived rng stream, so the estimate is independent
// of evaluation order and the caller's generator is never advanced.
inline McEstimate avg_clone_fidelity_mc(const CloneParams& params, std::int64_t samples,
                                        const SeededRng& rng,
                                        const NumericPolicy& policy = {}) {
  if (samples < 100) throw std::domain_error("avg_clone_fidelity_mc: need >= 100 samples");
  const SymmetricProjector sym(params.m_out, params.d, policy);
  double sum = 0.0;
  double sumsq = 0.0;
  for (std::int64_t i = 0; i < samples; ++i) {
    SeededRng sample_rng = rng.derived(static_cast<std::uint64_t>(i));
    const PureState psi = haar_state(params.d, sample_rng);
    const DensityOperator clones = uqcm_clone(psi, params, sym, policy);
    const DensityOperator one = single_clone_state(clones, policy);
    const double f = fidelity(psi, one, policy);
    sum += f;
    sumsq += f * f;
  }
  const double n = static_cast<double>(samples);
  const double mean = sum / n;
  const double var = std::max(0.0, (sumsq - n * mean * mean) / (n - 1.0));
  return {mean, std::sqrt(var / n), samples};
}

}  // namespace pufqas
