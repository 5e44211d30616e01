// quantum.hpp
// Finite-dimensional complex Hilbert space primitives: pure states, density
// operators and unitaries over k factors of local dimension d, Haar
// sampling, tensor powers, partial trace, fidelity and projective
// measurement. Factor indices are zero-based throughout.

#pragma once

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "pufqas/errors.hpp"
#include "pufqas/numeric_policy.hpp"
#include "pufqas/rng.hpp"

namespace pufqas {

using Complex = std::complex<double>;
using Vector = Eigen::VectorXcd;
using Matrix = Eigen::MatrixXcd;

namespace detail {

// base^exp as a 64-bit integer; throws once the value would exceed cap.
inline std::int64_t pow_checked(std::int64_t base, int exp, std::int64_t cap,
                                const char* what) {
  std::int64_t r = 1;
  for (int i = 0; i < exp; ++i) {
    if (base != 0 && r > cap / base)
      throw capacity_error(std::string(what) + ": dimension exceeds cap");
    r *= base;
  }
  if (r > cap) throw capacity_error(std::string(what) + ": dimension exceeds cap");
  return r;
}

inline std::int64_t pow_i64(std::int64_t base, int exp) {
  return pow_checked(base, exp, std::numeric_limits<std::int64_t>::max() / 2, "pow");
}

inline Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

inline Vector kron_vec(const Vector& a, const Vector& b) {
  Vector out(a.size() * b.size());
  for (Eigen::Index i = 0; i < a.size(); ++i)
    out.segment(i * b.size(), b.size()) = a(i) * b;
  return out;
}

// Apply a d x d operator to tensor factor `factor` of a d^k vector.
// Factor 0 owns the most significant digit of the basis index.
inline Vector apply_factor(const Matrix& u, const Vector& v, int factor, int d, int k) {
  const std::int64_t stride = pow_i64(d, k - 1 - factor);
  const std::int64_t block = stride * d;
  Vector out(v.size());
  Vector seg_in(d), seg_out(d);
  for (std::int64_t base = 0; base < v.size(); base += block) {
    for (std::int64_t s = 0; s < stride; ++s) {
      for (int j = 0; j < d; ++j) seg_in(j) = v(base + j * stride + s);
      seg_out.noalias() = u * seg_in;
      for (int j = 0; j < d; ++j) out(base + j * stride + s) = seg_out(j);
    }
  }
  return out;
}

// Left-multiply every column of m by u^{tensor k}.
inline Matrix apply_all_factors_left(const Matrix& u, const Matrix& m, int d, int k) {
  Matrix out = m;
  for (Eigen::Index c = 0; c < out.cols(); ++c) {
    Vector col = out.col(c);
    for (int t = 0; t < k; ++t) col = apply_factor(u, col, t, d, k);
    out.col(c) = col;
  }
  return out;
}

}  // namespace detail

class DensityOperator;

// Normalized state vector over `factors` subsystems of dimension `local_dim`.
class PureState {
 public:
  PureState(Vector amplitudes, int local_dim, int factors,
            const NumericPolicy& policy = {})
      : amplitudes_(std::move(amplitudes)), local_dim_(local_dim), factors_(factors) {
    if (local_dim_ < 1) throw invalid_dimension("pure state: local dimension must be >= 1");
    if (factors_ < 1) throw invalid_dimension("pure state: factor count must be >= 1");
    const std::int64_t want = detail::pow_i64(local_dim_, factors_);
    if (want != amplitudes_.size())
      throw dimension_mismatch("pure state: amplitude length is not local_dim^factors");
    const double n = amplitudes_.norm();
    if (std::abs(n - 1.0) > policy.norm_tol)
      throw numeric_error("pure state: vector is not normalized");
  }

  // Computational basis vector |index> of a single d-dimensional factor.
  static PureState basis(int d, int index) {
    if (d < 1) throw invalid_dimension("basis: d must be >= 1");
    if (index < 0 || index >= d) throw std::out_of_range("basis: index outside [0, d)");
    Vector v = Vector::Zero(d);
    v(index) = Complex(1.0, 0.0);
    return PureState(std::move(v), d, 1);
  }

  std::int64_t dim() const { return amplitudes_.size(); }
  int local_dim() const { return local_dim_; }
  int factors() const { return factors_; }
  const Vector& amplitudes() const { return amplitudes_; }

  // <this|other>.
  Complex overlap(const PureState& other) const {
    if (dim() != other.dim()) throw dimension_mismatch("overlap: dimensions differ");
    return amplitudes_.dot(other.amplitudes_);
  }

  DensityOperator projector(const NumericPolicy& policy = {}) const;

 private:
  Vector amplitudes_;
  int local_dim_;
  int factors_;
};

class UnitaryMatrix {
 public:
  explicit UnitaryMatrix(Matrix m, const NumericPolicy& policy = {})
      : matrix_(std::move(m)) {
    if (matrix_.rows() < 1 || matrix_.rows() != matrix_.cols())
      throw invalid_dimension("unitary: matrix must be square and nonempty");
    const Matrix dev = matrix_ * matrix_.adjoint() -
                       Matrix::Identity(matrix_.rows(), matrix_.cols());
    if (dev.cwiseAbs().maxCoeff() > policy.structural_tol)
      throw numeric_error("unitary: U U^dagger deviates from the identity");
  }

  static UnitaryMatrix identity(int d) {
    if (d < 1) throw invalid_dimension("identity: d must be >= 1");
    return UnitaryMatrix(Matrix::Identity(d, d));
  }

  int dim() const { return static_cast<int>(matrix_.rows()); }
  const Matrix& matrix() const { return matrix_; }

 private:
  Matrix matrix_;
};

// Hermitian, unit-trace, positive-semidefinite (within slack) operator over
// `factors` subsystems of dimension `local_dim`.
class DensityOperator {
 public:
  DensityOperator(Matrix m, int local_dim, int factors,
                  const NumericPolicy& policy = {})
      : matrix_(std::move(m)), local_dim_(local_dim), factors_(factors) {
    if (local_dim_ < 1) throw invalid_dimension("density operator: local dimension must be >= 1");
    if (factors_ < 1) throw invalid_dimension("density operator: factor count must be >= 1");
    if (matrix_.rows() != matrix_.cols())
      throw dimension_mismatch("density operator: matrix must be square");
    const std::int64_t want = detail::pow_i64(local_dim_, factors_);
    if (want != matrix_.rows())
      throw dimension_mismatch("density operator: size is not local_dim^factors");
    if ((matrix_ - matrix_.adjoint()).cwiseAbs().maxCoeff() > policy.structural_tol)
      throw numeric_error("density operator: matrix is not Hermitian");
    if (std::abs(matrix_.trace() - Complex(1.0, 0.0)) > policy.structural_tol)
      throw numeric_error("density operator: trace differs from 1");
    Eigen::SelfAdjointEigenSolver<Matrix> es(matrix_, Eigen::EigenvaluesOnly);
    if (es.eigenvalues().minCoeff() < -policy.psd_slack)
      throw numeric_error("density operator: negative eigenvalue beyond slack");
  }

  std::int64_t dim() const { return matrix_.rows(); }
  int local_dim() const { return local_dim_; }
  int factors() const { return factors_; }
  const Matrix& matrix() const { return matrix_; }

 private:
  Matrix matrix_;
  int local_dim_;
  int factors_;
};

inline DensityOperator PureState::projector(const NumericPolicy& policy) const {
  Matrix m = amplitudes_ * amplitudes_.adjoint();
  return DensityOperator(std::move(m), local_dim_, factors_, policy);
}

// Haar-random pure state: normalized vector of iid complex Gaussians.
inline PureState haar_state(int d, SeededRng& rng) {
  if (d < 2) throw invalid_dimension("haar_state: d must be >= 2");
  Vector v(d);
  for (int i = 0; i < d; ++i) v(i) = rng.complex_normal();
  const double n = v.norm();
  if (n == 0.0) throw numeric_error("haar_state: degenerate Gaussian draw");
  v /= n;
  return PureState(std::move(v), d, 1);
}

// Haar-random unitary: QR of a complex Ginibre matrix with the diagonal of R
// rephased to unit modulus, which corrects the QR gauge to exact Haar.
inline UnitaryMatrix haar_unitary(int d, SeededRng& rng) {
  if (d < 2) throw invalid_dimension("haar_unitary: d must be >= 2");
  Matrix z(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) z(i, j) = rng.complex_normal();
  Eigen::HouseholderQR<Matrix> qr(z);
  Matrix q = qr.householderQ();
  const Matrix& r = qr.matrixQR();
  for (int i = 0; i < d; ++i) {
    const Complex rii = r(i, i);
    const double mag = std::abs(rii);
    q.col(i) *= (mag > 0.0) ? rii / mag : Complex(1.0, 0.0);
  }
  return UnitaryMatrix(std::move(q));
}

// |psi>^{tensor n} of a single-factor state.
inline PureState tensor_power(const PureState& psi, int n,
                              const NumericPolicy& policy = {}) {
  if (psi.factors() != 1)
    throw std::invalid_argument("tensor_power: input must be a single-factor state");
  if (n < 1) throw std::invalid_argument("tensor_power: n must be >= 1");
  detail::pow_checked(psi.local_dim(), n, policy.tensor_dim_cap, "tensor_power");
  Vector out = psi.amplitudes();
  for (int i = 1; i < n; ++i) out = detail::kron_vec(out, psi.amplitudes());
  return PureState(std::move(out), psi.local_dim(), n, policy);
}

// Partial trace onto the factors listed in `keep` (zero-based, may be given
// in any order; the kept factors stay in ascending position order).
inline DensityOperator partial_trace(const DensityOperator& rho,
                                     const std::vector<int>& keep,
                                     const NumericPolicy& policy = {}) {
  const int k = rho.factors();
  const int d = rho.local_dim();
  if (keep.empty()) throw std::domain_error("partial_trace: keep set is empty");
  std::vector<int> kv = keep;
  std::sort(kv.begin(), kv.end());
  for (std::size_t i = 0; i < kv.size(); ++i) {
    if (kv[i] < 0 || kv[i] >= k) throw std::domain_error("partial_trace: factor index out of range");
    if (i > 0 && kv[i] == kv[i - 1]) throw std::domain_error("partial_trace: duplicate factor index");
  }
  std::vector<int> tv;
  for (int t = 0, j = 0; t < k; ++t) {
    if (j < static_cast<int>(kv.size()) && kv[j] == t) ++j;
    else tv.push_back(t);
  }

  std::vector<std::int64_t> place(k);
  place[k - 1] = 1;
  for (int t = k - 2; t >= 0; --t) place[t] = place[t + 1] * d;

  // Expand compact kept / traced indices into full-space offsets.
  auto expand = [&](const std::vector<int>& slots) {
    const std::int64_t n = detail::pow_i64(d, static_cast<int>(slots.size()));
    std::vector<std::int64_t> table(static_cast<std::size_t>(n), 0);
    for (std::int64_t x = 0; x < n; ++x) {
      std::int64_t rest = x;
      for (int j = static_cast<int>(slots.size()) - 1; j >= 0; --j) {
        table[static_cast<std::size_t>(x)] += (rest % d) * place[slots[j]];
        rest /= d;
      }
    }
    return table;
  };
  const auto keep_off = expand(kv);
  const auto tr_off = tv.empty() ? std::vector<std::int64_t>{0} : expand(tv);

  const std::int64_t dim_keep = static_cast<std::int64_t>(keep_off.size());
  Matrix out = Matrix::Zero(dim_keep, dim_keep);
  for (std::int64_t a = 0; a < dim_keep; ++a)
    for (std::int64_t b = 0; b < dim_keep; ++b) {
      Complex acc(0.0, 0.0);
      for (const std::int64_t c : tr_off)
        acc += rho.matrix()(keep_off[a] + c, keep_off[b] + c);
      out(a, b) = acc;
    }
  return DensityOperator(std::move(out), d, static_cast<int>(kv.size()), policy);
}

// <psi|rho|psi>, clamped to [0, 1]; values outside the slack window indicate
// a broken operator and raise instead of being clamped.
inline double fidelity(const PureState& psi, const DensityOperator& rho,
                       const NumericPolicy& policy = {}) {
  if (psi.dim() != rho.dim()) throw dimension_mismatch("fidelity: dimensions differ");
  const Complex val = psi.amplitudes().dot(rho.matrix() * psi.amplitudes());
  const double f = val.real();
  if (f < -policy.psd_slack || f > 1.0 + policy.psd_slack)
    throw numeric_error("fidelity: value outside [0, 1] beyond slack");
  return std::min(1.0, std::max(0.0, f));
}

// Apply u to every factor of the state: |psi> -> u^{tensor k} |psi>.
inline PureState apply_unitary(const UnitaryMatrix& u, const PureState& psi,
                               const NumericPolicy& policy = {}) {
  if (u.dim() != psi.local_dim())
    throw dimension_mismatch("apply_unitary: operator does not match the local dimension");
  Vector v = psi.amplitudes();
  for (int t = 0; t < psi.factors(); ++t)
    v = detail::apply_factor(u.matrix(), v, t, psi.local_dim(), psi.factors());
  return PureState(std::move(v), psi.local_dim(), psi.factors(), policy);
}

// rho -> u^{tensor k} rho (u^{tensor k})^dagger.
inline DensityOperator apply_unitary(const UnitaryMatrix& u, const DensityOperator& rho,
                                     const NumericPolicy& policy = {}) {
  if (u.dim() != rho.local_dim())
    throw dimension_mismatch("apply_unitary: operator does not match the local dimension");
  const int d = rho.local_dim();
  const int k = rho.factors();
  Matrix b = detail::apply_all_factors_left(u.matrix(), rho.matrix(), d, k);
  Matrix c = detail::apply_all_factors_left(u.matrix(), b.adjoint(), d, k).adjoint();
  return DensityOperator(std::move(c), d, k, policy);
}

// Projective yes/no measurement of rho against |chi><chi|; returns 1 with
// probability <chi|rho|chi> using a single rng draw.
inline int measure_accept(const DensityOperator& rho, const PureState& chi,
                          SeededRng& rng, const NumericPolicy& policy = {}) {
  const double p = fidelity(chi, rho, policy);
  return rng.bernoulli(p) ? 1 : 0;
}

}  // namespace pufqas
