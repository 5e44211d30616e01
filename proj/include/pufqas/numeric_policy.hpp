// numeric_policy.hpp
// Single record of tolerances and size caps used across the library.
// Every validating constructor and capped operation accepts one of these;
// the defaults are what the test suite pins down.

#pragma once

#include <cstdint>

namespace pufqas {

struct NumericPolicy {
  // Unit-norm tolerance for pure state vectors.
  double norm_tol = 1e-12;
  // Structural checks: Hermiticity, unit trace, unitarity deviation.
  double structural_tol = 1e-10;
  // Allowed negativity of density-operator eigenvalues, and the slack with
  // which fidelities may fall outside [0, 1] before being clamped.
  double psd_slack = 1e-9;
  // Projector idempotence and clone-marginal agreement tolerance.
  double sym_tol = 1e-9;
  // Largest total dimension tensor_power may produce.
  std::int64_t tensor_dim_cap = 1'000'000;
  // Largest d^M the dense cloning channel and symmetrizer may materialize.
  std::int64_t clone_dim_cap = 4096;
  // Largest factor count for explicit k!-term permutation averaging.
  int sym_factor_cap = 8;
};

}  // namespace pufqas
