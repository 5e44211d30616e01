// protocol.hpp
// Round-based challenge-response verification against an optical PUF whose
// response map is a Haar-random unitary. The verifier sends pulses of
// challenge photons, counts detections (n1) and passed projections (n2),
// aborts when the detection count is inconsistent with the declared loss,
// and accepts when n2 >= (1 - eps) * n1. Provers range from the honest
// token to cloning and measure-resend adversaries.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <unordered_map>
#include <vector>

#include "pufqas/bounds.hpp"
#include "pufqas/cloning.hpp"
#include "pufqas/quantum.hpp"
#include "pufqas/rng.hpp"

namespace pufqas {

// Photon-number distribution of the challenge source.
struct PhotonSource {
  enum class Kind { fixed, poisson };

  Kind kind = Kind::fixed;
  std::int64_t fixed_n = 1;
  double mean = 1.0;

  static PhotonSource fixed(std::int64_t n) {
    if (n < 1) throw std::domain_error("photon source: fixed N must be >= 1");
    PhotonSource s;
    s.kind = Kind::fixed;
    s.fixed_n = n;
    s.mean = static_cast<double>(n);
    return s;
  }

  static PhotonSource poisson(double mean) {
    if (mean <= 0.0) throw std::domain_error("photon source: Poisson mean must be > 0");
    PhotonSource s;
    s.kind = Kind::poisson;
    s.mean = mean;
    s.fixed_n = 0;
    return s;
  }

  double mean_photons() const { return mean; }

  std::int64_t draw(SeededRng& rng) const {
    return kind == Kind::fixed ? fixed_n : rng.poisson(mean);
  }
};

struct ProtocolParams {
  std::int64_t m_rounds = 20;
  double epsilon = 0.25;      // accepted error fraction among detections
  double eta = 1.0;           // detector efficiency at the verifier
  PhotonSource source = PhotonSource::fixed(1);
  double noise_window = 1e-3; // significance of the detection-count test
  bool reuse_challenge = false;  // one challenge for all rounds instead of fresh draws
  bool record_rounds = false;
  std::uint64_t seed = 0;

  void validate() const {
    if (m_rounds < 1) throw std::domain_error("protocol params: need at least one round");
    if (epsilon < 0.0 || epsilon > 1.0)
      throw std::domain_error("protocol params: epsilon must lie in [0, 1]");
    if (eta < 0.0 || eta > 1.0)
      throw std::domain_error("protocol params: eta must lie in [0, 1]");
    if (noise_window <= 0.0 || noise_window >= 1.0)
      throw std::domain_error("protocol params: noise window must lie in (0, 1)");
  }
};

enum class ProverKind { honest, random_key, estimation_attack, uqcm_attack };

// Attack evaluation mode: exact builds the cloner output state per pulse,
// analytic uses the closed-form mean fidelity as a flat rate.
enum class AttackMode { exact_oracle, analytic_rate };

struct ProverStrategy {
  ProverKind kind = ProverKind::honest;
  int m_clones = 2;
  AttackMode mode = AttackMode::analytic_rate;

  static ProverStrategy honest() { return {ProverKind::honest, 2, AttackMode::analytic_rate}; }
  static ProverStrategy random_key() {
    return {ProverKind::random_key, 2, AttackMode::exact_oracle};
  }
  static ProverStrategy estimation() {
    return {ProverKind::estimation_attack, 2, AttackMode::analytic_rate};
  }
  static ProverStrategy uqcm(int m, AttackMode mode) {
    if (m < 1) throw std::domain_error("prover strategy: clone count must be >= 1");
    return {ProverKind::uqcm_attack, m, mode};
  }
};

struct PufRecord {
  std::uint64_t identity;
  UnitaryMatrix reflection;
  int d;
};

// In-memory enrollment registry keyed by token identity.
class PufRegistry {
 public:
  const PufRecord& enroll(int d, SeededRng& rng) {
    const std::uint64_t id = next_id_++;
    auto [it, inserted] = records_.emplace(id, PufRecord{id, haar_unitary(d, rng), d});
    return it->second;
  }

  const PufRecord& lookup(std::uint64_t identity) const {
    const auto it = records_.find(identity);
    if (it == records_.end()) throw std::out_of_range("puf registry: unknown identity");
    return it->second;
  }

  std::size_t size() const { return records_.size(); }

 private:
  std::unordered_map<std::uint64_t, PufRecord> records_;
  std::uint64_t next_id_ = 1;
};

enum class Decision { accept, reject, abort_noise };

inline const char* to_string(Decision d) {
  switch (d) {
    case Decision::accept: return "accept";
    case Decision::reject: return "reject";
    default: return "abort_noise";
  }
}

struct RoundDetail {
  std::int64_t emitted = 0;
  std::int64_t detected = 0;
  std::int64_t passed = 0;
};

struct VerificationTranscript {
  std::int64_t n1 = 0;  // detected response photons
  std::int64_t n2 = 0;  // detections that passed the projection
  std::int64_t rounds = 0;
  Decision decision = Decision::reject;
  std::vector<RoundDetail> per_round;  // filled when params.record_rounds is set
};

// Simulation-side knowledge needed to evaluate a prover's per-photon pass
// probability: the enrolled record, plus the substitute key of a
// random-key adversary.
struct ProverContext {
  const PufRecord* puf = nullptr;
  std::optional<UnitaryMatrix> fake_reflection;
  NumericPolicy policy;
};

// Probability that one returned photon passes the verifier's projection for
// a pulse of n_photons copies of `challenge`. Deterministic given the
// challenge; all randomness lives in the caller.
inline double prover_respond(const ProverStrategy& strategy, const PureState& challenge,
                             std::int64_t n_photons, const ProverContext& ctx) {
  if (n_photons < 1) throw std::domain_error("prover_respond: need at least one photon");
  if (ctx.puf == nullptr) throw std::invalid_argument("prover_respond: missing PUF record");
  const int d = ctx.puf->d;
  if (challenge.local_dim() != d || challenge.factors() != 1)
    throw dimension_mismatch("prover_respond: challenge does not match the PUF dimension");

  switch (strategy.kind) {
    case ProverKind::honest:
      // The token applies the enrolled map, the verifier projects onto the
      // same transformed state; the overlap is exactly one.
      return 1.0;

    case ProverKind::random_key: {
      if (!ctx.fake_reflection.has_value())
        throw std::invalid_argument("prover_respond: random-key prover needs a substitute key");
      const PureState expected = apply_unitary(ctx.puf->reflection, challenge, ctx.policy);
      const PureState returned = apply_unitary(*ctx.fake_reflection, challenge, ctx.policy);
      const double amp = std::abs(expected.overlap(returned));
      return amp * amp;
    }

    case ProverKind::estimation_attack:
      return est_fidelity(n_photons, d);

    case ProverKind::uqcm_attack: {
      const std::int64_t m = strategy.m_clones;
      const std::int64_t n_eff = std::min(n_photons, m);
      if (strategy.mode == AttackMode::analytic_rate) return uqcm_fidelity(n_eff, m, d);
      // With at least M copies in hand the adversary forwards genuine
      // copies and no cloning happens.
      if (n_eff == m) return 1.0;
      const CloneParams params(static_cast<int>(n_eff), static_cast<int>(m), d);
      const DensityOperator clones = uqcm_clone(challenge, params, ctx.policy);
      const DensityOperator one = single_clone_state(clones, ctx.policy);
      // Evaluate through the enrolled map exactly as the verifier would; the
      // result is independent of which unitary was enrolled.
      const PureState expected = apply_unitary(ctx.puf->reflection, challenge, ctx.policy);
      const DensityOperator returned = apply_unitary(ctx.puf->reflection, one, ctx.policy);
      return fidelity(expected, returned, ctx.policy);
    }
  }
  throw std::logic_error("prover_respond: unreachable");
}

// Exact two-sided tail probability of the observed detection count under
// the declared source and detector efficiency. Fixed sources give a
// Binomial(N*m, eta) null; Poisson sources thin to Poisson(eta*mean*m).
inline double noise_test_pvalue(std::int64_t n1, const ProtocolParams& params) {
  double lower = 1.0;
  double upper = 1.0;
  if (params.source.kind == PhotonSource::Kind::fixed) {
    const std::int64_t total = params.source.fixed_n * params.m_rounds;
    lower = binomial_cdf(n1, total, params.eta);
    upper = binomial_sf(n1, total, params.eta);
  } else {
    const double mean = params.source.mean * params.eta *
                        static_cast<double>(params.m_rounds);
    if (mean == 0.0) return n1 == 0 ? 1.0 : 0.0;
    lower = poisson_cdf(n1, mean);
    upper = 1.0 - poisson_cdf(n1 - 1, mean);
  }
  return std::min(1.0, 2.0 * std::min(lower, upper));
}

// One full verification: m rounds of challenge pulses, photon-granular
// counting, the detection-consistency gate, then the threshold decision.
// Draw order per round: challenge (unless reused), pulse size (Poisson
// only), then per photon one detection draw and, if detected, one outcome
// draw. A random-key prover draws its substitute key before round one.
inline VerificationTranscript run_verification(const PufRecord& puf,
                                               const ProverStrategy& prover,
                                               const ProtocolParams& params,
                                               SeededRng& rng,
                                               const NumericPolicy& policy = {}) {
  params.validate();
  if (puf.d < 2) throw invalid_dimension("run_verification: PUF dimension must be >= 2");

  ProverContext ctx;
  ctx.puf = &puf;
  ctx.policy = policy;
  if (prover.kind == ProverKind::random_key)
    ctx.fake_reflection = haar_unitary(puf.d, rng);

  VerificationTranscript out;
  out.rounds = params.m_rounds;
  if (params.record_rounds) out.per_round.reserve(static_cast<std::size_t>(params.m_rounds));

  std::optional<PureState> reused;
  if (params.reuse_challenge) reused = haar_state(puf.d, rng);

  for (std::int64_t r = 0; r < params.m_rounds; ++r) {
    const PureState challenge = params.reuse_challenge ? *reused : haar_state(puf.d, rng);
    const std::int64_t emitted = params.source.draw(rng);
    RoundDetail detail;
    detail.emitted = emitted;
    if (emitted > 0) {
      const double rate = prover_respond(prover, challenge, emitted, ctx);
      for (std::int64_t ph = 0; ph < emitted; ++ph) {
        if (!rng.bernoulli(params.eta)) continue;
        ++out.n1;
        ++detail.detected;
        if (rng.bernoulli(rate)) {
          ++out.n2;
          ++detail.passed;
        }
      }
    }
    if (params.record_rounds) out.per_round.push_back(detail);
  }

  if (out.n1 == 0) {
    out.decision = Decision::abort_noise;  // nothing returned, nothing to verify
  } else if (noise_test_pvalue(out.n1, params) < params.noise_window) {
    out.decision = Decision::abort_noise;
  } else {
    const double threshold = (1.0 - params.epsilon) * static_cast<double>(out.n1);
    out.decision = (static_cast<double>(out.n2) >= threshold - 1e-9)
                       ? Decision::accept
                       : Decision::reject;
  }
  return out;
}

struct RateEstimate {
  double accept_rate = 0.0;
  double reject_rate = 0.0;
  double abort_rate = 0.0;
  double accept_std_error = 0.0;
  double mean_n1 = 0.0;
  double mean_n2 = 0.0;
  double n1_std_error = 0.0;
  double n2_std_error = 0.0;
  std::int64_t trials = 0;
};

// Empirical decision rates over independent verifications. Trial i runs on
// rng.derived(i), so the result does not depend on scheduling and the
// caller's generator is left untouched.
inline RateEstimate estimate_rates(const PufRecord& puf, const ProverStrategy& prover,
                                   const ProtocolParams& params, std::int64_t trials,
                                   const SeededRng& rng,
                                   const NumericPolicy& policy = {}) {
  if (trials < 1) throw std::domain_error("estimate_rates: need at least one trial");
  std::int64_t accepts = 0;
  std::int64_t rejects = 0;
  std::int64_t aborts = 0;
  double sum1 = 0.0, sumsq1 = 0.0;
  double sum2 = 0.0, sumsq2 = 0.0;
  for (std::int64_t t = 0; t < trials; ++t) {
    SeededRng trial_rng = rng.derived(static_cast<std::uint64_t>(t));
    const VerificationTranscript v = run_verification(puf, prover, params, trial_rng, policy);
    switch (v.decision) {
      case Decision::accept: ++accepts; break;
      case Decision::reject: ++rejects; break;
      case Decision::abort_noise: ++aborts; break;
    }
    sum1 += static_cast<double>(v.n1);
    sumsq1 += static_cast<double>(v.n1) * static_cast<double>(v.n1);
    sum2 += static_cast<double>(v.n2);
    sumsq2 += static_cast<double>(v.n2) * static_cast<double>(v.n2);
  }
  const double n = static_cast<double>(trials);
  RateEstimate est;
  est.trials = trials;
  est.accept_rate = static_cast<double>(accepts) / n;
  est.reject_rate = static_cast<double>(rejects) / n;
  est.abort_rate = static_cast<double>(aborts) / n;
  est.accept_std_error = std::sqrt(est.accept_rate * (1.0 - est.accept_rate) / n);
  est.mean_n1 = sum1 / n;
  est.mean_n2 = sum2 / n;
  if (trials > 1) {
    est.n1_std_error =
        std::sqrt(std::max(0.0, (sumsq1 - n * est.mean_n1 * est.mean_n1) / (n - 1.0)) / n);
    est.n2_std_error =
        std::sqrt(std::max(0.0, (sumsq2 - n * est.mean_n2 * est.mean_n2) / (n - 1.0)) / n);
  }
  return est;
}

}  // namespace pufqas
