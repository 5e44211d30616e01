// The verification protocol end to end: enrollment, per-strategy response
// rates, the detection-consistency gate, decision logic and empirical rates
// against their closed-form predictions.

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <cstdint>

#include "pufqas/protocol.hpp"

using namespace pufqas;

namespace {

PufRecord make_puf(int d, std::uint64_t seed) {
  SeededRng rng(seed, 0);
  PufRegistry registry;
  return registry.enroll(d, rng);
}

}  // namespace

TEST_CASE("enrollment hands out distinct identities that can be looked up") {
  SeededRng rng(50, 0);
  PufRegistry registry;
  const PufRecord& a = registry.enroll(2, rng);
  const PufRecord& b = registry.enroll(3, rng);
  REQUIRE(a.identity != b.identity);
  REQUIRE(registry.size() == 2);
  REQUIRE(registry.lookup(a.identity).d == 2);
  REQUIRE(registry.lookup(b.identity).d == 3);
  REQUIRE_THROWS_AS(registry.lookup(777), std::out_of_range);
}

TEST_CASE("source and parameter records validate their ranges") {
  REQUIRE_THROWS_AS(PhotonSource::fixed(0), std::domain_error);
  REQUIRE_THROWS_AS(PhotonSource::poisson(0.0), std::domain_error);
  REQUIRE(PhotonSource::fixed(3).mean_photons() == 3.0);
  REQUIRE(PhotonSource::poisson(0.7).mean_photons() == 0.7);

  ProtocolParams p;
  REQUIRE_NOTHROW(p.validate());
  p.epsilon = 1.5;
  REQUIRE_THROWS_AS(p.validate(), std::domain_error);
  p.epsilon = 0.25;
  p.eta = -0.1;
  REQUIRE_THROWS_AS(p.validate(), std::domain_error);
  p.eta = 1.0;
  p.m_rounds = 0;
  REQUIRE_THROWS_AS(p.validate(), std::domain_error);
  p.m_rounds = 5;
  p.noise_window = 0.0;
  REQUIRE_THROWS_AS(p.validate(), std::domain_error);
}

TEST_CASE("an honest prover with a perfect detector always passes cleanly") {
  const PufRecord puf = make_puf(2, 51);
  ProtocolParams params;
  params.m_rounds = 20;
  SeededRng rng(52, 0);
  for (int i = 0; i < 50; ++i) {
    const VerificationTranscript v =
        run_verification(puf, ProverStrategy::honest(), params, rng);
    REQUIRE(v.decision == Decision::accept);
    REQUIRE(v.n1 == 20);
    REQUIRE(v.n2 == 20);
  }
}

TEST_CASE("per-photon response rates match each strategy's closed form") {
  const PufRecord puf = make_puf(3, 53);
  ProverContext ctx;
  ctx.puf = &puf;
  SeededRng rng(54, 0);
  const PureState challenge = haar_state(3, rng);

  REQUIRE(prover_respond(ProverStrategy::honest(), challenge, 1, ctx) == 1.0);
  REQUIRE(prover_respond(ProverStrategy::estimation(), challenge, 1, ctx) ==
          est_fidelity(1, 3));
  REQUIRE(prover_respond(ProverStrategy::estimation(), challenge, 4, ctx) ==
          est_fidelity(4, 3));
  REQUIRE(prover_respond(ProverStrategy::uqcm(2, AttackMode::analytic_rate), challenge, 1,
                         ctx) == uqcm_fidelity(1, 2, 3));
  // More photons than clones means genuine copies get forwarded.
  REQUIRE(prover_respond(ProverStrategy::uqcm(2, AttackMode::analytic_rate), challenge, 5,
                         ctx) == 1.0);
  REQUIRE(prover_respond(ProverStrategy::uqcm(2, AttackMode::exact_oracle), challenge, 5,
                         ctx) == 1.0);
  REQUIRE_THROWS_AS(prover_respond(ProverStrategy::honest(), challenge, 0, ctx),
                    std::domain_error);
  REQUIRE_THROWS_AS(prover_respond(ProverStrategy::random_key(), challenge, 1, ctx),
                    std::invalid_argument);
}

TEST_CASE("the dense cloning oracle reproduces the analytic rate on every challenge") {
  for (const int d : {2, 3}) {
    const PufRecord puf = make_puf(d, 55);
    ProverContext ctx;
    ctx.puf = &puf;
    SeededRng rng(56, static_cast<std::uint64_t>(d));
    for (int i = 0; i < 20; ++i) {
      const PureState challenge = haar_state(d, rng);
      const double exact = prover_respond(ProverStrategy::uqcm(2, AttackMode::exact_oracle),
                                          challenge, 1, ctx);
      INFO("d=" << d << " sample=" << i);
      REQUIRE(std::abs(exact - uqcm_fidelity(1, 2, d)) < 1e-10);
    }
  }
}

TEST_CASE("the cloning oracle's rate does not depend on the enrolled unitary") {
  const PufRecord puf_a = make_puf(3, 57);
  const PufRecord puf_b = make_puf(3, 58);
  ProverContext ctx_a;
  ctx_a.puf = &puf_a;
  ProverContext ctx_b;
  ctx_b.puf = &puf_b;
  SeededRng rng(59, 0);
  for (int i = 0; i < 10; ++i) {
    const PureState challenge = haar_state(3, rng);
    const double a = prover_respond(ProverStrategy::uqcm(3, AttackMode::exact_oracle),
                                    challenge, 1, ctx_a);
    const double b = prover_respond(ProverStrategy::uqcm(3, AttackMode::exact_oracle),
                                    challenge, 1, ctx_b);
    REQUIRE(std::abs(a - b) < 1e-10);
  }
}

TEST_CASE("a random substitute key passes at rate 1/d") {
  const int d = 16;
  const PufRecord puf = make_puf(d, 60);
  ProtocolParams params;
  params.m_rounds = 100;
  params.epsilon = 0.25;
  const auto est = estimate_rates(puf, ProverStrategy::random_key(), params, 1000,
                                  SeededRng(61, 0));
  REQUIRE(est.mean_n1 == 100.0);
  const double rate = est.mean_n2 / est.mean_n1;
  const double se = est.n2_std_error / est.mean_n1;
  INFO("rate=" << rate << " se=" << se);
  REQUIRE(std::abs(rate - 1.0 / d) < 3.0 * se);
  // Far too lossy to clear a 75% threshold.
  REQUIRE(est.accept_rate == 0.0);
}

TEST_CASE("the exact cloning attack passes photons at the closed-form rate") {
  const PufRecord puf = make_puf(2, 62);
  ProtocolParams params;
  params.m_rounds = 20;
  const auto est = estimate_rates(puf, ProverStrategy::uqcm(2, AttackMode::exact_oracle),
                                  params, 500, SeededRng(63, 0));
  const double rate = est.mean_n2 / est.mean_n1;
  const double se = est.n2_std_error / est.mean_n1;
  INFO("rate=" << rate << " se=" << se);
  REQUIRE(std::abs(rate - 5.0 / 6.0) < 3.0 * se);
}

TEST_CASE("counts are consistent round by round") {
  const PufRecord puf = make_puf(2, 64);
  ProtocolParams params;
  params.m_rounds = 30;
  params.eta = 0.6;
  params.source = PhotonSource::poisson(2.5);
  params.record_rounds = true;
  SeededRng rng(65, 0);
  const VerificationTranscript v =
      run_verification(puf, ProverStrategy::estimation(), params, rng);
  REQUIRE(v.per_round.size() == 30);
  std::int64_t n1 = 0, n2 = 0;
  for (const auto& r : v.per_round) {
    REQUIRE(r.detected <= r.emitted);
    REQUIRE(r.passed <= r.detected);
    n1 += r.detected;
    n2 += r.passed;
  }
  REQUIRE(n1 == v.n1);
  REQUIRE(n2 == v.n2);
  REQUIRE(v.rounds == 30);
}

TEST_CASE("a dead detector aborts instead of deciding") {
  const PufRecord puf = make_puf(2, 66);
  ProtocolParams params;
  params.eta = 0.0;
  SeededRng rng(67, 0);
  const VerificationTranscript v =
      run_verification(puf, ProverStrategy::honest(), params, rng);
  REQUIRE(v.decision == Decision::abort_noise);
  REQUIRE(v.n1 == 0);
  REQUIRE(v.n2 == 0);
}

TEST_CASE("the detection-count test flags gross photon-number mismatch") {
  ProtocolParams fixed_params;
  fixed_params.source = PhotonSource::fixed(2);
  fixed_params.m_rounds = 10;
  fixed_params.eta = 0.9;
  REQUIRE(noise_test_pvalue(18, fixed_params) > 0.1);
  REQUIRE(noise_test_pvalue(2, fixed_params) < 1e-6);

  ProtocolParams poisson_params;
  poisson_params.source = PhotonSource::poisson(3.0);
  poisson_params.m_rounds = 10;
  poisson_params.eta = 0.5;
  REQUIRE(noise_test_pvalue(15, poisson_params) > 0.1);
  REQUIRE(noise_test_pvalue(0, poisson_params) < 1e-3);
  REQUIRE(noise_test_pvalue(60, poisson_params) < 1e-6);
}

TEST_CASE("too few detections abort a lossy session") {
  const PufRecord puf = make_puf(2, 68);
  ProtocolParams params;
  params.m_rounds = 40;
  params.eta = 0.02;  // declared loss is heavy but honest
  params.noise_window = 1e-3;
  const auto est = estimate_rates(puf, ProverStrategy::honest(), params, 400,
                                  SeededRng(69, 0));
  // Sessions with zero detections abort; those with detections match the
  // declared efficiency and proceed.
  REQUIRE(est.abort_rate > 0.2);
  REQUIRE(est.accept_rate + est.reject_rate + est.abort_rate ==
          Catch::Approx(1.0).margin(1e-12));
  REQUIRE(est.reject_rate == 0.0);
}

TEST_CASE("rate estimation is deterministic in the generator identity") {
  const PufRecord puf = make_puf(2, 70);
  ProtocolParams params;
  params.m_rounds = 10;
  const auto a = estimate_rates(puf, ProverStrategy::estimation(), params, 200,
                                SeededRng(71, 4));
  const auto b = estimate_rates(puf, ProverStrategy::estimation(), params, 200,
                                SeededRng(71, 4));
  REQUIRE(a.accept_rate == b.accept_rate);
  REQUIRE(a.mean_n1 == b.mean_n1);
  REQUIRE(a.mean_n2 == b.mean_n2);
  REQUIRE(a.n2_std_error == b.n2_std_error);
  REQUIRE_THROWS_AS(estimate_rates(puf, ProverStrategy::honest(), params, 0,
                                   SeededRng(71, 4)),
                    std::domain_error);
}

TEST_CASE("honest sessions accept at rate one with a perfect detector") {
  const PufRecord puf = make_puf(2, 72);
  ProtocolParams params;
  const auto est = estimate_rates(puf, ProverStrategy::honest(), params, 1000,
                                  SeededRng(73, 0));
  REQUIRE(est.accept_rate == 1.0);
  REQUIRE(est.mean_n1 == 20.0);
  REQUIRE(est.mean_n2 == 20.0);
}

TEST_CASE("the flat-rate cloning attack accepts at its predicted probability") {
  const PufRecord puf = make_puf(2, 74);
  ProtocolParams params;
  params.m_rounds = 20;
  params.epsilon = 0.25;
  const auto est = estimate_rates(puf, ProverStrategy::uqcm(2, AttackMode::analytic_rate),
                                  params, 2000, SeededRng(75, 0));
  const double predicted = total_false_accept(uqcm_fidelity(1, 2, 2), 1, 20, 0.25);
  INFO("accept=" << est.accept_rate << " predicted=" << predicted);
  REQUIRE(std::abs(est.accept_rate - predicted) < 3.0 * est.accept_std_error + 1e-12);
}

TEST_CASE("better attacks accept more often") {
  const PufRecord puf = make_puf(2, 76);
  ProtocolParams params;
  params.m_rounds = 20;
  params.epsilon = 0.25;
  const auto uqcm = estimate_rates(puf, ProverStrategy::uqcm(2, AttackMode::analytic_rate),
                                   params, 2000, SeededRng(77, 0));
  const auto meas = estimate_rates(puf, ProverStrategy::estimation(), params, 2000,
                                   SeededRng(77, 1));
  REQUIRE(uqcm.accept_rate > meas.accept_rate);
  // Neither attack reaches the honest acceptance rate.
  REQUIRE(uqcm.accept_rate < 1.0);
}

TEST_CASE("challenge reuse is honored and stays deterministic") {
  const PufRecord puf = make_puf(2, 78);
  ProtocolParams params;
  params.reuse_challenge = true;
  params.m_rounds = 15;
  SeededRng rng_a(79, 0);
  SeededRng rng_b(79, 0);
  const VerificationTranscript a =
      run_verification(puf, ProverStrategy::estimation(), params, rng_a);
  const VerificationTranscript b =
      run_verification(puf, ProverStrategy::estimation(), params, rng_b);
  REQUIRE(a.n1 == b.n1);
  REQUIRE(a.n2 == b.n2);
  REQUIRE(a.decision == b.decision);
  REQUIRE(a.n1 == 15);
}
