// Deterministic generator behavior: reproducibility, stream separation and
// distribution sanity at loose 3-sigma tolerances.

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <cstdint>
#include <vector>

#include "pufqas/rng.hpp"

using pufqas::SeededRng;

TEST_CASE("identical seed and stream reproduce the same sequence") {
  SeededRng a(42, 7);
  SeededRng b(42, 7);
  for (int i = 0; i < 1000; ++i) REQUIRE(a.next_u64() == b.next_u64());
}

TEST_CASE("seed and stream are reported back") {
  const SeededRng r(99, 3);
  REQUIRE(r.seed() == 99);
  REQUIRE(r.stream_id() == 3);
}

TEST_CASE("different streams under one seed diverge") {
  SeededRng a(42, 0);
  SeededRng b(42, 1);
  int same = 0;
  for (int i = 0; i < 64; ++i)
    if (a.next_u64() == b.next_u64()) ++same;
  REQUIRE(same == 0);
}

TEST_CASE("different seeds diverge") {
  SeededRng a(1, 0);
  SeededRng b(2, 0);
  int same = 0;
  for (int i = 0; i < 64; ++i)
    if (a.next_u64() == b.next_u64()) ++same;
  REQUIRE(same == 0);
}

TEST_CASE("derived streams depend only on identity, not call position") {
  const SeededRng base(5, 11);
  SeededRng first = base.derived(4);
  // Interleave other derivations; the stream for index 4 must not care.
  (void)base.derived(0);
  (void)base.derived(9);
  SeededRng second = base.derived(4);
  for (int i = 0; i < 100; ++i) REQUIRE(first.next_u64() == second.next_u64());

  SeededRng other = base.derived(5);
  SeededRng again = base.derived(4);
  int same = 0;
  for (int i = 0; i < 64; ++i)
    if (other.next_u64() == again.next_u64()) ++same;
  REQUIRE(same == 0);
}

TEST_CASE("deriving does not advance the parent generator") {
  SeededRng a(13, 2);
  SeededRng b(13, 2);
  (void)b.derived(0);
  (void)b.derived(1);
  for (int i = 0; i < 50; ++i) REQUIRE(a.next_u64() == b.next_u64());
}

TEST_CASE("uniform draws live in the half-open unit interval") {
  SeededRng rng(123, 0);
  for (int i = 0; i < 20000; ++i) {
    const double u = rng.uniform();
    REQUIRE(u >= 0.0);
    REQUIRE(u < 1.0);
  }
}

TEST_CASE("uniform sample mean matches one half") {
  SeededRng rng(7, 0);
  const int n = 100000;
  double sum = 0.0;
  for (int i = 0; i < n; ++i) sum += rng.uniform();
  const double mean = sum / n;
  const double se = std::sqrt(1.0 / 12.0 / n);
  REQUIRE(std::abs(mean - 0.5) < 3.0 * se);
}

TEST_CASE("bernoulli frequency matches its probability") {
  SeededRng rng(8, 0);
  const int n = 100000;
  const double p = 0.3;
  int hits = 0;
  for (int i = 0; i < n; ++i)
    if (rng.bernoulli(p)) ++hits;
  const double rate = static_cast<double>(hits) / n;
  const double se = std::sqrt(p * (1.0 - p) / n);
  REQUIRE(std::abs(rate - p) < 3.0 * se);
}

TEST_CASE("bernoulli endpoints are exact and bad probabilities throw") {
  SeededRng rng(9, 0);
  for (int i = 0; i < 100; ++i) {
    REQUIRE_FALSE(rng.bernoulli(0.0));
    REQUIRE(rng.bernoulli(1.0));
  }
  REQUIRE_THROWS_AS(rng.bernoulli(-0.1), std::domain_error);
  REQUIRE_THROWS_AS(rng.bernoulli(1.1), std::domain_error);
}

TEST_CASE("normal sample mean and variance match the standard normal") {
  SeededRng rng(10, 0);
  const int n = 100000;
  double sum = 0.0;
  double sumsq = 0.0;
  for (int i = 0; i < n; ++i) {
    const double x = rng.normal();
    sum += x;
    sumsq += x * x;
  }
  const double mean = sum / n;
  const double var = sumsq / n - mean * mean;
  REQUIRE(std::abs(mean) < 3.0 / std::sqrt(static_cast<double>(n)));
  REQUIRE(std::abs(var - 1.0) < 3.0 * std::sqrt(2.0 / n));
}

TEST_CASE("complex normal parts are standard normal and uncorrelated") {
  SeededRng rng(11, 0);
  const int n = 50000;
  double sum_re = 0.0, sum_im = 0.0, cross = 0.0;
  for (int i = 0; i < n; ++i) {
    const auto z = rng.complex_normal();
    sum_re += z.real();
    sum_im += z.imag();
    cross += z.real() * z.imag();
  }
  const double bound = 3.0 / std::sqrt(static_cast<double>(n));
  REQUIRE(std::abs(sum_re / n) < bound);
  REQUIRE(std::abs(sum_im / n) < bound);
  REQUIRE(std::abs(cross / n) < bound);
}

TEST_CASE("poisson sample mean matches its parameter") {
  SeededRng rng(12, 0);
  for (const double mean : {0.4, 3.5, 75.0}) {
    const int n = 40000;
    double sum = 0.0;
    for (int i = 0; i < n; ++i) sum += static_cast<double>(rng.poisson(mean));
    const double se = std::sqrt(mean / n);
    INFO("mean " << mean);
    REQUIRE(std::abs(sum / n - mean) < 3.0 * se);
  }
}

TEST_CASE("poisson sample variance matches its parameter") {
  SeededRng rng(13, 0);
  const double mean = 6.0;
  const int n = 40000;
  double sum = 0.0, sumsq = 0.0;
  for (int i = 0; i < n; ++i) {
    const double x = static_cast<double>(rng.poisson(mean));
    sum += x;
    sumsq += x * x;
  }
  const double m = sum / n;
  const double var = sumsq / n - m * m;
  // Var of the sample variance of a Poisson is roughly (mean + 2 mean^2)/n.
  const double se = std::sqrt((mean + 2.0 * mean * mean) / n);
  REQUIRE(std::abs(var - mean) < 3.0 * se);
}

TEST_CASE("poisson handles the zero mean and rejects negative ones") {
  SeededRng rng(14, 0);
  for (int i = 0; i < 50; ++i) REQUIRE(rng.poisson(0.0) == 0);
  REQUIRE_THROWS_AS(rng.poisson(-2.0), std::domain_error);
}
