#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "nonloc/behavior.hpp"
#include "nonloc/counterexample.hpp"
#include "nonloc/random.hpp"
#include "oracles.hpp"

using namespace nonloc;

namespace {

CBehavior random_behavior(Rng& rng, double spread = 1.0) {
  std::uniform_real_distribution<double> u(-spread, spread);
  CBehavior b;
  for (int k = 0; k < 2; ++k) {
    b.cA[k] = u(rng);
    b.cB[k] = u(rng);
  }
  for (auto& row : b.c)
    for (double& v : row) v = u(rng);
  return b;
}

bool table_nonnegative(const ProbabilityTable& t, double tol) {
  for (int a : {1, -1})
    for (int b : {1, -1})
      for (int x = 0; x < 2; ++x)
        for (int y = 0; y < 2; ++y)
          if (t(a, b, x, y) < -tol) return false;
  return true;
}

}  // namespace

TEST_CASE("uniform behavior has flat probabilities") {
  const ProbabilityTable t = to_probabilities(CBehavior{});
  for (int a : {1, -1})
    for (int b : {1, -1})
      for (int x = 0; x < 2; ++x)
        for (int y = 0; y < 2; ++y) CHECK(t(a, b, x, y) == doctest::Approx(0.25));
}

TEST_CASE("deterministic marginal") {
  CBehavior b;
  b.cA[0] = 1.0;
  const ProbabilityTable t = to_probabilities(b);
  for (int bb : {1, -1})
    for (int y = 0; y < 2; ++y) {
      CHECK(t(1, bb, 0, y) == doctest::Approx(0.5));
      CHECK(t(-1, bb, 0, y) == doctest::Approx(0.0));
    }
}

TEST_CASE("Tsirelson point probabilities") {
  const ProbabilityTable t = to_probabilities(tsirelson_point());
  const double eq = 0.25 * (1.0 + 1.0 / std::sqrt(2.0));
  CHECK(t(1, 1, 0, 0) == doctest::Approx(eq).epsilon(1e-14));
  CHECK(t(-1, -1, 0, 0) == doctest::Approx(eq).epsilon(1e-14));
  CHECK(t(1, 1, 0, 0) == doctest::Approx(0.4267766952966369).epsilon(1e-12));
  CHECK(is_valid(tsirelson_point()));
  CHECK_FALSE(is_local(tsirelson_point()));
  CHECK(max_chsh(tsirelson_point().c) == doctest::Approx(2.0 * std::sqrt(2.0)));
}

TEST_CASE("negative entry is invalid") {
  CBehavior b;
  b.c[0][0] = 1.0;
  b.cA[0] = 1.0;
  b.cB[0] = -1.0;
  const ProbabilityTable t = to_probabilities(b);
  // p(-1, +1 | 00) = (1 - 1 - 1 - 1) / 4
  CHECK(t(-1, 1, 0, 0) == doctest::Approx(-0.5));
  CHECK_FALSE(is_valid(b));
  CHECK_THROWS_AS(is_local(b), InvalidBehavior);
}

TEST_CASE("validity agrees with table positivity and tables are no-signaling") {
  Rng rng(11);
  int valid = 0;
  for (int n = 0; n < 2000; ++n) {
    const CBehavior b = random_behavior(rng);
    const ProbabilityTable t = to_probabilities(b);
    CHECK(is_valid(b) == table_nonnegative(t, kDefaultTol));
    valid += is_valid(b) ? 1 : 0;
    for (int x = 0; x < 2; ++x)
      for (int y = 0; y < 2; ++y) {
        double sum = 0.0;
        for (int a : {1, -1})
          for (int bb : {1, -1}) sum += t(a, bb, x, y);
        CHECK(sum == doctest::Approx(1.0));
      }
    for (int a : {1, -1})
      for (int x = 0; x < 2; ++x)
        CHECK(t(a, 1, x, 0) + t(a, -1, x, 0) == doctest::Approx(t(a, 1, x, 1) + t(a, -1, x, 1)));
    const CBehavior back = correlators(t);
    for (std::size_t k = 0; k < 8; ++k) CHECK(flatten(back)[k] == doctest::Approx(flatten(b)[k]));
  }
  CHECK(valid > 50);
}

TEST_CASE("locality matches the 16-vertex hull") {
  Rng rng(5);
  int tested = 0, nonlocal = 0;
  while (tested < 80) {
    const CBehavior b = random_behavior(rng, 0.9);
    if (!is_valid(b)) continue;
    // Keep away from the facets so both tests are decisive.
    if (std::abs(max_chsh(b.c) - 2.0) < 1e-3) continue;
    ++tested;
    const bool expected = oracle::local_by_vertices(b);
    CHECK(is_local(b) == expected);
    nonlocal += expected ? 0 : 1;
  }
  // Random boxes rarely violate CHSH, so add quantum points.
  for (int n = 0; n < 20; ++n) {
    const CBehavior b = oracle::behavior_from_projectors(random_generic(rng, 2, 2));
    if (std::abs(max_chsh(b.c) - 2.0) < 1e-3) continue;
    CHECK(is_local(b) == oracle::local_by_vertices(b));
  }
  CHECK(oracle::local_by_vertices(CBehavior{}));
  CHECK_FALSE(oracle::local_by_vertices(tsirelson_point()));
  MESSAGE("nonlocal random boxes: " << nonlocal);
}

TEST_CASE("uniform behavior is local") { CHECK(is_local(CBehavior{})); }

TEST_CASE("mixing") {
  const CBehavior p = simulate_cbehavior(promote(counterexample_p(0.05)));
  const std::vector<CBehavior> one{p};
  const std::vector<double> w1{1.0};
  CHECK(mix<CBehavior>(one, w1) == p);

  const std::vector<double> bad{0.3, 0.3};
  const std::vector<CBehavior> two{p, tsirelson_point()};
  CHECK_THROWS_AS(mix<CBehavior>(two, bad), DomainError);

  Rng rng(3);
  int checked = 0;
  while (checked < 200) {
    const CBehavior a = random_behavior(rng), b = random_behavior(rng);
    if (!is_valid(a) || !is_valid(b)) continue;
    ++checked;
    const std::vector<CBehavior> ab{a, b};
    const std::vector<double> half{0.5, 0.5};
    CHECK(is_valid(mix<CBehavior>(ab, half)));
  }
}

TEST_CASE("limit counterexample: L recovered from P and Q is local with CHSH 2") {
  const CBehavior P = simulate_cbehavior(promote(counterexample_p(0.0)));
  const CBehavior Q = simulate_cbehavior(promote(counterexample_q(0.0)));
  const double lambda = 1.0 - 1.0 / std::sqrt(2.0);
  const std::vector<CBehavior> pq{P, Q};
  const std::vector<double> w{1.0 / (1.0 - lambda), -lambda / (1.0 - lambda)};
  const CBehavior L = mix<CBehavior>(pq, w);
  CHECK(chsh(L.c) == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(is_valid(L));
  CHECK(is_local(L));
  // and back: P = lambda Q + (1 - lambda) L
  const std::vector<CBehavior> ql{Q, L};
  const std::vector<double> w2{lambda, 1.0 - lambda};
  const CBehavior back = mix<CBehavior>(ql, w2);
  for (std::size_t k = 0; k < 8; ++k) CHECK(flatten(back)[k] == doctest::Approx(flatten(P)[k]));
}

TEST_CASE("flatten roundtrip") {
  DBehavior d;
  d.deltaB = {0.1, 0.2};
  d.deltaA = {0.3, 0.4};
  d.c = {{{0.5, 0.6}, {0.7, 0.8}}};
  CHECK(unflatten_d(flatten(d)) == d);
  CHECK(unflatten_c(flatten(tsirelson_point())) == tsirelson_point());
}
