#pragma once

#include <cmath>
#include <numbers>
#include <optional>
#include <random>

#include "nonloc/geometry.hpp"
#include "nonloc/random.hpp"
#include "nonloc/realization.hpp"
#include "oracles.hpp"

namespace fixture {

using namespace nonloc;

inline CMatrix in_plane(double t) {
  return std::sin(t) * oracle::sigma(1) + std::cos(t) * oracle::sigma(3);
}

// sqrt(1 - w^2) (in-plane at angle t) + w sigma_2.
inline CMatrix tilted(double t, double w) {
  return std::sqrt(1 - w * w) * in_plane(t) + w * oracle::sigma(2);
}

inline bool satisfies_hypotheses(const TwoQubitRealization& r) {
  return check_uniqueness_preconditions(simulate_cbehavior(promote(r))).satisfied;
}

inline TwoQubitRealization random_base(Rng& rng) {
  while (true) {
    const TwoQubitRealization r = random_two_qubit(rng);
    if (satisfies_hypotheses(r)) return r;
  }
}

// In-plane B2 such that {A0, A1, B0, B2} also satisfies the hypotheses.
inline std::optional<double> conforming_b2(const TwoQubitRealization& r, Rng& rng) {
  std::uniform_real_distribution<double> u(0.0, 2 * std::numbers::pi);
  for (int n = 0; n < 400; ++n) {
    const double t = u(rng);
    if (std::abs(std::sin(t - r.thetaB[0])) < 0.05) continue;
    TwoQubitRealization r2 = r;
    r2.thetaB[1] = t;
    if (satisfies_hypotheses(r2)) return t;
  }
  return std::nullopt;
}

}  // namespace fixture
