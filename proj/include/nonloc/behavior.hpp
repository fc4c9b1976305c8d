#pragma once

#include <array>
#include <cmath>
#include <span>

#include "nonloc/common.hpp"

namespace nonloc {

/// A no-signaling behavior in correlator form: marginal biases of both
/// parties and the four joint correlators.
struct CBehavior {
  Pair cA{};
  Pair cB{};
  Grid c{};

  friend bool operator==(const CBehavior&, const CBehavior&) = default;
};

/// A behavior in guessing-bias form: squared guessing biases replace the
/// marginals, joint correlators are kept.
struct DBehavior {
  Pair deltaB{};
  Pair deltaA{};
  Grid c{};

  friend bool operator==(const DBehavior&, const DBehavior&) = default;
};

/// Conditional probabilities p(ab|xy). Outcomes are stored by index:
/// index 0 is outcome +1, index 1 is outcome -1.
struct ProbabilityTable {
  std::array<std::array<std::array<std::array<double, 2>, 2>, 2>, 2> p{};

  /// Outcome-valued accessor, `a` and `b` in {+1, -1}.
  double operator()(int a, int b, int x, int y) const {
    return p[a > 0 ? 0 : 1][b > 0 ? 0 : 1][x][y];
  }
};

ProbabilityTable to_probabilities(const CBehavior& b);

/// Inverse of to_probabilities for no-signaling tables.
CBehavior correlators(const ProbabilityTable& t);

bool is_valid(const CBehavior& b, double tol = kDefaultTol);

/// Membership in the local polytope via positivity plus the eight CHSH
/// facets. Throws InvalidBehavior when positivity fails.
bool is_local(const CBehavior& b, double tol = kDefaultTol);

/// CHSH value with the minus sign on correlator (x, y):
/// sum of all four C with C_xy negated.
double chsh(const Grid& c, int minusX = 1, int minusY = 1);

/// Largest |CHSH| over the four odd-minus-sign variants.
double max_chsh(const Grid& c);

/// Unbiased point attaining the maximal quantum CHSH value 2*sqrt(2).
CBehavior tsirelson_point();

std::array<double, 8> flatten(const CBehavior& b);
std::array<double, 8> flatten(const DBehavior& b);
CBehavior unflatten_c(const std::array<double, 8>& v);
DBehavior unflatten_d(const std::array<double, 8>& v);

namespace detail {
template <class T>
T unflatten(const std::array<double, 8>& v);
template <>
inline CBehavior unflatten<CBehavior>(const std::array<double, 8>& v) {
  return unflatten_c(v);
}
template <>
inline DBehavior unflatten<DBehavior>(const std::array<double, 8>& v) {
  return unflatten_d(v);
}
}  // namespace detail

/// Componentwise affine combination. Negative weights are allowed
/// (extrapolation); the weights must sum to one within `tol`.
template <class T>
T mix(std::span<const T> behaviors, std::span<const double> weights,
      double tol = kDefaultTol) {
  if (behaviors.size() != weights.size() || behaviors.empty()) {
    throw DomainError("mix: need one weight per behavior");
  }
  double total = 0.0;
  for (double w : weights) total += w;
  if (std::abs(total - 1.0) > tol) {
    throw DomainError("mix: weights sum to " + std::to_string(total) +
                      ", expected 1");
  }
  std::array<double, 8> acc{};
  for (std::size_t i = 0; i < behaviors.size(); ++i) {
    const auto v = flatten(behaviors[i]);
    for (std::size_t k = 0; k < 8; ++k) acc[k] += weights[i] * v[k];
  }
  return detail::unflatten<T>(acc);
}

}  // namespace nonloc
