#pragma once

#include <optional>
#include <string>
#include <vector>

#include "nonloc/behavior.hpp"
#include "nonloc/common.hpp"

namespace nonloc {

/// Roots S^+ >= S^- of S^2 - J S + K^2 = 0 per setting pair.
struct SQuantities {
  Grid J{};
  Grid K{};
  Grid sPlus{};
  Grid sMinus{};
  /// False where the discriminant is below -tol (no real roots); the
  /// corresponding S entries are NaN.
  std::array<std::array<bool, 2>, 2> real{};
};

SQuantities s_quantities(const CBehavior& b, double tol = kDefaultTol);

/// One choice of root branch per setting pair, accepted by the two-qubit
/// condition.
struct SignPattern {
  /// plus[x][y] is true for the S^+ branch.
  std::array<std::array<bool, 2>, 2> plus{};
  /// The shared S value, identified with sin^2(2 chi).
  double commonValue = 0.0;
  double H = 0.0;
  /// Largest pairwise difference among the four selected S values.
  double spread = 0.0;

  bool all_plus() const {
    return plus[0][0] && plus[0][1] && plus[1][0] && plus[1][1];
  }
  /// "++ +-" style label in (00, 01, 10, 11) order.
  std::string label() const;
};

/// All branch choices with equal S values and H >= 0. An empty result means
/// no two-qubit X-Z realization of the behavior exists. Patterns that differ
/// only at degenerate pairs (S^+ = S^-) are merged, keeping the one with the
/// most '+' branches.
std::vector<SignPattern> two_qubit_condition(const CBehavior& b,
                                             double tol = kDefaultTol);

struct DQuantities {
  Pair dB{};
  Pair dA{};
};

/// d^B_x = (C^A_x)^2 + sin^2 2chi, d^A_y = (C^B_y)^2 + sin^2 2chi.
DQuantities d_quantities(const CBehavior& b, double sin2chiSq);

/// Right-hand side minus left-hand side of the TLM inequality. Non-negative
/// when satisfied; |gap| <= tol means saturated. Throws DomainError when
/// some |ctilde| exceeds 1 + tol.
double tlm_gap(const Grid& ctilde, double tol = kDefaultTol);

/// C_xy / sqrt(d_x), the scaling by a per-row quantity. Where d_x vanishes
/// the entry is 0 if C_xy = 0 and the result is empty otherwise.
std::optional<Grid> scale_rows(const Grid& c, const Pair& d,
                               double tol = kDefaultTol);
/// C_xy / sqrt(d_y), the per-column scaling.
std::optional<Grid> scale_cols(const Grid& c, const Pair& d,
                               double tol = kDefaultTol);

/// Output of the conjectured extremality test. The candidate flag reports
/// the conjecture's conditions, never a proof of extremality.
struct ExtremalVerdict {
  bool conditionSPlus = false;
  bool tlmBSaturated = false;
  bool tlmASaturated = false;
  bool uniquenessTrivial = false;
  bool conjecture1Candidate = false;
  double sin2chiSquared = 0.0;

  // Residuals for callers studying near-boundary inputs.
  double sPlusSpread = 0.0;
  double gapB = 0.0;
  double gapA = 0.0;
  std::vector<SignPattern> patterns;
  /// Why the uniqueness flag is false, when it is.
  std::string uniquenessNote;
};

/// Throws InvalidBehavior for invalid input and PreconditionError for local
/// input.
ExtremalVerdict extremal_criterion(const CBehavior& b, double tol = kDefaultTol);

/// Membership in the TLM-for-scaled-correlators superset of the D-space
/// quantum set.
bool crypt_membership(const DBehavior& d, double tol = kDefaultTol);

}  // namespace nonloc
