#include <algorithm>
#include <cmath>
#include <limits>

#include "nonloc/criteria.hpp"
#include "nonloc/geometry.hpp"
#include "nonloc/qbell.hpp"

namespace nonloc {

ExtremalVerdict extremal_criterion(const CBehavior& b, double tol) {
  if (!is_valid(b, tol)) {
    throw InvalidBehavior("extremal_criterion: behavior has negative probabilities");
  }
  if (is_local(b, tol)) {
    throw PreconditionError("extremal_criterion: behavior is local");
  }

  ExtremalVerdict v;
  const SQuantities s = s_quantities(b, tol);
  double lo = 1e300;
  double hi = -1e300;
  bool allReal = true;
  for (int x = 0; x < 2; ++x)
    for (int y = 0; y < 2; ++y) {
      allReal = allReal && s.real[x][y];
      lo = std::min(lo, s.sPlus[x][y]);
      hi = std::max(hi, s.sPlus[x][y]);
    }
  v.sPlusSpread = allReal ? hi - lo : std::numeric_limits<double>::infinity();

  v.patterns = two_qubit_condition(b, tol);
  const auto plusIt = std::find_if(v.patterns.begin(), v.patterns.end(),
                                   [](const SignPattern& p) { return p.all_plus(); });
  v.conditionSPlus = plusIt != v.patterns.end();

  const SignPattern* chosen = v.conditionSPlus ? &*plusIt
                              : v.patterns.empty() ? nullptr
                                                   : &v.patterns.front();
  if (chosen == nullptr) {
    v.uniquenessNote = "no two-qubit sign pattern";
    return v;
  }
  v.sin2chiSquared = std::clamp(chosen->commonValue, 0.0, 1.0);

  const DQuantities d = d_quantities(b, v.sin2chiSquared);
  const auto rows = scale_rows(b.c, d.dB, tol);
  const auto cols = scale_cols(b.c, d.dA, tol);
  try {
    if (rows) {
      v.gapB = tlm_gap(*rows, 1e-6);
      v.tlmBSaturated = std::abs(v.gapB) <= tol;
    }
    if (cols) {
      v.gapA = tlm_gap(*cols, 1e-6);
      v.tlmASaturated = std::abs(v.gapA) <= tol;
    }
  } catch (const DomainError&) {
    // Scaled correlators beyond 1: not saturated, flags stay false.
  }

  v.conjecture1Candidate = v.conditionSPlus && v.tlmBSaturated && v.tlmASaturated;

  if (v.conjecture1Candidate) {
    try {
      const GeometryParams g = reconstruct(b, tol);
      const UniquenessReport u = uniqueness_check(g);
      v.uniquenessTrivial = u.trivialOnly;
      if (!u.trivialOnly) v.uniquenessNote = "nontrivial solutions of the uniqueness equations";
    } catch (const Error& e) {
      v.uniquenessNote = e.what();
    }
  } else {
    v.uniquenessNote = "criterion conditions not met";
  }
  return v;
}

}  // namespace nonloc
