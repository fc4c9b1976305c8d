#pragma once

#include <string>
#include <vector>

#include "nonloc/behavior.hpp"
#include "nonloc/realization.hpp"

namespace nonloc {

/// The pair P (2chi = pi/6) and Q (2chi = pi/4) sharing the angles
/// thetaA = (0, pi/2), thetaB = (eps, -pi/4).
TwoQubitRealization counterexample_p(double epsilon);
TwoQubitRealization counterexample_q(double epsilon);

struct CounterexampleReport {
  double epsilon = 0.0;
  /// Weight with P = lambda Q + (1 - lambda) L and CHSH(L) = 2.
  double lambda = 0.0;
  CBehavior P, Q, L;
  DBehavior dP, dQ, dL;
  double chshP = 0.0, chshQ = 0.0, chshL = 0.0;
  bool lValid = false;
  bool lLocal = false;
  bool lInCrypt = true;
  /// TLM gaps of L's scaled correlators (NaN when a scaled entry leaves
  /// [-1, 1]).
  double lGapB = 0.0;
  double lGapA = 0.0;
  /// P's saturated inequality pair evaluated on L.
  double qbellValueB = 0.0, qbellBoundB = 0.0;
  double qbellValueA = 0.0, qbellBoundA = 0.0;
};

/// Any epsilon, including the limit point 0.
CounterexampleReport counterexample_unchecked(double epsilon);

/// Requires 0 < epsilon < pi/40, else DomainError.
CounterexampleReport build_counterexample(double epsilon);

struct SectionPoint {
  double c11 = 0.0;
  double delta = 0.0;
};

/// Boundary of the crypt set in the (C11, delta1) plane, all other
/// coordinates held at P's values. `side` B plots deltaB[1], A plots
/// deltaA[1]. Points with no feasible delta are omitted.
std::vector<SectionPoint> crypt_section(const DBehavior& anchor, Side side,
                                        int samples = 201, double tol = kDefaultTol);

/// CSV with columns kind,section,c11,delta: boundary rows of both sections
/// followed by the P, Q, L markers.
std::string counterexample_csv(const CounterexampleReport& rep, int samples = 201);

}  // namespace nonloc
