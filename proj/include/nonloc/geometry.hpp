#pragma once

#include <array>
#include <optional>
#include <string>

#include "nonloc/behavior.hpp"
#include "nonloc/criteria.hpp"
#include "nonloc/realization.hpp"

namespace nonloc {

/// Angles of the two-plane picture of a realization. All angles are measured
/// from the common vector psi' of the A-plane and the B-plane.
///   thetaB[y]  angle of B_y|psi>            (B-plane)
///   phiB[x]    angle of the projection of A_x|psi> onto the B-plane
///   thetaA[x]  angle of A_x|psi>            (A-plane)
///   phiA[y]    angle of the projection of B_y|psi> onto the A-plane
///   psiPrimeNorm = |psi'| = cos(2 chi)
struct GeometryParams {
  Pair thetaA{};
  Pair thetaB{};
  Pair phiB{};
  Pair phiA{};
  double chi = 0.0;
  double psiPrimeNorm = 1.0;
};

GeometryParams projection_angles(const TwoQubitRealization& r);

TwoQubitRealization to_realization(const GeometryParams& g);

/// Closed-form C-space behavior of the two-qubit realization with these
/// angles.
CBehavior behavior_of(const GeometryParams& g);

/// sqrt(d^B_x) and sqrt(d^A_y), the lengths of the in-plane projections.
Pair projection_length_b(const GeometryParams& g);
Pair projection_length_a(const GeometryParams& g);

/// Outcome of testing the hypotheses under which the geometry is unique:
/// valid, nonlocal, some accepted sign pattern, and TLM saturation for both
/// scalings of the correlators.
struct UniquenessPreconditions {
  bool satisfied = false;
  std::optional<SignPattern> pattern;
  double gapB = 0.0;
  double gapA = 0.0;
  std::string reason;
};

UniquenessPreconditions check_uniqueness_preconditions(const CBehavior& b,
                                                       double tol = kDefaultTol);

struct ReconstructionReport {
  GeometryParams geometry;
  SignPattern pattern;
  double gapB = 0.0;
  double gapA = 0.0;
  /// max |C_xy - C_xy(geometry)| over the four settings.
  double residual = 0.0;
  /// cos(2 chi) = 0: angles fixed up to a common rotation, gauge thetaA[0] = 0.
  bool maximallyEntangled = false;
};

/// Recover the unique geometry of a behavior. Throws PreconditionError when
/// the hypotheses fail, DomainError when a marginal exceeds cos(2 chi).
ReconstructionReport reconstruct_report(const CBehavior& b,
                                        double tol = kDefaultTol);

inline GeometryParams reconstruct(const CBehavior& b, double tol = kDefaultTol) {
  return reconstruct_report(b, tol).geometry;
}

/// {theta}, {-theta}, {pi - theta}, {pi + theta}, chi kept.
std::array<GeometryParams, 4> symmetry_class(const GeometryParams& g);

bool symmetry_equivalent(const GeometryParams& g1, const GeometryParams& g2,
                         double tol = kDefaultTol);

/// Distance of two angles modulo 2 pi.
double angle_distance(double a, double b);

}  // namespace nonloc
