#pragma once

#include <array>
#include <string>
#include <vector>

#include "nonloc/behavior.hpp"
#include "nonloc/geometry.hpp"
#include "nonloc/realization.hpp"

namespace nonloc {

/// Linear inequality on D-space behaviors,
///   -sum_i Vmarg[i] delta_i + sum_ij Vcorr[i][j] C(i, j) <= bound,
/// where i indexes the measurements whose outcomes are guessed. For the
/// B side, delta = deltaB and C(i, j) = C_ij; for the A side delta = deltaA
/// and C(i, j) = C_ji.
struct QuantumBellInequality {
  Side side = Side::B;
  Pair Vmarg{};
  Grid Vcorr{};
  double q = 0.0;
  double bound = 0.0;
};

/// Intermediate quantities of the construction for one side. Indices follow
/// the inequality: i is the guessed measurement (projection), j the own one.
struct QBellCoefficients {
  Side side = Side::B;
  Grid u{};
  Pair s{};
  double a = 0.0;
  double b = 0.0;
  /// alpha = u01/u00 and beta = u10/u11, infinite when the denominator is 0.
  double alpha = 0.0;
  double beta = 0.0;
  /// Numerator/denominator pairs of alpha and beta.
  Pair alphaFrac{};
  Pair betaFrac{};
  /// Lengths of the projections, sqrt(d_i).
  Pair D{};
  /// sinDelta[i][j] = sin(phi_i - theta_j).
  Grid sinDelta{};
  double sinDeltaTheta = 0.0;
  double cosDeltaTheta = 0.0;
};

struct QuantumBellPair {
  QuantumBellInequality B;
  QuantumBellInequality A;
  std::array<QBellCoefficients, 2> coeffs;  // {B side, A side}
};

/// Build both inequalities saturated by the geometry. Throws DegenerateError
/// when an own pair of observables is collinear (sin(dtheta) = 0) and
/// PreconditionError when the plane sign condition fails (a or b imaginary).
QuantumBellPair construct_pair(const GeometryParams& g, double tol = kDefaultTol);

/// One side only.
QBellCoefficients construct_coefficients(const GeometryParams& g, Side side,
                                         double tol = kDefaultTol);
QuantumBellInequality inequality_from(const QBellCoefficients& k);

double evaluate(const QuantumBellInequality& ineq, const DBehavior& d);

/// Named residuals of the coefficient identities and saturation equations.
struct IdentityResiduals {
  double minVmarg = 0.0;        // >= 0 expected
  double corrProduct = 0.0;     // <= 0 expected
  double tripleProduct = 0.0;   // V1 V00 V01 + V0 V10 V11, 0 expected
  double qConsistency = 0.0;    // |V_i / s_i^2 - q|
  double uNorm = 0.0;           // sum u^2 - 1
  double uProduct = 0.0;        // u00 u01 - u10 u11
  double saturation0 = 0.0;     // u00 sinD00 + u01 sinD01
  double saturation1 = 0.0;     // u10 sinD10 - u11 sinD11
  double balance = 0.0;         // (s0 D0)^2 |sD01 sD00| - (s1 D1)^2 |sD11 sD10|
  double boundNorm = 0.0;       // (s0 D0)^2 + (s1 D1)^2 - 1/(4 q^2)
  double max_abs_equalities() const;
};

IdentityResiduals identity_residuals(const QBellCoefficients& k,
                                     const QuantumBellInequality& ineq);

/// Squared projection lengths implied by the inequality's alpha, beta for a
/// trial cos(dtheta). At the generating angle they equal d_0, d_1.
Pair recovered_d(const QBellCoefficients& k, double cosDeltaTheta);

/// The bound chain value <= middle <= bound, with
/// middle = -q T + sqrt(T), T = sum_i (s_i D_i)^2 for the behavior's D_i.
struct ChainReport {
  double value = 0.0;
  double middle = 0.0;
  double bound = 0.0;
  double slackLower = 0.0;  // middle - value
  double slackUpper = 0.0;  // bound - middle
};

ChainReport cryptographic_chain(const QuantumBellInequality& ineq,
                                const DBehavior& d);

struct ChainPairReport {
  ChainReport B;
  ChainReport A;
};

/// Chain for the pair built from `g`, evaluated on the realization's
/// D-behavior. Throws PreconditionError when the realization's C-behavior
/// differs from the one implied by `g` by more than `matchTol`.
ChainPairReport verify_cryptographic_chain(const GeometryParams& g,
                                           const GeneralRealization& r,
                                           double matchTol = 1e-7);

struct UniquenessSolution {
  double cosA = 0.0;
  double cosB = 0.0;
  double residual = 0.0;
};

struct UniquenessReport {
  bool trivialOnly = true;
  double referenceA = 0.0;
  double referenceB = 0.0;
  std::vector<UniquenessSolution> solutions;
};

struct UniquenessOptions {
  double gridStep = 1e-3;
  double solutionTol = 1e-8;
  double distinctTol = 1e-4;
  std::size_t maxSolutions = 64;
};

/// Solve the four squared-ratio equations in (cos dthetaA, cos dthetaB) on
/// [-1, 1]^2. Throws DegenerateError when a ratio denominator vanishes at
/// the reference point.
UniquenessReport uniqueness_check(const GeometryParams& g,
                                  const UniquenessOptions& opts = {});

UniquenessReport uniqueness_check(const QuantumBellPair& pair,
                                  const UniquenessOptions& opts = {});

}  // namespace nonloc
