#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "nonloc/geometry.hpp"
#include "nonloc/realization.hpp"

namespace nonloc {

/// Local Z/X pairs built from the observables and the geometry's angles.
/// Matrices act on the local spaces (dimA x dimA, dimB x dimB).
struct DerivedOperators {
  CMatrix ZA;
  CMatrix XA;
  CMatrix ZB;
  CMatrix XB;
  double chi = 0.0;
  Pair thetaA{};
  Pair thetaB{};
};

/// Z = (sin t0 O1 - sin t1 O0) / sin(t0 - t1) and
/// X = (cos t1 O0 - cos t0 O1) / sin(t0 - t1) on each side. Throws
/// DegenerateError when sin(t0 - t1) vanishes on either side.
DerivedOperators derive_operators(const GeneralRealization& r,
                                  const GeometryParams& g);

using NamedResiduals = std::vector<std::pair<std::string, double>>;

double max_residual(const NamedResiduals& r);

/// Norms of the state-dependent operator relations: pairwise anticommutation
/// of the observables, Z^2|psi> = |psi>, X^2|psi> = |psi> and
/// (XZ + ZX)|psi> = 0 on both sides.
NamedResiduals anticommutator_residual(const GeneralRealization& r,
                                       const DerivedOperators& ops);

struct IsometryResult {
  double fidelity = 0.0;
  /// Dominant eigenvector of the ancilla-pair state, phase chosen so that
  /// its largest entry is real and positive. Basis |00>, |01>, |10>, |11>.
  CVector extractedState;
  /// Norm of the junk vector paired with the target state.
  double junkNorm = 0.0;
  /// Norm of the full output.
  double outputNorm = 0.0;
  NamedResiduals residuals;
};

/// cos(chi)|00> + sin(chi)|11>.
CVector reference_state(double chi);

/// Output of the swap circuit on `input`: column ab is the junk-register
/// vector multiplying the ancilla state |ab>.
CMatrix swap_output(const GeneralRealization& r, const DerivedOperators& ops,
                    const CVector& input);

/// Analysis of a swap output against a target ancilla state.
IsometryResult analyze_output(const CMatrix& columns, const CVector& target);

/// Swap isometry applied to the realization's own state. Throws
/// DegenerateError when the output vanishes.
IsometryResult swap_isometry(const GeneralRealization& r,
                             const DerivedOperators& ops);

/// A realization with a third binary observable on Bob's side.
struct ExtendedRealization {
  GeneralRealization base;
  CMatrix B2;
  void validate(double tol = 1e-12) const;
};

struct ProtocolReport {
  bool selfTested = false;
  GeometryParams geometry;
  double fidelity = 0.0;
  NamedResiduals residuals;
  std::vector<std::string> failures;
  /// Angle of B2 in the B-plane (second protocol only).
  std::optional<double> thetaB2;
};

inline constexpr double kProtocolTol = 1e-7;

/// Added-observable protocol with B2 playing the role of Z_B. Throws
/// PreconditionError when the base behavior cannot be reconstructed.
ProtocolReport protocol_zb(const ExtendedRealization& ext, double tol = kProtocolTol);

/// Protocol using a second geometry built from {A0, A1, B0, B2}. Throws
/// PreconditionError when the base behavior cannot be reconstructed and
/// DegenerateError when B2|psi> = +-B0|psi>.
ProtocolReport protocol_lemma6_pair(const ExtendedRealization& ext,
                                    double tol = kProtocolTol);

/// Repeated extension over Bob's measurement list B_0, B_1, ..., B_n. Each
/// B_k (k >= 2) is attached to the first already certified B_i such that
/// {A0, A1, B_i, B_k} satisfies the hypotheses, and checked with
/// protocol_lemma6_pair on the base (B_i, B_j) for a certified partner B_j.
/// Measurements without such a partner get a failing report. For Side::A the
/// list is Alice's and the parties are swapped internally.
std::vector<ProtocolReport> protocol_chain(const GeneralRealization& base,
                                           const std::vector<CMatrix>& extra,
                                           Side side = Side::B,
                                           double tol = kProtocolTol);

}  // namespace nonloc
