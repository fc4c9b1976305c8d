#pragma once

#include <array>
#include <cstdint>

#include "nonloc/behavior.hpp"
#include "nonloc/common.hpp"
#include "nonloc/linalg.hpp"

namespace nonloc {

/// State cos(chi)|00> + sin(chi)|11> with observables
/// sin(theta) sigma_1 + cos(theta) sigma_3 on each side.
struct TwoQubitRealization {
  Pair thetaA{};
  Pair thetaB{};
  double chi = 0.0;
};

/// Pure bipartite state with two binary observables per party. The state is
/// indexed as psi[i * dimB + j] for Alice's basis index i and Bob's j.
struct GeneralRealization {
  int dimA = 0;
  int dimB = 0;
  CVector psi;
  std::array<CMatrix, 2> A;
  std::array<CMatrix, 2> B;

  /// Throws DomainError when shapes, normalization, hermiticity or
  /// A^2 = B^2 = I fail beyond `tol`.
  void validate(double tol = 1e-12) const;
};

/// Bob's (Side::B) or Alice's (Side::A) subnormalized conditional states
/// for one setting of the other party, with the eigen-data used by the
/// closed-form guessing bias.
struct ConditionalStates {
  CMatrix rhoPlus;
  CMatrix rhoMinus;
  CMatrix rhoSum;
  /// Eigenvalues m_k of rhoSum (ascending).
  RVector eigenvalues;
  /// a_kk' = <k|(rhoPlus - rhoMinus)|k'> in the eigenbasis of rhoSum.
  CMatrix overlap;
};

GeneralRealization promote(const TwoQubitRealization& r);

/// Validates 0 <= chi <= pi/4.
void check_chi_convention(double chi, double tol = kDefaultTol);

CBehavior simulate_cbehavior(const GeneralRealization& r);

/// Conditional states held by `side` when the opposite party measures its
/// observable `setting`.
ConditionalStates conditional_states(const GeneralRealization& r, Side side,
                                     int setting);

/// Guessing bias D: Side::B with setting x gives D^B_x (Bob guessing the
/// outcome of A_x), Side::A with setting y gives D^A_y. Eigenvalues below
/// `supportTol` are outside the support and dropped from the sum.
double guessing_bias(const GeneralRealization& r, Side side, int setting,
                     double supportTol = 1e-12);

struct OracleOptions {
  int iterations = 500;
  int restarts = 20;
  std::uint64_t seed = 0x5eed;
  double step = 0.5;
  double convergenceTol = 1e-12;
};

struct OracleResult {
  double value = 0.0;
  /// Norm of the tangential gradient at the best point.
  double residual = 0.0;
  bool converged = false;
};

/// Independent numerical maximization of <A_x (x) X_B> over Hermitian X_B
/// with <X_B^2> = 1 (and the A-side analogue): projected gradient ascent
/// with random restarts over Hermitian-matrix coordinates, whitened by the
/// metric the constraint induces on the real-vector images X|psi>.
OracleResult guessing_bias_oracle(const GeneralRealization& r, Side side,
                                  int setting, const OracleOptions& opts = {});

DBehavior simulate_dbehavior(const GeneralRealization& r);

/// Block extension of one party's observables by a signed identity.
struct Padding {
  int extra = 0;
  std::array<int, 2> signs{1, 1};
};

/// Apply local unitaries, then embed into larger local spaces. The state has
/// no weight on the padding, so every correlator and guessing bias is kept.
GeneralRealization embed(const GeneralRealization& r, const CMatrix& uA,
                         const CMatrix& uB, const Padding& padA = {},
                         const Padding& padB = {});

/// Exchange the roles of Alice and Bob.
GeneralRealization swap_parties(const GeneralRealization& r);

}  // namespace nonloc
