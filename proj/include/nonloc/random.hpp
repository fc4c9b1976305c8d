#pragma once

#include <cstdint>
#include <random>

#include "nonloc/realization.hpp"

namespace nonloc {

using Rng = std::mt19937_64;

/// Angles uniform on [0, 2pi), chi uniform on [0, pi/4].
TwoQubitRealization random_two_qubit(Rng& rng);

/// Haar-distributed n x n unitary (QR of a complex Ginibre matrix with the
/// phases of R's diagonal divided out).
CMatrix haar_unitary(int n, Rng& rng);

/// Random two-qubit realization rotated by Haar local unitaries and padded
/// to the requested local dimensions (>= 2) with random-sign identity
/// blocks.
GeneralRealization random_embedded(Rng& rng, int dimA, int dimB);

/// Generic realization: Haar-random pure state, observables U diag(+-1) U^dagger
/// with Haar U and random signs (at least one of each sign).
GeneralRealization random_generic(Rng& rng, int dimA, int dimB);

/// Uniform integer in [lo, hi].
int random_int(Rng& rng, int lo, int hi);

}  // namespace nonloc
