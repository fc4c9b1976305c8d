#include "nonloc/realization.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace nonloc {

namespace {

CMatrix xz_observable(double theta) {
  return std::sin(theta) * pauli(1) + std::cos(theta) * pauli(3);
}

void check_observable(const CMatrix& m, int dim, const char* name, double tol) {
  if (m.rows() != dim || m.cols() != dim) {
    throw DomainError(std::string("realization: observable ") + name +
                      " has wrong dimension");
  }
  if (hermiticity_defect(m) > tol) {
    throw DomainError(std::string("realization: observable ") + name +
                      " is not Hermitian");
  }
  if (involution_defect(m) > tol) {
    throw DomainError(std::string("realization: observable ") + name +
                      " does not square to the identity");
  }
}

}  // namespace

void GeneralRealization::validate(double tol) const {
  if (dimA <= 0 || dimB <= 0) {
    throw DomainError("realization: dimensions must be positive");
  }
  if (psi.size() != static_cast<Eigen::Index>(dimA) * dimB) {
    throw DomainError("realization: state length must be dimA * dimB");
  }
  if (std::abs(psi.norm() - 1.0) > tol) {
    throw DomainError("realization: state is not normalized");
  }
  check_observable(A[0], dimA, "A0", tol);
  check_observable(A[1], dimA, "A1", tol);
  check_observable(B[0], dimB, "B0", tol);
  check_observable(B[1], dimB, "B1", tol);
}

void check_chi_convention(double chi, double tol) {
  if (!(chi >= -tol && chi <= std::numbers::pi / 4 + tol)) {
    throw DomainError(
        "chi must satisfy 0 <= chi <= pi/4 (partially entangled state "
        "cos(chi)|00> + sin(chi)|11> with the larger amplitude first)");
  }
}

GeneralRealization promote(const TwoQubitRealization& r) {
  GeneralRealization g;
  g.dimA = 2;
  g.dimB = 2;
  g.psi = CVector::Zero(4);
  g.psi(0) = std::cos(r.chi);
  g.psi(3) = std::sin(r.chi);
  for (int k = 0; k < 2; ++k) {
    g.A[k] = xz_observable(r.thetaA[k]);
    g.B[k] = xz_observable(r.thetaB[k]);
  }
  return g;
}

CBehavior simulate_cbehavior(const GeneralRealization& r) {
  r.validate(1e-9);
  CBehavior b;
  std::array<CVector, 2> aPsi;
  std::array<CVector, 2> bPsi;
  for (int k = 0; k < 2; ++k) {
    aPsi[k] = lift_a(r.A[k], r.dimB) * r.psi;
    bPsi[k] = lift_b(r.B[k], r.dimA) * r.psi;
    b.cA[k] = r.psi.dot(aPsi[k]).real();
    b.cB[k] = r.psi.dot(bPsi[k]).real();
  }
  // A_x and B_y commute, so <A_x B_y> = <A_x psi | B_y psi>.
  for (int x = 0; x < 2; ++x)
    for (int y = 0; y < 2; ++y) b.c[x][y] = aPsi[x].dot(bPsi[y]).real();
  return b;
}

GeneralRealization embed(const GeneralRealization& r, const CMatrix& uA,
                         const CMatrix& uB, const Padding& padA,
                         const Padding& padB) {
  if (uA.rows() != r.dimA || uA.cols() != r.dimA || uB.rows() != r.dimB ||
      uB.cols() != r.dimB) {
    throw DomainError("embed: unitary dimension does not match realization");
  }
  if (padA.extra < 0 || padB.extra < 0) {
    throw DomainError("embed: padding must be non-negative");
  }
  const int nA = r.dimA + padA.extra;
  const int nB = r.dimB + padB.extra;
  const CVector rotated = kron(uA, uB) * r.psi;

  GeneralRealization out;
  out.dimA = nA;
  out.dimB = nB;
  out.psi = CVector::Zero(static_cast<Eigen::Index>(nA) * nB);
  for (int i = 0; i < r.dimA; ++i)
    for (int j = 0; j < r.dimB; ++j) out.psi(i * nB + j) = rotated(i * r.dimB + j);
  for (int k = 0; k < 2; ++k) {
    out.A[k] = direct_sum_identity(uA * r.A[k] * uA.adjoint(), padA.extra,
                                   padA.signs[k]);
    out.B[k] = direct_sum_identity(uB * r.B[k] * uB.adjoint(), padB.extra,
                                   padB.signs[k]);
  }
  return out;
}

GeneralRealization swap_parties(const GeneralRealization& r) {
  GeneralRealization out;
  out.dimA = r.dimB;
  out.dimB = r.dimA;
  out.psi = CVector(r.psi.size());
  for (int i = 0; i < r.dimA; ++i)
    for (int j = 0; j < r.dimB; ++j) out.psi(j * r.dimA + i) = r.psi(i * r.dimB + j);
  out.A = r.B;
  out.B = r.A;
  return out;
}

}  // namespace nonloc
