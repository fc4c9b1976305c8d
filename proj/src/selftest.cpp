#include "nonloc/selftest.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <tuple>

#include <Eigen/Eigenvalues>

namespace nonloc {

namespace {

constexpr double kDegenerate = 1e-12;

std::pair<CMatrix, CMatrix> zx_pair(const CMatrix& o0, const CMatrix& o1,
                                    const Pair& t, const char* side) {
  const double s = std::sin(t[0] - t[1]);
  if (std::abs(s) <= kDegenerate) {
    throw DegenerateError(std::string("derive_operators: side ") + side +
                          " observables are collinear (sin dtheta = 0)");
  }
  CMatrix z = (std::sin(t[0]) * o1 - std::sin(t[1]) * o0) / s;
  CMatrix x = (std::cos(t[1]) * o0 - std::cos(t[0]) * o1) / s;
  return {z, x};
}

}  // namespace

DerivedOperators derive_operators(const GeneralRealization& r,
                                  const GeometryParams& g) {
  DerivedOperators ops;
  std::tie(ops.ZA, ops.XA) = zx_pair(r.A[0], r.A[1], g.thetaA, "A");
  std::tie(ops.ZB, ops.XB) = zx_pair(r.B[0], r.B[1], g.thetaB, "B");
  ops.chi = g.chi;
  ops.thetaA = g.thetaA;
  ops.thetaB = g.thetaB;
  return ops;
}

double max_residual(const NamedResiduals& r) {
  double m = 0.0;
  for (const auto& [name, v] : r) m = std::max(m, std::abs(v));
  return m;
}

NamedResiduals anticommutator_residual(const GeneralRealization& r,
                                       const DerivedOperators& ops) {
  const CVector& psi = r.psi;
  const auto onA = [&](const CMatrix& m) { return lift_a(m, r.dimB); };
  const auto onB = [&](const CMatrix& m) { return lift_b(m, r.dimA); };
  NamedResiduals out;

  const CMatrix a0 = onA(r.A[0]), a1 = onA(r.A[1]);
  const CMatrix b0 = onB(r.B[0]), b1 = onB(r.B[1]);
  const double cA = std::cos(ops.thetaA[0] - ops.thetaA[1]);
  const double cB = std::cos(ops.thetaB[0] - ops.thetaB[1]);
  out.emplace_back("anticommB", ((b0 * b1 + b1 * b0) * psi - 2.0 * cB * psi).norm());
  out.emplace_back("anticommA", ((a0 * a1 + a1 * a0) * psi - 2.0 * cA * psi).norm());

  const CMatrix zA = onA(ops.ZA), xA = onA(ops.XA);
  const CMatrix zB = onB(ops.ZB), xB = onB(ops.XB);
  out.emplace_back("zSquareB", (zB * (zB * psi) - psi).norm());
  out.emplace_back("zSquareA", (zA * (zA * psi) - psi).norm());
  out.emplace_back("xSquareB", (xB * (xB * psi) - psi).norm());
  out.emplace_back("xSquareA", (xA * (xA * psi) - psi).norm());
  out.emplace_back("xzB", (xB * (zB * psi) + zB * (xB * psi)).norm());
  out.emplace_back("xzA", (xA * (zA * psi) + zA * (xA * psi)).norm());
  return out;
}

CVector reference_state(double chi) {
  CVector t = CVector::Zero(4);
  t(0) = std::cos(chi);
  t(3) = std::sin(chi);
  return t;
}

CMatrix swap_output(const GeneralRealization& r, const DerivedOperators& ops,
                    const CVector& input) {
  const Eigen::Index n = input.size();
  const CMatrix id = CMatrix::Identity(n, n);
  const CMatrix zA = lift_a(ops.ZA, r.dimB), xA = lift_a(ops.XA, r.dimB);
  const CMatrix zB = lift_b(ops.ZB, r.dimA), xB = lift_b(ops.XB, r.dimA);

  const CVector pp = (id + zA) * ((id + zB) * input);
  const CVector pm = (id + zA) * ((id - zB) * input);
  const CVector mp = (id - zA) * ((id + zB) * input);
  const CVector mm = (id - zA) * ((id - zB) * input);

  CMatrix cols(n, 4);
  cols.col(0) = 0.25 * pp;
  cols.col(1) = 0.25 * (xB * pm);
  cols.col(2) = 0.25 * (xA * mp);
  cols.col(3) = 0.25 * (xA * (xB * mm));
  return cols;
}

IsometryResult analyze_output(const CMatrix& columns, const CVector& target) {
  IsometryResult res;
  const double norm2 = columns.squaredNorm();
  if (norm2 <= kDegenerate * kDegenerate) {
    throw DegenerateError("swap_isometry: output state vanishes");
  }
  res.outputNorm = std::sqrt(norm2);

  // Junk vector paired with the target: sum_ab conj(t_ab) v_ab.
  const CVector junk = columns * target.conjugate();
  res.junkNorm = junk.norm();
  res.fidelity = junk.squaredNorm() / norm2;

  // rho(ab, a'b') = <v_a'b'|v_ab> / norm2.
  const CMatrix rho = (columns.adjoint() * columns).transpose() / norm2;
  Eigen::SelfAdjointEigenSolver<CMatrix> es(rho);
  CVector v = es.eigenvectors().col(3);
  Eigen::Index imax = 0;
  v.cwiseAbs().maxCoeff(&imax);
  v *= std::conj(v(imax)) / std::abs(v(imax));
  res.extractedState = v;
  return res;
}

IsometryResult swap_isometry(const GeneralRealization& r,
                             const DerivedOperators& ops) {
  r.validate(1e-9);
  IsometryResult res = analyze_output(swap_output(r, ops, r.psi), reference_state(ops.chi));
  res.residuals = anticommutator_residual(r, ops);
  return res;
}

void ExtendedRealization::validate(double tol) const {
  base.validate(tol);
  if (B2.rows() != base.dimB || B2.cols() != base.dimB) {
    throw DomainError("extended realization: B2 has wrong dimension");
  }
  if (hermiticity_defect(B2) > tol) {
    throw DomainError("extended realization: B2 is not Hermitian");
  }
  if (involution_defect(B2) > tol) {
    throw DomainError("extended realization: B2 does not square to the identity");
  }
}

}  // namespace nonloc
