#include "nonloc/linalg.hpp"

#include "nonloc/common.hpp"

namespace nonloc {

CMatrix pauli(int k) {
  CMatrix m = CMatrix::Zero(2, 2);
  switch (k) {
    case 0:
      m(0, 0) = 1.0;
      m(1, 1) = 1.0;
      break;
    case 1:
      m(0, 1) = 1.0;
      m(1, 0) = 1.0;
      break;
    case 2:
      m(0, 1) = cplx(0.0, -1.0);
      m(1, 0) = cplx(0.0, 1.0);
      break;
    case 3:
      m(0, 0) = 1.0;
      m(1, 1) = -1.0;
      break;
    default:
      throw DomainError("pauli: index must be 0..3");
  }
  return m;
}

CMatrix kron(const CMatrix& a, const CMatrix& b) {
  CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

RVector real_vector(const CVector& v) {
  RVector r(2 * v.size());
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    r(2 * i) = v(i).real();
    r(2 * i + 1) = v(i).imag();
  }
  return r;
}

CMatrix lift_a(const CMatrix& a, Eigen::Index dimB) {
  return kron(a, CMatrix::Identity(dimB, dimB));
}

CMatrix lift_b(const CMatrix& b, Eigen::Index dimA) {
  return kron(CMatrix::Identity(dimA, dimA), b);
}

double expect(const CMatrix& m, const CVector& v) {
  return v.dot(m * v).real();
}

double hermiticity_defect(const CMatrix& m) {
  return (m - m.adjoint()).cwiseAbs().maxCoeff() * 0.5;
}

double involution_defect(const CMatrix& m) {
  return (m * m - CMatrix::Identity(m.rows(), m.cols())).cwiseAbs().maxCoeff();
}

CMatrix direct_sum_identity(const CMatrix& m, Eigen::Index extra, int sign) {
  const Eigen::Index n = m.rows();
  CMatrix out = CMatrix::Zero(n + extra, n + extra);
  out.topLeftCorner(n, n) = m;
  if (extra > 0) {
    out.bottomRightCorner(extra, extra) =
        static_cast<double>(sign) * CMatrix::Identity(extra, extra);
  }
  return out;
}

}  // namespace nonloc
