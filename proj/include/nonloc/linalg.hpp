#pragma once

#include <complex>

#include <Eigen/Dense>

namespace nonloc {

using cplx = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RVector = Eigen::VectorXd;

/// Pauli matrix sigma_k for k in {0, 1, 2, 3}; sigma_0 is the identity.
CMatrix pauli(int k);

CMatrix kron(const CMatrix& a, const CMatrix& b);

/// Interleaved (Re c0, Im c0, Re c1, Im c1, ...) real-vector representation.
/// Inner products of these vectors are the real parts of the complex ones.
RVector real_vector(const CVector& v);

/// Operator A (x) I acting on a dimA*dimB vector.
CMatrix lift_a(const CMatrix& a, Eigen::Index dimB);
/// Operator I (x) B acting on a dimA*dimB vector.
CMatrix lift_b(const CMatrix& b, Eigen::Index dimA);

/// Real expectation value <v|M|v> of a Hermitian M.
double expect(const CMatrix& m, const CVector& v);

/// Max-norm distance to the nearest Hermitian matrix.
double hermiticity_defect(const CMatrix& m);

/// Max-norm of M*M - I.
double involution_defect(const CMatrix& m);

/// Direct sum diag(m, sign * I_extra).
CMatrix direct_sum_identity(const CMatrix& m, Eigen::Index extra, int sign);

}  // namespace nonloc
