#include "nonloc/random.hpp"

#include <cmath>
#include <numbers>

#include <Eigen/QR>

namespace nonloc {

namespace {

constexpr double kPi = std::numbers::pi;

double uniform(Rng& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

CMatrix ginibre(int rows, int cols, Rng& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  CMatrix m(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) m(i, j) = cplx(n(rng), n(rng));
  return m;
}

CMatrix random_binary_observable(int n, Rng& rng) {
  const CMatrix u = haar_unitary(n, rng);
  Eigen::VectorXcd diag(n);
  for (int i = 0; i < n; ++i) diag(i) = random_int(rng, 0, 1) ? 1.0 : -1.0;
  diag(0) = 1.0;
  diag(n - 1) = -1.0;
  return u * diag.asDiagonal() * u.adjoint();
}

}  // namespace

int random_int(Rng& rng, int lo, int hi) {
  return std::uniform_int_distribution<int>(lo, hi)(rng);
}

TwoQubitRealization random_two_qubit(Rng& rng) {
  TwoQubitRealization r;
  for (int k = 0; k < 2; ++k) r.thetaA[k] = uniform(rng, 0.0, 2.0 * kPi);
  for (int k = 0; k < 2; ++k) r.thetaB[k] = uniform(rng, 0.0, 2.0 * kPi);
  r.chi = uniform(rng, 0.0, kPi / 4);
  return r;
}

CMatrix haar_unitary(int n, Rng& rng) {
  const CMatrix z = ginibre(n, n, rng);
  Eigen::HouseholderQR<CMatrix> qr(z);
  CMatrix q = qr.householderQ() * CMatrix::Identity(n, n);
  const CMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int j = 0; j < n; ++j) {
    const cplx d = r(j, j);
    const double a = std::abs(d);
    if (a > 0.0) q.col(j) *= d / a;
  }
  return q;
}

GeneralRealization random_embedded(Rng& rng, int dimA, int dimB) {
  if (dimA < 2 || dimB < 2) throw DomainError("random_embedded: dimensions must be >= 2");
  const GeneralRealization base = promote(random_two_qubit(rng));
  const CMatrix uA = haar_unitary(2, rng);
  const CMatrix uB = haar_unitary(2, rng);
  Padding pa;
  pa.extra = dimA - 2;
  pa.signs = {random_int(rng, 0, 1) ? 1 : -1, random_int(rng, 0, 1) ? 1 : -1};
  Padding pb;
  pb.extra = dimB - 2;
  pb.signs = {random_int(rng, 0, 1) ? 1 : -1, random_int(rng, 0, 1) ? 1 : -1};
  return embed(base, uA, uB, pa, pb);
}

GeneralRealization random_generic(Rng& rng, int dimA, int dimB) {
  if (dimA < 2 || dimB < 2) throw DomainError("random_generic: dimensions must be >= 2");
  GeneralRealization r;
  r.dimA = dimA;
  r.dimB = dimB;
  r.psi = ginibre(dimA * dimB, 1, rng).col(0);
  r.psi.normalize();
  for (int k = 0; k < 2; ++k) r.A[k] = random_binary_observable(dimA, rng);
  for (int k = 0; k < 2; ++k) r.B[k] = random_binary_observable(dimB, rng);
  return r;
}

}  // namespace nonloc
