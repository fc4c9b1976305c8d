#include <cmath>
#include <random>
#include <vector>

#include <Eigen/Eigenvalues>

#include "nonloc/realization.hpp"

namespace nonloc {

namespace {

// Row-major reshape: M(i, j) = psi[i * dimB + j].
CMatrix state_matrix(const GeneralRealization& r) {
  CMatrix m(r.dimA, r.dimB);
  for (int i = 0; i < r.dimA; ++i)
    for (int j = 0; j < r.dimB; ++j) m(i, j) = r.psi(i * r.dimB + j);
  return m;
}

// Orthonormal basis (Hilbert-Schmidt) of the Hermitian n x n matrices.
std::vector<CMatrix> hermitian_basis(int n) {
  std::vector<CMatrix> basis;
  const double h = 1.0 / std::sqrt(2.0);
  for (int k = 0; k < n; ++k) {
    CMatrix e = CMatrix::Zero(n, n);
    e(k, k) = 1.0;
    basis.push_back(e);
  }
  for (int k = 0; k < n; ++k) {
    for (int l = k + 1; l < n; ++l) {
      CMatrix re = CMatrix::Zero(n, n);
      re(k, l) = h;
      re(l, k) = h;
      basis.push_back(re);
      CMatrix im = CMatrix::Zero(n, n);
      im(k, l) = cplx(0.0, -h);
      im(l, k) = cplx(0.0, h);
      basis.push_back(im);
    }
  }
  return basis;
}

}  // namespace

ConditionalStates conditional_states(const GeneralRealization& r, Side side,
                                     int setting) {
  if (setting < 0 || setting > 1) throw DomainError("setting must be 0 or 1");
  if (side == Side::A) return conditional_states(swap_parties(r), Side::B, setting);

  const CMatrix psiM = state_matrix(r);
  const CMatrix id = CMatrix::Identity(r.dimA, r.dimA);
  const CMatrix plus = 0.5 * (id + r.A[setting]);
  const CMatrix minus = 0.5 * (id - r.A[setting]);

  ConditionalStates cs;
  // tr_A[(P (x) I)|psi><psi|](j, j') = sum_i (P Psi)_ij conj(Psi_ij').
  cs.rhoPlus = (plus * psiM).transpose() * psiM.conjugate();
  cs.rhoMinus = (minus * psiM).transpose() * psiM.conjugate();
  cs.rhoSum = cs.rhoPlus + cs.rhoMinus;

  Eigen::SelfAdjointEigenSolver<CMatrix> es(cs.rhoSum);
  cs.eigenvalues = es.eigenvalues();
  cs.overlap = es.eigenvectors().adjoint() * (cs.rhoPlus - cs.rhoMinus) *
               es.eigenvectors();
  return cs;
}

double guessing_bias(const GeneralRealization& r, Side side, int setting,
                     double supportTol) {
  r.validate(1e-9);
  const ConditionalStates cs = conditional_states(r, side, setting);
  const Eigen::Index n = cs.eigenvalues.size();
  double sum = 0.0;
  for (Eigen::Index k = 0; k < n; ++k) {
    const double mk = cs.eigenvalues(k);
    if (mk <= supportTol) continue;
    for (Eigen::Index l = 0; l < n; ++l) {
      const double ml = cs.eigenvalues(l);
      if (ml <= supportTol) continue;
      sum += 2.0 * std::norm(cs.overlap(k, l)) / (mk + ml);
    }
  }
  return std::sqrt(sum);
}

OracleResult guessing_bias_oracle(const GeneralRealization& r, Side side,
                                  int setting, const OracleOptions& opts) {
  r.validate(1e-9);
  if (setting < 0 || setting > 1) throw DomainError("setting must be 0 or 1");
  if (side == Side::A) {
    return guessing_bias_oracle(swap_parties(r), Side::B, setting, opts);
  }

  // Real-vector images of X|psi> for each basis element X of the guesser's
  // Hermitian operators; the constraint <X^2> = 1 is |W c|^2 = 1.
  const auto basis = hermitian_basis(r.dimB);
  const Eigen::Index nb = static_cast<Eigen::Index>(basis.size());
  Eigen::MatrixXd w(2 * r.psi.size(), nb);
  for (Eigen::Index j = 0; j < nb; ++j) {
    w.col(j) = real_vector(lift_b(basis[j], r.dimA) * r.psi);
  }
  const RVector target = real_vector(lift_a(r.A[setting], r.dimB) * r.psi);

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(w.transpose() * w);
  const double lmax = es.eigenvalues().maxCoeff();
  std::vector<Eigen::Index> kept;
  for (Eigen::Index k = 0; k < nb; ++k)
    if (es.eigenvalues()(k) > 1e-12 * std::max(lmax, 1e-300)) kept.push_back(k);

  // Whitened coordinates z: X|psi> images are orthonormal in z, the
  // objective is g . z and the feasible set is the unit sphere.
  const RVector proj = es.eigenvectors().transpose() * (w.transpose() * target);
  RVector g(static_cast<Eigen::Index>(kept.size()));
  for (std::size_t i = 0; i < kept.size(); ++i) {
    g(static_cast<Eigen::Index>(i)) = proj(kept[i]) / std::sqrt(es.eigenvalues()(kept[i]));
  }

  OracleResult best;
  best.value = -1.0;
  const double gnorm = g.norm();
  if (gnorm == 0.0 || g.size() == 0) {
    return OracleResult{0.0, 0.0, true};
  }

  std::mt19937_64 rng(opts.seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  for (int restart = 0; restart < opts.restarts; ++restart) {
    RVector z(g.size());
    for (Eigen::Index i = 0; i < z.size(); ++i) z(i) = normal(rng);
    z.normalize();
    double residual = 0.0;
    bool converged = false;
    for (int it = 0; it < opts.iterations; ++it) {
      z += (opts.step / gnorm) * g;
      z.normalize();
      residual = (g - g.dot(z) * z).norm();
      if (residual <= opts.convergenceTol * gnorm) {
        converged = true;
        break;
      }
    }
    const double value = g.dot(z);
    if (value > best.value) {
      best = OracleResult{value, residual, converged};
    }
  }
  return best;
}

DBehavior simulate_dbehavior(const GeneralRealization& r) {
  DBehavior d;
  d.c = simulate_cbehavior(r).c;
  for (int k = 0; k < 2; ++k) {
    const double db = guessing_bias(r, Side::B, k);
    const double da = guessing_bias(r, Side::A, k);
    d.deltaB[k] = db * db;
    d.deltaA[k] = da * da;
  }
  return d;
}

}  // namespace nonloc
