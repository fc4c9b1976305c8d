#include "nonloc/qbell.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace nonloc {

namespace {

// Tolerance for collinear own observables and vanishing denominators.
constexpr double kDegenerate = 1e-12;

double safe_ratio(double num, double den) {
  if (den == 0.0) {
    return num == 0.0 ? std::numeric_limits<double>::quiet_NaN()
                      : std::copysign(std::numeric_limits<double>::infinity(), num);
  }
  return num / den;
}

}  // namespace

QBellCoefficients construct_coefficients(const GeometryParams& g, Side side,
                                         double tol) {
  QBellCoefficients k;
  k.side = side;
  const Pair& own = side == Side::B ? g.thetaB : g.thetaA;
  const Pair& phi = side == Side::B ? g.phiB : g.phiA;
  k.D = side == Side::B ? projection_length_b(g) : projection_length_a(g);

  const double dtheta = own[0] - own[1];
  k.sinDeltaTheta = std::sin(dtheta);
  k.cosDeltaTheta = std::cos(dtheta);
  if (std::abs(k.sinDeltaTheta) <= kDegenerate) {
    throw DegenerateError(std::string("construct_pair: side ") + to_string(side) +
                          " has collinear observables (sin dtheta = 0)");
  }
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) k.sinDelta[i][j] = std::sin(phi[i] - own[j]);
  const Grid& sd = k.sinDelta;

  const double pa = sd[1][1] * sd[1][0];
  const double pb = -sd[0][1] * sd[0][0];
  const double den = pa + pb;
  if (std::abs(den) <= kDegenerate) {
    throw DegenerateError(std::string("construct_pair: side ") + to_string(side) +
                          " has a vanishing normalization denominator");
  }
  double ra = pa / den;
  double rb = pb / den;
  if (ra < -tol || rb < -tol) {
    throw PreconditionError(std::string("construct_pair: side ") + to_string(side) +
                            " violates the plane sign condition (a or b imaginary)");
  }
  ra = std::max(ra, 0.0);
  rb = std::max(rb, 0.0);
  k.a = std::sqrt(ra) / k.sinDeltaTheta;
  k.b = std::sqrt(rb) / k.sinDeltaTheta;

  k.u[0][0] = k.a * sd[0][1];
  k.u[0][1] = -k.a * sd[0][0];
  k.u[1][0] = k.b * sd[1][1];
  k.u[1][1] = k.b * sd[1][0];
  // The lengths s_i enter only through s_i^2 and s_i u_ij; the magnitude
  // keeps the scaling positive for either sign of sin(dtheta).
  k.s[0] = k.D[1] * std::abs(k.a);
  k.s[1] = k.D[0] * std::abs(k.b);

  k.alphaFrac = {k.u[0][1], k.u[0][0]};
  k.betaFrac = {k.u[1][0], k.u[1][1]};
  k.alpha = safe_ratio(k.alphaFrac[0], k.alphaFrac[1]);
  k.beta = safe_ratio(k.betaFrac[0], k.betaFrac[1]);
  return k;
}

QuantumBellInequality inequality_from(const QBellCoefficients& k) {
  QuantumBellInequality ineq;
  ineq.side = k.side;
  const double t0 = k.s[0] * k.D[0];
  const double t1 = k.s[1] * k.D[1];
  const double norm = std::sqrt(t0 * t0 + t1 * t1);
  if (norm <= kDegenerate) {
    throw DegenerateError("construct_pair: vanishing quantum-bound parameter");
  }
  ineq.q = 1.0 / (2.0 * norm);
  for (int i = 0; i < 2; ++i) {
    ineq.Vmarg[i] = ineq.q * k.s[i] * k.s[i];
    for (int j = 0; j < 2; ++j) {
      const double sign = (i * j) == 1 ? -1.0 : 1.0;
      ineq.Vcorr[i][j] = sign * k.s[i] * k.u[i][j];
    }
  }
  ineq.bound = 1.0 / (4.0 * ineq.q);
  return ineq;
}

QuantumBellPair construct_pair(const GeometryParams& g, double tol) {
  QuantumBellPair pair;
  pair.coeffs[0] = construct_coefficients(g, Side::B, tol);
  pair.coeffs[1] = construct_coefficients(g, Side::A, tol);
  pair.B = inequality_from(pair.coeffs[0]);
  pair.A = inequality_from(pair.coeffs[1]);
  return pair;
}

double evaluate(const QuantumBellInequality& ineq, const DBehavior& d) {
  const Pair& delta = ineq.side == Side::B ? d.deltaB : d.deltaA;
  double v = 0.0;
  for (int i = 0; i < 2; ++i) {
    v -= ineq.Vmarg[i] * delta[i];
    for (int j = 0; j < 2; ++j) {
      const double c = ineq.side == Side::B ? d.c[i][j] : d.c[j][i];
      v += ineq.Vcorr[i][j] * c;
    }
  }
  return v;
}

double IdentityResiduals::max_abs_equalities() const {
  return std::max({std::abs(tripleProduct), std::abs(qConsistency), std::abs(uNorm),
                   std::abs(uProduct), std::abs(saturation0), std::abs(saturation1),
                   std::abs(balance), std::abs(boundNorm)});
}

IdentityResiduals identity_residuals(const QBellCoefficients& k,
                                     const QuantumBellInequality& ineq) {
  IdentityResiduals r;
  const auto& V = ineq.Vcorr;
  const auto& u = k.u;
  const auto& sd = k.sinDelta;
  r.minVmarg = std::min(ineq.Vmarg[0], ineq.Vmarg[1]);
  r.corrProduct = V[0][0] * V[0][1] * V[1][0] * V[1][1];
  r.tripleProduct = ineq.Vmarg[1] * V[0][0] * V[0][1] + ineq.Vmarg[0] * V[1][0] * V[1][1];
  for (int i = 0; i < 2; ++i) {
    if (k.s[i] > 0.0) {
      r.qConsistency = std::max(r.qConsistency,
                                std::abs(ineq.Vmarg[i] / (k.s[i] * k.s[i]) - ineq.q));
    }
  }
  r.uNorm = u[0][0] * u[0][0] + u[0][1] * u[0][1] + u[1][0] * u[1][0] +
            u[1][1] * u[1][1] - 1.0;
  r.uProduct = u[0][0] * u[0][1] - u[1][0] * u[1][1];
  r.saturation0 = u[0][0] * sd[0][0] + u[0][1] * sd[0][1];
  r.saturation1 = u[1][0] * sd[1][0] - u[1][1] * sd[1][1];
  const double t0 = std::pow(k.s[0] * k.D[0], 2);
  const double t1 = std::pow(k.s[1] * k.D[1], 2);
  r.balance = t0 * std::abs(sd[0][1] * sd[0][0]) - t1 * std::abs(sd[1][1] * sd[1][0]);
  r.boundNorm = t0 + t1 - 1.0 / (4.0 * ineq.q * ineq.q);
  return r;
}

Pair recovered_d(const QBellCoefficients& k, double cosDeltaTheta) {
  // alpha + 1/alpha and beta + 1/beta multiplied through by u00 u01 u10 u11.
  const auto& u = k.u;
  const double ea = (u[0][1] * u[0][1] + u[0][0] * u[0][0]) * u[1][0] * u[1][1];
  const double eb = (u[1][0] * u[1][0] + u[1][1] * u[1][1]) * u[0][0] * u[0][1];
  const double p = u[0][0] * u[0][1] * u[1][0] * u[1][1];
  const double den = ea + eb;
  if (std::abs(den) <= kDegenerate * kDegenerate) {
    throw DegenerateError("recovered_d: vanishing denominator");
  }
  const double t0 = k.s[0] * k.D[0];
  const double t1 = k.s[1] * k.D[1];
  const double invFourQSq = t0 * t0 + t1 * t1;  // 1 / (4 q^2)
  Pair d{};
  d[0] = invFourQSq / (k.s[0] * k.s[0]) * (ea + 2.0 * cosDeltaTheta * p) / den;
  d[1] = invFourQSq / (k.s[1] * k.s[1]) * (eb - 2.0 * cosDeltaTheta * p) / den;
  return d;
}

ChainReport cryptographic_chain(const QuantumBellInequality& ineq,
                                const DBehavior& d) {
  const Pair& delta = ineq.side == Side::B ? d.deltaB : d.deltaA;
  double t = 0.0;
  for (int i = 0; i < 2; ++i) {
    // s_i^2 = V_i / q.
    t += ineq.Vmarg[i] / ineq.q * delta[i];
  }
  ChainReport rep;
  rep.value = evaluate(ineq, d);
  rep.middle = -ineq.q * t + std::sqrt(std::max(t, 0.0));
  rep.bound = ineq.bound;
  rep.slackLower = rep.middle - rep.value;
  rep.slackUpper = rep.bound - rep.middle;
  return rep;
}

ChainPairReport verify_cryptographic_chain(const GeometryParams& g,
                                           const GeneralRealization& r,
                                           double matchTol) {
  const CBehavior expected = behavior_of(g);
  const CBehavior actual = simulate_cbehavior(r);
  const auto fe = flatten(expected);
  const auto fa = flatten(actual);
  for (std::size_t i = 0; i < fe.size(); ++i) {
    if (std::abs(fe[i] - fa[i]) > matchTol) {
      throw PreconditionError(
          "verify_cryptographic_chain: realization does not match the geometry");
    }
  }
  const QuantumBellPair pair = construct_pair(g);
  const DBehavior d = simulate_dbehavior(r);
  return ChainPairReport{cryptographic_chain(pair.B, d), cryptographic_chain(pair.A, d)};
}

}  // namespace nonloc
