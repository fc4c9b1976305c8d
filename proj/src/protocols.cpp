#include <cmath>
#include <optional>
#include <string>

#include "nonloc/selftest.hpp"

namespace nonloc {

namespace {

void check(ProtocolReport& rep, const std::string& name, double value, double tol) {
  rep.residuals.emplace_back(name, value);
  if (!(std::abs(value) <= tol)) {
    rep.failures.push_back(name + " = " + std::to_string(value));
  }
}

GeometryParams base_geometry(const GeneralRealization& r) {
  try {
    return reconstruct(simulate_cbehavior(r));
  } catch (const PreconditionError& e) {
    throw PreconditionError(std::string("protocol: base behavior: ") + e.what());
  } catch (const DomainError& e) {
    throw PreconditionError(std::string("protocol: base behavior: ") + e.what());
  }
}

void finish(ProtocolReport& rep, const GeneralRealization& r,
            const DerivedOperators& ops, double tol) {
  IsometryResult iso;
  try {
    iso = swap_isometry(r, ops);
  } catch (const DegenerateError& e) {
    rep.failures.push_back(e.what());
    return;
  }
  rep.fidelity = iso.fidelity;
  for (const auto& [name, v] : iso.residuals) check(rep, name, v, tol);
  check(rep, "infidelity", 1.0 - iso.fidelity, tol);
  rep.selfTested = rep.failures.empty();
}

}  // namespace

ProtocolReport protocol_zb(const ExtendedRealization& ext, double tol) {
  ext.validate(1e-9);
  const GeneralRealization& r = ext.base;
  ProtocolReport rep;
  rep.geometry = base_geometry(r);
  const GeometryParams& g = rep.geometry;

  const CMatrix b2 = lift_b(ext.B2, r.dimA);
  const double cos2chi = std::cos(2.0 * g.chi);
  check(rep, "marginalB2", expect(b2, r.psi) - cos2chi, tol);
  for (int x = 0; x < 2; ++x) {
    const CMatrix ab = lift_a(r.A[x], r.dimB) * b2;
    check(rep, "corrA" + std::to_string(x) + "B2",
          expect(ab, r.psi) - std::cos(g.thetaA[x]), tol);
  }
  if (!rep.failures.empty()) return rep;

  DerivedOperators ops = derive_operators(r, g);
  ops.ZB = ext.B2;
  finish(rep, r, ops, tol);
  return rep;
}

ProtocolReport protocol_lemma6_pair(const ExtendedRealization& ext, double tol) {
  ext.validate(1e-9);
  const GeneralRealization& r = ext.base;
  const CVector b0psi = lift_b(r.B[0], r.dimA) * r.psi;
  const CVector b2psi = lift_b(ext.B2, r.dimA) * r.psi;
  if ((b2psi - b0psi).norm() <= tol || (b2psi + b0psi).norm() <= tol) {
    throw DegenerateError("protocol: B2 acts on the state as +-B0");
  }

  ProtocolReport rep;
  rep.geometry = base_geometry(r);
  const GeometryParams& g = rep.geometry;

  GeneralRealization r2 = r;
  r2.B[1] = ext.B2;
  GeometryParams g2;
  try {
    g2 = reconstruct(simulate_cbehavior(r2));
  } catch (const Error& e) {
    rep.failures.push_back(std::string("second geometry: ") + e.what());
    return rep;
  }

  // Bring the second geometry to the representative sharing thetaA and
  // thetaB[0] with the first one.
  check(rep, "chiMismatch", g2.chi - g.chi, tol);
  const GeometryParams* match = nullptr;
  const auto cls = symmetry_class(g2);
  double bestDist = 1e300;
  for (const auto& t : cls) {
    const double dist = std::max({angle_distance(t.thetaA[0], g.thetaA[0]),
                                  angle_distance(t.thetaA[1], g.thetaA[1]),
                                  angle_distance(t.thetaB[0], g.thetaB[0])});
    if (dist < bestDist) {
      bestDist = dist;
      match = &t;
    }
  }
  check(rep, "sharedAngles", bestDist, std::sqrt(tol));
  if (!rep.failures.empty()) return rep;
  const double theta2 = std::remainder(match->thetaB[1], 2.0 * std::acos(-1.0));
  rep.thetaB2 = theta2;

  DerivedOperators ops = derive_operators(r, g);
  // The pair {B0, B2} must give the same Z_B|psi> and X_B|psi>.
  GeometryParams g02 = g;
  g02.thetaB = {g.thetaB[0], theta2};
  try {
    const DerivedOperators ops2 = derive_operators(r2, g02);
    const CMatrix zB = lift_b(ops.ZB, r.dimA), zB2 = lift_b(ops2.ZB, r.dimA);
    const CMatrix xB = lift_b(ops.XB, r.dimA), xB2 = lift_b(ops2.XB, r.dimA);
    check(rep, "zBConsistency", ((zB - zB2) * r.psi).norm(), tol);
    check(rep, "xBConsistency", ((xB - xB2) * r.psi).norm(), tol);
    const CMatrix b0 = lift_b(r.B[0], r.dimA), b2 = lift_b(ext.B2, r.dimA);
    check(rep, "anticommB02",
          ((b0 * b2 + b2 * b0) * r.psi - 2.0 * std::cos(g.thetaB[0] - theta2) * r.psi)
              .norm(),
          tol);
  } catch (const DegenerateError& e) {
    rep.failures.push_back(e.what());
    return rep;
  }
  finish(rep, r, ops, tol);
  return rep;
}

std::vector<ProtocolReport> protocol_chain(const GeneralRealization& base,
                                           const std::vector<CMatrix>& extra,
                                           Side side, double tol) {
  if (side == Side::A) return protocol_chain(swap_parties(base), extra, Side::B, tol);
  std::vector<CMatrix> list = {base.B[0], base.B[1]};
  list.insert(list.end(), extra.begin(), extra.end());
  const auto conforming = [&](const CMatrix& b0, const CMatrix& b1) {
    GeneralRealization r = base;
    r.B = {b0, b1};
    return check_uniqueness_preconditions(simulate_cbehavior(r)).satisfied;
  };

  std::vector<std::size_t> certified = {0, 1};
  std::vector<ProtocolReport> out;
  for (std::size_t k = 2; k < list.size(); ++k) {
    std::optional<ProtocolReport> rep;
    for (std::size_t i : certified) {
      if (!conforming(list[i], list[k])) continue;
      for (std::size_t j : certified) {
        if (j == i || !conforming(list[i], list[j])) continue;
        ExtendedRealization ext;
        ext.base = base;
        ext.base.B = {list[i], list[j]};
        ext.B2 = list[k];
        rep = protocol_lemma6_pair(ext, tol);
        break;
      }
      if (rep) break;
    }
    if (!rep) {
      rep.emplace();
      rep->failures.push_back("measurement " + std::to_string(k) +
                              ": no certified partner satisfies the hypotheses");
    }
    if (rep->selfTested) certified.push_back(k);
    out.push_back(std::move(*rep));
  }
  return out;
}

}  // namespace nonloc
