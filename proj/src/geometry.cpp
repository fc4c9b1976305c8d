#include "nonloc/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace nonloc {

namespace {

constexpr double kPi = std::numbers::pi;

GeometryParams from_angles(const Pair& thetaA, const Pair& thetaB, double chi,
                           double cos2chi, double sin2chi) {
  GeometryParams g;
  g.thetaA = thetaA;
  g.thetaB = thetaB;
  g.chi = chi;
  g.psiPrimeNorm = cos2chi;
  for (int k = 0; k < 2; ++k) {
    g.phiB[k] = std::atan2(std::sin(thetaA[k]) * sin2chi, std::cos(thetaA[k]));
    g.phiA[k] = std::atan2(std::sin(thetaB[k]) * sin2chi, std::cos(thetaB[k]));
  }
  return g;
}

double correlator(double ta, double tb, double sin2chi) {
  return std::cos(ta) * std::cos(tb) + std::sin(ta) * std::sin(tb) * sin2chi;
}

double fit_residual(const CBehavior& b, const Pair& tA, const Pair& tB,
                    double sin2chi) {
  double r = 0.0;
  for (int x = 0; x < 2; ++x)
    for (int y = 0; y < 2; ++y)
      r = std::max(r, std::abs(correlator(tA[x], tB[y], sin2chi) - b.c[x][y]));
  return r;
}

// Stable 1 - S for the selected branch. With N = (1 - S+)(1 - S-) and
// (1 - S+) + (1 - S-) = 2 - J, the small root is taken as N / (large root)
// so that cos^2(2chi) keeps full relative accuracy near maximal entanglement.
double one_minus_s(const CBehavior& b, int x, int y, bool plus) {
  const double c = b.c[x][y];
  const double a = b.cA[x];
  const double bb = b.cB[y];
  const double j = c * c - a * a - bb * bb + 1.0;
  const double k = c - a * bb;
  const double root = std::sqrt(std::max(j * j - 4.0 * k * k, 0.0));
  const double large = 0.5 * (2.0 - j + root);
  const double n = a * a + bb * bb - 2.0 * c * a * bb + a * a * bb * bb;
  if (!plus) return large;
  return large > 0.0 ? n / large : 0.0;
}

bool near_zero_sin(double t, double tol) { return std::abs(std::sin(t)) <= tol; }

void canonicalize(Pair& tA, Pair& tB, double tol) {
  const bool flip = std::sin(tA[0]) < -tol ||
                    (near_zero_sin(tA[0], tol) && std::sin(tB[0]) < -tol);
  if (flip) {
    for (int k = 0; k < 2; ++k) {
      tA[k] = -tA[k];
      tB[k] = -tB[k];
    }
  }
}

}  // namespace

GeometryParams projection_angles(const TwoQubitRealization& r) {
  return from_angles(r.thetaA, r.thetaB, r.chi, std::cos(2.0 * r.chi),
                     std::sin(2.0 * r.chi));
}

TwoQubitRealization to_realization(const GeometryParams& g) {
  return TwoQubitRealization{g.thetaA, g.thetaB, g.chi};
}

CBehavior behavior_of(const GeometryParams& g) {
  const double c2 = std::cos(2.0 * g.chi);
  const double s2 = std::sin(2.0 * g.chi);
  CBehavior b;
  for (int k = 0; k < 2; ++k) {
    b.cA[k] = c2 * std::cos(g.thetaA[k]);
    b.cB[k] = c2 * std::cos(g.thetaB[k]);
  }
  for (int x = 0; x < 2; ++x)
    for (int y = 0; y < 2; ++y) b.c[x][y] = correlator(g.thetaA[x], g.thetaB[y], s2);
  return b;
}

Pair projection_length_b(const GeometryParams& g) {
  const double c2 = std::cos(2.0 * g.chi);
  const double s2 = std::sin(2.0 * g.chi);
  Pair d{};
  for (int x = 0; x < 2; ++x) {
    const double ca = std::cos(g.thetaA[x]);
    d[x] = std::sqrt(c2 * c2 * ca * ca + s2 * s2);
  }
  return d;
}

Pair projection_length_a(const GeometryParams& g) {
  const double c2 = std::cos(2.0 * g.chi);
  const double s2 = std::sin(2.0 * g.chi);
  Pair d{};
  for (int y = 0; y < 2; ++y) {
    const double cb = std::cos(g.thetaB[y]);
    d[y] = std::sqrt(c2 * c2 * cb * cb + s2 * s2);
  }
  return d;
}

UniquenessPreconditions check_uniqueness_preconditions(const CBehavior& b,
                                                       double tol) {
  UniquenessPreconditions out;
  if (!is_valid(b, tol)) {
    out.reason = "behavior has negative probabilities";
    return out;
  }
  if (is_local(b, tol)) {
    out.reason = "behavior is local";
    return out;
  }
  const auto patterns = two_qubit_condition(b, tol);
  if (patterns.empty()) {
    out.reason = "no sign pattern satisfies the two-qubit condition";
    return out;
  }
  out.reason = "TLM inequality not saturated by the scaled correlators";
  for (const auto& p : patterns) {
    const double s2 = std::clamp(p.commonValue, 0.0, 1.0);
    const DQuantities d = d_quantities(b, s2);
    const auto rows = scale_rows(b.c, d.dB, tol);
    const auto cols = scale_cols(b.c, d.dA, tol);
    if (!rows || !cols) continue;
    double gb = 0.0;
    double ga = 0.0;
    try {
      gb = tlm_gap(*rows, 1e-6);
      ga = tlm_gap(*cols, 1e-6);
    } catch (const DomainError&) {
      continue;
    }
    if (!out.pattern) {
      out.pattern = p;
      out.gapB = gb;
      out.gapA = ga;
    }
    if (std::abs(gb) <= tol && std::abs(ga) <= tol) {
      out.satisfied = true;
      out.pattern = p;
      out.gapB = gb;
      out.gapA = ga;
      out.reason.clear();
      return out;
    }
  }
  return out;
}

ReconstructionReport reconstruct_report(const CBehavior& b, double tol) {
  const UniquenessPreconditions pre = check_uniqueness_preconditions(b, tol);
  if (!pre.satisfied) {
    throw PreconditionError("reconstruct: " + pre.reason);
  }
  const SignPattern& p = *pre.pattern;

  ReconstructionReport rep;
  rep.pattern = p;
  rep.gapB = pre.gapB;
  rep.gapA = pre.gapA;

  const double s2sq = std::clamp(p.commonValue, 0.0, 1.0);
  // Entries near a double root lose half their digits; weight each estimate
  // by its discriminant.
  double c2sq = 0.0, plain = 0.0, weights = 0.0;
  for (int x = 0; x < 2; ++x)
    for (int y = 0; y < 2; ++y) {
      const double v = one_minus_s(b, x, y, p.plus[x][y]);
      const double j = b.c[x][y] * b.c[x][y] - b.cA[x] * b.cA[x] - b.cB[y] * b.cB[y] + 1.0;
      const double k = std::abs(b.c[x][y] - b.cA[x] * b.cB[y]);
      const double w = std::max((j - 2.0 * k) * (j + 2.0 * k), 0.0);
      c2sq += w * v;
      weights += w;
      plain += 0.25 * v;
    }
  c2sq = std::clamp(weights > 0.0 ? c2sq / weights : plain, 0.0, 1.0);
  const double cos2chi = std::sqrt(c2sq);
  const double sin2chi = std::sqrt(s2sq);
  const double chi = 0.5 * std::atan2(sin2chi, cos2chi);

  double maxMarginal = 0.0;
  for (int k = 0; k < 2; ++k)
    maxMarginal = std::max({maxMarginal, std::abs(b.cA[k]), std::abs(b.cB[k])});

  Pair bestA{};
  Pair bestB{};
  double best = std::numeric_limits<double>::infinity();

  if (cos2chi <= tol) {
    // Maximally entangled: marginals carry no angle information. Fix
    // thetaA[0] = 0 and solve cos(thetaA[x] - thetaB[y]) = C_xy.
    if (maxMarginal > tol) {
      throw DomainError("reconstruct: nonzero marginal with cos(2chi) = 0");
    }
    rep.maximallyEntangled = true;
    const auto acosc = [](double v) { return std::acos(std::clamp(v, -1.0, 1.0)); };
    for (int mask = 0; mask < 8; ++mask) {
      const double sb0 = (mask & 1) ? -1.0 : 1.0;
      const double sb1 = (mask & 2) ? -1.0 : 1.0;
      const double sa1 = (mask & 4) ? -1.0 : 1.0;
      const Pair tB{sb0 * acosc(b.c[0][0]), sb1 * acosc(b.c[0][1])};
      const Pair tA{0.0, tB[0] + sa1 * acosc(b.c[1][0])};
      const double r = fit_residual(b, tA, tB, 1.0);
      if (r < best) {
        best = r;
        bestA = tA;
        bestB = tB;
      }
    }
  } else {
    Pair baseA{};
    Pair baseB{};
    for (int k = 0; k < 2; ++k) {
      if (std::abs(b.cA[k]) > cos2chi + tol || std::abs(b.cB[k]) > cos2chi + tol) {
        throw DomainError(
            "reconstruct: no consistent angle, a marginal exceeds cos(2chi)");
      }
      baseA[k] = std::acos(std::clamp(b.cA[k] / cos2chi, -1.0, 1.0));
      baseB[k] = std::acos(std::clamp(b.cB[k] / cos2chi, -1.0, 1.0));
    }
    for (int mask = 0; mask < 16; ++mask) {
      const Pair tA{(mask & 1) ? -baseA[0] : baseA[0], (mask & 2) ? -baseA[1] : baseA[1]};
      const Pair tB{(mask & 4) ? -baseB[0] : baseB[0], (mask & 8) ? -baseB[1] : baseB[1]};
      const double r = fit_residual(b, tA, tB, sin2chi);
      if (r < best) {
        best = r;
        bestA = tA;
        bestB = tB;
      }
    }
  }

  if (best > 10.0 * tol) {
    throw PreconditionError(
        "reconstruct: no sign assignment reproduces the correlators (residual " +
        std::to_string(best) + ")");
  }
  canonicalize(bestA, bestB, tol);
  rep.residual = best;
  rep.geometry = from_angles(bestA, bestB, chi, cos2chi, sin2chi);
  return rep;
}

std::array<GeometryParams, 4> symmetry_class(const GeometryParams& g) {
  std::array<GeometryParams, 4> out;
  const std::array<std::pair<double, double>, 4> maps = {
      {{1.0, 0.0}, {-1.0, 0.0}, {-1.0, kPi}, {1.0, kPi}}};
  for (std::size_t i = 0; i < 4; ++i) {
    const auto [sign, shift] = maps[i];
    Pair tA{shift + sign * g.thetaA[0], shift + sign * g.thetaA[1]};
    Pair tB{shift + sign * g.thetaB[0], shift + sign * g.thetaB[1]};
    out[i] = from_angles(tA, tB, g.chi, g.psiPrimeNorm, std::sin(2.0 * g.chi));
  }
  return out;
}

double angle_distance(double a, double b) {
  return std::abs(std::remainder(a - b, 2.0 * kPi));
}

bool symmetry_equivalent(const GeometryParams& g1, const GeometryParams& g2,
                         double tol) {
  if (std::abs(g1.chi - g2.chi) > tol) return false;
  for (const auto& t : symmetry_class(g1)) {
    bool same = true;
    for (int k = 0; k < 2 && same; ++k) {
      same = angle_distance(t.thetaA[k], g2.thetaA[k]) <= tol &&
             angle_distance(t.thetaB[k], g2.thetaB[k]) <= tol;
    }
    if (same) return true;
  }
  return false;
}

}  // namespace nonloc
