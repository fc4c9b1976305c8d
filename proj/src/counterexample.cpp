#include "nonloc/counterexample.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>

#include "nonloc/criteria.hpp"
#include "nonloc/geometry.hpp"
#include "nonloc/qbell.hpp"

namespace nonloc {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double gap_or_nan(const Grid& c, const Pair& d, bool rows) {
  const auto scaled = rows ? scale_rows(c, d) : scale_cols(c, d);
  if (!scaled) return kNaN;
  try {
    return tlm_gap(*scaled);
  } catch (const DomainError&) {
    return kNaN;
  }
}

// Gap of the section's own scaling with delta1 replaced, or NaN when the
// scaled correlators leave [-1, 1].
double section_gap(DBehavior d, Side side, double c11, double delta) {
  d.c[1][1] = c11;
  if (side == Side::B) {
    d.deltaB[1] = delta;
    return gap_or_nan(d.c, d.deltaB, true);
  }
  d.deltaA[1] = delta;
  return gap_or_nan(d.c, d.deltaA, false);
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

TwoQubitRealization counterexample_p(double epsilon) {
  return TwoQubitRealization{{0.0, kPi / 2}, {epsilon, -kPi / 4}, kPi / 12};
}

TwoQubitRealization counterexample_q(double epsilon) {
  return TwoQubitRealization{{0.0, kPi / 2}, {epsilon, -kPi / 4}, kPi / 8};
}

CounterexampleReport counterexample_unchecked(double epsilon) {
  CounterexampleReport rep;
  rep.epsilon = epsilon;
  const GeneralRealization p = promote(counterexample_p(epsilon));
  const GeneralRealization q = promote(counterexample_q(epsilon));
  rep.P = simulate_cbehavior(p);
  rep.Q = simulate_cbehavior(q);
  rep.dP = simulate_dbehavior(p);
  rep.dQ = simulate_dbehavior(q);
  rep.chshP = chsh(rep.P.c);
  rep.chshQ = chsh(rep.Q.c);
  rep.lambda = (rep.chshP - 2.0) / (rep.chshQ - 2.0);

  const double wP = 1.0 / (1.0 - rep.lambda);
  const double wQ = -rep.lambda / (1.0 - rep.lambda);
  const std::array<double, 2> w{wP, wQ};
  const std::array<CBehavior, 2> cs{rep.P, rep.Q};
  const std::array<DBehavior, 2> ds{rep.dP, rep.dQ};
  rep.L = mix<CBehavior>(cs, w);
  rep.dL = mix<DBehavior>(ds, w);
  rep.chshL = chsh(rep.L.c);

  rep.lValid = is_valid(rep.L);
  rep.lLocal = rep.lValid && is_local(rep.L);
  rep.lInCrypt = crypt_membership(rep.dL);
  rep.lGapB = gap_or_nan(rep.dL.c, rep.dL.deltaB, true);
  rep.lGapA = gap_or_nan(rep.dL.c, rep.dL.deltaA, false);

  const QuantumBellPair pair = construct_pair(projection_angles(counterexample_p(epsilon)));
  rep.qbellValueB = evaluate(pair.B, rep.dL);
  rep.qbellBoundB = pair.B.bound;
  rep.qbellValueA = evaluate(pair.A, rep.dL);
  rep.qbellBoundA = pair.A.bound;
  return rep;
}

CounterexampleReport build_counterexample(double epsilon) {
  if (!(epsilon > 0.0 && epsilon < kPi / 40)) {
    throw DomainError("counterexample: epsilon must satisfy 0 < epsilon < pi/40");
  }
  return counterexample_unchecked(epsilon);
}

std::vector<SectionPoint> crypt_section(const DBehavior& anchor, Side side,
                                        int samples, double tol) {
  if (samples < 2) throw DomainError("crypt_section: need at least 2 samples");
  std::vector<SectionPoint> out;
  const auto feasible = [&](double c11, double delta) {
    const double g = section_gap(anchor, side, c11, delta);
    return !std::isnan(g) && g >= -tol;
  };
  for (int i = 0; i < samples; ++i) {
    const double c11 = -1.0 + 2.0 * i / (samples - 1);
    // Smallest delta1 with the scaled row (column) inside [-1, 1].
    const double other = side == Side::B ? anchor.c[1][0] : anchor.c[0][1];
    double lo = std::max(c11 * c11, other * other);
    double hi = 1.0;
    if (lo > hi || !feasible(c11, hi)) continue;
    if (!feasible(c11, lo)) {
      for (int it = 0; it < 200 && hi - lo > 1e-15; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (feasible(c11, mid)) {
          hi = mid;
        } else {
          lo = mid;
        }
      }
      lo = hi;
    }
    out.push_back({c11, lo});
  }
  return out;
}

std::string counterexample_csv(const CounterexampleReport& rep, int samples) {
  std::string csv = "kind,section,c11,delta\n";
  const auto row = [&](const char* kind, const char* section, double c11, double delta) {
    csv += kind;
    csv += ',';
    csv += section;
    csv += ',' + fmt(c11) + ',' + fmt(delta) + '\n';
  };
  for (const auto& p : crypt_section(rep.dP, Side::B, samples)) {
    row("boundary", "C11-deltaB1", p.c11, p.delta);
  }
  for (const auto& p : crypt_section(rep.dP, Side::A, samples)) {
    row("boundary", "C11-deltaA1", p.c11, p.delta);
  }
  const std::array<std::pair<const char*, const DBehavior*>, 3> marks{
      {{"P", &rep.dP}, {"Q", &rep.dQ}, {"L", &rep.dL}}};
  for (const auto& [name, d] : marks) row(name, "C11-deltaB1", d->c[1][1], d->deltaB[1]);
  for (const auto& [name, d] : marks) row(name, "C11-deltaA1", d->c[1][1], d->deltaA[1]);
  return csv;
}

}  // namespace nonloc
