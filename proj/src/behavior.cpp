#include "nonloc/behavior.hpp"

#include <algorithm>

namespace nonloc {

namespace {
constexpr int kOutcome[2] = {+1, -1};
}

ProbabilityTable to_probabilities(const CBehavior& b) {
  ProbabilityTable t;
  for (int ia = 0; ia < 2; ++ia) {
    for (int ib = 0; ib < 2; ++ib) {
      const double a = kOutcome[ia];
      const double bb = kOutcome[ib];
      for (int x = 0; x < 2; ++x) {
        for (int y = 0; y < 2; ++y) {
          t.p[ia][ib][x][y] =
              0.25 * (1.0 + a * b.cA[x] + bb * b.cB[y] + a * bb * b.c[x][y]);
        }
      }
    }
  }
  return t;
}

CBehavior correlators(const ProbabilityTable& t) {
  CBehavior b;
  for (int x = 0; x < 2; ++x) {
    for (int y = 0; y < 2; ++y) {
      double cxy = 0.0;
      double ma = 0.0;
      double mb = 0.0;
      for (int ia = 0; ia < 2; ++ia) {
        for (int ib = 0; ib < 2; ++ib) {
          const double p = t.p[ia][ib][x][y];
          cxy += kOutcome[ia] * kOutcome[ib] * p;
          ma += kOutcome[ia] * p;
          mb += kOutcome[ib] * p;
        }
      }
      b.c[x][y] = cxy;
      // Marginals are read off the y = 0 and x = 0 columns; under
      // no-signaling every column gives the same value.
      if (y == 0) b.cA[x] = ma;
      if (x == 0) b.cB[y] = mb;
    }
  }
  return b;
}

bool is_valid(const CBehavior& b, double tol) {
  const auto t = to_probabilities(b);
  for (const auto& pa : t.p)
    for (const auto& pb : pa)
      for (const auto& px : pb)
        for (double v : px)
          if (v < -tol) return false;
  return true;
}

double chsh(const Grid& c, int minusX, int minusY) {
  double s = 0.0;
  for (int x = 0; x < 2; ++x)
    for (int y = 0; y < 2; ++y)
      s += (x == minusX && y == minusY) ? -c[x][y] : c[x][y];
  return s;
}

double max_chsh(const Grid& c) {
  double m = 0.0;
  for (int x = 0; x < 2; ++x)
    for (int y = 0; y < 2; ++y) m = std::max(m, std::abs(chsh(c, x, y)));
  return m;
}

bool is_local(const CBehavior& b, double tol) {
  if (!is_valid(b, tol)) {
    throw InvalidBehavior("is_local: behavior has negative probabilities");
  }
  return max_chsh(b.c) <= 2.0 + tol;
}

CBehavior tsirelson_point() {
  const double r = 1.0 / std::sqrt(2.0);
  CBehavior b;
  b.c = {{{r, r}, {r, -r}}};
  return b;
}

std::array<double, 8> flatten(const CBehavior& b) {
  return {b.cA[0], b.cA[1], b.cB[0],    b.cB[1],
          b.c[0][0], b.c[0][1], b.c[1][0], b.c[1][1]};
}

std::array<double, 8> flatten(const DBehavior& b) {
  return {b.deltaB[0], b.deltaB[1], b.deltaA[0], b.deltaA[1],
          b.c[0][0],   b.c[0][1],   b.c[1][0],   b.c[1][1]};
}

CBehavior unflatten_c(const std::array<double, 8>& v) {
  CBehavior b;
  b.cA = {v[0], v[1]};
  b.cB = {v[2], v[3]};
  b.c = {{{v[4], v[5]}, {v[6], v[7]}}};
  return b;
}

DBehavior unflatten_d(const std::array<double, 8>& v) {
  DBehavior b;
  b.deltaB = {v[0], v[1]};
  b.deltaA = {v[2], v[3]};
  b.c = {{{v[4], v[5]}, {v[6], v[7]}}};
  return b;
}

}  // namespace nonloc
