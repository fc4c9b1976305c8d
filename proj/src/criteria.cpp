#include "nonloc/criteria.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace nonloc {

namespace {
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

int plus_count(const SignPattern& p) {
  int n = 0;
  for (const auto& row : p.plus)
    for (bool v : row) n += v ? 1 : 0;
  return n;
}
}  // namespace

std::string SignPattern::label() const {
  std::string s;
  for (int x = 0; x < 2; ++x) {
    for (int y = 0; y < 2; ++y) s += plus[x][y] ? '+' : '-';
    if (x == 0) s += ' ';
  }
  return s;
}

SQuantities s_quantities(const CBehavior& b, double tol) {
  SQuantities s;
  for (int x = 0; x < 2; ++x) {
    for (int y = 0; y < 2; ++y) {
      const double c = b.c[x][y];
      const double j = c * c - b.cA[x] * b.cA[x] - b.cB[y] * b.cB[y] + 1.0;
      const double k = c - b.cA[x] * b.cB[y];
      s.J[x][y] = j;
      s.K[x][y] = k;
      double disc = (j - 2.0 * std::abs(k)) * (j + 2.0 * std::abs(k));
      if (disc < -tol) {
        s.real[x][y] = false;
        s.sPlus[x][y] = kNaN;
        s.sMinus[x][y] = kNaN;
        continue;
      }
      // A double root perturbed by rounding would split by sqrt(eps).
      const double noise = 32.0 * std::numeric_limits<double>::epsilon() * (j * j + 4.0 * k * k);
      if (disc <= noise) disc = 0.0;
      s.real[x][y] = true;
      const double root = std::sqrt(disc);
      s.sPlus[x][y] = 0.5 * (j + root);
      s.sMinus[x][y] = 0.5 * (j - root);
    }
  }
  return s;
}

std::vector<SignPattern> two_qubit_condition(const CBehavior& b, double tol) {
  const SQuantities s = s_quantities(b, tol);
  std::vector<SignPattern> accepted;

  for (int mask = 0; mask < 16; ++mask) {
    SignPattern p;
    bool ok = true;
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    double sum = 0.0;
    Grid v{};
    for (int x = 0; x < 2 && ok; ++x) {
      for (int y = 0; y < 2; ++y) {
        if (!s.real[x][y]) {
          ok = false;
          break;
        }
        // Bit set means the '+' branch. Degenerate pairs are forced to '+'
        // so that patterns differing only there collapse onto one.
        const bool degenerate = std::abs(s.sPlus[x][y] - s.sMinus[x][y]) <= tol;
        const bool plus = degenerate || ((mask >> (2 * x + y)) & 1) != 0;
        p.plus[x][y] = plus;
        v[x][y] = plus ? s.sPlus[x][y] : s.sMinus[x][y];
        lo = std::min(lo, v[x][y]);
        hi = std::max(hi, v[x][y]);
        sum += v[x][y];
      }
    }
    if (!ok) continue;
    p.spread = hi - lo;
    if (p.spread > tol) continue;
    p.commonValue = 0.25 * sum;
    double h = 1.0;
    for (int x = 0; x < 2; ++x)
      for (int y = 0; y < 2; ++y)
        h *= (1.0 - v[x][y]) * b.c[x][y] - b.cA[x] * b.cB[y];
    p.H = h;
    if (h < -tol) continue;
    const bool duplicate =
        std::any_of(accepted.begin(), accepted.end(), [&](const SignPattern& q) {
          return q.plus == p.plus;
        });
    if (!duplicate) accepted.push_back(p);
  }

  std::stable_sort(accepted.begin(), accepted.end(),
                   [](const SignPattern& l, const SignPattern& r) {
                     return plus_count(l) > plus_count(r);
                   });
  return accepted;
}

DQuantities d_quantities(const CBehavior& b, double sin2chiSq) {
  if (!(sin2chiSq >= 0.0 && sin2chiSq <= 1.0)) {
    throw DomainError("d_quantities: sin^2(2chi) must lie in [0, 1]");
  }
  DQuantities d;
  for (int k = 0; k < 2; ++k) {
    d.dB[k] = b.cA[k] * b.cA[k] + sin2chiSq;
    d.dA[k] = b.cB[k] * b.cB[k] + sin2chiSq;
  }
  return d;
}

double tlm_gap(const Grid& ct, double tol) {
  Grid c{};
  for (int x = 0; x < 2; ++x) {
    for (int y = 0; y < 2; ++y) {
      if (!(std::abs(ct[x][y]) <= 1.0 + tol)) {
        throw DomainError("tlm_gap: scaled correlator outside [-1, 1]");
      }
      c[x][y] = std::clamp(ct[x][y], -1.0, 1.0);
    }
  }
  const double rhs = std::sqrt((1.0 - c[0][0] * c[0][0]) * (1.0 - c[0][1] * c[0][1])) +
                     std::sqrt((1.0 - c[1][0] * c[1][0]) * (1.0 - c[1][1] * c[1][1]));
  const double lhs = std::abs(c[0][0] * c[0][1] - c[1][0] * c[1][1]);
  return rhs - lhs;
}

namespace {
std::optional<Grid> scale_impl(const Grid& c, const Pair& d, bool byRow,
                               double tol) {
  Grid out{};
  for (int x = 0; x < 2; ++x) {
    for (int y = 0; y < 2; ++y) {
      const double dk = byRow ? d[x] : d[y];
      if (dk <= tol * tol) {
        // C^2 <= d forces C = 0 here.
        if (std::abs(c[x][y]) > tol) return std::nullopt;
        out[x][y] = 0.0;
      } else {
        out[x][y] = c[x][y] / std::sqrt(dk);
      }
    }
  }
  return out;
}
}  // namespace

std::optional<Grid> scale_rows(const Grid& c, const Pair& d, double tol) {
  return scale_impl(c, d, true, tol);
}

std::optional<Grid> scale_cols(const Grid& c, const Pair& d, double tol) {
  return scale_impl(c, d, false, tol);
}

bool crypt_membership(const DBehavior& d, double tol) {
  for (int k = 0; k < 2; ++k) {
    if (d.deltaB[k] < -tol || d.deltaB[k] > 1.0 + tol) return false;
    if (d.deltaA[k] < -tol || d.deltaA[k] > 1.0 + tol) return false;
  }
  for (int x = 0; x < 2; ++x) {
    for (int y = 0; y < 2; ++y) {
      const double c2 = d.c[x][y] * d.c[x][y];
      if (c2 > d.deltaB[x] + tol || c2 > d.deltaA[y] + tol) return false;
    }
  }
  const auto rows = scale_rows(d.c, d.deltaB, tol);
  const auto cols = scale_cols(d.c, d.deltaA, tol);
  if (!rows || !cols) return false;
  // A scaled entry can exceed 1 slightly after the C^2 <= delta + tol test.
  const double slack = 2.0 * std::sqrt(tol) + tol;
  try {
    return tlm_gap(*rows, slack) >= -tol && tlm_gap(*cols, slack) >= -tol;
  } catch (const DomainError&) {
    return false;
  }
}

}  // namespace nonloc
