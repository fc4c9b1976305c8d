#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "nonloc/qbell.hpp"

namespace nonloc {

namespace {

// The four squared ratios of one side as functions of t = cos(dtheta), in the
// form (p + r t)^2 / (p + r tref)^2. Numerator/denominator pairs keep
// infinite alpha or beta finite.
struct SideRatios {
  std::array<double, 4> p{};
  std::array<double, 4> r{};
  std::array<double, 4> norm{};  // (p + r tref)^2

  static SideRatios from(const QBellCoefficients& k, double tref) {
    const double an = k.alphaFrac[0];
    const double ad = k.alphaFrac[1];
    const double bn = k.betaFrac[0];
    const double bd = k.betaFrac[1];
    SideRatios s;
    s.p = {ad, an, bn, -bd};
    s.r = {an, ad, -bd, bn};
    for (int i = 0; i < 4; ++i) {
      const double scale = std::abs(s.p[i]) + std::abs(s.r[i]);
      const double v = s.p[i] + s.r[i] * tref;
      if (std::abs(v) <= 1e-12 * std::max(scale, 1e-300)) {
        throw DegenerateError(std::string("uniqueness_check: side ") + to_string(k.side) +
                              " has a ratio denominator vanishing at the reference point");
      }
      s.norm[i] = v * v;
    }
    return s;
  }

  double value(int i, double t) const {
    const double v = p[i] + r[i] * t;
    return v * v / norm[i];
  }
  double slope(int i, double t) const {
    return 2.0 * r[i] * (p[i] + r[i] * t) / norm[i];
  }
};

double residual_norm(const SideRatios& a, const SideRatios& b, double ta, double tb) {
  double s = 0.0;
  for (int i = 0; i < 4; ++i) {
    const double f = a.value(i, ta) - b.value(i, tb);
    s += f * f;
  }
  return std::sqrt(s);
}

// Levenberg-Marquardt on the 4x2 system, iterates clamped to the square.
std::array<double, 3> refine(const SideRatios& a, const SideRatios& b, double ta,
                             double tb) {
  double mu = 1e-6;
  double cur = residual_norm(a, b, ta, tb);
  for (int it = 0; it < 100 && cur > 1e-15; ++it) {
    double jtj00 = 0.0, jtj01 = 0.0, jtj11 = 0.0, g0 = 0.0, g1 = 0.0;
    for (int i = 0; i < 4; ++i) {
      const double f = a.value(i, ta) - b.value(i, tb);
      const double ja = a.slope(i, ta);
      const double jb = -b.slope(i, tb);
      jtj00 += ja * ja;
      jtj01 += ja * jb;
      jtj11 += jb * jb;
      g0 += ja * f;
      g1 += jb * f;
    }
    bool improved = false;
    for (int tries = 0; tries < 20; ++tries) {
      const double m00 = jtj00 * (1.0 + mu) + 1e-300;
      const double m11 = jtj11 * (1.0 + mu) + 1e-300;
      const double det = m00 * m11 - jtj01 * jtj01;
      if (det == 0.0) {
        mu *= 10.0;
        continue;
      }
      const double da = -(m11 * g0 - jtj01 * g1) / det;
      const double db = -(m00 * g1 - jtj01 * g0) / det;
      const double na = std::clamp(ta + da, -1.0, 1.0);
      const double nb = std::clamp(tb + db, -1.0, 1.0);
      const double next = residual_norm(a, b, na, nb);
      if (next < cur) {
        ta = na;
        tb = nb;
        cur = next;
        mu = std::max(mu / 10.0, 1e-12);
        improved = true;
        break;
      }
      mu *= 10.0;
    }
    if (!improved) break;
  }
  return {ta, tb, cur};
}

}  // namespace

UniquenessReport uniqueness_check(const QuantumBellPair& pair,
                                  const UniquenessOptions& opts) {
  const QBellCoefficients& kB = pair.coeffs[0];
  const QBellCoefficients& kA = pair.coeffs[1];
  UniquenessReport rep;
  rep.referenceA = kA.cosDeltaTheta;
  rep.referenceB = kB.cosDeltaTheta;
  const SideRatios ra = SideRatios::from(kA, rep.referenceA);
  const SideRatios rb = SideRatios::from(kB, rep.referenceB);

  if (!(opts.gridStep > 0.0 && opts.gridStep <= 1.0)) {
    throw DomainError("uniqueness_check: grid step must lie in (0, 1]");
  }
  const int n = static_cast<int>(std::lround(2.0 / opts.gridStep)) + 1;
  const auto coord = [&](int i) { return -1.0 + 2.0 * i / (n - 1); };
  std::vector<std::array<double, 4>> va(n), vb(n);
  for (int i = 0; i < n; ++i) {
    for (int k = 0; k < 4; ++k) {
      va[i][k] = ra.value(k, coord(i));
      vb[i][k] = rb.value(k, coord(i));
    }
  }
  const auto f = [&](int i, int j) {
    double s = 0.0;
    for (int k = 0; k < 4; ++k) {
      const double d = va[i][k] - vb[j][k];
      s += d * d;
    }
    return s;
  };

  // Discrete local minima of the squared residual on the grid. Adjacent
  // rows are kept in a rolling buffer.
  struct Candidate {
    double f;
    double ta;
    double tb;
  };
  std::vector<Candidate> candidates;
  std::vector<double> prev(n), cur(n), next(n);
  for (int j = 0; j < n; ++j) cur[j] = f(0, j);
  if (n > 1)
    for (int j = 0; j < n; ++j) next[j] = f(1, j);
  const double inf = std::numeric_limits<double>::infinity();
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const double v = cur[j];
      bool isMin = true;
      for (int di = -1; di <= 1 && isMin; ++di) {
        const std::vector<double>* row = di < 0 ? &prev : (di == 0 ? &cur : &next);
        if (i + di < 0 || i + di >= n) continue;
        for (int dj = -1; dj <= 1; ++dj) {
          if ((di == 0 && dj == 0) || j + dj < 0 || j + dj >= n) continue;
          if ((*row)[j + dj] < v) {
            isMin = false;
            break;
          }
        }
      }
      if (isMin) candidates.push_back({v, coord(i), coord(j)});
    }
    std::swap(prev, cur);
    std::swap(cur, next);
    if (i + 2 < n) {
      for (int j = 0; j < n; ++j) next[j] = f(i + 2, j);
    } else {
      std::fill(next.begin(), next.end(), inf);
    }
  }
  std::sort(candidates.begin(), candidates.end(),
            [](const Candidate& l, const Candidate& r) { return l.f < r.f; });
  // Flat valleys produce runs of tied minima; refining a bounded number of
  // the lowest is enough to expose a nontrivial branch.
  const std::size_t maxRefine = std::max<std::size_t>(4 * opts.maxSolutions, 256);
  if (candidates.size() > maxRefine) candidates.resize(maxRefine);
  candidates.insert(candidates.begin(), Candidate{0.0, rep.referenceA, rep.referenceB});

  for (const auto& c : candidates) {
    const auto [ta, tb, res] = refine(ra, rb, c.ta, c.tb);
    if (res > opts.solutionTol) continue;
    const bool dup = std::any_of(rep.solutions.begin(), rep.solutions.end(),
                                 [&](const UniquenessSolution& s) {
                                   return std::abs(s.cosA - ta) <= 1e-6 &&
                                          std::abs(s.cosB - tb) <= 1e-6;
                                 });
    if (dup) continue;
    rep.solutions.push_back({ta, tb, res});
    const bool nontrivial = std::abs(ta - rep.referenceA) > opts.distinctTol ||
                            std::abs(tb - rep.referenceB) > opts.distinctTol;
    if (nontrivial) rep.trivialOnly = false;
    if (rep.solutions.size() >= opts.maxSolutions) break;
  }
  return rep;
}

UniquenessReport uniqueness_check(const GeometryParams& g,
                                  const UniquenessOptions& opts) {
  return uniqueness_check(construct_pair(g), opts);
}

}  // namespace nonloc
