// One PASS/FAIL line per acceptance criterion. Exit status is nonzero if any
// criterion fails.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "cli.hpp"
#include "fixtures.hpp"
#include "nonloc/behavior.hpp"
#include "nonloc/counterexample.hpp"
#include "nonloc/criteria.hpp"
#include "nonloc/geometry.hpp"
#include "nonloc/qbell.hpp"
#include "nonloc/random.hpp"
#include "nonloc/realization.hpp"
#include "nonloc/selftest.hpp"
#include "nonloc/serialize.hpp"
#include "oracles.hpp"

using namespace nonloc;
using namespace fixture;
using std::numbers::pi;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      if (!detail.empty()) detail += "; ";
      detail += what;
    }
  }
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

GeometryParams random_constructible(Rng& rng) {
  while (true) {
    const GeometryParams g = projection_angles(random_two_qubit(rng));
    try {
      construct_pair(g);
      return g;
    } catch (const Error&) {
    }
  }
}

Outcome counterexample_reproduction() {
  Outcome o;
  const double limit = 1.0 - 1.0 / std::sqrt(2.0);
  const std::pair<double, double> cases[] = {{0.01, 2e-2}, {0.001, 2e-3}};
  std::string lambdas;
  for (const auto& [eps, tol] : cases) {
    const auto t0 = std::chrono::steady_clock::now();
    std::istringstream in;
    std::ostringstream out, err;
    const int code = cli::run({"counterexample", "--epsilon", fmt("%.17g", eps)}, in, out, err);
    const double secs = seconds_since(t0);
    o.require(code == cli::kPass, "exit code " + std::to_string(code) + " " + err.str());
    if (code != cli::kPass) continue;
    const Json j = parse_json(out.str());
    const double lambda = j["lambda"].get<double>();
    o.require(std::abs(lambda - limit) <= tol, "lambda " + fmt("%.6f", lambda));
    o.require(j["lLocal"].get<bool>(), "L not local");
    o.require(!j["lInCrypt"].get<bool>(), "L in crypt");
    o.require(secs < 1.0, "runtime " + fmt("%.3f s", secs));

    // Independent checks of the mixture weight and locality.
    const CBehavior bp = oracle::behavior_from_projectors(promote(counterexample_p(eps)));
    const CBehavior bq = oracle::behavior_from_projectors(promote(counterexample_q(eps)));
    o.require(std::abs(oracle::chsh_mixing_weight(bp, bq) - lambda) <= 1e-10, "oracle lambda");
    o.require(oracle::local_by_vertices(cbehavior_from_json(j["C"]["L"])), "vertex oracle");
    lambdas += (lambdas.empty() ? "" : ", ") + fmt("%.5f", lambda);
  }
  if (o.pass) o.detail = "lambda = " + lambdas + ", L local, L outside crypt";
  return o;
}

Outcome s_branches() {
  Outcome o;
  const CBehavior t = tsirelson_point();
  const SQuantities s = s_quantities(t);
  double h = 1.0;
  for (int x = 0; x < 2; ++x)
    for (int y = 0; y < 2; ++y) {
      o.require(std::abs(s.sPlus[x][y] - 1.0) <= 1e-9, "Tsirelson S+");
      o.require(std::abs(s.sMinus[x][y] - 0.5) <= 1e-9, "Tsirelson S-");
      h *= (1.0 - s.sMinus[x][y]) * t.c[x][y];
    }
  o.require(h < 0.0, "all-minus H not negative");

  for (double eps : {0.0, 0.05}) {
    const auto ps = two_qubit_condition(simulate_cbehavior(promote(counterexample_p(eps))), 1e-9);
    o.require(ps.size() == 1 && ps.front().label() == "++ +-", "P pattern");
    if (!ps.empty()) o.require(std::abs(ps.front().commonValue - 0.25) <= 1e-9, "P common value");
  }
  if (o.pass) o.detail = "Tsirelson S+ = 1, S- = 0.5, H(all minus) = " + fmt("%.4f", h) + "; P ++ +- at 0.25";
  return o;
}

Outcome geometry_roundtrip() {
  Outcome o;
  Rng rng(20240601);
  const auto t0 = std::chrono::steady_clock::now();
  int ok = 0, failures = 0, draws = 0;
  while (ok + failures < 1000) {
    ++draws;
    const TwoQubitRealization r = random_two_qubit(rng);
    const CBehavior b = simulate_cbehavior(promote(r));
    if (!check_uniqueness_preconditions(b).satisfied) continue;
    try {
      if (symmetry_equivalent(reconstruct(b), projection_angles(r), 1e-7)) ++ok;
      else ++failures;
    } catch (const Error&) {
      ++failures;
    }
  }
  const double secs = seconds_since(t0);
  o.require(failures == 0, std::to_string(failures) + " failures");
  o.require(secs < 10.0, "runtime " + fmt("%.2f s", secs));
  o.detail += (o.detail.empty() ? "" : "; ") + std::to_string(ok) + "/1000 roundtrips from " +
              std::to_string(draws) + " draws in " + fmt("%.2f s", secs);
  return o;
}

Outcome qbell_construction() {
  Outcome o;
  Rng rng(4);
  std::vector<QuantumBellInequality> ineqs;
  double worstSat = 0.0, worstId = 0.0;
  for (int n = 0; n < 20; ++n) {
    const GeometryParams g = random_constructible(rng);
    const QuantumBellPair pair = construct_pair(g);
    const DBehavior d = simulate_dbehavior(promote(to_realization(g)));
    for (int s = 0; s < 2; ++s) {
      const QuantumBellInequality& q = s == 0 ? pair.B : pair.A;
      const IdentityResiduals r = identity_residuals(pair.coeffs[s], q);
      worstSat = std::max(worstSat, std::abs(evaluate(q, d) - q.bound));
      worstId = std::max({worstId, r.max_abs_equalities(), -r.minVmarg, r.corrProduct});
      ineqs.push_back(q);
    }
  }
  double worstExcess = -1e300;
  for (int n = 0; n < 1000; ++n) {
    const DBehavior d = simulate_dbehavior(promote(random_two_qubit(rng)));
    for (const auto& q : ineqs) worstExcess = std::max(worstExcess, evaluate(q, d) - q.bound);
  }
  o.require(worstSat <= 1e-9, "saturation " + fmt("%.2e", worstSat));
  o.require(worstId <= 1e-9, "identities " + fmt("%.2e", worstId));
  o.require(worstExcess <= 1e-7, "excess " + fmt("%.2e", worstExcess));
  if (o.pass)
    o.detail = "saturation " + fmt("%.1e", worstSat) + ", identities " + fmt("%.1e", worstId) +
               ", max excess over 1000 realizations " + fmt("%.2e", worstExcess);
  return o;
}

Outcome uniqueness() {
  Outcome o;
  const auto check = [&o](const UniquenessReport& u, const std::string& name) {
    o.require(u.trivialOnly, name + " not trivial");
    bool found = false;
    for (const auto& s : u.solutions)
      if (std::abs(s.cosA - u.referenceA) < 1e-6 && std::abs(s.cosB - u.referenceB) < 1e-6 &&
          s.residual <= 1e-8)
        found = true;
    o.require(found, name + " trivial solution missing");
  };
  check(uniqueness_check(projection_angles(counterexample_p(0.05))), "P");
  Rng rng(5);
  for (int n = 0; n < 20; ++n)
    check(uniqueness_check(random_constructible(rng)), "random " + std::to_string(n));
  if (o.pass) o.detail = "P and 20 random geometries: trivial only";
  return o;
}

Outcome guessing_bias_consistency() {
  Outcome o;
  Rng rng(6);
  double worst = 0.0;
  for (int n = 0; n < 200; ++n) {
    const GeneralRealization r = random_generic(rng, random_int(rng, 2, 4), random_int(rng, 2, 4));
    const Side side = random_int(rng, 0, 1) == 0 ? Side::A : Side::B;
    const int k = random_int(rng, 0, 1);
    worst = std::max(worst, std::abs(guessing_bias(r, side, k) - guessing_bias_oracle(r, side, k).value));
  }
  o.require(worst <= 1e-6, "oracle gap " + fmt("%.2e", worst));

  double worstD = 0.0;
  for (int n = 0; n < 200; ++n) {
    const TwoQubitRealization t = random_two_qubit(rng);
    const GeneralRealization r = promote(t);
    const DQuantities dq = d_quantities(simulate_cbehavior(r), std::pow(std::sin(2 * t.chi), 2));
    for (int k = 0; k < 2; ++k) {
      worstD = std::max(worstD, std::abs(std::pow(guessing_bias(r, Side::B, k), 2) - dq.dB[k]));
      worstD = std::max(worstD, std::abs(std::pow(guessing_bias(r, Side::A, k), 2) - dq.dA[k]));
    }
  }
  o.require(worstD <= 1e-9, "d gap " + fmt("%.2e", worstD));
  if (o.pass)
    o.detail = "oracle gap " + fmt("%.1e", worst) + " on 200 realizations, D^2 vs d gap " + fmt("%.1e", worstD);
  return o;
}

Outcome self_testing() {
  Outcome o;
  Rng rng(7);
  double worstFid = 0.0, worstRes = 0.0;
  for (int n = 0; n < 50; ++n) {
    const TwoQubitRealization r = random_base(rng);
    const GeneralRealization p = promote(r);
    const DerivedOperators ops = derive_operators(p, reconstruct(simulate_cbehavior(p)));
    worstFid = std::max(worstFid, std::abs(swap_isometry(p, ops).fidelity - 1.0));
    worstRes = std::max(worstRes, max_residual(anticommutator_residual(p, ops)));

    const auto padding = [&rng] {
      return Padding{random_int(rng, 0, 2), {random_int(rng, 0, 1) * 2 - 1, random_int(rng, 0, 1) * 2 - 1}};
    };
    const GeneralRealization e =
        embed(p, haar_unitary(2, rng), haar_unitary(2, rng), padding(), padding());
    const DerivedOperators eops = derive_operators(e, reconstruct(simulate_cbehavior(e)));
    worstFid = std::max(worstFid, std::abs(swap_isometry(e, eops).fidelity - 1.0));
    worstRes = std::max(worstRes, max_residual(anticommutator_residual(e, eops)));
  }
  o.require(worstFid <= 1e-9, "fidelity gap " + fmt("%.2e", worstFid));
  o.require(worstRes <= 1e-9, "residual " + fmt("%.2e", worstRes));

  int okZ = 0, okPair = 0, rejZ = 0, rejPair = 0, cases = 0;
  while (cases < 100) {
    const TwoQubitRealization r = random_base(rng);
    const auto t = conforming_b2(r, rng);
    if (!t) continue;
    ++cases;
    const GeneralRealization p = promote(r);
    okZ += protocol_zb({p, oracle::sigma(3)}).selfTested ? 1 : 0;
    okPair += protocol_lemma6_pair({p, in_plane(*t)}).selfTested ? 1 : 0;
    rejZ += protocol_zb({p, tilted(0.0, 0.2)}).selfTested ? 0 : 1;
    rejPair += protocol_lemma6_pair({p, tilted(*t, 0.2)}).selfTested ? 0 : 1;
  }
  o.require(okZ == 100 && okPair == 100, "conforming accepted " + std::to_string(okZ) + "/" +
                                             std::to_string(okPair));
  o.require(rejZ == 100 && rejPair == 100, "corrupted rejected " + std::to_string(rejZ) + "/" +
                                               std::to_string(rejPair));
  if (o.pass)
    o.detail = "fidelity gap " + fmt("%.1e", worstFid) + " on 50 promoted + 50 embedded, residual " +
               fmt("%.1e", worstRes) + ", protocols 100/100 accepted and 100/100 rejected";
  return o;
}

Outcome convexity_chain() {
  Outcome o;
  Rng rng(8);
  int inside = 0;
  for (int n = 0; n < 1000; ++n) {
    const GeneralRealization r = n % 2 == 0
                                     ? promote(random_two_qubit(rng))
                                     : random_generic(rng, random_int(rng, 2, 4), random_int(rng, 2, 4));
    inside += crypt_membership(simulate_dbehavior(r)) ? 1 : 0;
  }
  o.require(inside == 1000, std::to_string(1000 - inside) + " outside crypt");

  GeneralRealization prod;
  prod.dimA = prod.dimB = 2;
  prod.psi = CVector::Zero(4);
  prod.psi(0) = 1.0;
  prod.A = prod.B = {oracle::sigma(1), oracle::sigma(1)};
  GeneralRealization me = prod;
  me.psi(0) = me.psi(3) = 1.0 / std::sqrt(2.0);
  me.B = {oracle::sigma(3), oracle::sigma(3)};
  const auto c0 = flatten(simulate_cbehavior(prod)), c1 = flatten(simulate_cbehavior(me));
  const auto d0 = flatten(simulate_dbehavior(prod)), d1 = flatten(simulate_dbehavior(me));
  DBehavior ones;
  ones.deltaB = ones.deltaA = {1.0, 1.0};
  const auto zero = flatten(DBehavior{}), one = flatten(ones);
  double gap = 0.0;
  for (std::size_t k = 0; k < c0.size(); ++k) gap = std::max({gap, std::abs(c0[k]), std::abs(c1[k])});
  for (std::size_t k = 0; k < d0.size(); ++k)
    gap = std::max({gap, std::abs(d0[k] - zero[k]), std::abs(d1[k] - one[k])});
  o.require(gap <= 1e-15, "completely random representations off by " + fmt("%.2e", gap));
  if (o.pass)
    o.detail = "1000/1000 in crypt; completely random: D = 0 and D = 1 reproduced (gap " +
               fmt("%.1e", gap) + ")";
  return o;
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
      {"counterexample reproduction", counterexample_reproduction},
      {"S-branch structure at named points", s_branches},
      {"geometry roundtrip", geometry_roundtrip},
      {"quantum Bell construction", qbell_construction},
      {"uniqueness condition", uniqueness},
      {"guessing-bias consistency", guessing_bias_consistency},
      {"self-testing", self_testing},
      {"convexity chain", convexity_chain},
  };
  int failed = 0;
  for (std::size_t k = 0; k < criteria.size(); ++k) {
    Outcome o;
    try {
      o = criteria[k].second();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    failed += o.pass ? 0 : 1;
    std::printf("%s %zu %s: %s\n", o.pass ? "PASS" : "FAIL", k + 1, criteria[k].first,
                o.detail.c_str());
  }
  std::fflush(stdout);
  return failed == 0 ? 0 : 1;
}
