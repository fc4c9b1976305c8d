#include <doctest.h>

#include <cmath>
#include <numbers>

#include "nonloc/behavior.hpp"
#include "nonloc/counterexample.hpp"
#include "nonloc/geometry.hpp"
#include "nonloc/random.hpp"
#include "nonloc/realization.hpp"
#include "nonloc/selftest.hpp"
#include "fixtures.hpp"
#include "oracles.hpp"

using namespace nonloc;
using std::numbers::pi;

using namespace fixture;

TEST_CASE("derived operators are the Pauli pair") {
  Rng rng(3);
  for (int n = 0; n < 50; ++n) {
    const TwoQubitRealization r = random_two_qubit(rng);
    if (std::abs(std::sin(r.thetaA[0] - r.thetaA[1])) < 1e-3 ||
        std::abs(std::sin(r.thetaB[0] - r.thetaB[1])) < 1e-3)
      continue;
    const DerivedOperators ops = derive_operators(promote(r), projection_angles(r));
    CHECK((ops.ZB - oracle::sigma(3)).norm() <= 1e-9);
    CHECK((ops.XB - oracle::sigma(1)).norm() <= 1e-9);
    CHECK((ops.ZA - oracle::sigma(3)).norm() <= 1e-9);
    CHECK((ops.XA - oracle::sigma(1)).norm() <= 1e-9);
  }
  const TwoQubitRealization t{{0.0, pi / 2}, {pi / 4, -pi / 4}, pi / 4};
  const DerivedOperators ops = derive_operators(promote(t), projection_angles(t));
  CHECK((ops.ZB - oracle::sigma(3)).norm() <= 1e-12);
  CHECK((ops.XB - oracle::sigma(1)).norm() <= 1e-12);

  const TwoQubitRealization col{{0.0, pi / 2}, {0.4, 0.4}, 0.3};
  CHECK_THROWS_AS(derive_operators(promote(col), projection_angles(col)), DegenerateError);
}

TEST_CASE("residuals") {
  Rng rng(5);
  for (int n = 0; n < 30; ++n) {
    const TwoQubitRealization r = random_base(rng);
    const GeometryParams g = projection_angles(r);
    CHECK(max_residual(anticommutator_residual(promote(r), derive_operators(promote(r), g))) <= 1e-12);

    const CMatrix uA = haar_unitary(2, rng), uB = haar_unitary(2, rng);
    const GeneralRealization e = embed(promote(r), uA, uB, {1, {1, -1}}, {2, {-1, 1}});
    const DerivedOperators ops = derive_operators(e, g);
    CHECK(max_residual(anticommutator_residual(e, ops)) <= 1e-9);
    CHECK((ops.ZB.topLeftCorner(2, 2) - uB * oracle::sigma(3) * uB.adjoint()).norm() <= 1e-9);

    // B1 tilted by 0.1 rad out of the plane. The anticommutator of two qubit
    // observables is a scalar, so every residual scales with
    // cos(dthetaB) (1 - cos 0.1).
    GeneralRealization bad = promote(r);
    bad.B[1] = tilted(r.thetaB[1], std::sin(0.1));
    const double cosDelta = std::abs(std::cos(r.thetaB[0] - r.thetaB[1]));
    const double res = max_residual(anticommutator_residual(bad, derive_operators(bad, g)));
    CHECK(res >= 2.0 * cosDelta * (1.0 - std::cos(0.1)) - 1e-12);
    if (cosDelta >= 0.2) CHECK(res > 1e-3);
  }
}

TEST_CASE("tilted observable at P") {
  const TwoQubitRealization r = counterexample_p(0.05);
  GeneralRealization bad = promote(r);
  bad.B[1] = tilted(r.thetaB[1], std::sin(0.1));
  const double res =
      max_residual(anticommutator_residual(bad, derive_operators(bad, projection_angles(r))));
  CHECK(res > 1e-3);
}

TEST_CASE("tilt orthogonal to B0 is invisible to the operator relations") {
  // B0 = sigma_3 and B1 = sigma_1 tilted towards sigma_2: the pair is a rotated
  // orthogonal pair, so every relation still holds.
  const TwoQubitRealization r{{0.3, 2.0}, {0.0, pi / 2}, 0.4};
  GeneralRealization tiltedR = promote(r);
  tiltedR.B[1] = tilted(pi / 2, std::sin(0.1));
  const double res = max_residual(
      anticommutator_residual(tiltedR, derive_operators(tiltedR, projection_angles(r))));
  CHECK(res < 1e-12);
}

TEST_CASE("swap isometry on promoted and embedded realizations") {
  Rng rng(7);
  for (int n = 0; n < 30; ++n) {
    const TwoQubitRealization r = random_base(rng);
    const GeometryParams g = reconstruct(simulate_cbehavior(promote(r)));
    const IsometryResult iso = swap_isometry(promote(r), derive_operators(promote(r), g));
    CHECK(iso.fidelity == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(iso.fidelity <= 1.0 + 1e-12);
    const CVector ref = reference_state(r.chi);
    CHECK((iso.extractedState - ref).norm() <= 1e-9);

    const GeneralRealization e =
        embed(promote(r), haar_unitary(2, rng), haar_unitary(2, rng), {1, {1, 1}}, {2, {-1, -1}});
    CHECK(e.dimA == 3);
    CHECK(e.dimB == 4);
    const GeometryParams ge = reconstruct(simulate_cbehavior(e));
    const IsometryResult ie = swap_isometry(e, derive_operators(e, ge));
    CHECK(ie.fidelity >= 1.0 - 1e-9);
  }
}

TEST_CASE("extraction of the X-flipped state") {
  const TwoQubitRealization r = counterexample_p(0.05);
  const GeneralRealization gr = promote(r);
  const DerivedOperators ops = derive_operators(gr, projection_angles(r));
  const CVector flipped = lift_a(ops.XA, 2) * (lift_b(ops.XB, 2) * gr.psi);
  CVector target = CVector::Zero(4);
  target(0) = std::sin(r.chi);
  target(3) = std::cos(r.chi);
  CHECK(analyze_output(swap_output(gr, ops, flipped), target).fidelity ==
        doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("added-observable protocol") {
  Rng rng(9);
  for (int n = 0; n < 30; ++n) {
    const TwoQubitRealization r = random_base(rng);
    const ProtocolReport ok = protocol_zb({promote(r), oracle::sigma(3)});
    CHECK(ok.selfTested);
    CHECK(ok.fidelity == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(ok.failures.empty());

    const ProtocolReport bad = protocol_zb({promote(r), oracle::sigma(1)});
    CHECK_FALSE(bad.selfTested);

    const CMatrix uA = haar_unitary(2, rng), uB = haar_unitary(2, rng);
    const GeneralRealization e = embed(promote(r), uA, uB, {1, {1, -1}}, {1, {1, -1}});
    const CMatrix b2 = direct_sum_identity(uB * oracle::sigma(3) * uB.adjoint(), 1, -1);
    const ProtocolReport emb = protocol_zb({e, b2});
    CHECK(emb.selfTested);
    CHECK(emb.fidelity >= 1.0 - 1e-9);
  }
  CHECK_THROWS_AS(protocol_zb({promote(TwoQubitRealization{{0, 0}, {0, 0}, 0}), oracle::sigma(3)}),
                  PreconditionError);
}

TEST_CASE("pair protocol roundtrip with thetaB2 = 0.3") {
  Rng rng(11);
  int found = 0;
  for (int n = 0; n < 20000 && found < 5; ++n) {
    const TwoQubitRealization r = random_base(rng);
    if (std::abs(std::sin(0.3 - r.thetaB[0])) < 0.05) continue;
    TwoQubitRealization r2 = r;
    r2.thetaB[1] = 0.3;
    if (!satisfies_hypotheses(r2)) continue;
    ++found;
    const ProtocolReport rep = protocol_lemma6_pair({promote(r), in_plane(0.3)});
    CHECK(rep.selfTested);
    REQUIRE(rep.thetaB2.has_value());
    CHECK(std::cos(*rep.thetaB2) == doctest::Approx(std::cos(0.3)).epsilon(1e-7));
    CHECK(std::abs(std::sin(*rep.thetaB2)) == doctest::Approx(std::sin(0.3)).epsilon(1e-7));
  }
  CHECK(found == 5);
}

TEST_CASE("pair protocol on conforming and corrupted extensions") {
  Rng rng(13);
  int conforming = 0;
  for (int n = 0; n < 40; ++n) {
    const TwoQubitRealization r = random_base(rng);
    const auto t = conforming_b2(r, rng);
    if (!t) continue;
    ++conforming;
    const ProtocolReport ok = protocol_lemma6_pair({promote(r), in_plane(*t)});
    CHECK(ok.selfTested);
    CHECK(max_residual(ok.residuals) <= 1e-7);
    const ProtocolReport bad = protocol_lemma6_pair({promote(r), tilted(*t, 0.2)});
    CHECK_FALSE(bad.selfTested);
    const ProtocolReport badZ = protocol_zb({promote(r), tilted(0.0, 0.2)});
    CHECK_FALSE(badZ.selfTested);
  }
  CHECK(conforming >= 30);
}

TEST_CASE("pair protocol rejects a repeated measurement") {
  const TwoQubitRealization r = counterexample_p(0.05);
  CHECK_THROWS_AS(protocol_lemma6_pair({promote(r), in_plane(r.thetaB[0])}), DegenerateError);
}

TEST_CASE("extension validation") {
  const GeneralRealization g = promote(counterexample_p(0.05));
  CHECK_THROWS_AS((ExtendedRealization{g, 0.5 * oracle::sigma(3)}.validate()), DomainError);
  CHECK_THROWS_AS((ExtendedRealization{g, CMatrix::Identity(3, 3)}.validate()), DomainError);
}

TEST_CASE("protocol chain over a measurement list") {
  Rng rng(17);
  int tried = 0;
  for (int n = 0; n < 200 && tried < 5; ++n) {
    const TwoQubitRealization r = random_base(rng);
    const auto t2 = conforming_b2(r, rng);
    const auto t3 = conforming_b2(r, rng);
    if (!t2 || !t3) continue;
    ++tried;
    const auto reps = protocol_chain(promote(r), {in_plane(*t2), in_plane(*t3), tilted(*t2, 0.2)});
    REQUIRE(reps.size() == 3);
    CHECK(reps[0].selfTested);
    CHECK(reps[1].selfTested);
    CHECK_FALSE(reps[2].selfTested);

    // Bob's consecutive pair (B1, B2) never satisfies the hypotheses on its own.
    TwoQubitRealization mid = r;
    mid.thetaB = {r.thetaB[1], *t2};
    CHECK_FALSE(satisfies_hypotheses(mid));
  }
  CHECK(tried == 5);

  const TwoQubitRealization p = counterexample_p(0.05);
  const auto near = protocol_chain(promote(p), {in_plane(p.thetaB[1] + 0.01)});
  REQUIRE(near.size() == 1);
  CHECK(near[0].selfTested);
  // sigma_2 has no correlation with Alice's in-plane observables.
  const auto none = protocol_chain(promote(p), {oracle::sigma(2)});
  REQUIRE(none.size() == 1);
  CHECK_FALSE(none[0].selfTested);
  REQUIRE(!none[0].failures.empty());
  CHECK(none[0].failures.front().find("no certified partner") != std::string::npos);
}
