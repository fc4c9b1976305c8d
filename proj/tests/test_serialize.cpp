#include <doctest.h>

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "nonloc/counterexample.hpp"
#include "nonloc/random.hpp"
#include "nonloc/serialize.hpp"

using namespace nonloc;
using std::numbers::pi;

namespace {

std::string parse_error(const std::string& text, CBehavior (*f)(const Json&)) {
  try {
    f(parse_json(text));
  } catch (const ParseError& e) {
    return e.what();
  }
  return {};
}

}  // namespace

TEST_CASE("C-behavior roundtrip is exact") {
  Rng rng(3);
  for (int n = 0; n < 50; ++n) {
    const CBehavior b = simulate_cbehavior(promote(random_two_qubit(rng)));
    const CBehavior back = cbehavior_from_json(parse_json(dump(to_json(b))));
    CHECK(flatten(back) == flatten(b));
    const CBehavior compact = cbehavior_from_json(parse_json(dump(to_json(b), -1)));
    CHECK(flatten(compact) == flatten(b));
  }
}

TEST_CASE("D-behavior and realization roundtrips") {
  Rng rng(5);
  const DBehavior d = simulate_dbehavior(promote(random_two_qubit(rng)));
  CHECK(flatten(dbehavior_from_json(parse_json(dump(to_json(d))))) == flatten(d));

  const TwoQubitRealization r = random_two_qubit(rng);
  const TwoQubitRealization r2 = two_qubit_from_json(parse_json(dump(to_json(r))));
  CHECK(r2.thetaA == r.thetaA);
  CHECK(r2.thetaB == r.thetaB);
  CHECK(r2.chi == r.chi);
  CHECK(is_two_qubit_json(to_json(r)));

  const GeneralRealization g = random_generic(rng, 3, 2);
  const Json gj = to_json(g);
  CHECK_FALSE(is_two_qubit_json(gj));
  const GeneralRealization g2 = general_from_json(parse_json(dump(gj)));
  CHECK(g2.dimA == 3);
  CHECK(g2.dimB == 2);
  CHECK(g2.psi == g.psi);
  for (int k = 0; k < 2; ++k) {
    CHECK(g2.A[k] == g.A[k]);
    CHECK(g2.B[k] == g.B[k]);
  }
}

TEST_CASE("numbers use 17 significant digits") {
  Json j;
  j["x"] = 0.1;
  j["third"] = 1.0 / 3.0;
  j["n"] = 3;
  j["bad"] = std::numeric_limits<double>::quiet_NaN();
  const std::string s = dump(j, -1);
  CHECK(s == "{\"x\":0.10000000000000001,\"third\":0.33333333333333331,\"n\":3,\"bad\":null}");

  // Scalar arrays stay on one line when indented.
  Json a;
  a["p"] = Json::array({1.5, -0.25});
  CHECK(dump(a) == "{\n  \"p\": [1.5, -0.25]\n}");
}

TEST_CASE("field errors name the field") {
  CHECK(parse_error("{\"cB\": [0, 0], \"c\": [[0, 0], [0, 0]]}", cbehavior_from_json)
            .find("'cA'") != std::string::npos);
  CHECK(parse_error("{\"cA\": [0], \"cB\": [0, 0], \"c\": [[0, 0], [0, 0]]}", cbehavior_from_json)
            .find("'cA' must be an array of 2") != std::string::npos);
  CHECK(parse_error("{\"cA\": [0, 0], \"cB\": [0, 0], \"c\": [[0, \"x\"], [0, 0]]}",
                    cbehavior_from_json)
            .find("c[0][1]") != std::string::npos);
  CHECK(parse_error("[1, 2]", cbehavior_from_json).find("object") != std::string::npos);

  CHECK_THROWS_AS(two_qubit_from_json(parse_json("{\"thetaA\": [0, 0], \"thetaB\": [0, 0]}")),
                  ParseError);
  CHECK_THROWS_AS(general_from_json(parse_json("{\"dimA\": 2.5, \"dimB\": 2}")), ParseError);
  CHECK_THROWS_AS(matrix_from_json(parse_json("[[[1, 0], [0, 0]]]"), "M"), ParseError);
}

TEST_CASE("malformed text") {
  try {
    parse_json("{\"cA\": [0, 0,");
    FAIL("no exception");
  } catch (const ParseError& e) {
    CHECK(std::string(e.what()).find("malformed JSON") != std::string::npos);
  }
}

TEST_CASE("report documents") {
  const Json j = to_json(build_counterexample(0.01));
  CHECK(j["lLocal"].get<bool>());
  CHECK_FALSE(j["lInCrypt"].get<bool>());
  CHECK(j["C"]["L"].contains("cA"));
  CHECK(j["chsh"]["L"].get<double>() == doctest::Approx(2.0));
  CHECK(parse_json(dump(j)) == j);
}
