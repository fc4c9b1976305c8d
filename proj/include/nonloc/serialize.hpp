#pragma once

#include <string>

#include <json.hpp>

#include "nonloc/behavior.hpp"
#include "nonloc/counterexample.hpp"
#include "nonloc/criteria.hpp"
#include "nonloc/geometry.hpp"
#include "nonloc/qbell.hpp"
#include "nonloc/realization.hpp"
#include "nonloc/selftest.hpp"

namespace nonloc {

using Json = nlohmann::ordered_json;

/// Compact or indented text with every number written as %.17g.
std::string dump(const Json& j, int indent = 2);

/// Parse text, mapping syntax errors to ParseError with the byte offset.
Json parse_json(const std::string& text);

Json to_json(const CBehavior& b);
Json to_json(const DBehavior& d);
Json to_json(const TwoQubitRealization& r);
Json to_json(const GeneralRealization& r);
Json to_json(const GeometryParams& g);
Json to_json(const SQuantities& s);
Json to_json(const SignPattern& p);
Json to_json(const ExtremalVerdict& v);
Json to_json(const QuantumBellInequality& q);
Json to_json(const QBellCoefficients& k);
Json to_json(const UniquenessReport& u);
Json to_json(const ChainReport& c);
Json to_json(const IsometryResult& r);
Json to_json(const ProtocolReport& r);
Json to_json(const CounterexampleReport& r);
Json to_json(const NamedResiduals& r);

CBehavior cbehavior_from_json(const Json& j);
DBehavior dbehavior_from_json(const Json& j);
TwoQubitRealization two_qubit_from_json(const Json& j);
GeneralRealization general_from_json(const Json& j);
GeometryParams geometry_from_json(const Json& j);
CMatrix matrix_from_json(const Json& j, const std::string& field);

/// Two-qubit objects carry "thetaA"/"thetaB"/"chi"; general ones "dimA".
bool is_two_qubit_json(const Json& j);

}  // namespace nonloc
