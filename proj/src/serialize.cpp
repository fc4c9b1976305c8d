#include "nonloc/serialize.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace nonloc {

namespace {

void write_number(std::string& out, double v) {
  if (!std::isfinite(v)) {
    // JSON has no inf/nan; null keeps the document valid.
    out += "null";
    return;
  }
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  out += buf;
}

void write(std::string& out, const Json& j, int indent, int depth) {
  const auto newline = [&](int d) {
    if (indent < 0) return;
    out += '\n';
    out.append(static_cast<std::size_t>(indent * d), ' ');
  };
  switch (j.type()) {
    case Json::value_t::object: {
      if (j.empty()) {
        out += "{}";
        return;
      }
      out += '{';
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) out += ',';
        first = false;
        newline(depth + 1);
        out += Json(it.key()).dump();
        out += indent < 0 ? ":" : ": ";
        write(out, it.value(), indent, depth + 1);
      }
      newline(depth);
      out += '}';
      return;
    }
    case Json::value_t::array: {
      if (j.empty()) {
        out += "[]";
        return;
      }
      // Arrays of scalars stay on one line.
      const bool flat = std::all_of(j.begin(), j.end(), [](const Json& e) {
        return !e.is_structured();
      });
      out += '[';
      bool first = true;
      for (const auto& e : j) {
        if (!first) out += flat && indent >= 0 ? ", " : ",";
        first = false;
        if (!flat) newline(depth + 1);
        write(out, e, indent, depth + 1);
      }
      if (!flat) newline(depth);
      out += ']';
      return;
    }
    case Json::value_t::number_float:
      write_number(out, j.get<double>());
      return;
    default:
      out += j.dump();
  }
}

const Json& field(const Json& j, const std::string& name) {
  if (!j.is_object()) throw ParseError("expected a JSON object");
  const auto it = j.find(name);
  if (it == j.end()) throw ParseError("missing field '" + name + "'");
  return *it;
}

double number(const Json& j, const std::string& name) {
  if (!j.is_number()) throw ParseError("field '" + name + "' must be a number");
  return j.get<double>();
}

Pair pair_of(const Json& j, const std::string& name) {
  const Json& f = field(j, name);
  if (!f.is_array() || f.size() != 2) {
    throw ParseError("field '" + name + "' must be an array of 2 numbers");
  }
  return {number(f[0], name + "[0]"), number(f[1], name + "[1]")};
}

Grid grid_of(const Json& j, const std::string& name) {
  const Json& f = field(j, name);
  if (!f.is_array() || f.size() != 2 || !f[0].is_array() || !f[1].is_array() ||
      f[0].size() != 2 || f[1].size() != 2) {
    throw ParseError("field '" + name + "' must be a 2x2 array of numbers");
  }
  Grid g{};
  for (int x = 0; x < 2; ++x)
    for (int y = 0; y < 2; ++y)
      g[x][y] = number(f[x][y], name + "[" + std::to_string(x) + "][" + std::to_string(y) + "]");
  return g;
}

Json pair_json(const Pair& p) { return Json::array({p[0], p[1]}); }

Json grid_json(const Grid& g) {
  return Json::array({Json::array({g[0][0], g[0][1]}), Json::array({g[1][0], g[1][1]})});
}

Json complex_json(cplx c) { return Json::array({c.real(), c.imag()}); }

cplx complex_of(const Json& j, const std::string& name) {
  if (!j.is_array() || j.size() != 2) {
    throw ParseError("entry of '" + name + "' must be a [re, im] pair");
  }
  return {number(j[0], name), number(j[1], name)};
}

Json matrix_json(const CMatrix& m) {
  Json rows = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (Eigen::Index k = 0; k < m.cols(); ++k) row.push_back(complex_json(m(i, k)));
    rows.push_back(row);
  }
  return rows;
}

Json bool_grid(const std::array<std::array<bool, 2>, 2>& g) {
  return Json::array({Json::array({g[0][0], g[0][1]}), Json::array({g[1][0], g[1][1]})});
}

}  // namespace

std::string dump(const Json& j, int indent) {
  std::string out;
  write(out, j, indent, 0);
  return out;
}

Json parse_json(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw ParseError(std::string("malformed JSON: ") + e.what());
  }
}

Json to_json(const CBehavior& b) {
  Json j;
  j["cA"] = pair_json(b.cA);
  j["cB"] = pair_json(b.cB);
  j["c"] = grid_json(b.c);
  return j;
}

Json to_json(const DBehavior& d) {
  Json j;
  j["deltaB"] = pair_json(d.deltaB);
  j["deltaA"] = pair_json(d.deltaA);
  j["c"] = grid_json(d.c);
  return j;
}

Json to_json(const TwoQubitRealization& r) {
  Json j;
  j["thetaA"] = pair_json(r.thetaA);
  j["thetaB"] = pair_json(r.thetaB);
  j["chi"] = r.chi;
  return j;
}

Json to_json(const GeneralRealization& r) {
  Json j;
  j["dimA"] = r.dimA;
  j["dimB"] = r.dimB;
  Json psi = Json::array();
  for (Eigen::Index i = 0; i < r.psi.size(); ++i) psi.push_back(complex_json(r.psi(i)));
  j["psi"] = psi;
  j["A"] = Json::array({matrix_json(r.A[0]), matrix_json(r.A[1])});
  j["B"] = Json::array({matrix_json(r.B[0]), matrix_json(r.B[1])});
  return j;
}

Json to_json(const GeometryParams& g) {
  Json j;
  j["thetaA"] = pair_json(g.thetaA);
  j["thetaB"] = pair_json(g.thetaB);
  j["phiB"] = pair_json(g.phiB);
  j["phiA"] = pair_json(g.phiA);
  j["chi"] = g.chi;
  j["psiPrimeNorm"] = g.psiPrimeNorm;
  return j;
}

Json to_json(const SQuantities& s) {
  Json j;
  j["J"] = grid_json(s.J);
  j["K"] = grid_json(s.K);
  j["sPlus"] = grid_json(s.sPlus);
  j["sMinus"] = grid_json(s.sMinus);
  j["real"] = bool_grid(s.real);
  return j;
}

Json to_json(const SignPattern& p) {
  Json j;
  j["pattern"] = p.label();
  j["commonValue"] = p.commonValue;
  j["H"] = p.H;
  j["spread"] = p.spread;
  return j;
}

Json to_json(const ExtremalVerdict& v) {
  Json j;
  j["conjecture1Candidate"] = v.conjecture1Candidate;
  j["conditionSPlus"] = v.conditionSPlus;
  j["tlmBSaturated"] = v.tlmBSaturated;
  j["tlmASaturated"] = v.tlmASaturated;
  j["uniquenessTrivial"] = v.uniquenessTrivial;
  j["sin2chiSquared"] = v.sin2chiSquared;
  Json res;
  res["sPlusSpread"] = v.sPlusSpread;
  res["gapB"] = v.gapB;
  res["gapA"] = v.gapA;
  j["residuals"] = res;
  Json pats = Json::array();
  for (const auto& p : v.patterns) pats.push_back(to_json(p));
  j["patterns"] = pats;
  if (!v.uniquenessNote.empty()) j["uniquenessNote"] = v.uniquenessNote;
  j["note"] = "candidate flag is conditional on an unproven conjecture";
  return j;
}

Json to_json(const QuantumBellInequality& q) {
  Json j;
  j["side"] = to_string(q.side);
  j["Vmarg"] = pair_json(q.Vmarg);
  j["Vcorr"] = grid_json(q.Vcorr);
  j["q"] = q.q;
  j["bound"] = q.bound;
  return j;
}

Json to_json(const QBellCoefficients& k) {
  Json j;
  j["side"] = to_string(k.side);
  j["u"] = grid_json(k.u);
  j["s"] = pair_json(k.s);
  j["a"] = k.a;
  j["b"] = k.b;
  j["alpha"] = k.alpha;
  j["beta"] = k.beta;
  j["D"] = pair_json(k.D);
  return j;
}

Json to_json(const UniquenessReport& u) {
  Json j;
  j["trivialOnly"] = u.trivialOnly;
  j["reference"] = Json::array({u.referenceA, u.referenceB});
  Json sols = Json::array();
  for (const auto& s : u.solutions) {
    sols.push_back(Json::array({s.cosA, s.cosB, s.residual}));
  }
  j["solutions"] = sols;
  return j;
}

Json to_json(const ChainReport& c) {
  Json j;
  j["value"] = c.value;
  j["middle"] = c.middle;
  j["bound"] = c.bound;
  j["slackLower"] = c.slackLower;
  j["slackUpper"] = c.slackUpper;
  return j;
}

Json to_json(const NamedResiduals& r) {
  Json j = Json::object();
  for (const auto& [name, v] : r) j[name] = v;
  return j;
}

Json to_json(const IsometryResult& r) {
  Json j;
  j["fidelity"] = r.fidelity;
  Json st = Json::array();
  for (Eigen::Index i = 0; i < r.extractedState.size(); ++i) {
    st.push_back(complex_json(r.extractedState(i)));
  }
  j["extractedState"] = st;
  j["junkNorm"] = r.junkNorm;
  j["residuals"] = to_json(r.residuals);
  return j;
}

Json to_json(const ProtocolReport& r) {
  Json j;
  j["selfTested"] = r.selfTested;
  j["fidelity"] = r.fidelity;
  j["geometry"] = to_json(r.geometry);
  if (r.thetaB2) j["thetaB2"] = *r.thetaB2;
  j["residuals"] = to_json(r.residuals);
  j["failures"] = r.failures;
  return j;
}

Json to_json(const CounterexampleReport& r) {
  Json j;
  j["epsilon"] = r.epsilon;
  j["lambda"] = r.lambda;
  j["lLocal"] = r.lLocal;
  j["lValid"] = r.lValid;
  j["lInCrypt"] = r.lInCrypt;
  j["chsh"] = Json{{"P", r.chshP}, {"Q", r.chshQ}, {"L", r.chshL}};
  j["lGap"] = Json{{"B", r.lGapB}, {"A", r.lGapA}};
  j["qbellOnL"] = Json{{"valueB", r.qbellValueB}, {"boundB", r.qbellBoundB},
                       {"valueA", r.qbellValueA}, {"boundA", r.qbellBoundA}};
  j["C"] = Json{{"P", to_json(r.P)}, {"Q", to_json(r.Q)}, {"L", to_json(r.L)}};
  j["D"] = Json{{"P", to_json(r.dP)}, {"Q", to_json(r.dQ)}, {"L", to_json(r.dL)}};
  return j;
}

CBehavior cbehavior_from_json(const Json& j) {
  CBehavior b;
  b.cA = pair_of(j, "cA");
  b.cB = pair_of(j, "cB");
  b.c = grid_of(j, "c");
  return b;
}

DBehavior dbehavior_from_json(const Json& j) {
  DBehavior d;
  d.deltaB = pair_of(j, "deltaB");
  d.deltaA = pair_of(j, "deltaA");
  d.c = grid_of(j, "c");
  return d;
}

TwoQubitRealization two_qubit_from_json(const Json& j) {
  TwoQubitRealization r;
  r.thetaA = pair_of(j, "thetaA");
  r.thetaB = pair_of(j, "thetaB");
  r.chi = number(field(j, "chi"), "chi");
  return r;
}

CMatrix matrix_from_json(const Json& j, const std::string& name) {
  if (!j.is_array() || j.empty()) throw ParseError("'" + name + "' must be a matrix");
  const auto n = static_cast<Eigen::Index>(j.size());
  CMatrix m(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const Json& row = j[static_cast<std::size_t>(i)];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != n) {
      throw ParseError("'" + name + "' must be square");
    }
    for (Eigen::Index k = 0; k < n; ++k) {
      m(i, k) = complex_of(row[static_cast<std::size_t>(k)], name);
    }
  }
  return m;
}

GeneralRealization general_from_json(const Json& j) {
  GeneralRealization r;
  const Json& da = field(j, "dimA");
  const Json& db = field(j, "dimB");
  if (!da.is_number_integer() || !db.is_number_integer()) {
    throw ParseError("fields 'dimA' and 'dimB' must be integers");
  }
  r.dimA = da.get<int>();
  r.dimB = db.get<int>();
  const Json& psi = field(j, "psi");
  if (!psi.is_array()) throw ParseError("field 'psi' must be an array");
  r.psi.resize(static_cast<Eigen::Index>(psi.size()));
  for (std::size_t i = 0; i < psi.size(); ++i) {
    r.psi(static_cast<Eigen::Index>(i)) = complex_of(psi[i], "psi");
  }
  for (const char* side : {"A", "B"}) {
    const Json& ms = field(j, side);
    if (!ms.is_array() || ms.size() != 2) {
      throw ParseError(std::string("field '") + side + "' must hold 2 matrices");
    }
    auto& dst = side[0] == 'A' ? r.A : r.B;
    for (int k = 0; k < 2; ++k) {
      dst[k] = matrix_from_json(ms[k], std::string(side) + "[" + std::to_string(k) + "]");
    }
  }
  return r;
}

GeometryParams geometry_from_json(const Json& j) {
  const TwoQubitRealization r = two_qubit_from_json(j);
  return projection_angles(r);
}

bool is_two_qubit_json(const Json& j) {
  return j.is_object() && j.contains("thetaA") && !j.contains("dimA");
}

}  // namespace nonloc
