#include "cli.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <limits>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "nonloc/behavior.hpp"
#include "nonloc/counterexample.hpp"
#include "nonloc/criteria.hpp"
#include "nonloc/geometry.hpp"
#include "nonloc/qbell.hpp"
#include "nonloc/random.hpp"
#include "nonloc/realization.hpp"
#include "nonloc/selftest.hpp"
#include "nonloc/serialize.hpp"

namespace nonloc::cli {

namespace {

constexpr double kPi = std::numbers::pi;

struct RunConfig {
  std::string command;
  std::string input;
  std::string output;
  std::string format = "json";
  double tol = kDefaultTol;
  bool tolExplicit = false;
  std::optional<std::uint64_t> seed;
  double epsilon = 0.01;
  std::optional<int> samples;
};

struct Result {
  std::string text;
  int code = kPass;
};

Json read_input(const RunConfig& cfg, std::istream& in) {
  if (cfg.input.empty()) throw ParseError("no input given (use --input)");
  std::string text;
  if (cfg.input == "-") {
    std::stringstream ss;
    ss << in.rdbuf();
    text = ss.str();
  } else if (cfg.input.front() == '{') {
    text = cfg.input;
  } else {
    std::ifstream f(cfg.input, std::ios::binary);
    if (!f) throw ParseError("cannot open input file '" + cfg.input + "'");
    std::stringstream ss;
    ss << f.rdbuf();
    text = ss.str();
  }
  Json j = parse_json(text);
  if (!j.is_object()) throw ParseError("input must be a JSON object");
  return j;
}

// A realization given either in angle form or as explicit matrices.
struct LoadedRealization {
  GeneralRealization general;
  std::optional<TwoQubitRealization> twoQubit;
};

LoadedRealization load_realization(const Json& j, double tol) {
  LoadedRealization out;
  if (is_two_qubit_json(j)) {
    TwoQubitRealization r = two_qubit_from_json(j);
    check_chi_convention(r.chi, tol);
    out.twoQubit = r;
    out.general = promote(r);
  } else {
    out.general = general_from_json(j);
    out.general.validate(std::max(tol, 1e-12));
  }
  return out;
}

bool is_behavior_json(const Json& j) { return j.contains("cA"); }

CBehavior behavior_from_input(const Json& j, double tol,
                              std::optional<LoadedRealization>* realization = nullptr) {
  if (is_behavior_json(j)) return cbehavior_from_json(j);
  LoadedRealization r = load_realization(j, tol);
  CBehavior b = simulate_cbehavior(r.general);
  if (realization) *realization = std::move(r);
  return b;
}

Json degrees(const GeometryParams& g) {
  const auto deg = [](const Pair& p) {
    return Json::array({p[0] * 180.0 / kPi, p[1] * 180.0 / kPi});
  };
  Json j;
  j["thetaA"] = deg(g.thetaA);
  j["thetaB"] = deg(g.thetaB);
  j["phiB"] = deg(g.phiB);
  j["phiA"] = deg(g.phiA);
  j["chi"] = g.chi * 180.0 / kPi;
  return j;
}

Json geometry_json(const GeometryParams& g) {
  Json j = to_json(g);
  j["degrees"] = degrees(g);
  return j;
}

// CSV -------------------------------------------------------------------

std::string csv_cell(const Json& v) {
  if (v.is_null()) return "";
  if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
  if (v.is_number_integer()) return std::to_string(v.get<long long>());
  if (v.is_number_unsigned()) return std::to_string(v.get<unsigned long long>());
  if (v.is_number()) {
    const double x = v.get<double>();
    if (!std::isfinite(x)) return "";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
  }
  if (v.is_string()) return v.get<std::string>();
  return dump(v, -1);
}

std::string to_csv(const std::vector<Json>& rows) {
  std::string out;
  if (rows.empty()) return out;
  bool first = true;
  for (const auto& [key, _] : rows.front().items()) {
    if (!first) out += ',';
    out += key;
    first = false;
  }
  out += '\n';
  for (const Json& row : rows) {
    first = true;
    for (const auto& [key, value] : row.items()) {
      if (!first) out += ',';
      out += csv_cell(value);
      first = false;
    }
    out += '\n';
  }
  return out;
}

double nan() { return std::numeric_limits<double>::quiet_NaN(); }

Json number_or_null(double x) { return std::isfinite(x) ? Json(x) : Json(nullptr); }

void require_json_format(const RunConfig& cfg) {
  if (cfg.format != "json") {
    throw DomainError("--format csv is only available for counterexample and sweep");
  }
}

// Commands --------------------------------------------------------------

Result cmd_simulate(const RunConfig& cfg, std::istream& in) {
  require_json_format(cfg);
  const LoadedRealization r = load_realization(read_input(cfg, in), cfg.tol);
  const CBehavior c = simulate_cbehavior(r.general);
  const DBehavior d = simulate_dbehavior(r.general);
  Json j;
  j["C"] = to_json(c);
  j["D"] = to_json(d);
  j["chsh"] = max_chsh(c.c);
  j["local"] = is_local(c, cfg.tol);
  return {dump(j) + "\n", kPass};
}

Result cmd_check(const RunConfig& cfg, std::istream& in) {
  require_json_format(cfg);
  const CBehavior b = behavior_from_input(read_input(cfg, in), cfg.tol);
  Json j;
  j["behavior"] = to_json(b);
  const bool valid = is_valid(b, cfg.tol);
  j["valid"] = valid;
  j["chsh"] = max_chsh(b.c);
  bool candidate = false;
  if (valid) {
    const bool local = is_local(b, cfg.tol);
    j["local"] = local;
    j["S"] = to_json(s_quantities(b, cfg.tol));
    Json pats = Json::array();
    for (const SignPattern& p : two_qubit_condition(b, cfg.tol)) pats.push_back(to_json(p));
    j["patterns"] = pats;
    if (!local) {
      const ExtremalVerdict v = extremal_criterion(b, cfg.tol);
      j["verdict"] = to_json(v);
      candidate = v.conjecture1Candidate;
    } else {
      j["note"] = "behavior is local; the extremality test applies to nonlocal behaviors";
    }
  } else {
    j["note"] = "behavior is not a valid probability assignment";
  }
  j["candidate"] = candidate;
  return {dump(j) + "\n", candidate ? kPass : kFail};
}

Result cmd_geometry(const RunConfig& cfg, std::istream& in) {
  require_json_format(cfg);
  std::optional<LoadedRealization> real;
  const CBehavior b = behavior_from_input(read_input(cfg, in), cfg.tol, &real);
  Json j;
  j["behavior"] = to_json(b);
  try {
    const ReconstructionReport rep = reconstruct_report(b, cfg.tol);
    j["reconstructed"] = true;
    j["geometry"] = geometry_json(rep.geometry);
    j["pattern"] = to_json(rep.pattern);
    j["gapB"] = rep.gapB;
    j["gapA"] = rep.gapA;
    j["residual"] = rep.residual;
    j["maximallyEntangled"] = rep.maximallyEntangled;
    if (real && real->twoQubit) {
      const GeometryParams expected = projection_angles(*real->twoQubit);
      j["matchesInput"] = symmetry_equivalent(rep.geometry, expected, std::max(cfg.tol, 1e-7));
    }
    return {dump(j) + "\n", kPass};
  } catch (const PreconditionError& e) {
    j["reconstructed"] = false;
    j["reason"] = e.what();
    return {dump(j) + "\n", kFail};
  }
}

GeometryParams geometry_from_input(const Json& j, double tol, Json& provenance) {
  if (is_two_qubit_json(j)) {
    const TwoQubitRealization r = two_qubit_from_json(j);
    check_chi_convention(r.chi, tol);
    provenance = "realization";
    return projection_angles(r);
  }
  provenance = "reconstructed";
  return reconstruct(behavior_from_input(j, tol), tol);
}

Result cmd_qbell(const RunConfig& cfg, std::istream& in) {
  require_json_format(cfg);
  Json source;
  const GeometryParams g = geometry_from_input(read_input(cfg, in), cfg.tol, source);
  const QuantumBellPair pair = construct_pair(g, cfg.tol);
  const DBehavior d = simulate_dbehavior(promote(to_realization(g)));

  Json j;
  j["geometry"] = geometry_json(g);
  j["geometrySource"] = source;
  bool saturated = true;
  bool identities = true;
  Json sides = Json::object();
  for (int s = 0; s < 2; ++s) {
    const QuantumBellInequality& ineq = s == 0 ? pair.B : pair.A;
    const QBellCoefficients& k = pair.coeffs[s];
    const double value = evaluate(ineq, d);
    const IdentityResiduals res = identity_residuals(k, ineq);
    Json side;
    side["inequality"] = to_json(ineq);
    side["coefficients"] = to_json(k);
    side["value"] = value;
    side["saturationError"] = value - ineq.bound;
    side["identities"] = Json{{"minVmarg", res.minVmarg},
                              {"corrProduct", res.corrProduct},
                              {"tripleProduct", res.tripleProduct},
                              {"qConsistency", res.qConsistency},
                              {"uNorm", res.uNorm},
                              {"uProduct", res.uProduct},
                              {"saturation0", res.saturation0},
                              {"saturation1", res.saturation1},
                              {"balance", res.balance},
                              {"boundNorm", res.boundNorm}};
    saturated = saturated && std::abs(value - ineq.bound) <= cfg.tol;
    identities = identities && res.max_abs_equalities() <= cfg.tol &&
                 res.minVmarg >= -cfg.tol && res.corrProduct <= cfg.tol;
    sides[to_string(ineq.side)] = side;
  }
  j["sides"] = sides;
  j["saturated"] = saturated;
  j["identitiesHold"] = identities;
  const UniquenessReport u = uniqueness_check(pair);
  j["uniqueness"] = to_json(u);
  j["trivialOnly"] = u.trivialOnly;
  const bool pass = saturated && identities && u.trivialOnly;
  return {dump(j) + "\n", pass ? kPass : kFail};
}

CMatrix b2_from_json(const Json& v, int dimB) {
  if (v.is_number()) {
    if (dimB != 2) throw DomainError("an angle for 'B2' needs a qubit on Bob's side");
    const double t = v.get<double>();
    return std::sin(t) * pauli(1) + std::cos(t) * pauli(3);
  }
  if (v.is_string()) {
    const std::string s = v.get<std::string>();
    int k = 0;
    if (s == "sigma1") k = 1;
    else if (s == "sigma2") k = 2;
    else if (s == "sigma3") k = 3;
    else throw ParseError("field 'B2': unknown name '" + s + "'");
    if (dimB != 2) throw DomainError("a Pauli name for 'B2' needs a qubit on Bob's side");
    return pauli(k);
  }
  return matrix_from_json(v, "B2");
}

Result cmd_selftest(const RunConfig& cfg, std::istream& in) {
  require_json_format(cfg);
  const Json j = read_input(cfg, in);
  if (!j.contains("realization")) throw ParseError("missing field 'realization'");
  const double tol = cfg.tolExplicit ? cfg.tol : kProtocolTol;
  const std::string protocol = j.value("protocol", std::string("zb"));
  const LoadedRealization r = load_realization(j.at("realization"), cfg.tol);

  Json out;
  out["protocol"] = protocol;
  bool pass = false;
  if (protocol == "isometry") {
    const CBehavior b = simulate_cbehavior(r.general);
    const GeometryParams g = reconstruct(b, cfg.tol);
    const DerivedOperators ops = derive_operators(r.general, g);
    const IsometryResult iso = swap_isometry(r.general, ops);
    out["geometry"] = geometry_json(g);
    out["isometry"] = to_json(iso);
    pass = 1.0 - iso.fidelity <= tol && max_residual(iso.residuals) <= tol;
  } else if (protocol == "zb" || protocol == "pair") {
    if (!j.contains("B2")) throw ParseError("missing field 'B2'");
    ExtendedRealization ext{r.general, b2_from_json(j.at("B2"), r.general.dimB)};
    ext.validate(1e-9);
    const ProtocolReport rep =
        protocol == "zb" ? protocol_zb(ext, tol) : protocol_lemma6_pair(ext, tol);
    out["report"] = to_json(rep);
    out["geometryDegrees"] = degrees(rep.geometry);
    pass = rep.selfTested;
  } else {
    throw ParseError("field 'protocol' must be one of zb, pair, isometry");
  }
  out["selfTested"] = pass;
  return {dump(out) + "\n", pass ? kPass : kFail};
}

Result cmd_counterexample(const RunConfig& cfg) {
  const CounterexampleReport rep = build_counterexample(cfg.epsilon);
  const bool pass = rep.lValid && rep.lLocal && !rep.lInCrypt;
  if (cfg.format == "csv") {
    return {counterexample_csv(rep, cfg.samples.value_or(201)), pass ? kPass : kFail};
  }
  Json j = to_json(rep);
  j["limitLambda"] = 1.0 - 1.0 / std::sqrt(2.0);
  return {dump(j) + "\n", pass ? kPass : kFail};
}

// Sweeps ----------------------------------------------------------------

constexpr std::uint64_t kDefaultSeed = 20240601;
constexpr int kSweepInequalities = 20;
constexpr double kViolationTol = 1e-7;

std::vector<QuantumBellInequality> random_inequalities(Rng& rng, int count) {
  std::vector<QuantumBellInequality> out;
  while (static_cast<int>(out.size()) < 2 * count) {
    const GeometryParams g = projection_angles(random_two_qubit(rng));
    try {
      const QuantumBellPair p = construct_pair(g);
      out.push_back(p.B);
      out.push_back(p.A);
    } catch (const Error&) {
      // plane sign condition or degenerate angles: draw again
    }
  }
  return out;
}

std::vector<Json> sweep_random(const Json& spec, const RunConfig& cfg) {
  const std::uint64_t seed =
      cfg.seed.value_or(spec.value("seed", kDefaultSeed));
  const int samples = cfg.samples.value_or(spec.value("samples", 1000));
  const int nIneq = spec.value("inequalities", kSweepInequalities);
  if (samples < 0 || nIneq < 0) throw DomainError("sweep: counts must be non-negative");

  Rng ineqRng(seed ^ 0x9e3779b97f4a7c15ULL);
  const auto ineqs = random_inequalities(ineqRng, nIneq);
  Rng rng(seed);

  std::vector<Json> rows;
  rows.reserve(static_cast<std::size_t>(samples));
  for (int n = 0; n < samples; ++n) {
    const TwoQubitRealization r = random_two_qubit(rng);
    const GeneralRealization gr = promote(r);
    const CBehavior c = simulate_cbehavior(gr);
    const DBehavior d = simulate_dbehavior(gr);

    int violations = 0;
    double maxExcess = -std::numeric_limits<double>::infinity();
    for (const auto& q : ineqs) {
      const double excess = evaluate(q, d) - q.bound;
      maxExcess = std::max(maxExcess, excess);
      if (excess > kViolationTol) ++violations;
    }
    double ownSaturation = nan();
    try {
      const QuantumBellPair own = construct_pair(projection_angles(r));
      ownSaturation = std::max(std::abs(evaluate(own.B, d) - own.B.bound),
                               std::abs(evaluate(own.A, d) - own.A.bound));
    } catch (const Error&) {
    }

    Json row;
    row["index"] = n;
    row["seed"] = seed;
    row["thetaA0"] = r.thetaA[0];
    row["thetaA1"] = r.thetaA[1];
    row["thetaB0"] = r.thetaB[0];
    row["thetaB1"] = r.thetaB[1];
    row["chi"] = r.chi;
    row["cA0"] = c.cA[0];
    row["cA1"] = c.cA[1];
    row["cB0"] = c.cB[0];
    row["cB1"] = c.cB[1];
    row["c00"] = c.c[0][0];
    row["c01"] = c.c[0][1];
    row["c10"] = c.c[1][0];
    row["c11"] = c.c[1][1];
    row["deltaB0"] = d.deltaB[0];
    row["deltaB1"] = d.deltaB[1];
    row["deltaA0"] = d.deltaA[0];
    row["deltaA1"] = d.deltaA[1];
    row["chsh"] = max_chsh(c.c);
    row["local"] = is_local(c, cfg.tol);
    row["inCrypt"] = crypt_membership(d, cfg.tol);
    row["uniquePreconditions"] = check_uniqueness_preconditions(c, cfg.tol).satisfied;
    row["ownSaturation"] = number_or_null(ownSaturation);
    row["maxExcess"] = number_or_null(maxExcess);
    row["violations"] = violations;
    rows.push_back(std::move(row));
  }
  return rows;
}

Pair pair_field(const Json& spec, const char* name, Pair fallback) {
  if (!spec.contains(name)) return fallback;
  const Json& v = spec.at(name);
  if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number()) {
    throw ParseError(std::string("sweep field '") + name + "' must hold 2 numbers");
  }
  return {v[0].get<double>(), v[1].get<double>()};
}

std::vector<Json> sweep_chi_grid(const Json& spec, const RunConfig& cfg) {
  TwoQubitRealization base;
  base.thetaA = pair_field(spec, "thetaA", {0.0, kPi / 2});
  base.thetaB = pair_field(spec, "thetaB", {kPi / 4, -kPi / 4});
  const double lo = spec.value("chiMin", 0.0);
  const double hi = spec.value("chiMax", kPi / 4);
  const int samples = cfg.samples.value_or(spec.value("samples", 33));
  check_chi_convention(lo, cfg.tol);
  check_chi_convention(hi, cfg.tol);
  if (samples < 2 || !(hi > lo)) throw DomainError("sweep: chi grid needs samples >= 2 and chiMax > chiMin");

  std::vector<Json> rows;
  for (int n = 0; n < samples; ++n) {
    TwoQubitRealization r = base;
    r.chi = lo + (hi - lo) * n / (samples - 1);
    const CBehavior c = simulate_cbehavior(promote(r));
    const auto pats = two_qubit_condition(c, cfg.tol);
    Json row;
    row["index"] = n;
    row["chi"] = r.chi;
    row["sin2chiSq"] = std::pow(std::sin(2.0 * r.chi), 2);
    row["recovered"] = pats.empty() ? Json(nullptr) : Json(pats.front().commonValue);
    row["chsh"] = max_chsh(c.c);
    row["local"] = is_local(c, cfg.tol);
    rows.push_back(std::move(row));
  }
  return rows;
}

Result cmd_sweep(const RunConfig& cfg, std::istream& in) {
  const Json spec = cfg.input.empty() ? Json::object() : read_input(cfg, in);
  const std::string kind = spec.value("kind", std::string("random"));
  std::vector<Json> rows;
  if (kind == "random") rows = sweep_random(spec, cfg);
  else if (kind == "chi-grid") rows = sweep_chi_grid(spec, cfg);
  else throw ParseError("sweep field 'kind' must be 'random' or 'chi-grid'");

  int code = kPass;
  if (kind == "random") {
    for (const Json& r : rows) {
      if (r["violations"].get<int>() != 0) code = kFail;
    }
  }
  if (cfg.format == "csv") return {to_csv(rows), code};
  return {dump(Json(rows)) + "\n", code};
}

Result dispatch(const RunConfig& cfg, std::istream& in) {
  if (cfg.command == "simulate") return cmd_simulate(cfg, in);
  if (cfg.command == "check") return cmd_check(cfg, in);
  if (cfg.command == "geometry") return cmd_geometry(cfg, in);
  if (cfg.command == "qbell") return cmd_qbell(cfg, in);
  if (cfg.command == "selftest") return cmd_selftest(cfg, in);
  if (cfg.command == "counterexample") return cmd_counterexample(cfg);
  return cmd_sweep(cfg, in);
}

}  // namespace

int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out,
        std::ostream& err) {
  RunConfig cfg;
  if (const char* env = std::getenv("NONLOC_TOL")) {
    try {
      std::size_t used = 0;
      cfg.tol = std::stod(env, &used);
      if (used != std::string(env).size() || !(cfg.tol > 0)) throw std::invalid_argument(env);
      cfg.tolExplicit = true;
    } catch (const std::exception&) {
      err << "nonloc: error: NONLOC_TOL must be a positive number\n";
      return kError;
    }
  }

  CLI::App app{"Correlations, guessing biases and self-testing in the two-input two-output Bell scenario",
               "nonloc"};
  app.require_subcommand(1);

  std::optional<double> tolFlag;
  std::uint64_t seed = 0;
  int samples = 0;
  const auto add_common = [&](CLI::App* sub) {
    sub->add_option("-i,--input", cfg.input, "JSON input: file path, '-' for stdin, or inline object");
    sub->add_option("-o,--output", cfg.output, "Write the result to this file");
    sub->add_option("--tol", tolFlag, "Numerical tolerance (overrides NONLOC_TOL)")
        ->check(CLI::PositiveNumber);
    sub->add_option("--format", cfg.format, "Output format")
        ->check(CLI::IsMember({"json", "csv"}));
  };

  struct Sub {
    const char* name;
    const char* help;
  };
  const Sub subs[] = {
      {"simulate", "Behaviors of a realization"},
      {"check", "Validity, locality, S quantities and the extremality test"},
      {"geometry", "Reconstruct the state-vector geometry of a behavior"},
      {"qbell", "Saturated quantum Bell inequalities and the uniqueness check"},
      {"selftest", "Self-testing protocols and the swap isometry"},
      {"counterexample", "Local C-space mixture outside the D-space crypt set"},
      {"sweep", "Seeded random or chi-grid datasets"},
  };
  std::vector<CLI::App*> apps;
  for (const Sub& s : subs) {
    CLI::App* sub = app.add_subcommand(s.name, s.help);
    add_common(sub);
    apps.push_back(sub);
  }
  apps[5]->add_option("--epsilon", cfg.epsilon, "Angle offset epsilon")->capture_default_str();
  CLI::Option* seedOpt = apps[6]->add_option("--seed", seed, "Generator seed");
  CLI::Option* sampOpt = apps[6]->add_option("--samples", samples, "Number of rows");
  CLI::Option* csvSampOpt =
      apps[5]->add_option("--samples", samples, "Points per CSV cross section");

  std::vector<std::string> argvStore{"nonloc"};
  argvStore.insert(argvStore.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  for (const auto& s : argvStore) argv.push_back(s.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e, out, err);
    return rc == 0 ? kPass : kError;
  }

  for (std::size_t k = 0; k < apps.size(); ++k) {
    if (apps[k]->parsed()) cfg.command = subs[k].name;
  }
  if (tolFlag) {
    cfg.tol = *tolFlag;
    cfg.tolExplicit = true;
  }
  if (seedOpt->count() > 0) cfg.seed = seed;
  if (sampOpt->count() > 0 || csvSampOpt->count() > 0) cfg.samples = samples;
  if (cfg.command != "sweep" && cfg.command != "counterexample" && cfg.input.empty()) {
    cfg.input = "-";
  }

  try {
    const Result res = dispatch(cfg, in);
    if (cfg.output.empty()) {
      out << res.text;
    } else {
      std::ofstream f(cfg.output, std::ios::binary);
      if (!f) throw DomainError("cannot open output file '" + cfg.output + "'");
      f << res.text;
      if (!f) throw DomainError("failed writing '" + cfg.output + "'");
    }
    return res.code;
  } catch (const PreconditionError& e) {
    err << "nonloc: precondition failed: " << e.what() << "\n";
    return kFail;
  } catch (const ParseError& e) {
    err << "nonloc: parse error: " << e.what() << "\n";
    return kError;
  } catch (const DomainError& e) {
    err << "nonloc: domain error: " << e.what() << "\n";
    return kError;
  } catch (const nlohmann::json::exception& e) {
    err << "nonloc: parse error: " << e.what() << "\n";
    return kError;
  } catch (const std::exception& e) {
    err << "nonloc: error: " << e.what() << "\n";
    return kError;
  }
}

}  // namespace nonloc::cli
