#pragma once

#include <fstream>
#include <limits>
#include <optional>
#include <regex>
#include <string>
#include <vector>

#include <json.hpp>

#include "splitfp/core/error.hpp"
#include "splitfp/core/linear_map.hpp"
#include "splitfp/core/point.hpp"
#include "splitfp/examples/catalog.hpp"
#include "splitfp/operators/catalog.hpp"
#include "splitfp/operators/expr.hpp"
#include "splitfp/operators/fixed_point_map.hpp"
#include "splitfp/operators/sequence.hpp"
#include "splitfp/projections/convex_body.hpp"
#include "splitfp/solvers/problem.hpp"
#include "splitfp/solvers/trace.hpp"

// Run configuration documents. A document either names a catalog example
// ("example") and optionally overrides its start, stopping rule and
// outputs, or describes a problem inline:
//
//   {"problem": {"family": "sffpep", "U": "bigU", "T": "smallS", "A": 1, "B": 4,
//                "lambda": 1, "alpha": "1/5", "beta": "1/8", "coupling": "dropped"},
//    "start": {"x": [10], "y": [15]}, "reference": {"x": [5], "y": [1.25]},
//    "stopping": {"max_iters": 250}, "outputs": {"trace": "trace.csv"},
//    "flags": {"wq_branch": "swapped", "gamma_bound_choice": "inverse_l_star", "cut_cap": 10000}}
//
// Operators are catalog names, {"catalog": name, "dim": d, "class": ...} or
// inline rules {"expr": "(x+2)/3"}, {"piecewise": {"at", "left", "right"}},
// {"affine": {"matrix", "offset"}} with "class", "domain", "fixed" and
// "name". Sequences are numbers, "p/q", a formula name such as "1/(n+2)",
// or {"table": [...], "tail": t}. Matrices are numbers, row arrays or
// {"diag": [...]}. Sets are "whole", {"interval": [lo, hi]} (null for an
// infinite end), {"box"}, {"halfspace"}, {"ball"} or {"intersection": [...]}.
namespace splitfp::cli {

using nlohmann::json;

struct Outputs {
  std::string trace = "trace.csv";
  std::string summary = "summary.json";
  std::string plot = "residual.svg";
};

struct RunConfig {
  std::optional<std::string> example_id;
  ProblemSpec spec;
  Point x0;
  std::optional<Point> y0;
  StoppingRule stopping;
  Outputs outputs;
};

namespace config_detail {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

[[noreturn]] inline void fail(const std::string& where, const std::string& what) {
  throw ValidationError("config: " + where + ": " + what);
}

inline const json& require(const json& j, const std::string& key, const std::string& where) {
  if (!j.is_object() || !j.contains(key)) fail(where, "missing key '" + key + "'");
  return j.at(key);
}

inline double number(const json& j, const std::string& where) {
  if (!j.is_number()) fail(where, "expected a number");
  return j.get<double>();
}

// Accepts "p/q" with integer p, q.
inline std::optional<std::pair<long, long>> ratio_text(const std::string& s) {
  static const std::regex re(R"(\s*(-?\d+)\s*/\s*(\d+)\s*)");
  std::smatch m;
  if (!std::regex_match(s, m, re)) return std::nullopt;
  return std::make_pair(std::stol(m[1]), std::stol(m[2]));
}

inline ExactScalar exact(const json& j, const std::string& where) {
  if (j.is_number()) return ExactScalar(j.get<double>());
  if (j.is_string()) {
    if (auto r = ratio_text(j.get<std::string>())) return ExactScalar::rational(r->first, r->second);
  }
  fail(where, "expected a number or \"p/q\"");
}

inline std::vector<ExactScalar> exact_list(const json& j, const std::string& where) {
  if (!j.is_array()) fail(where, "expected an array");
  std::vector<ExactScalar> out;
  for (const json& v : j) out.push_back(exact(v, where));
  return out;
}

inline SequenceSpec sequence(const json& j, const std::string& where) {
  if (j.is_number()) return SequenceSpec::constant(j.get<double>());
  if (j.is_string()) {
    const std::string s = j.get<std::string>();
    if (auto r = ratio_text(s)) return SequenceSpec::rational(r->first, r->second);
    return SequenceSpec::formula(s);
  }
  if (j.is_object() && j.contains("table")) {
    std::vector<double> values;
    for (const json& v : j.at("table")) values.push_back(number(v, where));
    return SequenceSpec::table(std::move(values), number(require(j, "tail", where), where));
  }
  fail(where, "expected a number, \"p/q\", a formula name or {\"table\", \"tail\"}");
}

inline std::vector<double> numbers(const json& j, const std::string& where) {
  std::vector<double> out;
  if (j.is_number()) {
    out.push_back(j.get<double>());
    return out;
  }
  if (!j.is_array()) fail(where, "expected a number or an array of numbers");
  for (const json& v : j) out.push_back(number(v, where));
  return out;
}

inline Point point(const json& j, const std::string& where) {
  const std::vector<double> v = numbers(j, where);
  if (v.empty()) fail(where, "empty point");
  return Point(std::span<const double>(v));
}

inline LinearMap matrix(const json& j, const std::string& where) {
  if (j.is_number()) return LinearMap::scalar(j.get<double>());
  if (j.is_object() && j.contains("diag")) return LinearMap::diagonal(numbers(j.at("diag"), where));
  if (j.is_array()) {
    std::vector<std::vector<double>> rows;
    for (const json& r : j) rows.push_back(numbers(r, where));
    return LinearMap::from_rows(rows);
  }
  fail(where, "expected a number, an array of rows or {\"diag\"}");
}

inline double bound(const json& j, double infinite, const std::string& where) {
  return j.is_null() ? infinite : number(j, where);
}

inline ConvexBody set(const json& j, const std::string& where) {
  if (j.is_null() || (j.is_string() && j.get<std::string>() == "whole")) return ConvexBody::whole_space();
  if (!j.is_object() || j.size() != 1) fail(where, "expected \"whole\" or a single-key set object");
  const auto& [kind, body] = *j.items().begin();
  if (kind == "interval") {
    if (!body.is_array() || body.size() != 2) fail(where, "interval needs [lo, hi]");
    return ConvexBody::interval(bound(body[0], -kInf, where), bound(body[1], kInf, where));
  }
  if (kind == "box") {
    std::vector<double> lo;
    std::vector<double> hi;
    for (const json& v : require(body, "lower", where)) lo.push_back(bound(v, -kInf, where));
    for (const json& v : require(body, "upper", where)) hi.push_back(bound(v, kInf, where));
    return ConvexBody::box(std::move(lo), std::move(hi));
  }
  if (kind == "halfspace") {
    return ConvexBody::halfspace(point(require(body, "normal", where), where),
                                 number(require(body, "offset", where), where));
  }
  if (kind == "ball") {
    return ConvexBody::ball(point(require(body, "center", where), where),
                            number(require(body, "radius", where), where));
  }
  if (kind == "intersection") {
    std::vector<ConvexBody> members;
    for (const json& m : body) members.push_back(set(m, where));
    return ConvexBody::intersection(std::move(members));
  }
  fail(where, "unknown set kind '" + kind + "'");
}

inline MapClass map_class(const json& j, const std::string& where) {
  if (j.is_string()) return MapClass::with_defaults(MapClass::parse_tag(j.get<std::string>()));
  MapClass c = MapClass::with_defaults(MapClass::parse_tag(require(j, "tag", where).get<std::string>()));
  if (j.contains("k")) c.k = number(j.at("k"), where);
  if (j.contains("lipschitz")) c.lipschitz = number(j.at("lipschitz"), where);
  if (j.contains("eta")) c.eta = number(j.at("eta"), where);
  c.validate();
  return c;
}

inline FixedPointMap catalog_operator(const std::string& id, std::optional<int> dim) {
  if (dim) {
    if (id == "identity") return catalog::identity(*dim);
    if (id == "scaledNeg") return catalog::scaled_neg(*dim);
    if (id == "ballMap") return catalog::ball_map(*dim);
  }
  return catalog::find_operator(id);
}

inline FixedPointMap operator_(const json& j, const std::string& where) {
  if (j.is_string()) return catalog_operator(j.get<std::string>(), std::nullopt);
  if (!j.is_object()) fail(where, "expected an operator name or object");
  if (j.contains("catalog")) {
    std::optional<int> dim;
    if (j.contains("dim")) dim = j.at("dim").get<int>();
    FixedPointMap m = catalog_operator(j.at("catalog").get<std::string>(), dim);
    if (j.contains("class")) m = m.with_class(map_class(j.at("class"), where));
    return m;
  }
  RulePtr rule;
  if (j.contains("expr")) {
    rule = Rule::expr(j.at("expr").get<std::string>());
  } else if (j.contains("piecewise")) {
    const json& p = j.at("piecewise");
    rule = Rule::piecewise(require(p, "at", where).get<std::string>(), require(p, "left", where).get<std::string>(),
                           require(p, "right", where).get<std::string>());
  } else if (j.contains("affine")) {
    const json& a = j.at("affine");
    const LinearMap m = matrix(require(a, "matrix", where), where);
    const std::vector<double> c =
        a.contains("offset") ? numbers(a.at("offset"), where) : std::vector<double>(m.codomain_dim(), 0.0);
    rule = Rule::affine(m.matrix(), Eigen::Map<const Eigen::VectorXd>(c.data(), static_cast<Eigen::Index>(c.size())));
  } else {
    fail(where, "operator needs \"catalog\", \"expr\", \"piecewise\" or \"affine\"");
  }
  const std::string name = j.value("name", where);
  const ConvexBody domain = j.contains("domain") ? set(j.at("domain"), where) : ConvexBody::whole_space();
  const MapClass cls = j.contains("class") ? map_class(j.at("class"), where) : MapClass::quasi_nonexpansive();
  std::vector<Point> fixed;
  if (j.contains("fixed")) {
    for (const json& p : j.at("fixed")) fixed.push_back(point(p, where));
  }
  return FixedPointMap::from_rule(name, rule, domain, cls, std::move(fixed));
}

inline std::vector<FixedPointMap> operator_list(const json& j, const std::string& where) {
  std::vector<FixedPointMap> out;
  if (j.is_array()) {
    for (const json& m : j) out.push_back(operator_(m, where));
  } else {
    out.push_back(operator_(j, where));
  }
  return out;
}

// Weights default to uniform, relaxations to 1.
inline std::vector<ExactScalar> weights_or(const json& p, const std::string& key, std::size_t n, bool uniform) {
  if (p.contains(key)) return exact_list(p.at(key), key);
  return std::vector<ExactScalar>(n, uniform ? ExactScalar::rational(1, static_cast<long>(n)) : ExactScalar(1.0));
}

inline Coupling coupling(const json& p) {
  const std::string c = p.value("coupling", "full");
  if (c == "full") return Coupling::Full;
  if (c == "dropped") return Coupling::Dropped;
  fail("coupling", "expected \"full\" or \"dropped\"");
}

inline GammaBound gamma_bound(const std::string& s) {
  if (s == "inverse_l_star") return GammaBound::InverseLStar;
  if (s == "inverse_max_l_star_l") return GammaBound::InverseMaxLStarL;
  fail("gamma_bound_choice", "expected \"inverse_l_star\" or \"inverse_max_l_star_l\"");
}

inline ConvexBody set_or_whole(const json& p, const std::string& key) {
  return p.contains(key) ? set(p.at(key), key) : ConvexBody::whole_space();
}

inline Problem problem(const json& p, const json& flags) {
  auto op = [&](const std::string& k) { return operator_(require(p, k, "problem"), k); };
  auto mat = [&](const std::string& k) { return matrix(require(p, k, "problem"), k); };
  auto seq = [&](const std::string& k) { return sequence(require(p, k, "problem"), k); };
  auto num = [&](const std::string& k) { return number(require(p, k, "problem"), k); };
  const Family family = parse_family(require(p, "family", "problem").get<std::string>());
  switch (family) {
    case Family::Scfpp: {
      ScfppProblem s{op("T"), op("G"), mat("A"), num("gamma"), seq("alpha")};
      s.use_powers = p.value("use_powers", true);
      if (flags.contains("gamma_bound_choice")) s.gamma_bound = gamma_bound(flags.at("gamma_bound_choice"));
      return s;
    }
    case Family::ScfppAdaptive: return AdaptiveProblem{op("U"), op("T"), mat("A"), num("k"), seq("alpha")};
    case Family::SynchronalVip: {
      SynchronalProblem s{op("T"), op("f"), op("G"), p.value("eta", 1.0), p.value("lipschitz", 1.0), num("mu"),
                          num("gamma"), seq("alpha"), seq("beta")};
      s.use_powers = p.value("use_powers", true);
      return s;
    }
    case Family::Sffpep:
      return SffpepProblem{op("U"),           op("T"),           mat("A"),   mat("B"),  set_or_whole(p, "C"),
                           set_or_whole(p, "Q"), seq("lambda"), seq("alpha"), seq("beta"), coupling(p)};
    case Family::Scfpep: {
      std::vector<FixedPointMap> us = operator_list(require(p, "U", "problem"), "U");
      std::vector<FixedPointMap> ts = operator_list(require(p, "T", "problem"), "T");
      const std::size_t nu = us.size();
      const std::size_t nt = ts.size();
      ScfpepProblem s{std::move(us),
                      weights_or(p, "u_weights", nu, true),
                      weights_or(p, "u_relax", nu, false),
                      std::move(ts),
                      weights_or(p, "t_weights", nt, true),
                      weights_or(p, "t_relax", nt, false),
                      mat("A"),
                      mat("B"),
                      seq("lambda"),
                      seq("alpha"),
                      seq("beta")};
      s.coupling = coupling(p);
      if (flags.contains("wq_branch")) s.branch = parse_wq_branch(flags.at("wq_branch"));
      return s;
    }
    case Family::ExtraGradient: {
      ExtragradientProblem s{op("T"),   op("G"),        mat("A"),   set_or_whole(p, "C"), set_or_whole(p, "Q"),
                             seq("gamma"), seq("alpha"), seq("beta")};
      s.extra_step = p.value("extra_step", true);
      if (flags.contains("cut_cap")) s.cut_cap = flags.at("cut_cap").get<int>();
      return s;
    }
  }
  fail("problem", "unknown family");
}

inline StoppingRule stopping(const json& j, StoppingRule r) {
  if (j.contains("max_iters")) r.max_iters = j.at("max_iters").get<long>();
  if (j.contains("residual_tol")) r.residual_tol = number(j.at("residual_tol"), "residual_tol");
  if (j.contains("stagnation_tol")) r.stagnation_tol = number(j.at("stagnation_tol"), "stagnation_tol");
  if (j.contains("target_tol")) r.target_tol = number(j.at("target_tol"), "target_tol");
  return r;
}

// Applies the branch and cut cap flags to a catalog example's problem.
inline void apply_flags(Problem& p, const json& flags) {
  if (auto* s = std::get_if<ScfpepProblem>(&p); s && flags.contains("wq_branch")) {
    s->branch = parse_wq_branch(flags.at("wq_branch"));
  }
  if (auto* e = std::get_if<ExtragradientProblem>(&p); e && flags.contains("cut_cap")) {
    e->cut_cap = flags.at("cut_cap").get<int>();
  }
  if (auto* s = std::get_if<ScfppProblem>(&p); s && flags.contains("gamma_bound_choice")) {
    s->gamma_bound = gamma_bound(flags.at("gamma_bound_choice"));
  }
}

}  // namespace config_detail

inline RunConfig run_config_from_json_unchecked(const json& doc) {
  using namespace config_detail;
  if (!doc.is_object()) fail("document", "expected an object");
  const json flags = doc.value("flags", json::object());
  std::optional<RunConfig> cfg;
  if (doc.contains("example")) {
    if (doc.contains("problem")) fail("document", "give either \"example\" or \"problem\", not both");
    const examples::NamedExample e = examples::find_example(doc.at("example").get<std::string>());
    cfg = RunConfig{e.id, e.spec, e.starts.front().x0, e.starts.front().y0, e.rule, {}};
    apply_flags(cfg->spec.problem, flags);
  } else {
    const json& start = require(doc, "start", "document");
    std::optional<Point> y0;
    if (start.contains("y")) y0 = point(start.at("y"), "start.y");
    cfg = RunConfig{std::nullopt,
                    ProblemSpec{problem(require(doc, "problem", "document"), flags), std::nullopt, std::nullopt},
                    point(require(start, "x", "start"), "start.x"),
                    y0,
                    {},
                    {}};
  }
  if (doc.contains("start") && cfg->example_id) {
    const json& start = doc.at("start");
    if (start.contains("x")) cfg->x0 = point(start.at("x"), "start.x");
    if (start.contains("y")) cfg->y0 = point(start.at("y"), "start.y");
  }
  if (doc.contains("reference")) {
    const json& r = doc.at("reference");
    if (r.contains("x")) cfg->spec.reference_x = point(r.at("x"), "reference.x");
    if (r.contains("y")) cfg->spec.reference_y = point(r.at("y"), "reference.y");
  }
  if (doc.contains("stopping")) cfg->stopping = stopping(doc.at("stopping"), cfg->stopping);
  if (doc.contains("outputs")) {
    const json& o = doc.at("outputs");
    cfg->outputs.trace = o.value("trace", cfg->outputs.trace);
    cfg->outputs.summary = o.value("summary", cfg->outputs.summary);
    cfg->outputs.plot = o.value("plot", cfg->outputs.plot);
  }
  cfg->stopping.validate();
  cfg->spec.validate();
  return *cfg;
}

/// Builds and validates a run configuration; malformed documents raise
/// ValidationError.
inline RunConfig run_config_from_json(const json& doc) {
  try {
    return run_config_from_json_unchecked(doc);
  } catch (const json::exception& e) {
    throw ValidationError(std::string("config: ") + e.what());
  }
}

inline RunConfig load_run_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("config: cannot read " + path);
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::exception& e) {
    throw ValidationError("config: " + path + ": " + e.what());
  }
  return run_config_from_json(doc);
}

}  // namespace splitfp::cli
