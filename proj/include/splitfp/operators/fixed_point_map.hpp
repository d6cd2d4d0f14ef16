#pragma once

#include <cmath>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "splitfp/core/error.hpp"
#include "splitfp/core/point.hpp"
#include "splitfp/operators/expr.hpp"
#include "splitfp/operators/map_class.hpp"
#include "splitfp/projections/convex_body.hpp"

namespace splitfp {

inline constexpr double kFixedPointTol = 1e-9;

/// Nonlinear map T with its domain, declared regularity class and known
/// fixed points. Evaluation does not check domain membership; power_apply
/// does. An optional symbolic rule lets the high-precision oracle
/// re-execute the map.
class FixedPointMap {
 public:
  using Eval = std::function<Point(const Point&)>;

  FixedPointMap(std::string name, int dim, Eval eval, ConvexBody domain, MapClass declared,
                std::vector<Point> fixed_points = {}, RulePtr rule = nullptr)
      : name_(std::move(name)),
        dim_(dim),
        eval_(std::move(eval)),
        domain_(std::move(domain)),
        declared_(std::move(declared)),
        fixed_(std::move(fixed_points)),
        rule_(std::move(rule)) {
    if (dim_ < 1) throw DimensionError(name_ + ": dimension must be at least 1");
    if (!eval_) throw ValidationError(name_ + ": empty evaluation rule");
    if (domain_.dim() != 0 && domain_.dim() != dim_) throw DimensionError(name_ + ": domain dimension mismatch");
    if (rule_ && rule_->dim() != dim_) throw DimensionError(name_ + ": rule dimension mismatch");
    for (const Point& p : fixed_) {
      if (p.dim() != dim_) throw DimensionError(name_ + ": fixed point dimension mismatch");
      const double r = distance((*this)(p), p);
      if (r > kFixedPointTol) {
        throw ValidationError(name_ + ": declared fixed point is moved by " + std::to_string(r));
      }
    }
  }

  /// Map whose evaluation is the rule itself.
  static FixedPointMap from_rule(std::string name, RulePtr rule, ConvexBody domain, MapClass declared,
                                 std::vector<Point> fixed_points = {}) {
    if (!rule) throw ValidationError(name + ": null rule");
    const int dim = rule->dim();
    Eval eval = [rule](const Point& x) {
      const std::vector<double> y = rule->eval<double>(x.to_vector());
      return Point(std::span<const double>(y));
    };
    return FixedPointMap(std::move(name), dim, std::move(eval), std::move(domain), std::move(declared),
                         std::move(fixed_points), rule);
  }

  Point operator()(const Point& x) const {
    if (x.dim() != dim_) {
      throw DimensionError(name_ + ": expected dim " + std::to_string(dim_) + ", got " + std::to_string(x.dim()));
    }
    Point y = eval_(x);
    if (y.dim() != dim_) throw DimensionError(name_ + ": evaluation changed dimension");
    return y;
  }

  const std::string& name() const { return name_; }
  int dim() const { return dim_; }
  const ConvexBody& domain() const { return domain_; }
  const MapClass& declared_class() const { return declared_; }
  const std::vector<Point>& known_fixed_points() const { return fixed_; }
  const RulePtr& rule() const { return rule_; }

  // Extra points that verify_class always checks in addition to the
  // random samples (e.g. a published counterexample pair).
  const std::vector<Point>& probe_points() const { return probes_; }
  FixedPointMap with_probe_points(std::vector<Point> probes) const {
    FixedPointMap m = *this;
    for (const Point& p : probes) {
      if (p.dim() != dim_) throw DimensionError(name_ + ": probe dimension mismatch");
    }
    m.probes_ = std::move(probes);
    return m;
  }

  FixedPointMap renamed(std::string name) const {
    FixedPointMap m = *this;
    m.name_ = std::move(name);
    return m;
  }

  FixedPointMap with_class(MapClass declared) const {
    declared.validate();
    FixedPointMap m = *this;
    m.declared_ = std::move(declared);
    return m;
  }

 private:
  std::string name_;
  int dim_;
  Eval eval_;
  ConvexBody domain_;
  MapClass declared_;
  std::vector<Point> fixed_;
  RulePtr rule_;
  std::vector<Point> probes_;
};

/// T^n(x). Every iterate about to be mapped must lie in T's domain; the
/// error names the offending application (1-based). Stops early once an
/// iterate is exactly fixed, since further applications cannot move it.
inline Point power_apply(const FixedPointMap& t, int n, const Point& x) {
  if (n < 1) throw ValidationError("power_apply: n must be >= 1");
  Point y = x;
  for (int step = 1; step <= n; ++step) {
    if (!contains(t.domain(), y)) {
      throw DomainError(t.name() + ": iterate outside domain before application " + std::to_string(step), step);
    }
    Point next = t(y);
    if (next == y) return next;
    y = std::move(next);
  }
  return y;
}

namespace detail {

// Demicontractive constant implied by a declared class, with -1 standing
// for firmly quasi-nonexpansive. Empty when the class does not imply one.
inline std::optional<double> implied_demicontractive_k(const FixedPointMap& t) {
  const MapClass& c = t.declared_class();
  const bool has_fix = !t.known_fixed_points().empty();
  switch (c.tag) {
    case MapClass::Tag::FirmlyQuasiNonexpansive:
    case MapClass::Tag::Directed: return -1.0;
    case MapClass::Tag::QuasiNonexpansive: return 0.0;
    case MapClass::Tag::Demicontractive: return c.k;
    case MapClass::Tag::Nonexpansive:
    case MapClass::Tag::Contraction:
      if (has_fix) return 0.0;
      return std::nullopt;
    case MapClass::Tag::StrictlyPseudocontractive:
      if (has_fix) return c.k;
      return std::nullopt;
    default: return std::nullopt;
  }
}

inline MapClass class_from_demicontractive_k(double k) {
  if (k <= -1.0) return MapClass::firmly_quasi_nonexpansive();
  if (k <= 0.0) return MapClass::quasi_nonexpansive();
  return MapClass::demicontractive(k);
}

inline std::string format_weight(double w) {
  std::string s = std::to_string(w);
  while (s.size() > 1 && s.back() == '0') s.pop_back();
  if (!s.empty() && s.back() == '.') s.pop_back();
  return s;
}

}  // namespace detail

/// x -> (1 - a) x + a T(x), a in (0, 1]. Fixed points carry over. The
/// declared class follows from T's: nonexpansive stays nonexpansive, a
/// k-demicontractive map becomes (1 - (1 - k)/a)-demicontractive, which
/// is quasi-nonexpansive or firmly quasi-nonexpansive when that is <= 0
/// or <= -1. Lipschitz constants become 1 - a + aK.
inline FixedPointMap relax(const FixedPointMap& t, ExactScalar a) {
  const double alpha = a.value;
  if (!(alpha > 0.0 && alpha <= 1.0)) throw ValidationError("relax: alpha must lie in (0,1]");
  if (alpha == 1.0) return t;

  MapClass cls;
  const MapClass& c = t.declared_class();
  if (c.tag == MapClass::Tag::Nonexpansive) {
    cls = MapClass::nonexpansive();
  } else if (auto k = detail::implied_demicontractive_k(t)) {
    cls = detail::class_from_demicontractive_k(1.0 - (1.0 - *k) / alpha);
  } else if (c.tag == MapClass::Tag::Lipschitzian || c.tag == MapClass::Tag::UniformlyLipschitzian) {
    cls = MapClass::lipschitzian(1.0 - alpha + alpha * c.lipschitz);
  } else {
    throw ValidationError("relax: no class follows from " + c.name() + " for " + t.name());
  }

  FixedPointMap::Eval eval = [t, alpha](const Point& x) { return (1.0 - alpha) * x + alpha * t(x); };
  RulePtr rule = t.rule() ? Rule::relaxed(a, t.rule()) : nullptr;
  return FixedPointMap("relax(" + t.name() + ", " + detail::format_weight(alpha) + ")", t.dim(), std::move(eval),
                       t.domain(), cls, t.known_fixed_points(), rule);
}

inline constexpr double kWeightSumTol = 1e-12;

/// x -> sum_i w_i T_i(x) with positive weights summing to 1. The result
/// keeps the known fixed points common to every input. It is declared
/// nonexpansive when all inputs are; otherwise demicontractive with the
/// largest constant (quasi-nonexpansive at k <= 0, firmly at k <= -1),
/// which requires a known common fixed point.
inline FixedPointMap convex_combine(const std::vector<FixedPointMap>& maps, const std::vector<ExactScalar>& weights) {
  if (maps.empty()) throw ValidationError("convex_combine: empty list");
  if (maps.size() != weights.size()) throw ValidationError("convex_combine: weight count mismatch");
  double sum = 0.0;
  for (const ExactScalar& w : weights) {
    if (!(w.value > 0.0)) throw ValidationError("convex_combine: weights must be positive");
    sum += w.value;
  }
  if (std::abs(sum - 1.0) > kWeightSumTol) {
    throw ValidationError("convex_combine: weights sum to " + std::to_string(sum) + ", not 1");
  }
  const int dim = maps.front().dim();
  for (const FixedPointMap& m : maps) {
    if (m.dim() != dim) throw DimensionError("convex_combine: maps differ in dimension");
  }
  if (maps.size() == 1) return maps.front();

  std::vector<Point> common;
  for (const FixedPointMap& source : maps) {
    for (const Point& p : source.known_fixed_points()) {
      bool shared = true;
      for (const FixedPointMap& m : maps) shared = shared && distance(m(p), p) <= kFixedPointTol;
      for (const Point& q : common) shared = shared && !(q == p);
      if (shared) common.push_back(p);
    }
  }

  bool all_nonexpansive = true;
  double kmax = -1.0;
  bool all_demi = true;
  for (const FixedPointMap& m : maps) {
    all_nonexpansive = all_nonexpansive && m.declared_class().tag == MapClass::Tag::Nonexpansive;
    if (auto k = detail::implied_demicontractive_k(m)) {
      kmax = std::max(kmax, *k);
    } else {
      all_demi = false;
    }
  }
  MapClass cls;
  if (all_nonexpansive) {
    cls = MapClass::nonexpansive();
  } else if (all_demi) {
    if (common.empty()) throw ValidationError("convex_combine: no known common fixed point");
    cls = detail::class_from_demicontractive_k(kmax);
  } else {
    throw ValidationError("convex_combine: inputs have no common class");
  }

  std::vector<double> w;
  std::string name = "combine(";
  for (std::size_t i = 0; i < maps.size(); ++i) {
    w.push_back(weights[i].value);
    name += (i ? ", " : "") + detail::format_weight(weights[i].value) + "*" + maps[i].name();
  }
  name += ")";

  FixedPointMap::Eval eval = [maps, w](const Point& x) {
    Eigen::VectorXd acc = Eigen::VectorXd::Zero(x.dim());
    for (std::size_t i = 0; i < maps.size(); ++i) acc += w[i] * maps[i](x).vec();
    return Point(std::move(acc));
  };

  RulePtr rule;
  bool all_rules = true;
  std::vector<RulePtr> rules;
  for (const FixedPointMap& m : maps) {
    all_rules = all_rules && m.rule();
    rules.push_back(m.rule());
  }
  if (all_rules) rule = Rule::combination(weights, rules);

  // Domain: the intersection of the inputs' domains.
  std::vector<ConvexBody> domains;
  for (const FixedPointMap& m : maps) {
    if (!m.domain().is_whole_space()) domains.push_back(m.domain());
  }
  ConvexBody domain = domains.empty()        ? ConvexBody::whole_space()
                      : domains.size() == 1 ? domains.front()
                                            : ConvexBody::intersection(domains);

  return FixedPointMap(std::move(name), dim, std::move(eval), std::move(domain), cls, std::move(common), rule);
}

/// x -> b x + (1 - b) S^n(x) for a fixed n >= 1 and b in (0, 1). Declared
/// nonexpansive when S is uniformly L-Lipschitzian with L <= 1.
inline FixedPointMap power_average(const FixedPointMap& s, double b, int n) {
  if (!(b > 0.0 && b < 1.0)) throw ValidationError("power_average: beta must lie in (0,1)");
  if (n < 1) throw ValidationError("power_average: n must be >= 1");
  const MapClass& c = s.declared_class();
  if (c.tag != MapClass::Tag::UniformlyLipschitzian && c.tag != MapClass::Tag::Nonexpansive) {
    throw ValidationError("power_average: " + s.name() + " must be uniformly Lipschitzian or nonexpansive");
  }
  MapClass cls = c.tag == MapClass::Tag::Nonexpansive || c.lipschitz <= 1.0
                     ? MapClass::nonexpansive()
                     : MapClass::lipschitzian(b + (1.0 - b) * c.lipschitz);
  FixedPointMap::Eval eval = [s, b, n](const Point& x) { return b * x + (1.0 - b) * power_apply(s, n, x); };
  std::vector<Point> fixed;
  for (const Point& p : s.known_fixed_points()) fixed.push_back(p);
  return FixedPointMap("average(" + s.name() + ", " + detail::format_weight(b) + ", " + std::to_string(n) + ")",
                       s.dim(), std::move(eval), s.domain(), cls, std::move(fixed));
}

}  // namespace splitfp
