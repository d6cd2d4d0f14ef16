#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <string>
#include <variant>
#include <vector>

#include "splitfp/core/error.hpp"
#include "splitfp/core/point.hpp"

namespace splitfp {

/// Closed convex set with a computable metric projection.
class ConvexBody {
 public:
  struct WholeSpace {};
  // Per-coordinate bounds, +-infinity allowed.
  struct Box {
    std::vector<double> lower;
    std::vector<double> upper;
  };
  // { z : <normal, z> <= offset }, normal nonzero.
  struct Halfspace {
    Point normal;
    double offset;
  };
  struct Ball {
    Point center;
    double radius;
  };
  struct Intersection {
    std::shared_ptr<const std::vector<ConvexBody>> members;
  };
  using Variant = std::variant<WholeSpace, Box, Halfspace, Ball, Intersection>;

  ConvexBody() : v_(WholeSpace{}) {}

  static ConvexBody whole_space() { return ConvexBody(WholeSpace{}); }

  static ConvexBody box(std::vector<double> lower, std::vector<double> upper) {
    if (lower.empty() || lower.size() != upper.size()) throw DimensionError("Box: bound dimension mismatch");
    for (std::size_t i = 0; i < lower.size(); ++i) {
      if (std::isnan(lower[i]) || std::isnan(upper[i])) throw ValidationError("Box: NaN bound");
      if (lower[i] > upper[i]) throw ValidationError("Box: lower > upper in coordinate " + std::to_string(i));
    }
    return ConvexBody(Box{std::move(lower), std::move(upper)});
  }

  // 1-D interval [lo, hi]; either end may be infinite.
  static ConvexBody interval(double lo, double hi) { return box({lo}, {hi}); }

  // Nonnegative orthant of dimension d.
  static ConvexBody nonnegative(int dim) {
    return box(std::vector<double>(dim, 0.0), std::vector<double>(dim, std::numeric_limits<double>::infinity()));
  }

  static ConvexBody halfspace(Point normal, double offset) {
    if (!std::isfinite(offset)) throw ValidationError("Halfspace: non-finite offset");
    if (norm_squared(normal) == 0.0) {
      if (offset >= 0.0) return whole_space();
      throw ValidationError("Halfspace: zero normal with negative offset describes the empty set");
    }
    return ConvexBody(Halfspace{std::move(normal), offset});
  }

  static ConvexBody ball(Point center, double radius) {
    if (!(radius >= 0.0) || !std::isfinite(radius)) throw ValidationError("Ball: radius must be finite and >= 0");
    return ConvexBody(Ball{std::move(center), radius});
  }

  static ConvexBody intersection(std::vector<ConvexBody> members) {
    if (members.empty()) throw ValidationError("Intersection: member list is empty");
    return ConvexBody(Intersection{std::make_shared<const std::vector<ConvexBody>>(std::move(members))});
  }

  const Variant& variant() const { return v_; }

  bool is_whole_space() const { return std::holds_alternative<WholeSpace>(v_); }

  // Dimension implied by the body, or 0 when unconstrained (WholeSpace).
  int dim() const {
    return std::visit(
        [](const auto& b) -> int {
          using B = std::decay_t<decltype(b)>;
          if constexpr (std::is_same_v<B, WholeSpace>) {
            return 0;
          } else if constexpr (std::is_same_v<B, Box>) {
            return static_cast<int>(b.lower.size());
          } else if constexpr (std::is_same_v<B, Halfspace>) {
            return b.normal.dim();
          } else if constexpr (std::is_same_v<B, Ball>) {
            return b.center.dim();
          } else {
            for (const auto& m : *b.members) {
              if (int d = m.dim(); d > 0) return d;
            }
            return 0;
          }
        },
        v_);
  }

  std::string describe() const {
    return std::visit(
        [](const auto& b) -> std::string {
          using B = std::decay_t<decltype(b)>;
          if constexpr (std::is_same_v<B, WholeSpace>) return "whole-space";
          else if constexpr (std::is_same_v<B, Box>) return "box";
          else if constexpr (std::is_same_v<B, Halfspace>) return "halfspace";
          else if constexpr (std::is_same_v<B, Ball>) return "ball";
          else return "intersection(" + std::to_string(b.members->size()) + ")";
        },
        v_);
  }

 private:
  explicit ConvexBody(Variant v) : v_(std::move(v)) {}
  Variant v_;
};

namespace detail {

inline void check_body_dim(const ConvexBody& s, const Point& x) {
  const int d = s.dim();
  if (d != 0 && d != x.dim()) {
    throw DimensionError("project: body has dim " + std::to_string(d) + ", point has dim " + std::to_string(x.dim()));
  }
}

inline Point project_box(const ConvexBody::Box& b, const Point& x) {
  Eigen::VectorXd v = x.vec();
  for (Eigen::Index i = 0; i < v.size(); ++i) v[i] = std::clamp(v[i], b.lower[i], b.upper[i]);
  return Point(std::move(v));
}

inline Point project_halfspace(const ConvexBody::Halfspace& h, const Point& x) {
  const double excess = inner(h.normal, x) - h.offset;
  if (excess <= 0.0) return x;
  return x - (excess / norm_squared(h.normal)) * h.normal;
}

inline Point project_ball(const ConvexBody::Ball& b, const Point& x) {
  const double d = distance(x, b.center);
  if (d <= b.radius) return x;
  return b.center + (b.radius / d) * (x - b.center);
}

inline void flatten(const ConvexBody& s, std::vector<ConvexBody>& out) {
  if (const auto* in = std::get_if<ConvexBody::Intersection>(&s.variant())) {
    for (const auto& m : *in->members) flatten(m, out);
  } else if (!s.is_whole_space()) {
    out.push_back(s);
  }
}

// Interval [lo, hi] for a 1-D simple body, or false when not interval-like.
inline bool as_interval(const ConvexBody& s, double& lo, double& hi) {
  constexpr double inf = std::numeric_limits<double>::infinity();
  return std::visit(
      [&](const auto& b) -> bool {
        using B = std::decay_t<decltype(b)>;
        if constexpr (std::is_same_v<B, ConvexBody::Box>) {
          lo = b.lower[0];
          hi = b.upper[0];
          return true;
        } else if constexpr (std::is_same_v<B, ConvexBody::Halfspace>) {
          const double a = b.normal[0];
          if (a > 0) {
            lo = -inf;
            hi = b.offset / a;
          } else {
            lo = b.offset / a;
            hi = inf;
          }
          return true;
        } else if constexpr (std::is_same_v<B, ConvexBody::Ball>) {
          lo = b.center[0] - b.radius;
          hi = b.center[0] + b.radius;
          return true;
        } else {
          return false;
        }
      },
      s.variant());
}

}  // namespace detail

inline constexpr double kDykstraTol = 1e-12;
inline constexpr int kDykstraMaxSweeps = 10000;
inline constexpr double kInfeasibleGap = 1e-8;
inline constexpr int kInfeasibleSweeps = 1000;

inline Point project(const ConvexBody& s, const Point& x);

namespace detail {

// Dykstra's cyclic projection with correction terms; converges to the metric
// projection onto the intersection (plain alternating projection would only
// find some feasible point).
inline Point dykstra(const std::vector<ConvexBody>& sets, const Point& x0) {
  Point x = x0;
  std::vector<Point> increments(sets.size(), Point::zeros(x0.dim()));
  int gap_streak = 0;
  double gap = 0.0;
  for (int sweep = 0; sweep < kDykstraMaxSweeps; ++sweep) {
    const Point before = x;
    for (std::size_t i = 0; i < sets.size(); ++i) {
      const Point shifted = x + increments[i];
      const Point y = project(sets[i], shifted);
      increments[i] = shifted - y;
      x = y;
    }
    gap = 0.0;
    for (const auto& s : sets) gap = std::max(gap, distance(x, project(s, x)));
    const double change = distance(x, before);
    if (change <= kDykstraTol * (1.0 + norm(x)) && gap <= kInfeasibleGap) return x;
    gap_streak = gap > kInfeasibleGap ? gap_streak + 1 : 0;
    if (gap_streak >= kInfeasibleSweeps) {
      throw InfeasibleError("project: intersection appears empty (cycle gap " + std::to_string(gap) + ")", gap);
    }
  }
  throw ConvergenceError("project: Dykstra did not converge, residual gap " + std::to_string(gap), gap);
}

}  // namespace detail

/// Metric projection of x onto s. Closed form for every simple body; an
/// intersection of 1-D intervals collapses to a single interval first, any
/// other intersection goes through Dykstra.
inline Point project(const ConvexBody& s, const Point& x) {
  detail::check_body_dim(s, x);
  return std::visit(
      [&](const auto& b) -> Point {
        using B = std::decay_t<decltype(b)>;
        if constexpr (std::is_same_v<B, ConvexBody::WholeSpace>) {
          return x;
        } else if constexpr (std::is_same_v<B, ConvexBody::Box>) {
          return detail::project_box(b, x);
        } else if constexpr (std::is_same_v<B, ConvexBody::Halfspace>) {
          return detail::project_halfspace(b, x);
        } else if constexpr (std::is_same_v<B, ConvexBody::Ball>) {
          return detail::project_ball(b, x);
        } else {
          std::vector<ConvexBody> sets;
          detail::flatten(s, sets);
          if (sets.empty()) return x;
          if (sets.size() == 1) return project(sets.front(), x);
          if (x.dim() == 1) {
            double lo = -std::numeric_limits<double>::infinity();
            double hi = std::numeric_limits<double>::infinity();
            bool simple = true;
            for (const auto& m : sets) {
              double l = 0, h = 0;
              if (!detail::as_interval(m, l, h)) {
                simple = false;
                break;
              }
              lo = std::max(lo, l);
              hi = std::min(hi, h);
            }
            if (simple) {
              if (lo > hi) throw InfeasibleError("project: empty 1-D intersection", lo - hi);
              return Point::scalar(std::clamp(x[0], lo, hi));
            }
          }
          return detail::dykstra(sets, x);
        }
      },
      s.variant());
}

/// Membership with absolute tolerance on the projection distance.
inline bool contains(const ConvexBody& s, const Point& x, double tol = 1e-10) {
  return distance(project(s, x), x) <= tol;
}

/// { z : ||near - z|| <= ||far - z|| }, i.e. the halfspace
/// 2<far - near, z> <= ||far||^2 - ||near||^2. WholeSpace when near == far.
inline ConvexBody halfspace_from_distance_dominance(const Point& near, const Point& far) {
  Point::check_same_dim(near, far, "halfspace_from_distance_dominance");
  if (near == far) return ConvexBody::whole_space();
  // <far - near, z - mid> <= 0; offset taken about the midpoint to avoid
  // cancellation when near and far are close.
  const Point normal = far - near;
  return ConvexBody::halfspace(normal, inner(normal, 0.5 * (near + far)));
}

struct ProjectionInequalityReport {
  Point projected;
  // ||x - P(x)||^2 <= ||y - x||^2 - ||y - P(x)||^2
  double nearest_lhs = 0.0;
  double nearest_rhs = 0.0;
  bool nearest_holds = false;
  // ||P(x) - x|| <= ||P(x) - y||, checked only when <x - y, x - P(x)> <= 0.
  double hypothesis_value = 0.0;
  bool dominance_checked = false;
  double dominance_lhs = 0.0;
  double dominance_rhs = 0.0;
  bool dominance_holds = true;

  bool holds() const { return nearest_holds && dominance_holds; }
};

inline constexpr double kInequalitySlack = 1e-9;

/// Evaluates the two projection inequalities at (x, y) with y in s.
inline ProjectionInequalityReport check_projection_inequalities(const ConvexBody& s, const Point& x, const Point& y) {
  Point::check_same_dim(x, y, "check_projection_inequalities");
  if (!contains(s, y, 1e-10)) throw ValidationError("check_projection_inequalities: y is not in the set");
  const Point px = project(s, x);
  ProjectionInequalityReport r{px};
  r.nearest_lhs = distance_squared(x, px);
  r.nearest_rhs = distance_squared(y, x) - distance_squared(y, px);
  r.nearest_holds = r.nearest_lhs <= r.nearest_rhs + kInequalitySlack * std::max(1.0, std::abs(r.nearest_rhs));
  r.hypothesis_value = inner(x - y, x - px);
  if (r.hypothesis_value <= 0.0) {
    r.dominance_checked = true;
    r.dominance_lhs = distance(px, x);
    r.dominance_rhs = distance(px, y);
    r.dominance_holds = r.dominance_lhs <= r.dominance_rhs + kInequalitySlack;
  }
  return r;
}

}  // namespace splitfp
