#pragma once

#include <algorithm>
#include <optional>
#include <vector>

#include "splitfp/core/error.hpp"
#include "splitfp/core/point.hpp"
#include "splitfp/solvers/trace.hpp"

namespace splitfp {

inline constexpr double kFejerSlack = 1e-10;

struct FejerViolation {
  long n;  // record whose successor moved away
  double before;
  double after;
};

struct FejerReport {
  bool monotone = true;
  std::optional<FejerViolation> first_violation;
  double max_uptick = 0.0;
};

/// d_n = ||x_n - target||, or ||x_n - x*||^2 + ||y_n - y*||^2 when a y
/// target is given. Monotone iff d_{n+1} <= d_n + slack for every n.
inline std::vector<double> fejer_distances(const IterationTrace& trace, const Point& target_x,
                                           const std::optional<Point>& target_y = std::nullopt) {
  std::vector<double> d;
  d.reserve(trace.records.size());
  for (const IterationRecord& rec : trace.records) {
    if (target_y) {
      if (!rec.y) throw DimensionError("fejer_check: y target given for a one-variable trace");
      d.push_back(distance_squared(rec.x, target_x) + distance_squared(*rec.y, *target_y));
    } else {
      d.push_back(distance(rec.x, target_x));
    }
  }
  return d;
}

inline FejerReport fejer_check(const IterationTrace& trace, const Point& target_x,
                               const std::optional<Point>& target_y = std::nullopt, double slack = kFejerSlack) {
  if (trace.records.size() < 2) throw ValidationError("fejer_check: need at least two records");
  if (!(slack >= 0.0)) throw ValidationError("fejer_check: slack must be >= 0");
  const std::vector<double> d = fejer_distances(trace, target_x, target_y);
  FejerReport rep;
  for (std::size_t i = 0; i + 1 < d.size(); ++i) {
    const double up = d[i + 1] - d[i];
    rep.max_uptick = std::max(rep.max_uptick, up);
    if (up > slack && !rep.first_violation) {
      rep.monotone = false;
      rep.first_violation = FejerViolation{trace.records[i].n, d[i], d[i + 1]};
    }
  }
  return rep;
}

}  // namespace splitfp
