#pragma once

#include <algorithm>
#include <cmath>
#include <utility>
#include <vector>

#include "splitfp/core/error.hpp"
#include "splitfp/core/point.hpp"
#include "splitfp/operators/fixed_point_map.hpp"
#include "splitfp/projections/convex_body.hpp"

namespace splitfp {

inline constexpr double kRootTol = 1e-12;

struct FixedPointScan {
  std::vector<double> roots;                          // sorted
  std::vector<std::pair<double, double>> zero_regions; // runs of grid points with g = 0
};

/// Fixed points of a 1-D map on [lo, hi] clipped to its domain: g(x) =
/// T(x) - x is sampled on a uniform grid; isolated grid zeros and bisected
/// sign changes are roots, runs of two or more zero grid points are
/// reported as regions. A sign change across a jump of g bisects to the
/// jump and is discarded.
inline FixedPointScan find_fixed_points_1d(const FixedPointMap& t, double lo, double hi, int grid) {
  if (t.dim() != 1) throw DimensionError("find_fixed_points_1d: map must be 1-D");
  if (grid < 2) throw ValidationError("find_fixed_points_1d: grid must be >= 2");
  if (!(lo < hi)) throw ValidationError("find_fixed_points_1d: need lo < hi");
  std::vector<ConvexBody> parts;
  detail::flatten(t.domain(), parts);
  for (const ConvexBody& part : parts) {
    double a = 0.0;
    double b = 0.0;
    if (detail::as_interval(part, a, b)) {
      lo = std::max(lo, a);
      hi = std::min(hi, b);
    }
  }
  if (!(lo < hi)) return {};
  auto g = [&t](double x) { return t(Point::scalar(x))[0] - x; };
  auto is_zero = [](double v, double x) { return std::abs(v) <= kRootTol * (1.0 + std::abs(x)); };

  std::vector<double> xs(grid);
  std::vector<double> gs(grid);
  for (int i = 0; i < grid; ++i) {
    xs[i] = i == grid - 1 ? hi : lo + (hi - lo) * i / (grid - 1);
    gs[i] = g(xs[i]);
  }

  FixedPointScan out;
  int i = 0;
  while (i < grid) {
    if (is_zero(gs[i], xs[i])) {
      int j = i;
      while (j + 1 < grid && is_zero(gs[j + 1], xs[j + 1])) ++j;
      if (j > i) {
        out.zero_regions.emplace_back(xs[i], xs[j]);
      } else {
        out.roots.push_back(xs[i]);
      }
      i = j + 1;
      continue;
    }
    if (i + 1 < grid && !is_zero(gs[i + 1], xs[i + 1]) && (gs[i] < 0.0) != (gs[i + 1] < 0.0)) {
      double a = xs[i];
      double b = xs[i + 1];
      double ga = gs[i];
      while (b - a > kRootTol) {
        const double m = 0.5 * (a + b);
        if (m <= a || m >= b) break;
        const double gm = g(m);
        if (gm == 0.0) {
          a = b = m;
          break;
        }
        if ((gm < 0.0) == (ga < 0.0)) {
          a = m;
          ga = gm;
        } else {
          b = m;
        }
      }
      const double root = 0.5 * (a + b);
      if (std::abs(g(root)) <= 1e-9) out.roots.push_back(root);
    }
    ++i;
  }
  return out;
}

}  // namespace splitfp
