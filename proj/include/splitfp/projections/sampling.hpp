#pragma once

#include <cmath>
#include <limits>
#include <numbers>

#include "splitfp/core/lcg.hpp"
#include "splitfp/core/point.hpp"
#include "splitfp/projections/convex_body.hpp"

namespace splitfp {

// Half-width of the sampling window along unbounded directions.
inline constexpr double kSamplingRadius = 10.0;

// Standard normal by Box-Muller on two LCG draws.
inline double sample_normal(Lcg64& rng) {
  double u1 = rng.uniform();
  while (u1 <= 0.0) u1 = rng.uniform();
  const double u2 = rng.uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

inline Point sample_cube(Lcg64& rng, int dim, double radius = kSamplingRadius) {
  Eigen::VectorXd v(dim);
  for (int i = 0; i < dim; ++i) v[i] = rng.uniform(-radius, radius);
  return Point(std::move(v));
}

/// Draws a point of s. Finite box sides are sampled uniformly; a side open
/// at one end reaches 2 * kSamplingRadius past the finite bound, and one
/// open at both ends is cut to [-radius, radius]. Balls are sampled
/// uniformly by volume. Halfspaces, intersections and the whole space use
/// the cube [-radius, radius]^dim, projected onto s.
inline Point sample_in(const ConvexBody& s, int dim, Lcg64& rng) {
  const auto& v = s.variant();
  if (const auto* b = std::get_if<ConvexBody::Box>(&v)) {
    if (static_cast<int>(b->lower.size()) != dim) throw DimensionError("sample_in: box dimension mismatch");
    Eigen::VectorXd p(dim);
    for (int i = 0; i < dim; ++i) {
      double lo = b->lower[i];
      double hi = b->upper[i];
      const bool lo_inf = std::isinf(lo);
      const bool hi_inf = std::isinf(hi);
      if (lo_inf && hi_inf) {
        lo = -kSamplingRadius;
        hi = kSamplingRadius;
      } else if (lo_inf || hi_inf) {
        // Offset from the finite bound, 2 * radius * u^3: dense near the
        // bound, where maps on half-lines tend to be least regular.
        const double u = rng.uniform();
        const double offset = 2.0 * kSamplingRadius * u * u * u;
        p[i] = lo_inf ? hi - offset : lo + offset;
        continue;
      }
      p[i] = rng.uniform(lo, hi);
    }
    return Point(std::move(p));
  }
  if (const auto* ball = std::get_if<ConvexBody::Ball>(&v)) {
    if (ball->center.dim() != dim) throw DimensionError("sample_in: ball dimension mismatch");
    Eigen::VectorXd dir(dim);
    double len = 0.0;
    while (len == 0.0) {
      for (int i = 0; i < dim; ++i) dir[i] = sample_normal(rng);
      len = dir.norm();
    }
    const double r = ball->radius * std::pow(rng.uniform(), 1.0 / dim);
    return Point(ball->center.vec() + (r / len) * dir);
  }
  const Point cube = sample_cube(rng, dim);
  if (s.is_whole_space()) return cube;
  return project(s, cube);
}

}  // namespace splitfp
