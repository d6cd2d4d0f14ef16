#pragma once

#include <cmath>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

#include "splitfp/core/error.hpp"
#include "splitfp/core/point.hpp"
#include "splitfp/operators/expr.hpp"
#include "splitfp/operators/fixed_point_map.hpp"
#include "splitfp/operators/map_class.hpp"
#include "splitfp/projections/convex_body.hpp"

// Named example operators. Each evaluation is written out directly; where
// a rule is attached it is an independent symbolic copy used by the
// high-precision oracle.
namespace splitfp::catalog {

namespace detail {

inline ConvexBody half_line() { return ConvexBody::interval(0.0, std::numeric_limits<double>::infinity()); }

inline FixedPointMap scalar_map(const std::string& name, double (*f)(double), ConvexBody domain, MapClass cls,
                                std::vector<double> fixed, RulePtr rule) {
  std::vector<Point> fp;
  for (double p : fixed) fp.push_back(Point::scalar(p));
  return FixedPointMap(
      name, 1, [f](const Point& x) { return Point::scalar(f(x[0])); }, std::move(domain), std::move(cls),
      std::move(fp), std::move(rule));
}

}  // namespace detail

// (y^2 + 2)/(1 + y) on [0, inf). Quasi-nonexpansive, not nonexpansive.
inline FixedPointMap he_du() {
  return detail::scalar_map(
      "heDu", [](double y) { return (y * y + 2.0) / (1.0 + y); }, detail::half_line(),
      MapClass::quasi_nonexpansive(), {2.0}, Rule::expr("(x^2+2)/(1+x)"));
}

// (x^2 + 5)/(1 + x) on [0, inf).
inline FixedPointMap big_u() {
  return detail::scalar_map(
      "bigU", [](double x) { return (x * x + 5.0) / (1.0 + x); }, detail::half_line(),
      MapClass::quasi_nonexpansive(), {5.0}, Rule::expr("(x^2+5)/(1+x)"));
}

// (x + 5)/5 on [0, inf).
inline FixedPointMap small_s() {
  return detail::scalar_map(
      "smallS", [](double x) { return (x + 5.0) / 5.0; }, detail::half_line(), MapClass::quasi_nonexpansive(),
      {1.25}, Rule::expr("(x+5)/5"));
}

// (x + 2)/3 on [0, inf).
inline FixedPointMap wq_t() {
  return detail::scalar_map(
      "wqT", [](double x) { return (x + 2.0) / 3.0; }, detail::half_line(), MapClass::quasi_nonexpansive(), {1.0},
      Rule::expr("(x+2)/3"));
}

// 0 on [0, 1], 2x/(x + 1) on (1, inf). The only fixed point of this rule
// is 0; iterates started above 1 approach 1 without reaching it.
inline FixedPointMap wq_u() {
  return detail::scalar_map(
      "wqU", [](double x) { return x <= 1.0 ? 0.0 : 2.0 * x / (x + 1.0); }, detail::half_line(),
      MapClass::quasi_nonexpansive(), {0.0}, Rule::piecewise("1", "0", "2*x/(x+1)"));
}

// x -> -5/2 x on R^d. Demicontractive with the least constant 3/7.
inline FixedPointMap scaled_neg(int dim = 3) {
  if (dim < 1) throw DimensionError("scaledNeg: dimension must be >= 1");
  return FixedPointMap(
      "scaledNeg", dim, [](const Point& x) { return -2.5 * x; }, ConvexBody::whole_space(),
      MapClass::demicontractive(3.0 / 7.0), {Point::zeros(dim)},
      Rule::affine(-2.5 * Eigen::MatrixXd::Identity(dim, dim), Eigen::VectorXd::Zero(dim)));
}

// Truncation of (x1, x2, ...) -> (0, x1^2, a2 x2, a3 x3, ...) to R^d on
// the closed unit ball, with a_i = (1/2)^(1/(d-2)) so that the product of
// a_2 .. a_{d-1} is 1/2.
inline FixedPointMap ball_map(int dim = 5) {
  if (dim < 3) throw DimensionError("ballMap: dimension must be >= 3");
  const double a = std::pow(0.5, 1.0 / (dim - 2));
  return FixedPointMap(
      "ballMap", dim,
      [a](const Point& x) {
        Eigen::VectorXd y = Eigen::VectorXd::Zero(x.dim());
        y[1] = x[0] * x[0];
        for (int i = 2; i < x.dim(); ++i) y[i] = a * x[i - 1];
        return Point(std::move(y));
      },
      ConvexBody::ball(Point::zeros(dim), 1.0), MapClass::uniformly_lipschitzian(2.0), {Point::zeros(dim)});
}

// (2/3) x sin(1/x), 0 at 0, on [-1, 1]. Demicontractive but not strictly
// pseudocontractive; the counterexample pair 2/pi, 2/(3 pi) is attached as
// probe points.
inline FixedPointMap browder_petryshyn() {
  using std::numbers::pi;
  return detail::scalar_map(
             "browderPetryshyn", [](double x) { return x == 0.0 ? 0.0 : (2.0 / 3.0) * x * std::sin(1.0 / x); },
             ConvexBody::interval(-1.0, 1.0), MapClass::demicontractive(0.5), {0.0}, nullptr)
      .with_probe_points({Point::scalar(2.0 / pi), Point::scalar(2.0 / (3.0 * pi))});
}

inline FixedPointMap identity(int dim = 1) {
  return FixedPointMap(
      "identity", dim, [](const Point& x) { return x; }, ConvexBody::whole_space(), MapClass::nonexpansive(),
      {Point::zeros(dim)}, Rule::affine(Eigen::MatrixXd::Identity(dim, dim), Eigen::VectorXd::Zero(dim)));
}

// sin(x)/2 on [-1, 1].
inline FixedPointMap half_sine() {
  return detail::scalar_map(
      "halfSine", [](double x) { return std::sin(x) / 2.0; }, ConvexBody::interval(-1.0, 1.0),
      MapClass::contraction(0.5), {0.0}, nullptr);
}

// x/2 on R.
inline FixedPointMap half_scale() {
  return detail::scalar_map(
      "halfScale", [](double x) { return x / 2.0; }, ConvexBody::whole_space(), MapClass::contraction(0.5), {0.0},
      Rule::expr("x/2"));
}

inline std::vector<FixedPointMap> paper_examples() {
  return {he_du(),         big_u(),   small_s(),          wq_t(),     wq_u(),    scaled_neg(),
          ball_map(),      browder_petryshyn(), identity(), half_sine(), half_scale()};
}

inline std::vector<std::string> operator_ids() {
  std::vector<std::string> ids;
  for (const FixedPointMap& m : paper_examples()) ids.push_back(m.name());
  return ids;
}

inline FixedPointMap find_operator(const std::string& id) {
  for (FixedPointMap& m : paper_examples()) {
    if (m.name() == id) return m;
  }
  throw ValidationError("unknown operator '" + id + "'");
}

}  // namespace splitfp::catalog
