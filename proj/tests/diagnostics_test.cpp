#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>

#include <gtest/gtest.h>

#include "splitfp/diagnostics/fejer.hpp"
#include "splitfp/diagnostics/fixed_points.hpp"
#include "splitfp/diagnostics/oracle.hpp"
#include "splitfp/operators/catalog.hpp"
#include "splitfp/solvers/driver.hpp"

using namespace splitfp;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

StoppingRule iters(long n) {
  StoppingRule r;
  r.max_iters = n;
  return r;
}

ProblemSpec spec_of(Problem p) { return ProblemSpec{std::move(p), std::nullopt, std::nullopt}; }

ProblemSpec bnm() {
  return spec_of(SffpepProblem{catalog::big_u(), catalog::small_s(), LinearMap::scalar(1.0), LinearMap::scalar(4.0),
                               ConvexBody::whole_space(), ConvexBody::whole_space(), SequenceSpec::constant(1.0),
                               SequenceSpec::rational(1, 5), SequenceSpec::rational(1, 8), Coupling::Dropped});
}

ProblemSpec wq(WqBranch branch) {
  return spec_of(ScfpepProblem{{catalog::wq_u()},
                               {ExactScalar(1.0)},
                               {ExactScalar::rational(1, 3)},
                               {catalog::wq_t()},
                               {ExactScalar(1.0)},
                               {ExactScalar::rational(1, 5)},
                               LinearMap::scalar(1.0),
                               LinearMap::scalar(1.0),
                               SequenceSpec::constant(1.0),
                               SequenceSpec::rational(1, 7),
                               SequenceSpec::rational(1, 9),
                               branch});
}

ProblemSpec extragradient_1d() {
  return spec_of(ExtragradientProblem{catalog::wq_t(), catalog::identity(1), LinearMap::scalar(1.0),
                                      ConvexBody::interval(0.0, kInf), ConvexBody::whole_space(),
                                      SequenceSpec::constant(0.5), SequenceSpec::constant(0.5),
                                      SequenceSpec::constant(0.5)});
}

ProblemSpec scfpp_small_s() {
  return spec_of(ScfppProblem{catalog::small_s(), catalog::small_s(), LinearMap::scalar(1.0), 0.5,
                              SequenceSpec::constant(0.5)});
}

IterationTrace line_trace(const std::vector<double>& xs) {
  IterationTrace t;
  t.layout.x_dim = 1;
  for (std::size_t i = 0; i < xs.size(); ++i) t.records.push_back(IterationRecord::bare(static_cast<long>(i), Point::scalar(xs[i])));
  return t;
}

PrecisionOracleConfig oracle(int digits, long max_n) {
  PrecisionOracleConfig c;
  c.digits = digits;
  c.max_n = max_n;
  return c;
}

}  // namespace

TEST(Fejer, ConstantTraceIsMonotone) {
  const FejerReport r = fejer_check(line_trace({3.0, 3.0, 3.0}), Point::scalar(1.0));
  EXPECT_TRUE(r.monotone);
  EXPECT_FALSE(r.first_violation);
  EXPECT_EQ(r.max_uptick, 0.0);
}

TEST(Fejer, ReportsFirstUptick) {
  const FejerReport r = fejer_check(line_trace({5.0, 3.0, 4.0, 6.0}), Point::scalar(1.0));
  EXPECT_FALSE(r.monotone);
  ASSERT_TRUE(r.first_violation);
  EXPECT_EQ(r.first_violation->n, 1);
  EXPECT_DOUBLE_EQ(r.first_violation->before, 2.0);
  EXPECT_DOUBLE_EQ(r.first_violation->after, 3.0);
  EXPECT_DOUBLE_EQ(r.max_uptick, 2.0);
}

TEST(Fejer, SlackAbsorbsRoundoff) {
  EXPECT_TRUE(fejer_check(line_trace({2.0, 2.0 + 1e-12}), Point::scalar(0.0)).monotone);
  EXPECT_FALSE(fejer_check(line_trace({2.0, 2.0 + 1e-12}), Point::scalar(0.0), std::nullopt, 0.0).monotone);
}

TEST(Fejer, NeedsTwoRecords) {
  EXPECT_THROW(fejer_check(line_trace({1.0}), Point::scalar(0.0)), ValidationError);
}

TEST(Fejer, SplitEqualityTraceIsMonotoneTowardTheSolution) {
  const IterationTrace t = run(bnm(), Point::scalar(10.0), Point::scalar(15.0), iters(250));
  const FejerReport r = fejer_check(t, Point::scalar(5.0), Point::scalar(1.25));
  EXPECT_TRUE(r.monotone);
}

TEST(Fejer, ReversedTraceViolatesAtTheStart) {
  IterationTrace t = run(bnm(), Point::scalar(10.0), Point::scalar(15.0), iters(20));
  std::reverse(t.records.begin(), t.records.end());
  for (std::size_t i = 0; i < t.records.size(); ++i) t.records[i].n = static_cast<long>(i);
  const FejerReport r = fejer_check(t, Point::scalar(5.0), Point::scalar(1.25));
  EXPECT_FALSE(r.monotone);
  ASSERT_TRUE(r.first_violation);
  EXPECT_EQ(r.first_violation->n, 0);
}

TEST(Fejer, YTargetNeedsTwoVariableTrace) {
  EXPECT_THROW(fejer_check(line_trace({1.0, 0.5}), Point::scalar(0.0), Point::scalar(0.0)), DimensionError);
}

TEST(FixedPoints, CatalogRoots) {
  const FixedPointScan he = find_fixed_points_1d(catalog::he_du(), -10.0, 10.0, 2001);
  ASSERT_EQ(he.roots.size(), 1u);
  EXPECT_NEAR(he.roots[0], 2.0, 1e-10);
  const FixedPointScan u = find_fixed_points_1d(catalog::big_u(), -10.0, 20.0, 3001);
  ASSERT_EQ(u.roots.size(), 1u);
  EXPECT_NEAR(u.roots[0], 5.0, 1e-10);
}

TEST(FixedPoints, AgreesWithKnownFixedPoints) {
  for (const FixedPointMap& m : {catalog::he_du(), catalog::big_u(), catalog::small_s(), catalog::wq_t(),
                                 catalog::wq_u()}) {
    const FixedPointScan s = find_fixed_points_1d(m, -7.3, 13.1, 1777);
    for (double r : s.roots) EXPECT_LE(std::abs(m(Point::scalar(r))[0] - r), 1e-9) << m.name();
    for (const Point& p : m.known_fixed_points()) {
      bool found = false;
      for (double r : s.roots) found = found || std::abs(r - p[0]) <= 1e-10;
      for (const auto& [a, b] : s.zero_regions) found = found || (a <= p[0] && p[0] <= b);
      EXPECT_TRUE(found) << m.name() << " misses " << p[0];
    }
  }
}

TEST(FixedPoints, IdentityIsOneRegion) {
  const FixedPointScan s = find_fixed_points_1d(catalog::identity(1), -1.0, 1.0, 11);
  EXPECT_TRUE(s.roots.empty());
  ASSERT_EQ(s.zero_regions.size(), 1u);
  EXPECT_EQ(s.zero_regions[0].first, -1.0);
  EXPECT_EQ(s.zero_regions[0].second, 1.0);
}

TEST(FixedPoints, Validation) {
  EXPECT_THROW(find_fixed_points_1d(catalog::identity(2), 0.0, 1.0, 10), DimensionError);
  EXPECT_THROW(find_fixed_points_1d(catalog::identity(1), 1.0, 0.0, 10), ValidationError);
  EXPECT_THROW(find_fixed_points_1d(catalog::identity(1), 0.0, 1.0, 1), ValidationError);
}

TEST(Oracle, ConfigValidation) {
  EXPECT_THROW(reexecute_high_precision(bnm(), Point::scalar(10.0), Point::scalar(15.0), oracle(24, 5)),
               ValidationError);
  EXPECT_THROW(reexecute_high_precision(bnm(), Point::scalar(10.0), Point::scalar(15.0), oracle(101, 5)),
               ValidationError);
  EXPECT_THROW(reexecute_high_precision(bnm(), Point::scalar(10.0), std::nullopt, oracle(30, 5)), ValidationError);
}

TEST(Oracle, DigitsRoundUpToASupportedPrecision) {
  EXPECT_EQ(reexecute_high_precision(bnm(), Point::scalar(10.0), Point::scalar(15.0), oracle(26, 2)).digits, 30);
  EXPECT_EQ(reexecute_high_precision(bnm(), Point::scalar(10.0), Point::scalar(15.0), oracle(60, 2)).digits, 100);
}

TEST(Oracle, MapWithoutRuleIsRejected) {
  const FixedPointMap opaque("opaque", 1, [](const Point& x) { return x; }, ConvexBody::whole_space(),
                             MapClass::nonexpansive());
  const ProblemSpec s = spec_of(ScfppProblem{opaque, opaque, LinearMap::scalar(1.0), 0.5, SequenceSpec::constant(0.5)});
  EXPECT_THROW(reexecute_high_precision(s, Point::scalar(1.0), std::nullopt, oracle(30, 3)), ValidationError);
}

TEST(Oracle, SplitEqualityFirstRow) {
  const PreciseTrace t = reexecute_high_precision(bnm(), Point::scalar(10.0), Point::scalar(15.0), oracle(30, 3));
  ASSERT_EQ(t.records.size(), 4u);
  EXPECT_NEAR(std::stod(t.records[1].x[0]), 9.898293685, 1e-9);
  EXPECT_NEAR(std::stod(t.records[1].y[0]), 12.745, 1e-12);
}

TEST(Oracle, TableOneRowsToThePrintedDigits) {
  const double xs[] = {9.898293685, 9.797736851, 9.698337655};
  const double ys[] = {12.74500000, 10.85982000, 9.283809520};
  const PreciseTrace t = reexecute_high_precision(bnm(), Point::scalar(10.0), Point::scalar(15.0), oracle(30, 3));
  for (int n = 1; n <= 3; ++n) {
    EXPECT_LE(std::abs(std::stod(t.records[n].x[0]) - xs[n - 1]), 1e-9) << n;
    EXPECT_LE(std::abs(std::stod(t.records[n].y[0]) - ys[n - 1]), 1e-9) << n;
  }
}

TEST(Oracle, IdentityMapsGiveAConstantTrace) {
  const ProblemSpec s = spec_of(ScfppProblem{catalog::identity(1), catalog::identity(1), LinearMap::scalar(1.0), 0.5,
                                             SequenceSpec::constant(0.5)});
  const PreciseTrace t = reexecute_high_precision(s, Point::scalar(3.0), std::nullopt, oracle(50, 10));
  for (const PreciseRecord& r : t.records) EXPECT_EQ(std::stod(r.x[0]), 3.0);
}

TEST(Oracle, PrecisionsAgree) {
  for (const ProblemSpec& s : {bnm(), wq(WqBranch::AsPrinted), wq(WqBranch::Swapped)}) {
    const PreciseTrace lo = reexecute_high_precision(s, Point::scalar(10.0), Point::scalar(15.0), oracle(25, 50));
    const PreciseTrace hi = reexecute_high_precision(s, Point::scalar(10.0), Point::scalar(15.0), oracle(40, 50));
    EXPECT_LT(max_relative_gap(lo, hi, 50), 1e-20);
  }
}

TEST(Oracle, DoubleSolverMatchesOracle) {
  struct Case {
    ProblemSpec spec;
    Point x0;
    std::optional<Point> y0;
  };
  const std::vector<Case> cases = {
      {bnm(), Point::scalar(10.0), Point::scalar(15.0)},
      {wq(WqBranch::AsPrinted), Point::scalar(10.0), Point::scalar(15.0)},
      {wq(WqBranch::Swapped), Point::scalar(-5.0), Point::scalar(-5.0)},
      {scfpp_small_s(), Point::scalar(4.0), std::nullopt},
      {extragradient_1d(), Point::scalar(10.0), std::nullopt},
  };
  for (const Case& c : cases) {
    const IterationTrace d = run(c.spec, c.x0, c.y0, iters(100));
    const PreciseTrace p = reexecute_high_precision(c.spec, c.x0, c.y0, oracle(30, 100));
    ASSERT_EQ(d.records.size(), p.records.size());
    EXPECT_LT(max_relative_gap(d, p, 100), 1e-9) << family_name(c.spec.family());
  }
}

TEST(Oracle, ToTraceKeepsIterates) {
  const PreciseTrace p = reexecute_high_precision(bnm(), Point::scalar(10.0), Point::scalar(15.0), oracle(30, 4));
  const IterationTrace t = p.to_trace();
  ASSERT_EQ(t.records.size(), 5u);
  EXPECT_EQ(t.layout.x_dim, 1);
  EXPECT_EQ(t.layout.y_dim, 1);
  EXPECT_DOUBLE_EQ(t.records[0].x[0], 10.0);
  ASSERT_TRUE(t.records[4].y);
}
