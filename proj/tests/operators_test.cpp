#include <cmath>
#include <numbers>
#include <vector>

#include <gtest/gtest.h>

#include "splitfp/operators/catalog.hpp"
#include "splitfp/operators/expr.hpp"
#include "splitfp/operators/fixed_point_map.hpp"
#include "splitfp/operators/sequence.hpp"
#include "splitfp/operators/verify.hpp"

using namespace splitfp;

namespace {

FixedPointMap affine1(const std::string& name, double a, double b, MapClass cls, std::vector<Point> fix = {}) {
  return FixedPointMap(
      name, 1, [a, b](const Point& x) { return Point::scalar(a * x[0] + b); }, ConvexBody::whole_space(), cls,
      std::move(fix));
}

}  // namespace

TEST(Sequence, KindsEvaluate) {
  EXPECT_EQ(SequenceSpec::constant(0.3)(7), 0.3);
  const auto t = SequenceSpec::table({1.0, 2.0}, 9.0);
  EXPECT_EQ(t(0), 1.0);
  EXPECT_EQ(t(1), 2.0);
  EXPECT_EQ(t(2), 9.0);
  EXPECT_EQ(t(100), 9.0);
  EXPECT_EQ(SequenceSpec::formula("1/(n+1)")(3), 0.25);
  EXPECT_EQ(SequenceSpec::formula("1/(n+2)")(0), 0.5);
  EXPECT_EQ(SequenceSpec::formula("1+1/(n+1)^2")(1), 1.25);
  EXPECT_EQ(SequenceSpec::formula("1/(n+1)^2")(1), 0.25);
  EXPECT_THROW(SequenceSpec::formula("n^2"), ValidationError);
  EXPECT_THROW(SequenceSpec::constant(1.0)(-1), ValidationError);
}

TEST(Sequence, RequireRangeNamesIndex) {
  EXPECT_NO_THROW(require_range(SequenceSpec::formula("1/(n+2)"), "alpha", 0.0, 1.0));
  try {
    require_range(SequenceSpec::table({0.5, 1.0}, 0.5), "alpha", 0.0, 1.0);
    FAIL();
  } catch (const ValidationError& e) {
    EXPECT_NE(std::string(e.what()).find("alpha_1"), std::string::npos);
  }
}

TEST(Expr, ParsesAndEvaluates) {
  EXPECT_DOUBLE_EQ(Expr::parse("(x^2+5)/(1+x)").eval(5.0), 5.0);
  EXPECT_DOUBLE_EQ(Expr::parse("-x^2").eval(3.0), -9.0);
  EXPECT_DOUBLE_EQ(Expr::parse("2*x/(x+1)").eval(5.0), 10.0 / 6.0);
  EXPECT_DOUBLE_EQ(Expr::parse("x^-2").eval(2.0), 0.25);
  EXPECT_DOUBLE_EQ(Expr::parse("1.5e1 - x").eval(5.0), 10.0);
  EXPECT_THROW(Expr::parse("2x"), ValidationError);
  EXPECT_THROW(Expr::parse("sin(x)"), ValidationError);
  EXPECT_THROW(Expr::parse("(x+1"), ValidationError);
  EXPECT_THROW(Expr::parse("1/x").eval(0.0), NumericalBreakdown);
}

TEST(Rule, PiecewiseTakesLeftBranchAtBreakpoint) {
  const RulePtr r = Rule::piecewise("1", "0", "2*x/(x+1)");
  EXPECT_EQ(r->eval<double>({1.0})[0], 0.0);
  EXPECT_DOUBLE_EQ(r->eval<double>({3.0})[0], 1.5);
}

TEST(PowerApply, Examples) {
  const FixedPointMap t = catalog::wq_t();
  EXPECT_EQ(power_apply(t, 1, Point{10}), t(Point{10}));
  EXPECT_EQ(power_apply(catalog::identity(2), 7, Point{1, 2}), (Point{1, 2}));
  // Exact-fraction oracle for T^3(10) with T(x) = (x + 2)/3: 4, 2, 4/3.
  long num = 10, den = 1;
  for (int i = 0; i < 3; ++i) {
    num = num + 2 * den;
    den = den * 3;
  }
  ASSERT_EQ(num * 3, 4 * den);
  EXPECT_NEAR(power_apply(t, 3, Point{10})[0], static_cast<double>(num) / den, 1e-15);
}

TEST(PowerApply, ErrorsNameTheStep) {
  // T(x) = x - 1 on [0, inf) leaves the domain after two steps from 1.5.
  const FixedPointMap t(
      "shift", 1, [](const Point& x) { return Point::scalar(x[0] - 1.0); },
      ConvexBody::interval(0.0, INFINITY), MapClass::lipschitzian(1.0));
  EXPECT_NO_THROW(power_apply(t, 2, Point{1.5}));
  try {
    power_apply(t, 3, Point{1.5});
    FAIL();
  } catch (const DomainError& e) {
    EXPECT_EQ(e.step(), 3);
  }
  EXPECT_THROW(power_apply(t, 0, Point{1.5}), ValidationError);
}

TEST(PowerApply, CompositionLaw) {
  const FixedPointMap t = catalog::big_u();
  Lcg64 rng(3);
  for (int i = 0; i < 200; ++i) {
    const Point x = Point::scalar(rng.uniform(0.0, 20.0));
    const int m = rng.uniform_int(1, 6);
    const int n = rng.uniform_int(1, 6);
    ASSERT_EQ(power_apply(t, m + n, x), power_apply(t, m, power_apply(t, n, x)));
  }
}

TEST(Relax, Examples) {
  const FixedPointMap u = catalog::wq_u();
  EXPECT_EQ(relax(u, 1.0)(Point{5}), u(Point{5}));
  // (1 - 1/3) 5 + (1/3) (2*5/6) = 10/3 + 5/9 = 35/9.
  EXPECT_NEAR(relax(u, ExactScalar::rational(1, 3))(Point{5})[0], 35.0 / 9.0, 1e-15);
  const FixedPointMap s = catalog::small_s();
  EXPECT_NEAR(distance(relax(s, 0.4)(Point{1.25}), Point{1.25}), 0.0, 1e-12);
  EXPECT_THROW(relax(s, 0.0), ValidationError);
  EXPECT_THROW(relax(s, 1.5), ValidationError);
}

TEST(Relax, DeclaredClassFollowsInput) {
  EXPECT_EQ(relax(catalog::small_s(), 0.8).declared_class().tag, MapClass::Tag::QuasiNonexpansive);
  // Averaging a quasi-nonexpansive map at 1/2 makes it firmly so.
  EXPECT_EQ(relax(catalog::small_s(), 0.5).declared_class().tag, MapClass::Tag::FirmlyQuasiNonexpansive);
  const MapClass c = relax(catalog::scaled_neg(), 0.5).declared_class();
  EXPECT_EQ(c.tag, MapClass::Tag::QuasiNonexpansive);  // 1 - (4/7)/(1/2) < 0
  const MapClass d = relax(catalog::scaled_neg(), 0.9).declared_class();
  EXPECT_EQ(d.tag, MapClass::Tag::Demicontractive);
  EXPECT_NEAR(d.k, 1.0 - (4.0 / 7.0) / 0.9, 1e-15);
}

TEST(Relax, PreservesFixedPointsAndQuasiNonexpansiveness) {
  for (const FixedPointMap& t : {catalog::he_du(), catalog::big_u(), catalog::small_s(), catalog::wq_t()}) {
    for (double a : {0.1, 0.5, 0.9}) {
      const FixedPointMap r = relax(t, a);
      for (const Point& p : t.known_fixed_points()) ASSERT_LE(distance(r(p), p), 1e-12);
      ASSERT_TRUE(verify_class(r, MapClass::quasi_nonexpansive(), 1000, 1).passed()) << r.name();
    }
  }
}

TEST(ConvexCombine, Examples) {
  const FixedPointMap t = catalog::wq_t();
  EXPECT_EQ(convex_combine({t}, {1.0})(Point{4}), t(Point{4}));
  const FixedPointMap twice = convex_combine({t, t}, {0.5, 0.5});
  for (double x : {-3.0, 0.0, 2.5, 10.0}) EXPECT_NEAR(twice(Point{x})[0], t(Point{x})[0], 1e-15);
  const FixedPointMap c = convex_combine({catalog::identity(), t}, {0.5, 0.5});
  EXPECT_EQ(c(Point{1}), Point{1});
  EXPECT_EQ(c.known_fixed_points().size(), 1u);
}

TEST(ConvexCombine, Errors) {
  const FixedPointMap t = catalog::wq_t();
  EXPECT_THROW(convex_combine({}, {}), ValidationError);
  EXPECT_THROW(convex_combine({t, t}, {0.5, 0.6}), ValidationError);
  EXPECT_THROW(convex_combine({t, t}, {1.5, -0.5}), ValidationError);
  EXPECT_THROW(convex_combine({t, catalog::scaled_neg(2)}, {0.5, 0.5}), DimensionError);
  // No known common fixed point.
  EXPECT_THROW(convex_combine({t, catalog::small_s()}, {0.5, 0.5}), ValidationError);
}

TEST(ConvexCombine, QuasiNonexpansiveAroundCommonFixedPoint) {
  const FixedPointMap a = affine1("a", 0.5, 0.5, MapClass::quasi_nonexpansive(), {Point{1}});
  const FixedPointMap b = catalog::wq_t();
  const FixedPointMap c = convex_combine({a, b}, {0.3, 0.7});
  Lcg64 rng(5);
  for (int i = 0; i < 1000; ++i) {
    const Point x = Point::scalar(rng.uniform(-20.0, 20.0));
    ASSERT_LE(distance(c(x), Point{1}), distance(x, Point{1}) + 1e-12);
  }
}

TEST(ConvexCombine, FixedSetIsIntersectionOnGrid) {
  // T1 = identity on [0, 1] and (x + 1)/2 beyond; T2 = (x + 2)/3. Fix(T1) =
  // [0, 1], Fix(T2) = {1}; the combination should be fixed only at 1.
  const FixedPointMap t1(
      "clampish", 1, [](const Point& x) { return Point::scalar(x[0] <= 1.0 ? x[0] : (x[0] + 1.0) / 2.0); },
      ConvexBody::interval(0.0, INFINITY), MapClass::quasi_nonexpansive(), {Point{1}});
  const FixedPointMap t2 = catalog::wq_t();
  const FixedPointMap c = convex_combine({t1, t2}, {0.5, 0.5});
  const int grid = 10000;
  const double h = 4.0 / grid;
  for (int i = 0; i <= grid; ++i) {
    const Point x = Point::scalar(i * h);
    const bool in_c = distance(c(x), x) <= 1e-8;
    const bool in_both = distance(t1(x), x) <= 1e-8 && distance(t2(x), x) <= 1e-8;
    ASSERT_EQ(in_c, in_both) << "x = " << x;
  }
}

TEST(Catalog, DocumentedFixedPoints) {
  EXPECT_EQ(catalog::big_u()(Point{5}), Point{5});
  EXPECT_EQ(catalog::small_s()(Point{1.25}), Point{1.25});
  EXPECT_EQ(catalog::he_du()(Point{2}), Point{2});
  EXPECT_EQ(catalog::wq_t()(Point{1}), Point{1});
  EXPECT_EQ(catalog::wq_u()(Point{0}), Point{0});
  EXPECT_EQ(catalog::find_operator("bigU").name(), "bigU");
  EXPECT_THROW(catalog::find_operator("nope"), ValidationError);
}

TEST(Catalog, ScaledNegTightDemicontractiveConstant) {
  // 6.25 ||x||^2 <= ||x||^2 + 12.25 k ||x||^2 is tight at k = 5.25/12.25.
  EXPECT_DOUBLE_EQ(5.25 / 12.25, 3.0 / 7.0);
  const FixedPointMap t = catalog::scaled_neg(3);
  const Point x{1, -2, 0.5};
  EXPECT_NEAR(norm_squared(t(x)), 6.25 * norm_squared(x), 1e-12);
  EXPECT_NEAR(distance_squared(x, t(x)), 12.25 * norm_squared(x), 1e-12);
  EXPECT_FALSE(verify_class(t, MapClass::demicontractive(0.42), 100, 1).passed());
  EXPECT_FALSE(verify_class(t, MapClass::quasi_nonexpansive(), 100, 1).passed());
}

TEST(Catalog, RulesAgreeWithDirectEvaluation) {
  Lcg64 rng(9);
  for (const FixedPointMap& t : catalog::paper_examples()) {
    if (!t.rule()) continue;
    for (int i = 0; i < 200; ++i) {
      const Point x = sample_in(t.domain(), t.dim(), rng);
      const std::vector<double> r = t.rule()->eval<double>(x.to_vector());
      ASSERT_LE(distance(Point(std::span<const double>(r)), t(x)), 1e-13 * (1.0 + norm(x))) << t.name();
    }
  }
}

TEST(VerifyClass, DeclaredClassesPass) {
  for (const FixedPointMap& t : catalog::paper_examples()) {
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
      const InequalityReport r = verify_class(t, t.declared_class(), 1000, seed);
      ASSERT_TRUE(r.passed()) << t.name() << " seed " << seed << "\n" << r.first_violation()->lhs;
      ASSERT_EQ(r.records.size(), 1000u + (t.name() == "browderPetryshyn" ? 2u : 0u));
    }
  }
}

TEST(VerifyClass, HeDuIsNotNonexpansive) {
  const InequalityReport r = verify_class(catalog::he_du(), MapClass::nonexpansive(), 1000, 1);
  ASSERT_FALSE(r.passed());
  const InequalityRecord* w = r.first_violation();
  ASSERT_NE(w, nullptr);
  ASSERT_TRUE(w->other.has_value());
  const FixedPointMap t = catalog::he_du();
  EXPECT_GT(distance(t(w->x), t(*w->other)), distance(w->x, *w->other));
}

TEST(VerifyClass, BrowderPetryshynCounterexample) {
  using std::numbers::pi;
  const FixedPointMap t = catalog::browder_petryshyn();
  const Point x = Point::scalar(2.0 / pi);
  const Point z = Point::scalar(2.0 / (3.0 * pi));
  EXPECT_NEAR(distance_squared(t(x), t(z)), 256.0 / (81.0 * pi * pi), 1e-14);
  EXPECT_NEAR(distance_squared(x, z) + distance_squared(x - t(x), z - t(z)), 160.0 / (81.0 * pi * pi), 1e-14);

  const InequalityReport r = verify_class(t, MapClass::strictly_pseudocontractive(0.9), 1000, 1);
  ASSERT_FALSE(r.passed());
  bool probe_failed = false;
  for (const auto& rec : r.records) probe_failed = probe_failed || (rec.probe && !rec.pass);
  EXPECT_TRUE(probe_failed);
  for (double k : {0.0, 0.5, 0.99}) {
    EXPECT_TRUE(verify_class(t, MapClass::demicontractive(k), 1000, 2).passed());
  }
}

TEST(VerifyClass, IdentityPassesEveryClassWithZeroParameters) {
  const FixedPointMap id = catalog::identity();
  for (const auto& [name, tag] : MapClass::names()) {
    if (tag == MapClass::Tag::Contraction) continue;  // needs k in (0, 1)
    if (tag == MapClass::Tag::StronglyMonotone) continue;
    if (tag == MapClass::Tag::FirmlyQuasiNonexpansive || tag == MapClass::Tag::Directed) {
      EXPECT_TRUE(verify_class(id, MapClass::with_defaults(tag), 200, 1).passed()) << name;
      continue;
    }
    EXPECT_TRUE(verify_class(id, MapClass::with_defaults(tag), 200, 1).passed()) << name;
  }
  EXPECT_TRUE(verify_class(id, MapClass::strongly_monotone(1.0), 200, 1).passed());
}

TEST(VerifyClass, RequiresFixedPoints) {
  const FixedPointMap t = affine1("noFix", 0.5, 1.0, MapClass::contraction(0.5));
  EXPECT_THROW(verify_class(t, MapClass::quasi_nonexpansive(), 10, 1), ValidationError);
  EXPECT_THROW(verify_class(t, MapClass::nonexpansive(), 0, 1), ValidationError);
}

TEST(VerifyClass, ReportIsDeterministicText) {
  const FixedPointMap t = catalog::he_du();
  const std::string a = verify_class(t, MapClass::nonexpansive(), 50, 3).to_text();
  const std::string b = verify_class(t, MapClass::nonexpansive(), 50, 3).to_text();
  EXPECT_EQ(a, b);
  EXPECT_NE(a.find("FAIL"), std::string::npos);
}

TEST(VerifyClass, AsymptoticClassesOnBallMap) {
  const FixedPointMap t = catalog::ball_map();
  EXPECT_TRUE(verify_class(t, MapClass::uniformly_lipschitzian(2.0), 300, 1).passed());
  EXPECT_TRUE(verify_class(t, MapClass::total_quasi_asymptotically_nonexpansive(
                                  SequenceSpec::constant(0.0), SequenceSpec::constant(0.0), Gauge::square()),
                           300, 1)
                  .passed());
  EXPECT_TRUE(verify_class(t, MapClass::asymptotically_quasi_nonexpansive(SequenceSpec::constant(1.0)), 300, 1)
                  .passed());
}

TEST(FixedPointEquivalences, DegenerateAtFixedPoint) {
  const Lemma21Report r = check_lemma21_equivalences(catalog::small_s(), Point{1.25}, Point{1.25}, 3);
  EXPECT_EQ(r.a_lhs, 0.0);
  EXPECT_EQ(r.a_rhs, 0.0);
  EXPECT_TRUE(r.a && r.b && r.c);
}

TEST(FixedPointEquivalences, SmallSExamples) {
  const FixedPointMap g = catalog::small_s();
  const Lemma21Report r1 = check_lemma21_equivalences(g, Point{1.25}, Point{10}, 1);
  EXPECT_DOUBLE_EQ(r1.a_lhs, 3.0625);
  EXPECT_DOUBLE_EQ(r1.a_rhs, 76.5625);
  // G(10) = 3: b is 49 <= 2 * 7 * 8.75 = 122.5, c is 2 * 7 * (-1.75) <= 49.
  EXPECT_DOUBLE_EQ(r1.b_lhs, 49.0);
  EXPECT_DOUBLE_EQ(r1.b_rhs, 122.5);
  EXPECT_DOUBLE_EQ(r1.c_lhs, -24.5);
  EXPECT_DOUBLE_EQ(r1.c_rhs, 49.0);
  EXPECT_TRUE(r1.consistent() && r1.equivalent());

  // G^5(10): the error to 5/4 shrinks by 1/5 per step, 8.75 / 3125.
  const Lemma21Report r5 = check_lemma21_equivalences(g, Point{1.25}, Point{10}, 5);
  const double e = 8.75 / 3125.0;
  EXPECT_NEAR(r5.a_lhs, e * e, 1e-15);
  EXPECT_TRUE(r5.a && r5.b && r5.c);
}

TEST(FixedPointEquivalences, ClassMismatch) {
  EXPECT_THROW(check_lemma21_equivalences(catalog::scaled_neg(1), Point{0}, Point{1}, 1), ValidationError);
  EXPECT_THROW(check_lemma21_equivalences(catalog::small_s(), Point{1}, Point{1}, 1), ValidationError);
}

TEST(StrongMonotonicity, Examples) {
  const FixedPointMap constant(
      "const", 1, [](const Point&) { return Point{3}; }, ConvexBody::whole_space(), MapClass::contraction(0.1),
      {Point{3}});
  EXPECT_TRUE(check_strong_monotonicity_of_complement(constant, 500, 1).passed());
  const InequalityReport half = check_strong_monotonicity_of_complement(catalog::half_scale(), 500, 1);
  EXPECT_TRUE(half.passed());
  for (const auto& r : half.records) ASSERT_NEAR(r.lhs, r.rhs, 1e-12 * std::max(1.0, r.rhs));
  EXPECT_TRUE(check_strong_monotonicity_of_complement(catalog::half_sine(), 1000, 1).passed());
  EXPECT_THROW(check_strong_monotonicity_of_complement(catalog::wq_t(), 10, 1), ValidationError);
}

TEST(PowerAverage, PowerAverageIsNonexpansiveWithSameFixedSet) {
  const FixedPointMap s = catalog::half_scale().with_class(MapClass::uniformly_lipschitzian(0.5));
  for (double b : {0.1, 0.5, 0.9}) {
    for (int n : {1, 2, 5}) {
      const FixedPointMap t = power_average(s, b, n);
      EXPECT_EQ(t.declared_class().tag, MapClass::Tag::Nonexpansive);
      EXPECT_TRUE(verify_class(t, MapClass::nonexpansive(), 500, 1).passed());
      EXPECT_EQ(t(Point{0}), Point{0});
    }
  }
}
