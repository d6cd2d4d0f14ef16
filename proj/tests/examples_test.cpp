#include <cmath>
#include <set>
#include <string>

#include <gtest/gtest.h>

#include "splitfp/diagnostics/fejer.hpp"
#include "splitfp/diagnostics/oracle.hpp"
#include "splitfp/examples/catalog.hpp"
#include "splitfp/solvers/driver.hpp"

using namespace splitfp;
using namespace splitfp::examples;

namespace {

IterationTrace run_example(const NamedExample& e) {
  const Start& s = e.starts.front();
  return run(e.spec, s.x0, s.y0, e.rule);
}

}  // namespace

TEST(Examples, IdsAreUniqueAndSpecsValidate) {
  std::set<std::string> ids;
  for (const NamedExample& e : examples::catalog()) {
    EXPECT_TRUE(ids.insert(e.id).second) << e.id;
    EXPECT_NO_THROW(e.spec.validate()) << e.id;
    EXPECT_FALSE(e.starts.empty()) << e.id;
    EXPECT_NO_THROW(e.rule.validate()) << e.id;
  }
  EXPECT_EQ(ids.size(), 8u);
}

TEST(Examples, PinnedRowsReproduce) {
  for (const NamedExample& e : examples::catalog()) {
    const std::vector<RowCheck> checks = check_expected(e, run_example(e));
    for (const RowCheck& c : checks) {
      if (!c.expected.pinned) continue;
      EXPECT_TRUE(c.ok) << e.id << " n=" << c.n << " " << c.expected.var << c.expected.component
                        << " expected " << c.expected.value << " got " << c.got;
    }
    EXPECT_TRUE(all_pinned_ok(checks)) << e.id;
  }
}

TEST(Examples, ResidualDecays) {
  for (const NamedExample& e : examples::catalog()) {
    const IterationTrace t = run_example(e);
    if (e.id == "bnm_t2") {
      EXPECT_EQ(t.final_record().residual_primary, 0.0);
      continue;
    }
    EXPECT_LT(t.final_record().residual_primary, t.records.front().residual_primary) << e.id;
  }
}

TEST(Examples, TableLookup) {
  EXPECT_EQ(example_for_table("t1").id, "bnm_t1");
  EXPECT_EQ(example_for_table("t4").id, "wq_t4");
  EXPECT_THROW(example_for_table("t5"), ValidationError);
  EXPECT_THROW(find_example("nope"), ValidationError);
  EXPECT_EQ(find_example("adaptive_demo").starts.front().x0.dim(), 3);
}

TEST(Examples, TableThreeFirstRowNeedsTheSwappedBranch) {
  const NamedExample printed = wq_t3(WqBranch::AsPrinted);
  const std::vector<RowCheck> checks = check_expected(printed, run_example(printed));
  for (const RowCheck& c : checks) {
    if (c.expected.n == 1 && c.expected.var == 'x') {
      EXPECT_FALSE(c.expected.pinned);
      EXPECT_FALSE(c.ok);
    }
  }
  EXPECT_TRUE(all_pinned_ok(checks));
}

TEST(Examples, FejerMonotoneTowardTheLimit) {
  for (const std::string id : {"bnm_t1", "wq_t3", "scfpp_smallS", "adaptive_demo"}) {
    const NamedExample e = find_example(id);
    const IterationTrace t = run_example(e);
    const IterationRecord& last = t.final_record();
    const FejerReport r = fejer_check(t, last.x, last.y, 1e-8);
    EXPECT_TRUE(r.monotone) << id;
  }
}

TEST(Examples, AdaptiveStepMatchesTheFormula) {
  const NamedExample e = adaptive_demo();
  const auto& p = std::get<AdaptiveProblem>(e.spec.problem);
  const IterationTrace t = run_example(e);
  bool reached = false;
  for (const IterationRecord& rec : t.records) {
    const Eigen::VectorXd ax = p.A.matrix() * rec.x.vec();
    const Eigen::VectorXd d = -3.5 * ax;
    double rho = 0.0;
    if (d.norm() > 1e-14 * (1.0 + ax.norm())) {
      const Eigen::VectorXd back = p.A.matrix().transpose() * d;
      rho = (1.0 - 3.0 / 7.0) * d.squaredNorm() / (2.0 * back.squaredNorm());
    }
    ASSERT_TRUE(rec.step);
    EXPECT_NEAR(*rec.step, rho, 1e-12) << rec.n;
    reached = reached || rec.residual_primary < 1e-8;
  }
  EXPECT_TRUE(reached);
}

TEST(Examples, ExtragradientAnchorDistanceNeverDecreases) {
  const NamedExample e = extragradient_1d();
  const IterationTrace t = run_example(e);
  const Point& x0 = e.starts.front().x0;
  for (std::size_t i = 1; i < t.records.size(); ++i) {
    EXPECT_GE(distance(t.records[i].x, x0), distance(t.records[i - 1].x, x0)) << i;
  }
}

TEST(Examples, OracleAgreesOnEveryExample) {
  for (const NamedExample& e : examples::catalog()) {
    const Start& s = e.starts.front();
    StoppingRule r;
    r.max_iters = 100;
    const IterationTrace d = run(e.spec, s.x0, s.y0, r);
    PrecisionOracleConfig c;
    c.digits = 25;
    c.max_n = 100;
    const PreciseTrace p = reexecute_high_precision(e.spec, s.x0, s.y0, c);
    EXPECT_LT(max_relative_gap(d, p, 100), 1e-9) << e.id;
  }
}
