// One PASS/FAIL line per acceptance criterion. Exits 1 if any fails.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <string>
#include <vector>

#include "splitfp/splitfp.hpp"

using namespace splitfp;
using namespace splitfp::examples;

namespace {

struct Outcome {
  bool ok = true;
  std::string detail;

  void require(bool cond, const std::string& what) {
    if (!cond && ok) {
      ok = false;
      detail = what;
    }
  }
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

IterationTrace run_first_start(const NamedExample& e) {
  const Start& s = e.starts.front();
  return run(e.spec, s.x0, s.y0, e.rule);
}

const IterationRecord& at(const IterationTrace& t, long n) {
  for (const IterationRecord& r : t.records) {
    if (r.n == n) return r;
  }
  throw ValidationError("no record " + std::to_string(n));
}

Outcome table_one() {
  Outcome o;
  const NamedExample e = bnm_t1();
  o.require(e.starts.front().x0 == Point{10.0} && e.starts.front().y0 == Point{15.0}, "start is not (10, 15)");
  const auto t0 = std::chrono::steady_clock::now();
  const IterationTrace t = run_first_start(e);
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  const double rows[3][2] = {{9.898293685, 12.74500000}, {9.797736851, 10.85982000}, {9.698337655, 9.283809520}};
  for (long n = 1; n <= 3; ++n) {
    const IterationRecord& r = at(t, n);
    o.require(std::abs(r.x[0] - rows[n - 1][0]) <= 1e-6, "x_" + std::to_string(n) + fmt(" = %.10f", r.x[0]));
    o.require(std::abs((*r.y)[0] - rows[n - 1][1]) <= 1e-6, "y_" + std::to_string(n) + fmt(" = %.10f", (*r.y)[0]));
  }
  const IterationRecord& last = at(t, 250);
  o.require(std::abs(last.x[0] - 5.000975458) <= 1e-4, fmt("x_250 = %.10f", last.x[0]));
  o.require(std::abs((*last.y)[0] - 1.250000002) <= 1e-6, fmt("y_250 = %.10f", (*last.y)[0]));
  o.require(secs < 1.0, fmt("runtime %.3f s", secs));
  if (o.ok) o.detail = fmt("x_250 = %.9f", last.x[0]) + fmt(", y_250 = %.9f", (*last.y)[0]) + fmt(", %.4f s", secs);
  return o;
}

Outcome table_two() {
  Outcome o;
  const NamedExample e = bnm_t2();
  o.require(e.starts.front().x0 == Point{5.0} && e.starts.front().y0 == Point{1.25}, "start is not (5, 1.25)");
  const IterationTrace t = run_first_start(e);
  double worst = 0.0;
  for (long n = 0; n <= 100; ++n) {
    const IterationRecord& r = at(t, n);
    worst = std::max({worst, std::abs(r.x[0] - 5.0), std::abs((*r.y)[0] - 1.25)});
  }
  o.require(worst <= 1e-9, fmt("max deviation %.3g", worst));
  if (o.ok) o.detail = fmt("max deviation over n = 0..100: %.3g", worst);
  return o;
}

Outcome table_three() {
  Outcome o;
  const NamedExample e = wq_t3(WqBranch::Swapped);
  o.require(e.starts.front().x0 == Point{5.0} && e.starts.front().y0 == Point{5.0}, "start is not (5, 5)");
  StoppingRule rule;
  rule.max_iters = 2000;
  const IterationTrace t = run(e.spec, e.starts.front().x0, e.starts.front().y0, rule);
  const double x1 = at(t, 1).x[0];
  o.require(std::abs(x1 - 4.916472663) <= 1e-6, fmt("x_1 = %.10f", x1));
  const IterationRecord& last = at(t, 2000);
  const double gap = std::max(std::abs(last.x[0] - 1.0), std::abs((*last.y)[0] - 1.0));
  o.require(gap <= 1e-3, fmt("distance to (1, 1) at n = 2000: %.3g", gap));
  if (o.ok) o.detail = fmt("x_1 = %.9f", x1) + fmt(", distance to (1, 1) at n = 2000: %.3g", gap);
  return o;
}

Outcome fejer_suite() {
  Outcome o;
  for (const std::string id : {"bnm_t1", "wq_t3", "scfpp_smallS", "adaptive_demo"}) {
    const IterationTrace t = run_first_start(find_example(id));
    const IterationRecord& last = t.final_record();
    const FejerReport r = fejer_check(t, last.x, last.y, 1e-8);
    o.require(r.monotone, id + fmt(" uptick %.3g", r.max_uptick));
  }
  if (o.ok) o.detail = "4 traces monotone toward their limits";
  return o;
}

Outcome adaptive_step() {
  Outcome o;
  const NamedExample e = adaptive_demo();
  const auto& p = std::get<AdaptiveProblem>(e.spec.problem);
  const IterationTrace t = run_first_start(e);
  o.require(t.records.size() <= 5001, "more than 5000 iterations");
  // rho = (1-k)||TAx-Ax||^2 / (2||A*(TAx-Ax)||^2), recomputed from the record.
  const double k = 3.0 / 7.0;
  double worst = 0.0;
  long reached = -1;
  for (const IterationRecord& r : t.records) {
    Point ax = p.A.apply(r.x);
    Point d = p.T(ax) - ax;
    double rho = 0.0;
    if (norm(d) > kAdaptiveZeroTol * (1.0 + norm(ax))) {
      rho = (1.0 - k) * norm_squared(d) / (2.0 * norm_squared(p.A.apply_adjoint(d)));
    }
    if (!r.step) {
      o.require(false, "record without a step value");
      break;
    }
    worst = std::max(worst, std::abs(*r.step - rho));
    if (reached < 0 && r.residual_primary < 1e-8) reached = r.n;
  }
  o.require(worst <= 1e-12, fmt("rho deviates by %.3g", worst));
  o.require(reached >= 0 && reached <= 5000, "residual never fell below 1e-8");
  if (o.ok) o.detail = fmt("max rho deviation %.3g", worst) + ", residual < 1e-8 at n = " + std::to_string(reached);
  return o;
}

Outcome extragradient() {
  Outcome o;
  const NamedExample e = extragradient_1d();
  const auto& p = std::get<ExtragradientProblem>(e.spec.problem);
  const Point x0 = e.starts.front().x0;
  const IterationTrace t = run_first_start(e);
  for (std::size_t i = 1; i < t.records.size(); ++i) {
    o.require(distance(t.records[i].x, x0) >= distance(t.records[i - 1].x, x0),
              "anchor distance drops at n = " + std::to_string(t.records[i].n));
  }
  // Replay the steps to see the cuts themselves.
  SolverState s{x0, std::nullopt, x0, {}};
  std::size_t cuts = 0;
  for (std::size_t i = 0; i + 1 < t.records.size(); ++i) {
    StepResult r = step_extragradient(p, s, t.records[i].n);
    o.require(r.next.x == t.records[i + 1].x, "replay diverges at n = " + std::to_string(t.records[i].n));
    for (const ConvexBody& c : r.next.cuts) o.require(contains(c, Point{1.0}, 1e-12), "a cut excludes 1");
    cuts = r.next.cuts.size();
    s = std::move(r.next);
  }
  const double final_x = t.final_record().x[0];
  o.require(std::abs(final_x - 1.0) <= 1e-6, fmt("final x = %.10f", final_x));

  ExtragradientProblem id = p;
  id.T = catalog::identity(1);
  id.G = catalog::identity(1);
  StoppingRule rule;
  rule.max_iters = 20;
  const IterationTrace frozen = run(ProblemSpec{id, std::nullopt, std::nullopt}, x0, std::nullopt, rule);
  const Point pc = project(id.C, x0);
  for (const IterationRecord& r : frozen.records) {
    if (r.n >= 1) o.require(r.x == pc, "identity maps move the iterate at n = " + std::to_string(r.n));
  }
  if (o.ok) {
    o.detail = fmt("final x = %.12f", final_x) + ", " + std::to_string(cuts) + " cuts all contain 1";
  }
  return o;
}

Outcome operator_classes() {
  Outcome o;
  int runs = 0;
  for (const FixedPointMap& t : catalog::paper_examples()) {
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
      o.require(verify_class(t, t.declared_class(), 1000, seed).passed(),
                t.name() + " fails its declared class, seed " + std::to_string(seed));
      ++runs;
    }
  }
  o.require(!verify_class(catalog::he_du(), MapClass::nonexpansive(), 1000, 1).passed(),
            "heDu passes nonexpansive");
  using std::numbers::pi;
  const FixedPointMap bp = catalog::browder_petryshyn();
  const Point x = Point::scalar(2.0 / pi);
  const Point z = Point::scalar(2.0 / (3.0 * pi));
  const double lhs = distance_squared(bp(x), bp(z));
  const double rhs = distance_squared(x, z) + distance_squared(x - bp(x), z - bp(z));
  o.require(std::abs(rhs - 160.0 / (81.0 * pi * pi)) <= 1e-14, fmt("witness right side %.15g", rhs));
  o.require(lhs > rhs, "witness pair satisfies the k = 1 bound");
  o.require(!verify_class(bp, MapClass::strictly_pseudocontractive(0.9), 1000, 1).passed(),
            "Browder-Petryshyn map passes strict pseudocontraction");
  if (o.ok) o.detail = std::to_string(runs) + " declared-class runs pass, both negative results hold";
  return o;
}

Outcome inequality_checks() {
  Outcome o;
  Lcg64 rng(8);
  const FixedPointMap s = catalog::small_s();
  for (int i = 0; i < 500; ++i) {
    const Point x = Point::scalar(20.0 * rng.uniform());
    const int n = 1 + static_cast<int>(rng.uniform() * 10.0);
    const Lemma21Report r = check_lemma21_equivalences(s, Point{1.25}, x, n);
    o.require(r.consistent() && r.equivalent(), "fixed-point equivalences disagree at x = " + fmt("%.6g", x[0]));
  }
  const double inf = std::numeric_limits<double>::infinity();
  const std::vector<ConvexBody> sets = {
      ConvexBody::whole_space(),
      ConvexBody::box({-1.0, 0.0}, {2.0, inf}),
      ConvexBody::halfspace(Point{1.0, -2.0}, 0.5),
      ConvexBody::ball(Point{1.0, 1.0}, 1.5),
      ConvexBody::intersection({ConvexBody::ball(Point{0.0, 0.0}, 2.0), ConvexBody::halfspace(Point{1.0, 1.0}, 1.0)}),
  };
  for (const ConvexBody& c : sets) {
    for (int i = 0; i < 500; ++i) {
      const Point x = sample_cube(rng, 2);
      const Point y = sample_in(c, 2, rng);
      o.require(check_projection_inequalities(c, x, y).holds(), "projection inequality fails on " + c.describe());
    }
  }
  o.require(check_strong_monotonicity_of_complement(catalog::half_scale(), 500, 1).passed(), "x/2 fails");
  o.require(check_strong_monotonicity_of_complement(catalog::half_sine(), 500, 1).passed(), "sin(x)/2 fails");
  const FixedPointMap half = catalog::half_scale().with_class(MapClass::uniformly_lipschitzian(0.5));
  for (double b : {0.1, 0.5, 0.9}) {
    for (int n : {1, 2, 5, 10}) {
      o.require(verify_class(power_average(half, b, n), MapClass::nonexpansive(), 500, 1).passed(),
                fmt("power average not nonexpansive at beta = %.1f", b));
    }
  }
  if (o.ok) o.detail = "500 draws each: equivalences, 5 set variants, 2 complements, 3 averaging weights";
  return o;
}

Outcome oracle() {
  Outcome o;
  const NamedExample e = bnm_t1();
  const Start& s = e.starts.front();
  StoppingRule rule;
  rule.max_iters = 100;
  const IterationTrace d = run(e.spec, s.x0, s.y0, rule);
  PrecisionOracleConfig c;
  c.digits = 30;
  c.max_n = 100;
  const PreciseTrace p = reexecute_high_precision(e.spec, s.x0, s.y0, c);
  const double gap = max_relative_gap(d, p, 100);
  o.require(gap <= 1e-9, fmt("relative gap %.3g", gap));
  const char* printed[3][2] = {{"9.898293685", "12.74500000"}, {"9.797736851", "10.85982000"},
                               {"9.698337655", "9.283809520"}};
  for (long n = 1; n <= 3; ++n) {
    const PreciseRecord& r = p.records.at(static_cast<std::size_t>(n));
    const double vx = std::stod(r.x.at(0)) - std::stod(printed[n - 1][0]);
    const double vy = std::stod(r.y.at(0)) - std::stod(printed[n - 1][1]);
    // The table truncates some entries and rounds others, so one unit in
    // the last printed place is allowed.
    o.require(std::abs(vx) <= 1e-9 && std::abs(vy) <= 1e-9, "row " + std::to_string(n) + " differs: " + r.x.at(0));
  }
  if (o.ok) o.detail = fmt("max relative gap %.3g over n <= 100, rows 1..3 match", gap);
  return o;
}

Outcome synchronal() {
  Outcome o;
  const NamedExample e = synchronal_demo();
  const auto& p = std::get<SynchronalProblem>(e.spec.problem);
  // Fix(T) by scanning T(x) - x, then the variational inequality
  // <(gamma f - mu G) x*, x - x*> <= 0 over every x in Fix(T).
  const FixedPointScan fix = find_fixed_points_1d(p.T, 0.0, 100.0, 100000);
  o.require(fix.zero_regions.empty() && !fix.roots.empty(), "Fix(T) scan found no isolated roots");
  std::vector<double> solutions;
  for (double cand : fix.roots) {
    const Point xs = Point::scalar(cand);
    const Point v = p.gamma * p.f(xs) - p.mu * p.G(xs);
    bool holds = true;
    for (double other : fix.roots) holds = holds && inner(v, Point::scalar(other) - xs) <= 1e-12;
    if (holds) solutions.push_back(cand);
  }
  o.require(solutions.size() == 1, std::to_string(solutions.size()) + " solutions found by the scan");
  if (!o.ok) return o;
  const double xstar = solutions.front();
  StoppingRule rule;
  rule.max_iters = 100000;
  rule.target_tol = 1e-4;
  const ProblemSpec spec{p, Point::scalar(xstar), std::nullopt};
  const IterationTrace t = run(spec, e.starts.front().x0, std::nullopt, rule);
  const IterationRecord& last = t.final_record();
  const double err = std::abs(last.x[0] - xstar);
  o.require(err <= 1e-4, fmt("error %.3g after 100000 iterations", err));
  if (o.ok) o.detail = fmt("scan gives x* = %.12f", xstar) + ", within 1e-4 at n = " + std::to_string(last.n);
  return o;
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
      {"bnm_t1 rows and runtime", table_one},  {"bnm_t2 stationarity", table_two},
      {"wq_t3 swapped branch", table_three}, {"Fejer monotonicity", fejer_suite},
      {"adaptive step size", adaptive_step}, {"extragradient invariants", extragradient},
      {"operator classes", operator_classes}, {"inequality checks", inequality_checks},
      {"high-precision oracle", oracle},     {"synchronal solver", synchronal},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& ex) {
      o.ok = false;
      o.detail = std::string("exception: ") + ex.what();
    }
    failed += o.ok ? 0 : 1;
    std::printf("criterion %zu: %s %s: %s\n", i + 1, o.ok ? "PASS" : "FAIL", criteria[i].first, o.detail.c_str());
  }
  std::printf("%zu criteria, %d failed\n", criteria.size(), failed);
  return failed == 0 ? 0 : 1;
}
