#pragma once

#include <algorithm>
#include <string>
#include <utility>
#include <optional>
#include <vector>

#include "splitfp/core/error.hpp"
#include "splitfp/core/point.hpp"
#include "splitfp/operators/fixed_point_map.hpp"
#include "splitfp/projections/convex_body.hpp"
#include "splitfp/solvers/problem.hpp"

namespace splitfp {

/// Iterate carried between steps. anchor and cuts are used only by the
/// extragradient family (x_0 and the accumulated halfspaces of C_n).
struct SolverState {
  Point x;
  std::optional<Point> y;
  std::optional<Point> anchor;
  std::vector<ConvexBody> cuts;
};

/// Next state plus what the step computed at the current iterate.
struct StepResult {
  explicit StepResult(SolverState n) : next(std::move(n)) {}

  SolverState next;
  std::optional<Point> u;
  std::optional<Point> z;
  std::optional<Point> w;
  std::optional<Point> r;
  std::optional<double> step;
  double residual_primary = 0.0;
  std::optional<double> residual_coupling;
  std::optional<long> cut_count;
};

// Relative size below which T A x is treated as equal to A x.
inline constexpr double kAdaptiveZeroTol = 1e-14;

namespace detail {

inline Point power_or_once(const FixedPointMap& t, bool use_powers, long n, const Point& x) {
  return use_powers ? power_apply(t, static_cast<int>(n + 1), x) : t(x);
}

}  // namespace detail

inline StepResult step_scfpp(const ScfppProblem& p, const SolverState& s, long n) {
  const Point ax = p.A.apply(s.x);
  const Point tax = detail::power_or_once(p.T, p.use_powers, n, ax);
  const Point u = s.x + p.gamma * p.A.apply_adjoint(tax - ax);
  const Point gu = detail::power_or_once(p.G, p.use_powers, n, u);
  const double a = p.alpha(n);
  StepResult out{SolverState{a * u + (1.0 - a) * gu, std::nullopt, std::nullopt, {}}};
  out.u = u;
  out.step = p.gamma;
  out.residual_primary = std::max(distance(gu, u), distance(tax, ax));
  return out;
}

/// rho_n = (1-k)||(I-T)Ax||^2 / (2||A*(I-T)Ax||^2), and 0 when TAx = Ax up
/// to kAdaptiveZeroTol (1 + ||Ax||).
inline double adaptive_rho(const AdaptiveProblem& p, const Point& x) {
  const Point ax = p.A.apply(x);
  const Point d = ax - p.T(ax);
  const double dn = norm(d);
  if (dn <= kAdaptiveZeroTol * (1.0 + norm(ax))) return 0.0;
  const double back = norm_squared(p.A.apply_adjoint(d));
  if (back == 0.0) throw NumericalBreakdown("scfpp-adaptive: A*(I-T)Ax vanishes while (I-T)Ax does not");
  return (1.0 - p.k) * dn * dn / (2.0 * back);
}

inline StepResult step_scfpp_adaptive(const AdaptiveProblem& p, const SolverState& s, long n) {
  const Point ax = p.A.apply(s.x);
  const Point tax = p.T(ax);
  const double rho = adaptive_rho(p, s.x);
  const Point u = rho == 0.0 ? s.x : s.x + rho * p.A.apply_adjoint(tax - ax);
  const Point uu = p.U(u);
  const double a = p.alpha(n);
  StepResult out{SolverState{(1.0 - a) * u + a * uu, std::nullopt, std::nullopt, {}}};
  out.u = u;
  out.step = rho;
  out.residual_primary = std::max(distance(uu, u), distance(tax, ax));
  return out;
}

inline StepResult step_synchronal(const SynchronalProblem& p, const SolverState& s, long n) {
  const Point tn = detail::power_or_once(p.T, p.use_powers, n, s.x);
  const double a = p.alpha(n);
  const double b = p.beta(n);
  const Point tb = b * s.x + (1.0 - b) * tn;
  const Point next = a * p.gamma * p.f(s.x) + tb - a * p.mu * p.G(tb);
  StepResult out{SolverState{next, std::nullopt, std::nullopt, {}}};
  out.u = tb;
  out.step = a;
  out.residual_primary = distance(s.x, tn);
  return out;
}

inline StepResult step_sffpep(const SffpepProblem& p, const SolverState& s, long n) {
  if (!s.y) throw ValidationError("sffpep: state has no y");
  const Point& x = s.x;
  const Point& y = *s.y;
  const Point gap = p.A.apply(x) - p.B.apply(y);
  const bool coupled = p.coupling == Coupling::Full;
  const double lam = coupled ? p.lambda(n) : 0.0;
  const double a = p.alpha(n);
  const double b = p.beta(n);

  const Point z = project(p.C, coupled ? x - lam * p.A.apply_adjoint(gap) : x);
  const Point uz = p.U(z);
  const Point w = (1.0 - b) * z + b * uz;
  const Point x_next = (1.0 - a) * z + a * p.U(w);

  const Point u = project(p.Q, coupled ? y + lam * p.B.apply_adjoint(gap) : y);
  const Point tu = p.T(u);
  const Point r = (1.0 - b) * u + b * tu;
  const Point y_next = (1.0 - a) * u + a * p.T(r);

  StepResult out{SolverState{x_next, y_next, std::nullopt, {}}};
  out.u = u;
  out.z = z;
  out.w = w;
  out.r = r;
  if (coupled) out.step = lam;
  out.residual_coupling = norm(gap);
  out.residual_primary = std::max({norm(gap), distance(uz, z), distance(tu, u)});
  return out;
}

/// Builds the combined operators and takes one split equality step. The
/// driver reduces once per run instead.
inline StepResult step_scfpep(const ScfpepProblem& p, const SolverState& s, long n) {
  return step_sffpep(p.reduce(), s, n);
}

inline StepResult step_extragradient(const ExtragradientProblem& p, const SolverState& s, long n) {
  if (!s.anchor) throw ValidationError("extragradient: state has no anchor point");
  const double g = p.gamma(n);
  const double a = p.alpha(n);
  const double b = p.beta(n);
  auto descend = [&](const Point& v) {
    if (g == 0.0) return project(p.C, v);
    const Point av = p.A.apply(v);
    return project(p.C, v - g * p.A.apply_adjoint(av - p.G(project(p.Q, av))));
  };
  const Point y = p.extra_step ? descend(s.x) : s.x;
  const Point z = descend(y);
  const Point inner_pt = (1.0 - b) * z + b * p.T(z);
  const Point w = (1.0 - a) * z + a * p.T(inner_pt);

  std::vector<ConvexBody> cuts = s.cuts;
  for (const auto& [near, far] : {std::pair{&w, &z}, std::pair{&z, &y}, std::pair{&y, &s.x}}) {
    ConvexBody h = halfspace_from_distance_dominance(*near, *far);
    if (!h.is_whole_space()) cuts.push_back(std::move(h));
  }
  if (static_cast<long>(cuts.size()) > p.cut_cap) {
    throw ConvergenceError("extragradient: cut cap " + std::to_string(p.cut_cap) + " exceeded",
                           distance(s.x, *s.anchor));
  }
  Point x_next = *s.anchor;
  if (cuts.empty()) {
    x_next = project(p.C, *s.anchor);
  } else {
    std::vector<ConvexBody> members;
    members.reserve(cuts.size() + 1);
    if (!p.C.is_whole_space()) members.push_back(p.C);
    members.insert(members.end(), cuts.begin(), cuts.end());
    x_next = project(ConvexBody::intersection(std::move(members)), *s.anchor);
  }

  StepResult out{SolverState{x_next, std::nullopt, s.anchor, std::move(cuts)}};
  out.u = y;
  out.z = z;
  out.w = w;
  out.step = g;
  out.residual_primary = distance(x_next, s.x);
  out.cut_count = static_cast<long>(out.next.cuts.size());
  return out;
}

}  // namespace splitfp
