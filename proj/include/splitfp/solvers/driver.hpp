#pragma once

#include <cmath>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <type_traits>
#include <variant>

#include "splitfp/core/error.hpp"
#include "splitfp/core/point.hpp"
#include "splitfp/solvers/problem.hpp"
#include "splitfp/solvers/steps.hpp"
#include "splitfp/solvers/trace.hpp"

namespace splitfp {

namespace detail {

// Rethrows the active exception with "iteration n: " prefixed, keeping
// its type and payload.
[[noreturn]] inline void rethrow_at_iteration(long n) {
  const std::string at = "iteration " + std::to_string(n) + ": ";
  try {
    throw;
  } catch (const InfeasibleError& e) {
    throw InfeasibleError(at + e.what(), e.gap());
  } catch (const NumericalBreakdown& e) {
    throw NumericalBreakdown(at + e.what());
  } catch (const DomainError& e) {
    throw DomainError(at + e.what(), e.step());
  } catch (const ConvergenceError& e) {
    throw ConvergenceError(at + e.what(), e.best_estimate());
  } catch (const DimensionError& e) {
    throw DimensionError(at + e.what());
  } catch (const ValidationError& e) {
    throw ValidationError(at + e.what());
  }
}

using StepFn = std::function<StepResult(const SolverState&, long)>;

inline StepFn bind_step(const ProblemSpec& spec) {
  return std::visit(
      [](const auto& p) -> StepFn {
        using P = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<P, ScfppProblem>) {
          return [&p](const SolverState& s, long n) { return step_scfpp(p, s, n); };
        } else if constexpr (std::is_same_v<P, AdaptiveProblem>) {
          return [&p](const SolverState& s, long n) { return step_scfpp_adaptive(p, s, n); };
        } else if constexpr (std::is_same_v<P, SynchronalProblem>) {
          return [&p](const SolverState& s, long n) { return step_synchronal(p, s, n); };
        } else if constexpr (std::is_same_v<P, SffpepProblem>) {
          return [&p](const SolverState& s, long n) { return step_sffpep(p, s, n); };
        } else if constexpr (std::is_same_v<P, ScfpepProblem>) {
          auto reduced = std::make_shared<const SffpepProblem>(p.reduce());
          return [reduced](const SolverState& s, long n) { return step_sffpep(*reduced, s, n); };
        } else {
          return [&p](const SolverState& s, long n) { return step_extragradient(p, s, n); };
        }
      },
      spec.problem);
}

inline std::optional<double> target_distance(const ProblemSpec& spec, const Point& x, const std::optional<Point>& y) {
  if (!spec.reference_x) return std::nullopt;
  double d2 = distance_squared(x, *spec.reference_x);
  if (y && spec.reference_y) d2 += distance_squared(*y, *spec.reference_y);
  return std::sqrt(d2);
}

}  // namespace detail

/// Runs the family's step from (x0, y0) until a stopping rule fires. Record
/// n holds x_n and the diagnostics of the step taken from it, so the final
/// record's residual is evaluated at the returned iterate. Step errors are
/// rethrown with the iteration index prefixed.
inline IterationTrace run(const ProblemSpec& spec, const Point& x0, const std::optional<Point>& y0,
                          const StoppingRule& rule) {
  rule.validate();
  spec.validate();
  detail::require_dim(x0.dim(), spec.x_dim(), "initial x");
  if (spec.two_variable()) {
    if (!y0) throw ValidationError(family_name(spec.family()) + " needs an initial y");
    detail::require_dim(y0->dim(), spec.y_dim(), "initial y");
  } else if (y0) {
    throw ValidationError(family_name(spec.family()) + " takes no initial y");
  }
  if (rule.target_tol && !spec.reference_x) throw ValidationError("target_tol set without a reference solution");

  SolverState state{x0, y0, std::nullopt, {}};
  if (const auto* eg = std::get_if<ExtragradientProblem>(&spec.problem)) {
    if (!contains(eg->C, x0)) throw ValidationError("extragradient: x0 must lie in C");
    state.anchor = x0;
  }

  const detail::StepFn step = detail::bind_step(spec);
  IterationTrace trace;
  trace.family = spec.family();
  trace.layout = layout_for(spec);

  for (long n = 0;; ++n) {
    StepResult res = [&] {
      try {
        return step(state, n);
      } catch (const Error&) {
        detail::rethrow_at_iteration(n);
      }
    }();
    IterationRecord rec{n, state.x, state.y, res.u, res.z, res.w, res.r, res.step, res.residual_primary,
                        res.residual_coupling, detail::target_distance(spec, state.x, state.y), res.cut_count};
    trace.records.push_back(std::move(rec));
    const IterationRecord& last = trace.records.back();

    if (rule.residual_tol > 0.0 && last.residual_primary <= rule.residual_tol) {
      trace.stop_reason = StopReason::Residual;
      break;
    }
    if (rule.target_tol && *rule.target_tol > 0.0 && *last.dist_to_target <= *rule.target_tol) {
      trace.stop_reason = StopReason::Target;
      break;
    }
    if (n >= rule.max_iters) {
      trace.stop_reason = StopReason::MaxIters;
      break;
    }
    double moved = distance(res.next.x, state.x);
    if (state.y) moved = std::max(moved, distance(*res.next.y, *state.y));
    if (rule.stagnation_tol > 0.0 && moved <= rule.stagnation_tol) {
      trace.stop_reason = StopReason::Stagnation;
      break;
    }
    state = std::move(res.next);
  }
  return trace;
}

}  // namespace splitfp
