#pragma once

#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "splitfp/core/error.hpp"
#include "splitfp/core/point.hpp"
#include "splitfp/solvers/problem.hpp"

namespace splitfp {

/// Stops on whichever rule fires first. A tolerance of 0 disables its rule;
/// max_iters always applies.
struct StoppingRule {
  long max_iters = 1000;
  double residual_tol = 0.0;
  double stagnation_tol = 0.0;
  std::optional<double> target_tol;

  void validate() const {
    if (max_iters < 1) throw ValidationError("max_iters must be >= 1");
    if (!(residual_tol >= 0.0) || !(stagnation_tol >= 0.0)) throw ValidationError("tolerances must be >= 0");
    if (target_tol && !(*target_tol >= 0.0)) throw ValidationError("target_tol must be >= 0");
  }
};

enum class StopReason { MaxIters, Residual, Stagnation, Target };

inline std::string stop_reason_name(StopReason r) {
  switch (r) {
    case StopReason::MaxIters: return "max_iters";
    case StopReason::Residual: return "residual";
    case StopReason::Stagnation: return "stagnation";
    case StopReason::Target: return "target";
  }
  return "?";
}

/// Record n holds the iterate x_n (and y_n) together with the quantities of
/// the step taken from it: intermediates, step size and residuals.
struct IterationRecord {
  long n = 0;
  Point x;
  std::optional<Point> y;
  std::optional<Point> u;
  std::optional<Point> z;
  std::optional<Point> w;
  std::optional<Point> r;
  std::optional<double> step;
  double residual_primary = 0.0;
  std::optional<double> residual_coupling;
  std::optional<double> dist_to_target;
  std::optional<long> cut_count;

  /// Record with only n and x set.
  static IterationRecord bare(long n, Point x) {
    return IterationRecord{n, std::move(x), {}, {}, {}, {}, {}, {}, 0.0, {}, {}, {}};
  }

  friend bool operator==(const IterationRecord&, const IterationRecord&) = default;
};

/// Column layout shared by every record of a trace. A dimension of 0 marks
/// an absent block.
struct TraceLayout {
  int x_dim = 0;
  int y_dim = 0;
  int u_dim = 0;
  int z_dim = 0;
  int w_dim = 0;
  int r_dim = 0;

  friend bool operator==(const TraceLayout&, const TraceLayout&) = default;
};

inline TraceLayout layout_for(const ProblemSpec& spec) {
  const int dx = spec.x_dim();
  const int dy = spec.y_dim();
  switch (spec.family()) {
    case Family::Scfpp:
    case Family::ScfppAdaptive:
    case Family::SynchronalVip: return {dx, 0, dx, 0, 0, 0};
    case Family::Sffpep:
    case Family::Scfpep: return {dx, dy, dy, dx, dx, dy};
    case Family::ExtraGradient: return {dx, 0, dx, dx, dx, 0};
  }
  return {};
}

struct IterationTrace {
  Family family = Family::Scfpp;
  TraceLayout layout;
  std::vector<IterationRecord> records;
  StopReason stop_reason = StopReason::MaxIters;

  const IterationRecord& final_record() const {
    if (records.empty()) throw ValidationError("empty trace");
    return records.back();
  }
};

/// Throws if a record does not match the layout or n does not increase.
inline void check_trace_layout(const IterationTrace& t) {
  auto slot = [](const std::optional<Point>& p, int dim, const char* what, long n) {
    const int got = p ? p->dim() : 0;
    if (got != dim) {
      throw DimensionError(std::string("trace record ") + std::to_string(n) + ": column block " + what +
                           " has dimension " + std::to_string(got) + ", layout says " + std::to_string(dim));
    }
  };
  long prev = -1;
  for (const IterationRecord& rec : t.records) {
    if (rec.n <= prev) throw ValidationError("trace: n must increase strictly");
    prev = rec.n;
    if (rec.x.dim() != t.layout.x_dim) throw DimensionError("trace: x dimension differs from layout");
    slot(rec.y, t.layout.y_dim, "y", rec.n);
    slot(rec.u, t.layout.u_dim, "u", rec.n);
    slot(rec.z, t.layout.z_dim, "z", rec.n);
    slot(rec.w, t.layout.w_dim, "w", rec.n);
    slot(rec.r, t.layout.r_dim, "r", rec.n);
  }
}

}  // namespace splitfp
