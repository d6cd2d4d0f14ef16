#pragma once

#include <algorithm>
#include <cmath>
#include <ios>
#include <optional>
#include <string>
#include <type_traits>
#include <variant>
#include <vector>

#include <boost/multiprecision/cpp_dec_float.hpp>

#include "splitfp/core/error.hpp"
#include "splitfp/core/linear_map.hpp"
#include "splitfp/core/point.hpp"
#include "splitfp/operators/fixed_point_map.hpp"
#include "splitfp/projections/convex_body.hpp"
#include "splitfp/solvers/problem.hpp"
#include "splitfp/solvers/trace.hpp"

// Re-executes the solver recurrences in decimal arithmetic. This is a
// separate implementation: it reads the problem's symbolic rules, exact
// parameters and matrices and never calls the double-precision steps.
namespace splitfp {

struct PrecisionOracleConfig {
  int digits = 30;
  long max_n = 100;

  void validate() const {
    if (digits < 25) throw ValidationError("oracle: digits must be >= 25");
    if (digits > 100) throw ValidationError("oracle: digits above 100 are not supported");
    if (max_n < 1) throw ValidationError("oracle: max_n must be >= 1");
  }
};

/// Iterates and the family residual as decimal strings.
struct PreciseRecord {
  long n = 0;
  std::vector<std::string> x;
  std::vector<std::string> y;
  std::string residual;
};

struct PreciseTrace {
  int digits = 0;  // working precision actually used
  Family family = Family::Scfpp;
  std::vector<PreciseRecord> records;

  /// Same schema as a solver trace; intermediates are not kept.
  IterationTrace to_trace() const {
    IterationTrace t;
    t.family = family;
    if (!records.empty()) {
      t.layout.x_dim = static_cast<int>(records.front().x.size());
      t.layout.y_dim = static_cast<int>(records.front().y.size());
    }
    auto point = [](const std::vector<std::string>& v) {
      std::vector<double> d;
      for (const std::string& s : v) d.push_back(std::stod(s));
      return Point(std::span<const double>(d));
    };
    for (const PreciseRecord& r : records) {
      IterationRecord rec = IterationRecord::bare(r.n, point(r.x));
      if (!r.y.empty()) rec.y = point(r.y);
      rec.residual_primary = std::stod(r.residual);
      t.records.push_back(std::move(rec));
    }
    return t;
  }
};

namespace oracle_detail {

template <unsigned D>
using Dec = boost::multiprecision::number<boost::multiprecision::cpp_dec_float<D>, boost::multiprecision::et_off>;

using Wide = Dec<100>;

template <typename T>
using Vec = std::vector<T>;

template <typename T>
Vec<T> add(const Vec<T>& a, const Vec<T>& b) {
  Vec<T> r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
  return r;
}

template <typename T>
Vec<T> sub(const Vec<T>& a, const Vec<T>& b) {
  Vec<T> r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
  return r;
}

template <typename T>
Vec<T> scale(const T& s, const Vec<T>& a) {
  Vec<T> r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = s * a[i];
  return r;
}

// (1 - t) a + t b
template <typename T>
Vec<T> mix(const T& t, const Vec<T>& a, const Vec<T>& b) {
  return add(scale(T(1) - t, a), scale(t, b));
}

template <typename T>
T norm(const Vec<T>& a) {
  T s = 0;
  for (const T& v : a) s += v * v;
  return sqrt(s);
}

template <typename T>
T dist(const Vec<T>& a, const Vec<T>& b) {
  return norm(sub(a, b));
}

template <typename T>
Vec<T> from_point(const Point& p) {
  Vec<T> v;
  for (int i = 0; i < p.dim(); ++i) v.push_back(T(p[i]));
  return v;
}

template <typename T>
Vec<T> mat_apply(const LinearMap& a, const Vec<T>& x, bool adjoint) {
  const Eigen::MatrixXd& m = a.matrix();
  const Eigen::Index rows = adjoint ? m.cols() : m.rows();
  const Eigen::Index cols = adjoint ? m.rows() : m.cols();
  Vec<T> r(rows, T(0));
  for (Eigen::Index i = 0; i < rows; ++i) {
    for (Eigen::Index j = 0; j < cols; ++j) r[i] += T(adjoint ? m(j, i) : m(i, j)) * x[j];
  }
  return r;
}

inline void require_rule(const FixedPointMap& m) {
  if (!m.rule()) throw ValidationError("oracle: operator " + m.name() + " has no symbolic rule");
}

template <typename T>
Vec<T> apply_map(const FixedPointMap& m, const Vec<T>& x) {
  return m.rule()->template eval<T>(x);
}

template <typename T>
Vec<T> power(const FixedPointMap& m, long times, const Vec<T>& x) {
  Vec<T> y = x;
  for (long i = 0; i < times; ++i) {
    Vec<T> next = apply_map(m, y);
    if (next == y) break;
    y = std::move(next);
  }
  return y;
}

// Bounds of a 1-D convex set; empty optionals are infinite.
template <typename T>
struct Interval {
  std::optional<T> lo;
  std::optional<T> hi;

  void meet_lo(const T& v) {
    if (!lo || v > *lo) lo = v;
  }
  void meet_hi(const T& v) {
    if (!hi || v < *hi) hi = v;
  }
  Vec<T> clamp(const Vec<T>& x) const {
    if (lo && hi && *lo > *hi) throw InfeasibleError("oracle: empty interval", 0.0);
    T v = x[0];
    if (lo && v < *lo) v = *lo;
    if (hi && v > *hi) v = *hi;
    return {v};
  }
};

template <typename T>
void add_body(const ConvexBody& s, Interval<T>& iv) {
  const auto& v = s.variant();
  if (std::holds_alternative<ConvexBody::WholeSpace>(v)) return;
  if (const auto* b = std::get_if<ConvexBody::Box>(&v)) {
    if (std::isfinite(b->lower[0])) iv.meet_lo(T(b->lower[0]));
    if (std::isfinite(b->upper[0])) iv.meet_hi(T(b->upper[0]));
    return;
  }
  if (const auto* h = std::get_if<ConvexBody::Halfspace>(&v)) {
    const double a = h->normal[0];
    if (a > 0.0) iv.meet_hi(T(h->offset) / T(a));
    if (a < 0.0) iv.meet_lo(T(h->offset) / T(a));
    return;
  }
  if (const auto* in = std::get_if<ConvexBody::Intersection>(&v)) {
    for (const ConvexBody& m : *in->members) add_body(m, iv);
    return;
  }
  if (const auto* b = std::get_if<ConvexBody::Ball>(&v)) {
    iv.meet_lo(T(b->center[0]) - T(b->radius));
    iv.meet_hi(T(b->center[0]) + T(b->radius));
    return;
  }
  throw ValidationError("oracle: unsupported set");
}

// Projection onto the whole space or a 1-D set.
template <typename T>
Vec<T> project_onto(const ConvexBody& s, const Vec<T>& x) {
  if (s.is_whole_space()) return x;
  if (x.size() != 1) throw ValidationError("oracle: projections are supported in 1-D only");
  Interval<T> iv;
  add_body(s, iv);
  return iv.clamp(x);
}

template <typename T>
std::vector<std::string> to_strings(const Vec<T>& v, int digits) {
  std::vector<std::string> out;
  for (const T& x : v) out.push_back(x.str(digits, std::ios_base::scientific));
  return out;
}

template <typename T>
T max_of(std::initializer_list<T> xs) {
  T m = *xs.begin();
  for (const T& v : xs) m = v > m ? v : m;
  return m;
}

struct Combined {
  std::vector<FixedPointMap> maps;
  std::vector<ExactScalar> weights;
  std::vector<ExactScalar> relax;

  template <typename T>
  Vec<T> operator()(const Vec<T>& x) const {
    Vec<T> out(x.size(), T(0));
    for (std::size_t i = 0; i < maps.size(); ++i) {
      const T g = relax[i].template as<T>();
      const Vec<T> r = mix(g, x, apply_map(maps[i], x));
      out = add(out, scale(weights[i].template as<T>(), r));
    }
    return out;
  }
};

template <typename T>
struct State {
  Vec<T> x;
  Vec<T> y;
};

template <typename T>
struct Step {
  State<T> next;
  T residual;
};

template <typename T>
Step<T> scfpp(const ScfppProblem& p, const State<T>& s, long n) {
  const long k = p.use_powers ? n + 1 : 1;
  const Vec<T> ax = mat_apply(p.A, s.x, false);
  const Vec<T> tax = power(p.T, k, ax);
  const Vec<T> u = add(s.x, scale(T(p.gamma), mat_apply(p.A, sub(tax, ax), true)));
  const Vec<T> gu = power(p.G, k, u);
  const T a = p.alpha.template at<T>(n);
  return {{add(scale(a, u), scale(T(1) - a, gu)), {}}, max_of({dist(gu, u), dist(tax, ax)})};
}

template <typename T>
Step<T> adaptive(const AdaptiveProblem& p, const State<T>& s, long n) {
  const Vec<T> ax = mat_apply(p.A, s.x, false);
  const Vec<T> tax = apply_map(p.T, ax);
  const Vec<T> d = sub(tax, ax);
  const T dn = norm(d);
  T rho = 0;
  if (dn > T(1e-14) * (T(1) + norm(ax))) {
    const T back = norm(mat_apply(p.A, d, true));
    if (back == 0) throw NumericalBreakdown("oracle: A*(I-T)Ax vanishes");
    rho = (T(1) - T(p.k)) * dn * dn / (T(2) * back * back);
  }
  const Vec<T> u = rho == 0 ? s.x : add(s.x, scale(rho, mat_apply(p.A, d, true)));
  const Vec<T> uu = apply_map(p.U, u);
  const T a = p.alpha.template at<T>(n);
  return {{mix(a, u, uu), {}}, max_of({dist(uu, u), dn})};
}

template <typename T>
Step<T> synchronal(const SynchronalProblem& p, const State<T>& s, long n) {
  const Vec<T> tn = power(p.T, p.use_powers ? n + 1 : 1, s.x);
  const T a = p.alpha.template at<T>(n);
  const T b = p.beta.template at<T>(n);
  const Vec<T> tb = add(scale(b, s.x), scale(T(1) - b, tn));
  const Vec<T> next =
      sub(add(scale(a * T(p.gamma), apply_map(p.f, s.x)), tb), scale(a * T(p.mu), apply_map(p.G, tb)));
  return {{next, {}}, dist(s.x, tn)};
}

template <typename T, typename UMap, typename TMap>
Step<T> split_equality(const UMap& U, const TMap& Tm, const LinearMap& A, const LinearMap& B, const ConvexBody& C,
                       const ConvexBody& Q, const SequenceSpec& lambda, const SequenceSpec& alpha,
                       const SequenceSpec& beta, Coupling coupling, const State<T>& s, long n) {
  const Vec<T> gap = sub(mat_apply(A, s.x, false), mat_apply(B, s.y, false));
  const bool coupled = coupling == Coupling::Full;
  const T lam = coupled ? lambda.template at<T>(n) : T(0);
  const T a = alpha.template at<T>(n);
  const T b = beta.template at<T>(n);
  const Vec<T> z = project_onto(C, coupled ? sub(s.x, scale(lam, mat_apply(A, gap, true))) : s.x);
  const Vec<T> uz = U(z);
  const Vec<T> w = mix(b, z, uz);
  const Vec<T> x_next = mix(a, z, U(w));
  const Vec<T> u = project_onto(Q, coupled ? add(s.y, scale(lam, mat_apply(B, gap, true))) : s.y);
  const Vec<T> tu = Tm(u);
  const Vec<T> r = mix(b, u, tu);
  const Vec<T> y_next = mix(a, u, Tm(r));
  return {{x_next, y_next}, max_of({norm(gap), dist(uz, z), dist(tu, u)})};
}

template <typename T>
struct ExtragradientState {
  Vec<T> anchor;
  Interval<T> cut;
};

template <typename T>
Step<T> extragradient(const ExtragradientProblem& p, ExtragradientState<T>& eg, const State<T>& s, long n) {
  const T g = p.gamma.template at<T>(n);
  const T a = p.alpha.template at<T>(n);
  const T b = p.beta.template at<T>(n);
  auto descend = [&](const Vec<T>& v) {
    if (g == 0) return project_onto(p.C, v);
    const Vec<T> av = mat_apply(p.A, v, false);
    const Vec<T> corr = mat_apply(p.A, sub(av, apply_map(p.G, project_onto(p.Q, av))), true);
    return project_onto(p.C, sub(v, scale(g, corr)));
  };
  const Vec<T> y = p.extra_step ? descend(s.x) : s.x;
  const Vec<T> z = descend(y);
  const Vec<T> w = mix(a, z, apply_map(p.T, mix(b, z, apply_map(p.T, z))));
  // {v : |near - v| <= |far - v|} is a half-line bounded by the midpoint.
  for (const auto& [near, far] : {std::pair{&w, &z}, std::pair{&z, &y}, std::pair{&y, &s.x}}) {
    const T mid = ((*near)[0] + (*far)[0]) / T(2);
    if ((*near)[0] < (*far)[0]) eg.cut.meet_hi(mid);
    if ((*near)[0] > (*far)[0]) eg.cut.meet_lo(mid);
  }
  Interval<T> body = eg.cut;
  add_body(p.C, body);
  const Vec<T> next = body.clamp(eg.anchor);
  return {{next, {}}, dist(next, s.x)};
}

template <typename T>
PreciseTrace run_at(const ProblemSpec& spec, const Point& x0, const std::optional<Point>& y0, long max_n,
                    int digits) {
  State<T> s{from_point<T>(x0), y0 ? from_point<T>(*y0) : Vec<T>{}};
  ExtragradientState<T> eg{s.x, {}};
  PreciseTrace out;
  out.digits = digits;
  out.family = spec.family();

  auto step = [&](long n) -> Step<T> {
    return std::visit(
        [&](const auto& p) -> Step<T> {
          using P = std::decay_t<decltype(p)>;
          if constexpr (std::is_same_v<P, ScfppProblem>) {
            return scfpp(p, s, n);
          } else if constexpr (std::is_same_v<P, AdaptiveProblem>) {
            return adaptive(p, s, n);
          } else if constexpr (std::is_same_v<P, SynchronalProblem>) {
            return synchronal(p, s, n);
          } else if constexpr (std::is_same_v<P, SffpepProblem>) {
            auto U = [&p](const Vec<T>& v) { return apply_map(p.U, v); };
            auto Tm = [&p](const Vec<T>& v) { return apply_map(p.T, v); };
            return split_equality<T>(U, Tm, p.A, p.B, p.C, p.Q, p.lambda, p.alpha, p.beta, p.coupling, s, n);
          } else if constexpr (std::is_same_v<P, ScfpepProblem>) {
            Combined cu{p.U_list, p.u_weights, p.u_relax};
            Combined ct{p.T_list, p.t_weights, p.t_relax};
            if (p.branch == WqBranch::Swapped) std::swap(cu, ct);
            auto U = [&cu](const Vec<T>& v) { return cu(v); };
            auto Tm = [&ct](const Vec<T>& v) { return ct(v); };
            const ConvexBody whole = ConvexBody::whole_space();
            return split_equality<T>(U, Tm, p.A, p.B, whole, whole, p.lambda, p.alpha, p.beta, p.coupling, s, n);
          } else {
            return extragradient(p, eg, s, n);
          }
        },
        spec.problem);
  };

  for (long n = 0; n <= max_n; ++n) {
    Step<T> st = step(n);
    out.records.push_back(PreciseRecord{n, to_strings(s.x, digits), to_strings(s.y, digits),
                                        st.residual.str(digits, std::ios_base::scientific)});
    s = std::move(st.next);
  }
  return out;
}

inline void require_supported(const ProblemSpec& spec) {
  std::visit(
      [](const auto& p) {
        using P = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<P, ScfppProblem>) {
          require_rule(p.T);
          require_rule(p.G);
        } else if constexpr (std::is_same_v<P, AdaptiveProblem>) {
          require_rule(p.U);
          require_rule(p.T);
        } else if constexpr (std::is_same_v<P, SynchronalProblem>) {
          require_rule(p.T);
          require_rule(p.f);
          require_rule(p.G);
        } else if constexpr (std::is_same_v<P, SffpepProblem>) {
          require_rule(p.U);
          require_rule(p.T);
        } else if constexpr (std::is_same_v<P, ScfpepProblem>) {
          for (const FixedPointMap& m : p.U_list) require_rule(m);
          for (const FixedPointMap& m : p.T_list) require_rule(m);
        } else {
          if (p.A.domain_dim() != 1) throw ValidationError("oracle: extragradient is supported in 1-D only");
          require_rule(p.T);
          require_rule(p.G);
        }
      },
      spec.problem);
}

inline Wide parse_wide(const std::string& s) { return Wide(s); }

inline double relative_gap(const Wide& a, const Wide& b) {
  const Wide scale_ = max_of({abs(b), Wide(1)});
  return static_cast<double>(abs(a - b) / scale_);
}

}  // namespace oracle_detail

/// Re-runs the recurrence of spec from (x0, y0) for config.max_n steps at
/// no fewer than config.digits significant decimal digits (the working
/// precision is the next of 25, 30, 40, 50, 100). Operators must carry a
/// symbolic rule; sets must be the whole space or 1-D; the extragradient
/// family is supported in 1-D only.
inline PreciseTrace reexecute_high_precision(const ProblemSpec& spec, const Point& x0, const std::optional<Point>& y0,
                                             const PrecisionOracleConfig& config) {
  using namespace oracle_detail;
  config.validate();
  spec.validate();
  require_supported(spec);
  if (spec.two_variable() != y0.has_value()) throw ValidationError("oracle: initial y must match the family");
  const int d = config.digits;
  if (d <= 25) return run_at<Dec<25>>(spec, x0, y0, config.max_n, 25);
  if (d <= 30) return run_at<Dec<30>>(spec, x0, y0, config.max_n, 30);
  if (d <= 40) return run_at<Dec<40>>(spec, x0, y0, config.max_n, 40);
  if (d <= 50) return run_at<Dec<50>>(spec, x0, y0, config.max_n, 50);
  return run_at<Dec<100>>(spec, x0, y0, config.max_n, 100);
}

/// Largest |a - b| / max(|b|, 1) over iterate components of records with
/// n <= max_n, evaluated at 100 digits.
inline double max_relative_gap(const PreciseTrace& a, const PreciseTrace& b, long max_n) {
  using namespace oracle_detail;
  double worst = 0.0;
  const std::size_t count = std::min(a.records.size(), b.records.size());
  for (std::size_t i = 0; i < count && a.records[i].n <= max_n; ++i) {
    const PreciseRecord& ra = a.records[i];
    const PreciseRecord& rb = b.records[i];
    if (ra.n != rb.n || ra.x.size() != rb.x.size() || ra.y.size() != rb.y.size()) {
      throw ValidationError("max_relative_gap: traces do not line up");
    }
    for (std::size_t k = 0; k < ra.x.size(); ++k) {
      worst = std::max(worst, relative_gap(parse_wide(ra.x[k]), parse_wide(rb.x[k])));
    }
    for (std::size_t k = 0; k < ra.y.size(); ++k) {
      worst = std::max(worst, relative_gap(parse_wide(ra.y[k]), parse_wide(rb.y[k])));
    }
  }
  return worst;
}

/// Same measure between a double-precision trace and a precise one.
inline double max_relative_gap(const IterationTrace& t, const PreciseTrace& ref, long max_n) {
  using namespace oracle_detail;
  double worst = 0.0;
  const std::size_t count = std::min(t.records.size(), ref.records.size());
  for (std::size_t i = 0; i < count && t.records[i].n <= max_n; ++i) {
    const IterationRecord& r = t.records[i];
    const PreciseRecord& p = ref.records[i];
    if (r.n != p.n || static_cast<std::size_t>(r.x.dim()) != p.x.size()) {
      throw ValidationError("max_relative_gap: traces do not line up");
    }
    for (int k = 0; k < r.x.dim(); ++k) worst = std::max(worst, relative_gap(Wide(r.x[k]), parse_wide(p.x[k])));
    if (r.y) {
      for (int k = 0; k < r.y->dim(); ++k) {
        worst = std::max(worst, relative_gap(Wide((*r.y)[k]), parse_wide(p.y[k])));
      }
    }
  }
  return worst;
}

}  // namespace splitfp
