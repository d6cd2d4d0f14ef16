#pragma once

#include <algorithm>
#include <optional>
#include <string>
#include <type_traits>
#include <utility>
#include <variant>
#include <vector>

#include "splitfp/core/error.hpp"
#include "splitfp/core/linear_map.hpp"
#include "splitfp/core/point.hpp"
#include "splitfp/operators/fixed_point_map.hpp"
#include "splitfp/operators/sequence.hpp"
#include "splitfp/projections/convex_body.hpp"

namespace splitfp {

enum class Family { Scfpp, ScfppAdaptive, SynchronalVip, Sffpep, Scfpep, ExtraGradient };

inline std::string family_name(Family f) {
  switch (f) {
    case Family::Scfpp: return "scfpp";
    case Family::ScfppAdaptive: return "scfpp-adaptive";
    case Family::SynchronalVip: return "synchronal-vip";
    case Family::Sffpep: return "sffpep";
    case Family::Scfpep: return "scfpep";
    case Family::ExtraGradient: return "extragradient";
  }
  return "?";
}

inline Family parse_family(const std::string& s) {
  for (Family f : {Family::Scfpp, Family::ScfppAdaptive, Family::SynchronalVip, Family::Sffpep, Family::Scfpep,
                   Family::ExtraGradient}) {
    if (family_name(f) == s) return f;
  }
  throw ValidationError("unknown family '" + s + "'");
}

// Upper limit used for the SCFPP step gamma: 1/L* with L* = ||A||^2, or
// 1/max(L*, L) with L the Lipschitz constant declared for T.
enum class GammaBound { InverseLStar, InverseMaxLStarL };

// Full: the coupling term -lambda_n A*(Ax - By) is applied. Dropped: z = P_C x
// and u = P_Q y, the simplified scheme used for the bnm tables.
enum class Coupling { Full, Dropped };

// Which combined operator drives which block in the split common fixed
// point equality scheme. AsPrinted: U on the x-block, T on the y-block.
enum class WqBranch { AsPrinted, Swapped };

inline std::string wq_branch_name(WqBranch b) { return b == WqBranch::AsPrinted ? "as_printed" : "swapped"; }

inline WqBranch parse_wq_branch(const std::string& s) {
  if (s == "as_printed") return WqBranch::AsPrinted;
  if (s == "swapped") return WqBranch::Swapped;
  throw ValidationError("unknown wq branch '" + s + "' (expected as_printed or swapped)");
}

namespace detail {

inline void require_dim(int got, int want, const std::string& what) {
  if (got != want) {
    throw DimensionError(what + ": dimension " + std::to_string(got) + " does not match " + std::to_string(want));
  }
}

inline void require_body_dim(const ConvexBody& s, int want, const std::string& what) {
  if (s.dim() != 0) require_dim(s.dim(), want, what);
}

// Demicontractive constant implied by the declared class, or a
// ValidationError naming the role the operator plays.
inline double demicontractive_k_of(const FixedPointMap& t, const std::string& role) {
  const std::optional<double> k = implied_demicontractive_k(t);
  if (!k) {
    throw ValidationError(role + " (" + t.name() + "): declared class " + t.declared_class().describe() +
                          " does not imply a demicontractive bound");
  }
  return *k;
}

inline void require_quasi_nonexpansive(const FixedPointMap& t, const std::string& role) {
  if (demicontractive_k_of(t, role) > 0.0) {
    throw ValidationError(role + " (" + t.name() + ") must be quasi-nonexpansive; declared " +
                          t.declared_class().describe());
  }
}

inline double lipschitz_of(const FixedPointMap& t, const std::string& role) {
  const MapClass& c = t.declared_class();
  switch (c.tag) {
    case MapClass::Tag::Nonexpansive: return 1.0;
    case MapClass::Tag::Contraction: return c.k;
    case MapClass::Tag::Lipschitzian:
    case MapClass::Tag::UniformlyLipschitzian: return c.lipschitz;
    default:
      throw ValidationError(role + " (" + t.name() + "): no Lipschitz constant follows from " + c.describe());
  }
}

inline bool is_zero_sequence(const SequenceSpec& s) { return s.is_constant() && s(0) == 0.0; }

}  // namespace detail

/// u_n = x_n + gamma A*(T^{n+1} - I) A x_n,
/// x_{n+1} = alpha_n u_n + (1 - alpha_n) G^{n+1} u_n.
/// T acts on the range of A, G on its domain. With use_powers off both maps
/// are applied once per step (the quasi-nonexpansive specialization).
struct ScfppProblem {
  FixedPointMap T;
  FixedPointMap G;
  LinearMap A;
  double gamma;
  SequenceSpec alpha;
  bool use_powers = true;
  GammaBound gamma_bound = GammaBound::InverseLStar;

  double gamma_limit() const {
    const double lstar = estimate_norm_squared(A);
    if (gamma_bound == GammaBound::InverseLStar) return 1.0 / lstar;
    return 1.0 / std::max(lstar, detail::lipschitz_of(T, "T"));
  }

  void validate() const {
    detail::require_dim(T.dim(), A.codomain_dim(), "scfpp: T vs range of A");
    detail::require_dim(G.dim(), A.domain_dim(), "scfpp: G vs domain of A");
    const double limit = gamma_limit();
    if (!(gamma > 0.0 && gamma < limit)) {
      throw ValidationError("scfpp: gamma = " + std::to_string(gamma) + " outside (0, " + std::to_string(limit) + ")");
    }
    require_range(alpha, "alpha", 0.0, 1.0);
  }
};

/// u_n = x_n + rho_n A*(T - I) A x_n with the self-adaptive rho_n,
/// x_{n+1} = (1 - alpha_n) u_n + alpha_n U u_n.
struct AdaptiveProblem {
  FixedPointMap U;
  FixedPointMap T;
  LinearMap A;
  double k;
  SequenceSpec alpha;

  void validate() const {
    detail::require_dim(U.dim(), A.domain_dim(), "scfpp-adaptive: U vs domain of A");
    detail::require_dim(T.dim(), A.codomain_dim(), "scfpp-adaptive: T vs range of A");
    if (!(k < 1.0)) throw ValidationError("scfpp-adaptive: k must be < 1");
    for (const auto& [m, role] : {std::pair{&U, "U"}, std::pair{&T, "T"}}) {
      const double km = detail::demicontractive_k_of(*m, role);
      if (km > k) {
        throw ValidationError(std::string("scfpp-adaptive: ") + role + " is only " + std::to_string(km) +
                              "-demicontractive, above k = " + std::to_string(k));
      }
    }
    require_range(alpha, "alpha", 0.0, 1.0 - k);
  }
};

/// x_{n+1} = alpha_n gamma f(x_n) + (I - alpha_n mu G) T^{beta_n} x_n with
/// T^{beta_n} = beta_n I + (1 - beta_n) T^{n+1}. G is eta-strongly
/// monotone and L-Lipschitzian; f is a contraction.
struct SynchronalProblem {
  FixedPointMap T;
  FixedPointMap f;
  FixedPointMap G;
  double eta = 1.0;
  double lipschitz = 1.0;
  double mu;
  double gamma;
  SequenceSpec alpha;
  SequenceSpec beta;
  bool use_powers = true;

  double tau() const { return mu * (eta - mu * lipschitz * lipschitz / 2.0); }

  // Strict pseudocontraction constant of T.
  double k_of_T() const {
    const MapClass& c = T.declared_class();
    switch (c.tag) {
      case MapClass::Tag::TotalAsymStrictPseudocontraction:
      case MapClass::Tag::StrictlyPseudocontractive: return c.k;
      case MapClass::Tag::Nonexpansive:
      case MapClass::Tag::Contraction: return 0.0;
      default:
        throw ValidationError("synchronal-vip: T (" + T.name() + ") must be a strict pseudocontraction; declared " +
                              c.describe());
    }
  }

  double f_coefficient() const {
    const MapClass& c = f.declared_class();
    if (c.tag != MapClass::Tag::Contraction) {
      throw ValidationError("synchronal-vip: f (" + f.name() + ") must be a contraction; declared " + c.describe());
    }
    return c.k;
  }

  void validate() const {
    detail::require_dim(f.dim(), T.dim(), "synchronal-vip: f vs T");
    detail::require_dim(G.dim(), T.dim(), "synchronal-vip: G vs T");
    if (!(eta > 0.0) || !(lipschitz > 0.0)) throw ValidationError("synchronal-vip: eta and L must be positive");
    const double mu_max = 2.0 * eta / (lipschitz * lipschitz);
    if (!(mu > 0.0 && mu < mu_max)) {
      throw ValidationError("synchronal-vip: mu = " + std::to_string(mu) + " outside (0, " + std::to_string(mu_max) +
                            ")");
    }
    const double g_max = tau() / f_coefficient();
    if (!(gamma > 0.0 && gamma < g_max)) {
      throw ValidationError("synchronal-vip: gamma = " + std::to_string(gamma) + " outside (0, tau/beta = " +
                            std::to_string(g_max) + ")");
    }
    require_range(alpha, "alpha", 0.0, 1.0);
    require_range(beta, "beta", k_of_T(), 1.0, true, false);
  }
};

/// Split feasibility and fixed point equality: x-block with U, P_C and A,
/// y-block with T, P_Q and B; both updated from (x_n, y_n).
struct SffpepProblem {
  FixedPointMap U;
  FixedPointMap T;
  LinearMap A;
  LinearMap B;
  ConvexBody C;
  ConvexBody Q;
  SequenceSpec lambda;
  SequenceSpec alpha;
  SequenceSpec beta;
  Coupling coupling = Coupling::Full;

  // 2/(L1 + L2) with L1 = ||A||^2, L2 = ||B||^2.
  double lambda_limit() const { return 2.0 / (estimate_norm_squared(A) + estimate_norm_squared(B)); }

  void validate() const {
    detail::require_dim(A.codomain_dim(), B.codomain_dim(), "sffpep: ranges of A and B");
    detail::require_dim(U.dim(), A.domain_dim(), "sffpep: U vs domain of A");
    detail::require_dim(T.dim(), B.domain_dim(), "sffpep: T vs domain of B");
    detail::require_body_dim(C, A.domain_dim(), "sffpep: C vs domain of A");
    detail::require_body_dim(Q, B.domain_dim(), "sffpep: Q vs domain of B");
    detail::require_quasi_nonexpansive(U, "U");
    detail::require_quasi_nonexpansive(T, "T");
    if (coupling == Coupling::Full) require_range(lambda, "lambda", 0.0, lambda_limit(), false, true);
    require_range(alpha, "alpha", 0.0, 1.0);
    if (!detail::is_zero_sequence(beta)) require_range(beta, "beta", 0.0, 1.0);
  }
};

/// Split common fixed point equality: U = sum_j delta_j relax(U_j, gamma_j),
/// T = sum_i w_i relax(T_i, tau_i), then the split equality scheme without
/// projections.
struct ScfpepProblem {
  std::vector<FixedPointMap> U_list;
  std::vector<ExactScalar> u_weights;
  std::vector<ExactScalar> u_relax;
  std::vector<FixedPointMap> T_list;
  std::vector<ExactScalar> t_weights;
  std::vector<ExactScalar> t_relax;
  LinearMap A;
  LinearMap B;
  SequenceSpec lambda;
  SequenceSpec alpha;
  SequenceSpec beta;
  WqBranch branch = WqBranch::AsPrinted;
  Coupling coupling = Coupling::Full;

  static FixedPointMap combine(const std::vector<FixedPointMap>& maps, const std::vector<ExactScalar>& weights,
                               const std::vector<ExactScalar>& relaxations, const std::string& role) {
    if (maps.size() != relaxations.size()) throw ValidationError("scfpep: " + role + " relaxation count mismatch");
    std::vector<FixedPointMap> relaxed;
    for (std::size_t i = 0; i < maps.size(); ++i) relaxed.push_back(relax(maps[i], relaxations[i]));
    return convex_combine(relaxed, weights);
  }

  SffpepProblem reduce() const {
    FixedPointMap u = combine(U_list, u_weights, u_relax, "U");
    FixedPointMap t = combine(T_list, t_weights, t_relax, "T");
    if (branch == WqBranch::Swapped) std::swap(u, t);
    return SffpepProblem{std::move(u), std::move(t), A, B, ConvexBody::whole_space(), ConvexBody::whole_space(),
                         lambda, alpha, beta, coupling};
  }

  void validate() const { reduce().validate(); }
};

/// Ishikawa-type extragradient with shrinking projections:
/// y = P_C(x - gamma A*(I - G P_Q) A x), z = P_C(y - gamma A*(I - G P_Q) A y),
/// w = (1 - alpha) z + alpha T((1 - beta) z + beta T z), then
/// x_{n+1} = P_{C_{n+1}}(x_0) with C_{n+1} cut by distance dominance.
/// With extra_step off, y_n = x_n and only z is computed.
struct ExtragradientProblem {
  FixedPointMap T;
  FixedPointMap G;
  LinearMap A;
  ConvexBody C;
  ConvexBody Q;
  SequenceSpec gamma;
  SequenceSpec alpha;
  SequenceSpec beta;
  bool extra_step = true;
  int cut_cap = 10000;

  void validate() const {
    detail::require_dim(T.dim(), A.domain_dim(), "extragradient: T vs domain of A");
    detail::require_dim(G.dim(), A.codomain_dim(), "extragradient: G vs range of A");
    detail::require_body_dim(C, A.domain_dim(), "extragradient: C vs domain of A");
    detail::require_body_dim(Q, A.codomain_dim(), "extragradient: Q vs range of A");
    detail::require_quasi_nonexpansive(T, "T");
    detail::require_quasi_nonexpansive(G, "G");
    if (cut_cap < 1) throw ValidationError("extragradient: cut cap must be >= 1");
    if (!detail::is_zero_sequence(gamma)) require_range(gamma, "gamma", 0.0, 1.0 / estimate_norm_squared(A));
    require_range(alpha, "alpha", 0.0, 1.0);
    if (!detail::is_zero_sequence(beta)) require_range(beta, "beta", 0.0, 1.0);
  }
};

using Problem =
    std::variant<ScfppProblem, AdaptiveProblem, SynchronalProblem, SffpepProblem, ScfpepProblem, ExtragradientProblem>;

/// A problem of one of the six families plus an optional known solution,
/// used for distance-to-target and Fejer checks.
struct ProblemSpec {
  Problem problem;
  std::optional<Point> reference_x;
  std::optional<Point> reference_y;

  Family family() const { return static_cast<Family>(problem.index()); }

  bool two_variable() const { return family() == Family::Sffpep || family() == Family::Scfpep; }

  int x_dim() const {
    return std::visit(
        [](const auto& p) -> int {
          using P = std::decay_t<decltype(p)>;
          if constexpr (std::is_same_v<P, SynchronalProblem>) {
            return p.T.dim();
          } else {
            return p.A.domain_dim();
          }
        },
        problem);
  }

  // Dimension of the y-block; 0 for one-variable families.
  int y_dim() const {
    if (const auto* p = std::get_if<SffpepProblem>(&problem)) return p->B.domain_dim();
    if (const auto* p = std::get_if<ScfpepProblem>(&problem)) return p->B.domain_dim();
    return 0;
  }

  void validate() const {
    std::visit([](const auto& p) { p.validate(); }, problem);
    if (reference_x) detail::require_dim(reference_x->dim(), x_dim(), "reference solution x");
    if (reference_y) {
      if (!two_variable()) throw ValidationError("reference y given for a one-variable family");
      detail::require_dim(reference_y->dim(), y_dim(), "reference solution y");
    }
    if (two_variable() && reference_x.has_value() != reference_y.has_value()) {
      throw ValidationError("two-variable families need both reference points or neither");
    }
  }
};

}  // namespace splitfp
