#pragma once

#include <vector>

#include "splitfp/core/error.hpp"
#include "splitfp/core/linear_map.hpp"
#include "splitfp/operators/catalog.hpp"
#include "splitfp/operators/fixed_point_map.hpp"
#include "splitfp/projections/convex_body.hpp"
#include "splitfp/solvers/problem.hpp"

// Special cases of the six families obtained by fixing parameters or
// operators. Each returns an ordinary problem of its parent family.
namespace splitfp::presets {

/// SCFPP with T and G applied once per step instead of as powers, for
/// quasi-nonexpansive T and G.
inline ScfppProblem scfpp_quasi_nonexpansive(FixedPointMap T, FixedPointMap G, LinearMap A, double gamma,
                                             SequenceSpec alpha) {
  return ScfppProblem{std::move(T), std::move(G), std::move(A), gamma, std::move(alpha), false};
}

/// Variational inequality <F x*, x - x*> >= 0 over C as a split problem
/// with A = I, T = P_C(I - beta F) and G = P_C. F must be eta-strongly
/// monotone and L-Lipschitzian; beta in (0, 2 eta / L^2) makes T
/// nonexpansive.
inline ScfppProblem variational_inequality(const FixedPointMap& F, const ConvexBody& C, double beta, double eta,
                                           double lipschitz, double gamma, SequenceSpec alpha) {
  if (!(eta > 0.0 && lipschitz > 0.0)) throw ValidationError("variational inequality: eta and L must be positive");
  if (!(beta > 0.0 && beta < 2.0 * eta / (lipschitz * lipschitz))) {
    throw ValidationError("variational inequality: beta must lie in (0, 2 eta / L^2)");
  }
  const int d = F.dim();
  FixedPointMap t(
      "P_C(I - " + detail::format_weight(beta) + " " + F.name() + ")", d,
      [F, C, beta](const Point& x) { return project(C, x - beta * F(x)); }, ConvexBody::whole_space(),
      MapClass::nonexpansive());
  FixedPointMap g(
      "P_C", d, [C](const Point& x) { return project(C, x); }, ConvexBody::whole_space(), MapClass::nonexpansive());
  return ScfppProblem{std::move(t), std::move(g), LinearMap::identity(d), gamma, std::move(alpha), false};
}

/// Adaptive SCFPP for quasi-nonexpansive U, T (k = 0).
inline AdaptiveProblem adaptive_quasi_nonexpansive(FixedPointMap U, FixedPointMap T, LinearMap A,
                                                   SequenceSpec alpha) {
  return AdaptiveProblem{std::move(U), std::move(T), std::move(A), 0.0, std::move(alpha)};
}

/// Adaptive SCFPP for directed or firmly quasi-nonexpansive U, T (k = -1).
inline AdaptiveProblem adaptive_directed(FixedPointMap U, FixedPointMap T, LinearMap A, SequenceSpec alpha) {
  return AdaptiveProblem{std::move(U), std::move(T), std::move(A), -1.0, std::move(alpha)};
}

/// Viscosity iteration x_{n+1} = alpha_n gamma f(x_n) + (1 - alpha_n) T^{beta_n} x_n:
/// the synchronal scheme with G = I and mu = 1.
inline SynchronalProblem viscosity(FixedPointMap T, FixedPointMap f, double gamma, SequenceSpec alpha,
                                   SequenceSpec beta) {
  const int d = T.dim();
  return SynchronalProblem{std::move(T), std::move(f), catalog::identity(d), 1.0, 1.0, 1.0, gamma,
                           std::move(alpha), std::move(beta)};
}

/// Split equality without projections and without the inner relaxation
/// (beta = 0): x_{n+1} = (1 - alpha) z + alpha U z, and likewise for y.
inline SffpepProblem split_equality_without_inner_step(FixedPointMap U, FixedPointMap T, LinearMap A, LinearMap B,
                                                       SequenceSpec lambda, SequenceSpec alpha) {
  return SffpepProblem{std::move(U),          std::move(T), std::move(A), std::move(B), ConvexBody::whole_space(),
                       ConvexBody::whole_space(), std::move(lambda), std::move(alpha), SequenceSpec::constant(0.0)};
}

/// Extragradient for finite families: T = sum_i w_i T_i, G = sum_j d_j G_j.
inline ExtragradientProblem extragradient_family(const std::vector<FixedPointMap>& T_list,
                                                 const std::vector<ExactScalar>& t_weights,
                                                 const std::vector<FixedPointMap>& G_list,
                                                 const std::vector<ExactScalar>& g_weights, LinearMap A,
                                                 ConvexBody C, ConvexBody Q, SequenceSpec gamma, SequenceSpec alpha,
                                                 SequenceSpec beta) {
  return ExtragradientProblem{convex_combine(T_list, t_weights),
                              convex_combine(G_list, g_weights),
                              std::move(A),
                              std::move(C),
                              std::move(Q),
                              std::move(gamma),
                              std::move(alpha),
                              std::move(beta)};
}

/// One projected gradient step per iteration (y_n = x_n, beta = 0), so
/// w = (1 - alpha) z + alpha T z and the cuts compare w, z and x.
inline ExtragradientProblem extragradient_single_step(const std::vector<FixedPointMap>& T_list,
                                                      const std::vector<ExactScalar>& t_weights,
                                                      const std::vector<FixedPointMap>& G_list,
                                                      const std::vector<ExactScalar>& g_weights, LinearMap A,
                                                      ConvexBody C, ConvexBody Q, SequenceSpec gamma,
                                                      SequenceSpec alpha) {
  ExtragradientProblem p = extragradient_family(T_list, t_weights, G_list, g_weights, std::move(A), std::move(C),
                                                std::move(Q), std::move(gamma), std::move(alpha),
                                                SequenceSpec::constant(0.0));
  p.extra_step = false;
  return p;
}

/// Split feasibility with fixed points: the family scheme with P_Q = I.
inline ExtragradientProblem split_feasibility_extragradient(const std::vector<FixedPointMap>& T_list,
                                                            const std::vector<ExactScalar>& t_weights,
                                                            const std::vector<FixedPointMap>& G_list,
                                                            const std::vector<ExactScalar>& g_weights, LinearMap A,
                                                            ConvexBody C, SequenceSpec gamma, SequenceSpec alpha,
                                                            SequenceSpec beta) {
  return extragradient_family(T_list, t_weights, G_list, g_weights, std::move(A), std::move(C),
                              ConvexBody::whole_space(), std::move(gamma), std::move(alpha), std::move(beta));
}

/// Common fixed point of T_1..T_M by shrinking projections: the family
/// scheme with gamma = 0, P_C = I and A = G = I. Iterates
/// w = (1 - alpha) x + alpha T((1 - beta) x + beta T x).
inline ExtragradientProblem shrinking_common_fixed_point(const std::vector<FixedPointMap>& T_list,
                                                         const std::vector<ExactScalar>& t_weights,
                                                         SequenceSpec alpha, SequenceSpec beta) {
  if (T_list.empty()) throw ValidationError("shrinking projections: empty operator list");
  const int d = T_list.front().dim();
  return extragradient_family(T_list, t_weights, {catalog::identity(d)}, {ExactScalar(1.0)},
                              LinearMap::identity(d), ConvexBody::whole_space(), ConvexBody::whole_space(),
                              SequenceSpec::constant(0.0), std::move(alpha), std::move(beta));
}

}  // namespace splitfp::presets
