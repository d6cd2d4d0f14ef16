#pragma once

#include <cmath>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "splitfp/core/error.hpp"
#include "splitfp/core/point.hpp"

namespace splitfp {

/// Bounded linear operator between finite-dimensional spaces, stored as a
/// dense matrix (rows = codomain dimension, cols = domain dimension). The
/// adjoint is the transpose.
///
/// Copies share one write-once cache for the squared operator norm.
class LinearMap {
 public:
  explicit LinearMap(Eigen::MatrixXd matrix)
      : m_(std::move(matrix)), cache_(std::make_shared<NormCache>()) {
    if (m_.rows() < 1 || m_.cols() < 1) throw DimensionError("LinearMap: empty matrix");
    if (!m_.allFinite()) throw NumericalBreakdown("LinearMap: non-finite entry");
  }

  static LinearMap identity(int dim) { return LinearMap(Eigen::MatrixXd::Identity(dim, dim)); }
  static LinearMap scalar(double s) { return LinearMap(Eigen::MatrixXd::Constant(1, 1, s)); }
  static LinearMap diagonal(const std::vector<double>& d) {
    Eigen::VectorXd v = Eigen::Map<const Eigen::VectorXd>(d.data(), static_cast<Eigen::Index>(d.size()));
    return LinearMap(Eigen::MatrixXd(v.asDiagonal()));
  }
  static LinearMap from_rows(const std::vector<std::vector<double>>& rows) {
    if (rows.empty() || rows.front().empty()) throw DimensionError("LinearMap: empty matrix");
    Eigen::MatrixXd m(rows.size(), rows.front().size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (rows[i].size() != rows.front().size()) throw DimensionError("LinearMap: ragged rows");
      for (std::size_t j = 0; j < rows[i].size(); ++j) m(i, j) = rows[i][j];
    }
    return LinearMap(std::move(m));
  }

  int domain_dim() const { return static_cast<int>(m_.cols()); }
  int codomain_dim() const { return static_cast<int>(m_.rows()); }
  const Eigen::MatrixXd& matrix() const { return m_; }

  Point apply(const Point& x) const {
    if (x.dim() != domain_dim()) {
      throw DimensionError("LinearMap::apply: expected dim " + std::to_string(domain_dim()) + ", got " +
                           std::to_string(x.dim()));
    }
    return Point(m_ * x.vec());
  }

  Point apply_adjoint(const Point& z) const {
    if (z.dim() != codomain_dim()) {
      throw DimensionError("LinearMap::apply_adjoint: expected dim " + std::to_string(codomain_dim()) +
                           ", got " + std::to_string(z.dim()));
    }
    return Point(m_.transpose() * z.vec());
  }

  LinearMap adjoint() const { return LinearMap(m_.transpose()); }

  // Cached squared norm, if estimate_norm_squared has run on this map or a copy.
  std::optional<double> norm_bound() const {
    std::lock_guard lock(cache_->mutex);
    return cache_->value;
  }

 private:
  friend double estimate_norm_squared(const LinearMap&, double, int);

  struct NormCache {
    std::mutex mutex;
    std::optional<double> value;
  };

  void store_norm(double value) const {
    std::lock_guard lock(cache_->mutex);
    if (!cache_->value) cache_->value = value;
  }

  Eigen::MatrixXd m_;
  std::shared_ptr<NormCache> cache_;
};

inline Point apply(const LinearMap& a, const Point& x) { return a.apply(x); }
inline Point apply_adjoint(const LinearMap& a, const Point& z) { return a.apply_adjoint(z); }

inline constexpr double kNormTol = 1e-10;
inline constexpr int kNormMaxIters = 10000;

/// Largest eigenvalue of A^T A (= ||A||^2) by power iteration from the
/// normalized all-ones vector, stopping when successive Rayleigh quotients
/// differ by at most tol * lambda. If the start vector lies in the kernel,
/// the unit vectors are tried in order. The first result is written to the
/// map's norm cache.
inline double estimate_norm_squared(const LinearMap& a, double tol = kNormTol, int max_iters = kNormMaxIters) {
  if (!(tol > 0.0)) throw ValidationError("estimate_norm_squared: tol must be positive");
  if (max_iters < 1) throw ValidationError("estimate_norm_squared: max_iters must be >= 1");
  const Eigen::MatrixXd& m = a.matrix();
  if (m.isZero(0.0)) throw ValidationError("estimate_norm_squared: zero operator");

  const Eigen::Index n = m.cols();
  const Eigen::MatrixXd gram = m.transpose() * m;

  auto run_from = [&](Eigen::VectorXd v, double& best) -> std::optional<double> {
    v.normalize();
    double previous = v.dot(gram * v);
    best = previous;
    for (int it = 0; it < max_iters; ++it) {
      Eigen::VectorXd next = gram * v;
      const double len = next.norm();
      if (len == 0.0) return std::nullopt;
      v = next / len;
      const double lambda = v.dot(gram * v);
      best = std::max(best, lambda);
      if (std::abs(lambda - previous) <= tol * lambda) return lambda;
      previous = lambda;
    }
    throw ConvergenceError("estimate_norm_squared: no convergence within max_iters", best);
  };

  double best = 0.0;
  std::optional<double> result = run_from(Eigen::VectorXd::Ones(n), best);
  for (Eigen::Index i = 0; !result && i < n; ++i) {
    result = run_from(Eigen::VectorXd::Unit(n, i), best);
  }
  if (!result) throw NumericalBreakdown("estimate_norm_squared: every start vector annihilated");
  a.store_norm(*result);
  return *result;
}

}  // namespace splitfp
