#pragma once

#include <cmath>
#include <initializer_list>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "splitfp/core/error.hpp"

namespace splitfp {

/// A point of a finite-dimensional real inner-product space.
///
/// The dimension is fixed at construction and every component is finite;
/// any arithmetic that would produce NaN or infinity throws
/// NumericalBreakdown instead of returning a poisoned point.
class Point {
 public:
  explicit Point(Eigen::VectorXd components) : v_(std::move(components)) { validate(); }

  Point(std::initializer_list<double> components)
      : v_(Eigen::Map<const Eigen::VectorXd>(components.begin(),
                                             static_cast<Eigen::Index>(components.size()))) {
    validate();
  }

  explicit Point(std::span<const double> components)
      : v_(Eigen::Map<const Eigen::VectorXd>(components.data(),
                                             static_cast<Eigen::Index>(components.size()))) {
    validate();
  }

  static Point zeros(int dim) { return Point(Eigen::VectorXd::Zero(dim)); }
  static Point constant(int dim, double value) { return Point(Eigen::VectorXd::Constant(dim, value)); }
  static Point scalar(double value) { return Point{value}; }

  int dim() const { return static_cast<int>(v_.size()); }
  double operator[](int i) const { return v_[i]; }
  const Eigen::VectorXd& vec() const { return v_; }
  std::vector<double> to_vector() const { return {v_.data(), v_.data() + v_.size()}; }

  friend Point operator+(const Point& a, const Point& b) {
    check_same_dim(a, b, "operator+");
    return Point(a.v_ + b.v_);
  }
  friend Point operator-(const Point& a, const Point& b) {
    check_same_dim(a, b, "operator-");
    return Point(a.v_ - b.v_);
  }
  friend Point operator-(const Point& a) { return Point(-a.v_); }
  friend Point operator*(double s, const Point& a) { return Point(s * a.v_); }
  friend Point operator*(const Point& a, double s) { return Point(s * a.v_); }
  friend Point operator/(const Point& a, double s) { return Point(a.v_ / s); }

  // Exact component-wise equality.
  friend bool operator==(const Point& a, const Point& b) {
    return a.dim() == b.dim() && a.v_ == b.v_;
  }

  friend std::ostream& operator<<(std::ostream& os, const Point& p) {
    os << '(';
    for (int i = 0; i < p.dim(); ++i) os << (i ? ", " : "") << p.v_[i];
    return os << ')';
  }

  static void check_same_dim(const Point& a, const Point& b, const char* where) {
    if (a.dim() != b.dim()) {
      throw DimensionError(std::string(where) + ": dimension mismatch " + std::to_string(a.dim()) +
                           " vs " + std::to_string(b.dim()));
    }
  }

 private:
  void validate() const {
    if (v_.size() < 1) throw DimensionError("Point: dimension must be at least 1");
    if (!v_.allFinite()) throw NumericalBreakdown("Point: non-finite component");
  }

  Eigen::VectorXd v_;
};

inline double inner(const Point& a, const Point& b) {
  Point::check_same_dim(a, b, "inner");
  return a.vec().dot(b.vec());
}

inline double norm_squared(const Point& a) { return a.vec().squaredNorm(); }
inline double norm(const Point& a) { return a.vec().norm(); }

inline double distance(const Point& a, const Point& b) {
  Point::check_same_dim(a, b, "distance");
  return (a.vec() - b.vec()).norm();
}

inline double distance_squared(const Point& a, const Point& b) {
  Point::check_same_dim(a, b, "distance_squared");
  return (a.vec() - b.vec()).squaredNorm();
}

// (1 - t) a + t b
inline Point lerp(const Point& a, const Point& b, double t) {
  Point::check_same_dim(a, b, "lerp");
  return Point((1.0 - t) * a.vec() + t * b.vec());
}

/// Both sides of the two expansion identities
///   ||x + y||^2 = ||x||^2 + 2<x, y> + ||y||^2
///   ||a x + (1-a) y||^2 = a||x||^2 + (1-a)||y||^2 - a(1-a)||x - y||^2
/// evaluated independently. Test oracle only.
struct PolarizationSides {
  double sum_lhs;
  double sum_rhs;
  double convex_lhs;
  double convex_rhs;
};

inline PolarizationSides polarization_check(const Point& x, const Point& y, double alpha) {
  Point::check_same_dim(x, y, "polarization_check");
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw ValidationError("polarization_check: alpha outside [0,1]");
  PolarizationSides s{};
  s.sum_lhs = norm_squared(x + y);
  s.sum_rhs = norm_squared(x) + 2.0 * inner(x, y) + norm_squared(y);
  s.convex_lhs = norm_squared(alpha * x + (1.0 - alpha) * y);
  s.convex_rhs = alpha * norm_squared(x) + (1.0 - alpha) * norm_squared(y) -
                 alpha * (1.0 - alpha) * norm_squared(x - y);
  return s;
}

}  // namespace splitfp
