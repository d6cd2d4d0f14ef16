#pragma once

#include <cmath>
#include <cstdint>
#include <iomanip>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "splitfp/core/error.hpp"
#include "splitfp/core/lcg.hpp"
#include "splitfp/core/point.hpp"
#include "splitfp/operators/fixed_point_map.hpp"
#include "splitfp/operators/map_class.hpp"
#include "splitfp/projections/sampling.hpp"

namespace splitfp {

inline constexpr double kVerifySlack = 1e-9;
inline constexpr int kMaxVerifiedPower = 20;

// lhs <= rhs up to kVerifySlack, scaled by the magnitude of rhs.
inline bool within_slack(double lhs, double rhs, double slack = kVerifySlack) {
  return lhs <= rhs + slack * std::max(1.0, std::abs(rhs));
}

/// One checked instance of an inequality lhs <= rhs. `x` is the sample,
/// `other` the second sample (pairwise classes) or the fixed point.
/// `power` is the iterate exponent (1 for non-asymptotic classes).
struct InequalityRecord {
  Point x;
  std::optional<Point> other;
  int power = 1;
  double lhs = 0.0;
  double rhs = 0.0;
  bool pass = true;
  bool probe = false;
};

struct InequalityReport {
  std::string subject;
  std::string relation;
  std::uint64_t seed = 0;
  std::vector<InequalityRecord> records;

  int violations() const {
    int v = 0;
    for (const auto& r : records) v += r.pass ? 0 : 1;
    return v;
  }
  bool passed() const { return violations() == 0; }

  const InequalityRecord* first_violation() const {
    for (const auto& r : records) {
      if (!r.pass) return &r;
    }
    return nullptr;
  }

  // One line per record: index, pass/FAIL, power, sample, other, lhs, rhs.
  std::string to_text() const {
    std::ostringstream os;
    os << std::setprecision(17);
    os << "subject: " << subject << "\n";
    os << "relation: " << relation << "\n";
    os << "seed: " << seed << "\n";
    os << "records: " << records.size() << "\n";
    os << "violations: " << violations() << "\n";
    for (std::size_t i = 0; i < records.size(); ++i) {
      const auto& r = records[i];
      os << i << (r.pass ? " pass" : " FAIL") << (r.probe ? " probe" : "") << " n=" << r.power << " x=" << r.x;
      if (r.other) os << " other=" << *r.other;
      os << " lhs=" << r.lhs << " rhs=" << r.rhs << "\n";
    }
    return os.str();
  }
};

namespace detail {

// Relation text for the report header.
inline std::string relation_text(const MapClass& c) {
  using Tag = MapClass::Tag;
  switch (c.tag) {
    case Tag::Contraction: return "||Tx-Ty|| <= k||x-y||";
    case Tag::Nonexpansive: return "||Tx-Ty|| <= ||x-y||";
    case Tag::QuasiNonexpansive: return "||Tx-z|| <= ||x-z||, z in Fix(T)";
    case Tag::FirmlyQuasiNonexpansive: return "||Tx-z||^2 <= ||x-z||^2 - ||Tx-x||^2, z in Fix(T)";
    case Tag::Demicontractive: return "||Tx-z||^2 <= ||x-z||^2 + k||Tx-x||^2, z in Fix(T)";
    case Tag::StrictlyPseudocontractive: return "||Tx-Ty||^2 <= ||x-y||^2 + k||(I-T)x-(I-T)y||^2";
    case Tag::Directed: return "<z-Tx, x-Tx> <= 0, z in Fix(T)";
    case Tag::AsymptoticallyNonexpansive: return "||T^n x-T^n y|| <= k_n||x-y||";
    case Tag::AsymptoticallyQuasiNonexpansive: return "||T^n x-z||^2 <= t_n||x-z||^2, z in Fix(T)";
    case Tag::TotalAsymptoticallyNonexpansive: return "||T^n x-T^n y||^2 <= ||x-y||^2 + v_n g(||x-y||) + mu_n";
    case Tag::TotalQuasiAsymptoticallyNonexpansive:
      return "||T^n x-z||^2 <= ||x-z||^2 + v_n g(||x-z||) + mu_n, z in Fix(T)";
    case Tag::TotalAsymStrictPseudocontraction:
      return "||T^n x-T^n y||^2 <= ||x-y||^2 + k||(I-T^n)x-(I-T^n)y||^2 + mu_n g(||x-y||) + xi_n";
    case Tag::Lipschitzian: return "||Tx-Ty|| <= K||x-y||";
    case Tag::UniformlyLipschitzian: return "||T^n x-T^n y|| <= K||x-y||";
    case Tag::StronglyMonotone: return "eta||x-y||^2 <= <Tx-Ty, x-y>";
  }
  return "?";
}

// Both sides of the class inequality at (x, other) for power n, where
// other is a second sample or a fixed point. tx = T^n x, to = T^n other.
inline std::pair<double, double> class_sides(const MapClass& c, int n, const Point& x, const Point& other,
                                             const Point& tx, const std::optional<Point>& to) {
  using Tag = MapClass::Tag;
  const double dxo = distance(x, other);
  switch (c.tag) {
    case Tag::Contraction: return {distance(tx, *to), c.k * dxo};
    case Tag::Nonexpansive: return {distance(tx, *to), dxo};
    case Tag::Lipschitzian:
    case Tag::UniformlyLipschitzian: return {distance(tx, *to), c.lipschitz * dxo};
    case Tag::StrictlyPseudocontractive:
      return {distance_squared(tx, *to), dxo * dxo + c.k * distance_squared(x - tx, other - *to)};
    case Tag::StronglyMonotone: return {c.eta * dxo * dxo, inner(tx - *to, x - other)};
    case Tag::QuasiNonexpansive: return {distance(tx, other), dxo};
    case Tag::FirmlyQuasiNonexpansive: return {distance_squared(tx, other), dxo * dxo - distance_squared(tx, x)};
    case Tag::Demicontractive: return {distance_squared(tx, other), dxo * dxo + c.k * distance_squared(tx, x)};
    case Tag::Directed: return {inner(other - tx, x - tx), 0.0};
    case Tag::AsymptoticallyNonexpansive: return {distance(tx, *to), c.seq_a(n) * dxo};
    case Tag::AsymptoticallyQuasiNonexpansive: return {distance_squared(tx, other), c.seq_a(n) * dxo * dxo};
    case Tag::TotalAsymptoticallyNonexpansive:
      return {distance_squared(tx, *to), dxo * dxo + c.seq_a(n) * c.gauge(dxo) + c.seq_b(n)};
    case Tag::TotalQuasiAsymptoticallyNonexpansive:
      return {distance_squared(tx, other), dxo * dxo + c.seq_a(n) * c.gauge(dxo) + c.seq_b(n)};
    case Tag::TotalAsymStrictPseudocontraction:
      return {distance_squared(tx, *to), dxo * dxo + c.k * distance_squared(x - tx, other - *to) +
                                             c.seq_a(n) * c.gauge(dxo) + c.seq_b(n)};
  }
  return {0.0, 0.0};
}

// Checks every power for one (x, other) instance and keeps the worst
// (largest lhs - rhs relative to the slack scale).
inline InequalityRecord check_instance(const FixedPointMap& t, const MapClass& c, const Point& x, const Point& other,
                                       bool other_is_fixed) {
  const int max_n = c.is_asymptotic() ? kMaxVerifiedPower : 1;
  InequalityRecord worst{x, other};
  double worst_margin = -std::numeric_limits<double>::infinity();
  Point tx = x;
  std::optional<Point> to;
  if (!other_is_fixed) to = other;
  for (int n = 1; n <= max_n; ++n) {
    tx = power_apply(t, 1, tx);
    if (to) to = power_apply(t, 1, *to);
    const auto [lhs, rhs] = class_sides(c, n, x, other, tx, to);
    const double margin = (lhs - rhs) / std::max(1.0, std::abs(rhs));
    if (margin > worst_margin) {
      worst_margin = margin;
      worst.power = n;
      worst.lhs = lhs;
      worst.rhs = rhs;
      worst.pass = within_slack(lhs, rhs);
    }
  }
  return worst;
}

}  // namespace detail

/// Samples `samples` points of T's domain from an Lcg64 seeded with
/// `seed` and checks the defining inequality of `claimed` at each. Classes
/// quantified over Fix(T) test every known fixed point and keep the worst;
/// pairwise classes draw a second sample per record. Asymptotic classes
/// check powers 1..20. The map's probe points are checked as extra records
/// (as samples, and pairwise against each other).
inline InequalityReport verify_class(const FixedPointMap& t, const MapClass& claimed, int samples,
                                     std::uint64_t seed) {
  if (samples < 1) throw ValidationError("verify_class: samples must be >= 1");
  claimed.validate();
  const bool needs_fix = claimed.needs_fixed_points();
  if (needs_fix && t.known_fixed_points().empty()) {
    throw ValidationError("verify_class: " + claimed.name() + " needs known fixed points of " + t.name());
  }

  InequalityReport report;
  report.subject = t.name() + " : " + claimed.describe();
  report.relation = detail::relation_text(claimed);
  report.seed = seed;

  auto check_x = [&](const Point& x, const std::optional<Point>& y, bool probe) {
    if (needs_fix) {
      std::optional<InequalityRecord> worst;
      for (const Point& z : t.known_fixed_points()) {
        InequalityRecord r = detail::check_instance(t, claimed, x, z, true);
        const double m = (r.lhs - r.rhs) / std::max(1.0, std::abs(r.rhs));
        if (!worst || m > (worst->lhs - worst->rhs) / std::max(1.0, std::abs(worst->rhs))) worst = r;
      }
      worst->probe = probe;
      report.records.push_back(*worst);
    } else {
      InequalityRecord r = detail::check_instance(t, claimed, x, *y, false);
      r.probe = probe;
      report.records.push_back(r);
    }
  };

  Lcg64 rng(seed);
  for (int i = 0; i < samples; ++i) {
    const Point x = sample_in(t.domain(), t.dim(), rng);
    std::optional<Point> y;
    if (!needs_fix) y = sample_in(t.domain(), t.dim(), rng);
    check_x(x, y, false);
  }

  const auto& probes = t.probe_points();
  for (std::size_t i = 0; i < probes.size(); ++i) {
    if (needs_fix) {
      check_x(probes[i], std::nullopt, true);
      continue;
    }
    for (std::size_t j = 0; j < probes.size(); ++j) {
      if (i != j) check_x(probes[i], probes[j], true);
    }
  }
  return report;
}

/// The three forms of the total quasi-asymptotically nonexpansive
/// inequality at (x, y, n), y in Fix(G), each as lhs <= rhs:
///   a: ||G^n x - y||^2 <= ||x - y||^2 + v_n g(||x - y||) + mu_n
///   b: ||G^n x - x||^2 - v_n g - mu_n <= 2<x - G^n x, x - y>
///   c: 2<x - G^n x, y - G^n x> <= ||G^n x - x||^2 + v_n g + mu_n
struct Lemma21Report {
  int n = 1;
  double a_lhs = 0, a_rhs = 0, b_lhs = 0, b_rhs = 0, c_lhs = 0, c_rhs = 0;
  bool a = false, b = false, c = false;

  // a implies b and c.
  bool consistent() const { return !a || (b && c); }
  // All three agree.
  bool equivalent() const { return a == b && b == c; }
};

namespace detail {

// (v_n, mu_n, gauge) for G's declared class read as a total
// quasi-asymptotically nonexpansive map. Quasi-nonexpansive maps are the
// v = mu = 0 case; asymptotically quasi-nonexpansive ones have
// v_n = t_n - 1 with gauge t^2.
inline void tqan_parameters(const FixedPointMap& g, int n, double& v, double& mu, Gauge& gauge) {
  using Tag = MapClass::Tag;
  const MapClass& c = g.declared_class();
  gauge = Gauge::square();
  v = 0.0;
  mu = 0.0;
  switch (c.tag) {
    case Tag::TotalQuasiAsymptoticallyNonexpansive:
      v = c.seq_a(n);
      mu = c.seq_b(n);
      gauge = c.gauge;
      return;
    case Tag::AsymptoticallyQuasiNonexpansive: v = c.seq_a(n) - 1.0; return;
    case Tag::QuasiNonexpansive:
    case Tag::FirmlyQuasiNonexpansive:
    case Tag::Directed:
    case Tag::Nonexpansive:
    case Tag::Contraction: return;
    default:
      throw ValidationError("check_lemma21_equivalences: " + g.name() + " is declared " + c.name() +
                            ", not total quasi-asymptotically nonexpansive");
  }
}

}  // namespace detail

inline Lemma21Report check_lemma21_equivalences(const FixedPointMap& g, const Point& y, const Point& x, int n) {
  if (n < 1) throw ValidationError("check_lemma21_equivalences: n must be >= 1");
  double v = 0.0;
  double mu = 0.0;
  Gauge gauge = Gauge::square();
  detail::tqan_parameters(g, n, v, mu, gauge);
  if (distance(g(y), y) > kFixedPointTol) throw ValidationError("check_lemma21_equivalences: y is not fixed");

  const Point gx = power_apply(g, n, x);
  const double dxy = distance(x, y);
  const double pert = v * gauge(dxy) + mu;
  const double gap2 = distance_squared(gx, x);

  Lemma21Report r;
  r.n = n;
  r.a_lhs = distance_squared(gx, y);
  r.a_rhs = dxy * dxy + pert;
  r.b_lhs = gap2 - pert;
  r.b_rhs = 2.0 * inner(x - gx, x - y);
  r.c_lhs = 2.0 * inner(x - gx, y - gx);
  r.c_rhs = gap2 + pert;
  r.a = within_slack(r.a_lhs, r.a_rhs);
  r.b = within_slack(r.b_lhs, r.b_rhs);
  r.c = within_slack(r.c_lhs, r.c_rhs);
  return r;
}

/// <(I-f)w - (I-f)z, w - z> >= (1 - k)||w - z||^2 on sampled pairs, for f
/// declared Contraction(k).
inline InequalityReport check_strong_monotonicity_of_complement(const FixedPointMap& f, int samples,
                                                                std::uint64_t seed) {
  if (f.declared_class().tag != MapClass::Tag::Contraction) {
    throw ValidationError("check_strong_monotonicity_of_complement: " + f.name() + " is not declared a contraction");
  }
  if (samples < 1) throw ValidationError("check_strong_monotonicity_of_complement: samples must be >= 1");
  const double k = f.declared_class().k;
  InequalityReport report;
  report.subject = f.name() + " : I - f";
  report.relation = "(1-k)||w-z||^2 <= <(I-f)w-(I-f)z, w-z>";
  report.seed = seed;
  Lcg64 rng(seed);
  for (int i = 0; i < samples; ++i) {
    const Point w = sample_in(f.domain(), f.dim(), rng);
    const Point z = sample_in(f.domain(), f.dim(), rng);
    InequalityRecord r{w, z};
    r.lhs = (1.0 - k) * distance_squared(w, z);
    r.rhs = inner((w - f(w)) - (z - f(z)), w - z);
    r.pass = within_slack(r.lhs, r.rhs);
    report.records.push_back(std::move(r));
  }
  return report;
}

}  // namespace splitfp
