#pragma once

#include <cmath>
#include <string>
#include <variant>
#include <vector>

#include "splitfp/core/error.hpp"
#include "splitfp/operators/expr.hpp"

namespace splitfp {

/// Parameter sequence a_n, n >= 0: a constant, a table with a tail value, or
/// one of a fixed registry of closed forms (kept as a registry so configs
/// stay portable across implementations).
class SequenceSpec {
 public:
  enum class Formula {
    InvNPlus1,       // 1/(n+1)
    InvNPlus2,       // 1/(n+2)
    InvSquareNPlus1, // 1/(n+1)^2
    OnePlusInvSquare,// 1 + 1/(n+1)^2
  };

  struct Constant {
    ExactScalar value;
  };
  struct Table {
    std::vector<double> values;
    double tail;
  };

  SequenceSpec() : v_(Constant{0.0}) {}

  static SequenceSpec constant(double c) {
    if (!std::isfinite(c)) throw ValidationError("SequenceSpec: non-finite constant");
    return SequenceSpec(Constant{ExactScalar(c)});
  }
  // p/q, evaluated exactly by wide scalar types.
  static SequenceSpec rational(long p, long q) { return SequenceSpec(Constant{ExactScalar::rational(p, q)}); }
  static SequenceSpec table(std::vector<double> values, double tail) {
    for (double v : values) {
      if (!std::isfinite(v)) throw ValidationError("SequenceSpec: non-finite table entry");
    }
    if (!std::isfinite(tail)) throw ValidationError("SequenceSpec: non-finite tail");
    return SequenceSpec(Table{std::move(values), tail});
  }
  static SequenceSpec formula(Formula f) { return SequenceSpec(f); }

  static SequenceSpec formula(const std::string& id) {
    for (const auto& [name, f] : registry()) {
      if (name == id) return formula(f);
    }
    throw ValidationError("SequenceSpec: unknown formula '" + id + "'");
  }

  static const std::vector<std::pair<std::string, Formula>>& registry() {
    static const std::vector<std::pair<std::string, Formula>> r = {
        {"1/(n+1)", Formula::InvNPlus1},
        {"1/(n+2)", Formula::InvNPlus2},
        {"1/(n+1)^2", Formula::InvSquareNPlus1},
        {"1+1/(n+1)^2", Formula::OnePlusInvSquare},
    };
    return r;
  }

  double operator()(long n) const {
    if (n < 0) throw ValidationError("SequenceSpec: negative index");
    return std::visit(
        [n](const auto& s) -> double {
          using S = std::decay_t<decltype(s)>;
          if constexpr (std::is_same_v<S, Constant>) {
            return s.value.value;
          } else if constexpr (std::is_same_v<S, Table>) {
            return static_cast<std::size_t>(n) < s.values.size() ? s.values[n] : s.tail;
          } else {
            return eval_formula<double>(s, n);
          }
        },
        v_);
  }

  // a_n in scalar type T; formulas and rational constants are exact.
  template <typename T>
  T at(long n) const {
    if (n < 0) throw ValidationError("SequenceSpec: negative index");
    if (const auto* c = std::get_if<Constant>(&v_)) return c->value.template as<T>();
    if (const auto* f = std::get_if<Formula>(&v_)) return eval_formula<T>(*f, n);
    return T((*this)(n));
  }

  bool is_constant() const { return std::holds_alternative<Constant>(v_); }

  // Canonical text form, also accepted back by the config reader.
  std::string describe() const {
    return std::visit(
        [](const auto& s) -> std::string {
          using S = std::decay_t<decltype(s)>;
          if constexpr (std::is_same_v<S, Constant>) {
            if (s.value.ratio) {
              return std::to_string(s.value.ratio->first) + "/" + std::to_string(s.value.ratio->second);
            }
            return "constant(" + std::to_string(s.value.value) + ")";
          } else if constexpr (std::is_same_v<S, Table>) {
            return "table(" + std::to_string(s.values.size()) + " entries, tail " + std::to_string(s.tail) + ")";
          } else {
            for (const auto& [name, f] : registry()) {
              if (f == s) return name;
            }
            return "?";
          }
        },
        v_);
  }

  const std::variant<Constant, Table, Formula>& variant() const { return v_; }

 private:
  template <typename T>
  static T eval_formula(Formula f, long n) {
    const T m = T(n) + T(1);
    switch (f) {
      case Formula::InvNPlus1: return T(1) / m;
      case Formula::InvNPlus2: return T(1) / (m + T(1));
      case Formula::InvSquareNPlus1: return T(1) / (m * m);
      case Formula::OnePlusInvSquare: return T(1) + T(1) / (m * m);
    }
    return T(0);
  }

  template <typename V>
  explicit SequenceSpec(V v) : v_(std::move(v)) {}
  std::variant<Constant, Table, Formula> v_;
};

inline constexpr long kSequenceCheckTerms = 10000;

/// Checks lo < a_n < hi (or <= at a closed end) for the first
/// kSequenceCheckTerms terms and the table tail. Throws ValidationError
/// naming the first offending index.
inline void require_range(const SequenceSpec& seq, const std::string& name, double lo, double hi,
                          bool lo_closed = false, bool hi_closed = false) {
  auto ok = [&](double v) {
    const bool above = lo_closed ? v >= lo : v > lo;
    const bool below = hi_closed ? v <= hi : v < hi;
    return above && below;
  };
  for (long n = 0; n < kSequenceCheckTerms; ++n) {
    const double v = seq(n);
    if (!ok(v)) {
      throw ValidationError(name + "_" + std::to_string(n) + " = " + std::to_string(v) + " outside " +
                            (lo_closed ? "[" : "(") + std::to_string(lo) + ", " + std::to_string(hi) +
                            (hi_closed ? "]" : ")"));
    }
    if (seq.is_constant()) break;
  }
}

/// Gauge functions: continuous, strictly increasing, zero at zero.
class Gauge {
 public:
  enum class Kind { Linear, Square, ScaledSquare };

  static Gauge linear() { return Gauge(Kind::Linear, 1.0); }
  static Gauge square() { return Gauge(Kind::Square, 1.0); }
  static Gauge scaled_square(double c) {
    if (!(c > 0.0) || !std::isfinite(c)) throw ValidationError("Gauge: scale must be positive");
    return Gauge(Kind::ScaledSquare, c);
  }

  double operator()(double t) const {
    switch (kind_) {
      case Kind::Linear: return t;
      case Kind::Square: return t * t;
      case Kind::ScaledSquare: return scale_ * t * t;
    }
    return 0.0;
  }

  Kind kind() const { return kind_; }
  double scale() const { return scale_; }

  std::string describe() const {
    switch (kind_) {
      case Kind::Linear: return "t";
      case Kind::Square: return "t^2";
      case Kind::ScaledSquare: return std::to_string(scale_) + "*t^2";
    }
    return "?";
  }

 private:
  Gauge(Kind k, double c) : kind_(k), scale_(c) {}
  Kind kind_;
  double scale_;
};

}  // namespace splitfp
