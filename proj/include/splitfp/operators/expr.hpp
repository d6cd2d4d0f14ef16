#pragma once

#include <cctype>
#include <cstdlib>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <type_traits>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "splitfp/core/error.hpp"

namespace splitfp {

// Converts a decimal literal to T without a round trip through double, so
// a wide decimal type sees "0.1" as exactly one tenth.
template <typename T>
T scalar_from_text(const std::string& text) {
  if constexpr (std::is_same_v<T, double>) {
    return std::strtod(text.c_str(), nullptr);
  } else {
    return T(text.c_str());
  }
}

/// Rational expression in one variable x:
///   expr  := term (('+' | '-') term)*
///   term  := unary (('*' | '/') unary)*
///   unary := '-' unary | power
///   power := primary ('^' ['-'] integer)?
///   primary := number | 'x' | '(' expr ')'
/// Numeric literals are kept as text and converted per evaluation type.
class Expr {
 public:
  static Expr parse(const std::string& text) {
    Expr e;
    e.text_ = text;
    Parser p{text, 0, e.nodes_};
    e.root_ = p.expr();
    p.skip_ws();
    if (p.pos != text.size()) p.fail("unexpected '" + std::string(1, text[p.pos]) + "'");
    return e;
  }

  const std::string& text() const { return text_; }

  template <typename T>
  T eval(const T& x) const {
    return eval_node<T>(root_, x);
  }

 private:
  struct Node {
    enum class Op { Num, Var, Neg, Add, Sub, Mul, Div, Pow };
    Node(Op o, int l = -1, int r = -1, int e = 0, std::string lit = {})
        : op(o), lhs(l), rhs(r), exponent(e), literal(std::move(lit)) {}
    Op op;
    int lhs;
    int rhs;
    int exponent;
    std::string literal;
  };

  struct Parser {
    const std::string& s;
    std::size_t pos;
    std::vector<Node>& nodes;

    [[noreturn]] void fail(const std::string& why) const {
      throw ValidationError("expression '" + s + "' at " + std::to_string(pos) + ": " + why);
    }
    void skip_ws() {
      while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
    }
    bool accept(char c) {
      skip_ws();
      if (pos < s.size() && s[pos] == c) {
        ++pos;
        return true;
      }
      return false;
    }
    int push(Node n) {
      nodes.push_back(std::move(n));
      return static_cast<int>(nodes.size()) - 1;
    }

    int expr() {
      int lhs = term();
      for (;;) {
        if (accept('+')) {
          lhs = push({Node::Op::Add, lhs, term()});
        } else if (accept('-')) {
          lhs = push({Node::Op::Sub, lhs, term()});
        } else {
          return lhs;
        }
      }
    }
    int term() {
      int lhs = unary();
      for (;;) {
        if (accept('*')) {
          lhs = push({Node::Op::Mul, lhs, unary()});
        } else if (accept('/')) {
          lhs = push({Node::Op::Div, lhs, unary()});
        } else {
          return lhs;
        }
      }
    }
    int unary() {
      if (accept('-')) return push({Node::Op::Neg, unary()});
      return power();
    }
    int power() {
      int base = primary();
      if (!accept('^')) return base;
      const bool negative = accept('-');
      skip_ws();
      const std::size_t start = pos;
      while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
      if (start == pos) fail("integer exponent expected");
      if (pos - start > 4) fail("exponent too large");
      Node n{Node::Op::Pow, base};
      n.exponent = std::stoi(s.substr(start, pos - start)) * (negative ? -1 : 1);
      return push(std::move(n));
    }
    int primary() {
      skip_ws();
      if (pos >= s.size()) fail("unexpected end");
      const char c = s[pos];
      if (c == 'x') {
        ++pos;
        return push({Node::Op::Var});
      }
      if (c == '(') {
        ++pos;
        const int inner = expr();
        if (!accept(')')) fail("')' expected");
        return inner;
      }
      if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
      fail("unexpected '" + std::string(1, c) + "'");
    }
    int number() {
      const std::size_t start = pos;
      bool digits = false;
      while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) ++pos, digits = true;
      if (pos < s.size() && s[pos] == '.') {
        ++pos;
        while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) ++pos, digits = true;
      }
      if (!digits) fail("malformed number");
      if (pos < s.size() && (s[pos] == 'e' || s[pos] == 'E')) {
        ++pos;
        if (pos < s.size() && (s[pos] == '+' || s[pos] == '-')) ++pos;
        const std::size_t exp_start = pos;
        while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
        if (exp_start == pos) fail("malformed exponent");
      }
      Node n{Node::Op::Num};
      n.literal = s.substr(start, pos - start);
      return push(std::move(n));
    }
  };

  template <typename T>
  T eval_node(int i, const T& x) const {
    const Node& n = nodes_[i];
    switch (n.op) {
      case Node::Op::Num: return scalar_from_text<T>(n.literal);
      case Node::Op::Var: return x;
      case Node::Op::Neg: return -eval_node<T>(n.lhs, x);
      case Node::Op::Add: return eval_node<T>(n.lhs, x) + eval_node<T>(n.rhs, x);
      case Node::Op::Sub: return eval_node<T>(n.lhs, x) - eval_node<T>(n.rhs, x);
      case Node::Op::Mul: return eval_node<T>(n.lhs, x) * eval_node<T>(n.rhs, x);
      case Node::Op::Div: {
        const T num = eval_node<T>(n.lhs, x);
        const T den = eval_node<T>(n.rhs, x);
        if (den == T(0)) throw NumericalBreakdown("expression '" + text_ + "': division by zero");
        return num / den;
      }
      case Node::Op::Pow: {
        const T base = eval_node<T>(n.lhs, x);
        T r(1);
        for (int k = 0; k < std::abs(n.exponent); ++k) r = r * base;
        if (n.exponent < 0) {
          if (r == T(0)) throw NumericalBreakdown("expression '" + text_ + "': division by zero");
          r = T(1) / r;
        }
        return r;
      }
    }
    return T(0);
  }

  std::vector<Node> nodes_;
  int root_ = -1;
  std::string text_;
};

/// A real parameter that may also carry an exact ratio p/q, so that wide
/// evaluation types see 1/3 rather than its binary rounding.
struct ExactScalar {
  double value = 0.0;
  std::optional<std::pair<long, long>> ratio;

  ExactScalar() = default;
  ExactScalar(double v) : value(v) {}  // NOLINT(google-explicit-constructor)
  static ExactScalar rational(long p, long q) {
    if (q == 0) throw ValidationError("ExactScalar: zero denominator");
    ExactScalar s(static_cast<double>(p) / static_cast<double>(q));
    s.ratio = std::make_pair(p, q);
    return s;
  }

  template <typename T>
  T as() const {
    if (ratio) return T(ratio->first) / T(ratio->second);
    return T(value);
  }
};

class Rule;
using RulePtr = std::shared_ptr<const Rule>;

/// Symbolic description of an operator that can be re-evaluated over any
/// scalar type. Covers the configurable and catalog operators:
///   Expr        1-D rational expression
///   Piecewise   1-D, `left` on x <= at, `right` on x > at
///   Affine      x -> M x + c
///   Relaxed     x -> (1 - a) x + a R(x)
///   Combination x -> sum_i w_i R_i(x)
class Rule {
 public:
  struct ExprRule {
    Expr e;
  };
  struct PiecewiseRule {
    std::string at;
    Expr left;
    Expr right;
  };
  struct AffineRule {
    Eigen::MatrixXd m;
    Eigen::VectorXd c;
  };
  struct RelaxedRule {
    ExactScalar alpha;
    RulePtr inner;
  };
  struct CombinationRule {
    std::vector<ExactScalar> weights;
    std::vector<RulePtr> rules;
  };
  using Variant = std::variant<ExprRule, PiecewiseRule, AffineRule, RelaxedRule, CombinationRule>;

  static RulePtr expr(const std::string& text) { return make(ExprRule{Expr::parse(text)}); }

  static RulePtr piecewise(const std::string& at, const std::string& left, const std::string& right) {
    // Validates the breakpoint literal through the same grammar.
    Expr::parse(at);
    return make(PiecewiseRule{at, Expr::parse(left), Expr::parse(right)});
  }

  static RulePtr affine(Eigen::MatrixXd m, Eigen::VectorXd c) {
    if (m.rows() != m.cols() || m.rows() != c.size() || m.rows() < 1) {
      throw DimensionError("Rule::affine: need square M and matching offset");
    }
    return make(AffineRule{std::move(m), std::move(c)});
  }

  static RulePtr relaxed(ExactScalar alpha, RulePtr inner) { return make(RelaxedRule{alpha, std::move(inner)}); }

  static RulePtr combination(std::vector<ExactScalar> weights, std::vector<RulePtr> rules) {
    if (weights.size() != rules.size() || rules.empty()) {
      throw ValidationError("Rule::combination: weights and rules must be nonempty and equal length");
    }
    return make(CombinationRule{std::move(weights), std::move(rules)});
  }

  const Variant& variant() const { return v_; }

  int dim() const {
    return std::visit(
        [](const auto& r) -> int {
          using R = std::decay_t<decltype(r)>;
          if constexpr (std::is_same_v<R, AffineRule>) return static_cast<int>(r.m.rows());
          else if constexpr (std::is_same_v<R, RelaxedRule>) return r.inner->dim();
          else if constexpr (std::is_same_v<R, CombinationRule>) return r.rules.front()->dim();
          else return 1;
        },
        v_);
  }

  template <typename T>
  std::vector<T> eval(const std::vector<T>& x) const {
    if (static_cast<int>(x.size()) != dim()) throw DimensionError("Rule::eval: dimension mismatch");
    return std::visit(
        [&](const auto& r) -> std::vector<T> {
          using R = std::decay_t<decltype(r)>;
          if constexpr (std::is_same_v<R, ExprRule>) {
            return {r.e.template eval<T>(x[0])};
          } else if constexpr (std::is_same_v<R, PiecewiseRule>) {
            const T at = scalar_from_text<T>(r.at);
            return {x[0] <= at ? r.left.template eval<T>(x[0]) : r.right.template eval<T>(x[0])};
          } else if constexpr (std::is_same_v<R, AffineRule>) {
            std::vector<T> out(x.size());
            for (Eigen::Index i = 0; i < r.m.rows(); ++i) {
              T acc(r.c[i]);
              for (Eigen::Index j = 0; j < r.m.cols(); ++j) acc += T(r.m(i, j)) * x[j];
              out[i] = acc;
            }
            return out;
          } else if constexpr (std::is_same_v<R, RelaxedRule>) {
            const T a = r.alpha.template as<T>();
            const std::vector<T> tx = r.inner->template eval<T>(x);
            std::vector<T> out(x.size());
            for (std::size_t i = 0; i < x.size(); ++i) out[i] = (T(1) - a) * x[i] + a * tx[i];
            return out;
          } else {
            std::vector<T> out(x.size(), T(0));
            for (std::size_t k = 0; k < r.rules.size(); ++k) {
              const T w = r.weights[k].template as<T>();
              const std::vector<T> tx = r.rules[k]->template eval<T>(x);
              for (std::size_t i = 0; i < x.size(); ++i) out[i] += w * tx[i];
            }
            return out;
          }
        },
        v_);
  }

  std::string describe() const {
    return std::visit(
        [](const auto& r) -> std::string {
          using R = std::decay_t<decltype(r)>;
          if constexpr (std::is_same_v<R, ExprRule>) {
            return r.e.text();
          } else if constexpr (std::is_same_v<R, PiecewiseRule>) {
            return "x <= " + r.at + " ? " + r.left.text() + " : " + r.right.text();
          } else if constexpr (std::is_same_v<R, AffineRule>) {
            return "affine(" + std::to_string(r.m.rows()) + ")";
          } else if constexpr (std::is_same_v<R, RelaxedRule>) {
            return "relax(" + std::to_string(r.alpha.value) + ", " + r.inner->describe() + ")";
          } else {
            std::string s = "combine(";
            for (std::size_t k = 0; k < r.rules.size(); ++k) {
              s += (k ? ", " : "") + std::to_string(r.weights[k].value) + "*" + r.rules[k]->describe();
            }
            return s + ")";
          }
        },
        v_);
  }

 private:
  explicit Rule(Variant v) : v_(std::move(v)) {}
  static RulePtr make(Variant v) { return RulePtr(new Rule(std::move(v))); }
  Variant v_;
};

}  // namespace splitfp
