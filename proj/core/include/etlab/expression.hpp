#pragma once

#include <memory>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "etlab/jet.hpp"

namespace etlab {

/// Scalar expression tree over coordinate variables.
///
/// Nodes: constant, variable, + - * /, integer power, negation, sqrt, exp,
/// log, sin, cos. Expressions are immutable and share subtrees, so they are
/// cheap to copy and safe to evaluate from several threads.
class Expr {
 public:
  enum class Kind {
    kConstant,
    kVariable,
    kAdd,
    kSub,
    kMul,
    kDiv,
    kNeg,
    kPow,
    kSqrt,
    kExp,
    kLog,
    kSin,
    kCos,
  };

  struct Node {
    Kind kind;
    double value = 0.0;  // constant
    int index = 0;       // variable index or integer exponent
    std::string name;    // variable name
    std::shared_ptr<const Node> lhs;
    std::shared_ptr<const Node> rhs;
  };

  Expr(double value);  // NOLINT: implicit so that 2 * x reads naturally
  static Expr variable(int index, std::string name);

  Kind kind() const noexcept { return node_->kind; }
  const Node& node() const noexcept { return *node_; }
  bool is_constant() const noexcept { return node_->kind == Kind::kConstant; }
  /// Largest variable index referenced, or -1.
  int max_variable() const;

  double evaluate(std::span<const double> point) const;
  std::string to_string() const;

  /// Same expression with every variable index shifted by `offset` and
  /// renamed through `names` (indexed by the new variable index).
  Expr shift_variables(int offset, const std::vector<std::string>& names) const;

  friend Expr operator+(const Expr& a, const Expr& b);
  friend Expr operator-(const Expr& a, const Expr& b);
  friend Expr operator*(const Expr& a, const Expr& b);
  friend Expr operator/(const Expr& a, const Expr& b);
  friend Expr operator-(const Expr& a);
  friend Expr pow(const Expr& a, int exponent);
  friend Expr sqrt(const Expr& a);
  friend Expr exp(const Expr& a);
  friend Expr log(const Expr& a);
  friend Expr sin(const Expr& a);
  friend Expr cos(const Expr& a);

 private:
  explicit Expr(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  static Expr unary(Kind kind, const Expr& a, int index = 0);
  static Expr binary(Kind kind, const Expr& a, const Expr& b);

  std::shared_ptr<const Node> node_;

  friend class JetEvaluator;
};

/// Expands expressions into jets at a fixed point and order. Shared subtrees
/// are expanded once per evaluator.
class JetEvaluator {
 public:
  JetEvaluator(std::vector<double> point, int order);

  int order() const noexcept { return order_; }
  std::span<const double> point() const noexcept { return point_; }

  /// Throws DomainError naming the offending node when the expansion point
  /// lies outside the domain of a subexpression.
  Jet lift(const Expr& expr);

 private:
  const Jet& lift_node(const std::shared_ptr<const Expr::Node>& node);

  std::vector<double> point_;
  int order_;
  std::unordered_map<const Expr::Node*, Jet> memo_;
};

/// Jet of `expr` at `point` truncated at `order`.
Jet lift(const Expr& expr, std::span<const double> point, int order);

/// Parses the infix grammar: numbers, declared coordinate names, + - * /,
/// `^` with an integer exponent, parentheses and the calls sqrt, exp, log,
/// sin, cos. `pi` is a predefined constant. Errors carry the 1-based column.
Expr parse_expression(const std::string& text,
                      const std::vector<std::string>& variables);

}  // namespace etlab
