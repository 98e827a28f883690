#include "etlab/expression.hpp"

#include <cctype>
#include <cmath>
#include <numbers>
#include <sstream>

#include "etlab/errors.hpp"

namespace etlab {
namespace {

std::string format_number(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

std::string format_point(std::span<const double> point) {
  std::ostringstream os;
  os.precision(17);
  os << "(";
  for (std::size_t i = 0; i < point.size(); ++i) {
    if (i) os << ", ";
    os << point[i];
  }
  os << ")";
  return os.str();
}

const char* function_name(Expr::Kind kind) {
  switch (kind) {
    case Expr::Kind::kSqrt: return "sqrt";
    case Expr::Kind::kExp: return "exp";
    case Expr::Kind::kLog: return "log";
    case Expr::Kind::kSin: return "sin";
    case Expr::Kind::kCos: return "cos";
    default: return "?";
  }
}

int precedence(Expr::Kind kind) {
  switch (kind) {
    case Expr::Kind::kAdd:
    case Expr::Kind::kSub: return 1;
    case Expr::Kind::kMul:
    case Expr::Kind::kDiv: return 2;
    case Expr::Kind::kNeg: return 3;
    case Expr::Kind::kPow: return 4;
    default: return 5;
  }
}

void print(const Expr::Node& n, std::ostream& os);

void print_operand(const Expr::Node& n, int parent, bool right,
                   std::ostream& os) {
  const int p = precedence(n.kind);
  const bool negative_constant = n.kind == Expr::Kind::kConstant && n.value < 0;
  const bool paren = p < parent || (right && p == parent) ||
                     (negative_constant && parent > 1);
  if (paren) os << "(";
  print(n, os);
  if (paren) os << ")";
}

void print(const Expr::Node& n, std::ostream& os) {
  using K = Expr::Kind;
  switch (n.kind) {
    case K::kConstant: os << format_number(n.value); break;
    case K::kVariable: os << n.name; break;
    case K::kAdd:
    case K::kSub:
    case K::kMul:
    case K::kDiv: {
      const int p = precedence(n.kind);
      const char* op = n.kind == K::kAdd   ? " + "
                       : n.kind == K::kSub ? " - "
                       : n.kind == K::kMul ? "*"
                                           : "/";
      print_operand(*n.lhs, p, false, os);
      os << op;
      print_operand(*n.rhs, p, true, os);
      break;
    }
    case K::kNeg:
      os << "-";
      print_operand(*n.lhs, precedence(K::kNeg), true, os);
      break;
    case K::kPow:
      print_operand(*n.lhs, precedence(K::kPow), true, os);
      os << "^" << n.index;
      break;
    default:
      os << function_name(n.kind) << "(";
      print(*n.lhs, os);
      os << ")";
  }
}

std::string node_string(const Expr::Node& n) {
  std::ostringstream os;
  print(n, os);
  return os.str();
}

double evaluate_node(const Expr::Node& n, std::span<const double> x) {
  using K = Expr::Kind;
  switch (n.kind) {
    case K::kConstant: return n.value;
    case K::kVariable:
      if (n.index >= static_cast<int>(x.size())) {
        throw DomainError("variable '" + n.name + "' has no coordinate value");
      }
      return x[n.index];
    case K::kAdd: return evaluate_node(*n.lhs, x) + evaluate_node(*n.rhs, x);
    case K::kSub: return evaluate_node(*n.lhs, x) - evaluate_node(*n.rhs, x);
    case K::kMul: return evaluate_node(*n.lhs, x) * evaluate_node(*n.rhs, x);
    case K::kDiv: {
      const double d = evaluate_node(*n.rhs, x);
      if (d == 0.0) {
        throw DomainError("division by zero in '" + node_string(n) +
                          "' at point " + format_point(x));
      }
      return evaluate_node(*n.lhs, x) / d;
    }
    case K::kNeg: return -evaluate_node(*n.lhs, x);
    case K::kPow: {
      const double b = evaluate_node(*n.lhs, x);
      if (b == 0.0 && n.index < 0) {
        throw DomainError("negative power of zero in '" + node_string(n) +
                          "' at point " + format_point(x));
      }
      return std::pow(b, n.index);
    }
    case K::kSqrt: {
      const double a = evaluate_node(*n.lhs, x);
      if (a < 0.0) {
        throw DomainError("sqrt of negative argument " + format_number(a) +
                          " in '" + node_string(n) + "' at point " +
                          format_point(x));
      }
      return std::sqrt(a);
    }
    case K::kExp: return std::exp(evaluate_node(*n.lhs, x));
    case K::kLog: {
      const double a = evaluate_node(*n.lhs, x);
      if (a <= 0.0) {
        throw DomainError("log of non-positive argument " + format_number(a) +
                          " in '" + node_string(n) + "' at point " +
                          format_point(x));
      }
      return std::log(a);
    }
    case K::kSin: return std::sin(evaluate_node(*n.lhs, x));
    case K::kCos: return std::cos(evaluate_node(*n.lhs, x));
  }
  return 0.0;
}

int max_var(const Expr::Node& n) {
  if (n.kind == Expr::Kind::kVariable) return n.index;
  int m = -1;
  if (n.lhs) m = std::max(m, max_var(*n.lhs));
  if (n.rhs) m = std::max(m, max_var(*n.rhs));
  return m;
}

}  // namespace

Expr::Expr(double value)
    : node_(std::make_shared<const Node>(Node{Kind::kConstant, value})) {}

Expr Expr::variable(int index, std::string name) {
  Node n{Kind::kVariable};
  n.index = index;
  n.name = std::move(name);
  return Expr(std::make_shared<const Node>(std::move(n)));
}

Expr Expr::unary(Kind kind, const Expr& a, int index) {
  Node n{kind};
  n.index = index;
  n.lhs = a.node_;
  return Expr(std::make_shared<const Node>(std::move(n)));
}

Expr Expr::binary(Kind kind, const Expr& a, const Expr& b) {
  Node n{kind};
  n.lhs = a.node_;
  n.rhs = b.node_;
  return Expr(std::make_shared<const Node>(std::move(n)));
}

int Expr::max_variable() const { return max_var(*node_); }

double Expr::evaluate(std::span<const double> point) const {
  return evaluate_node(*node_, point);
}

std::string Expr::to_string() const { return node_string(*node_); }

Expr Expr::shift_variables(int offset,
                           const std::vector<std::string>& names) const {
  std::unordered_map<const Node*, Expr> memo;
  auto rec = [&](auto&& self, const std::shared_ptr<const Node>& n) -> Expr {
    if (auto it = memo.find(n.get()); it != memo.end()) return it->second;
    Expr out(0.0);
    if (n->kind == Kind::kVariable) {
      const int idx = n->index + offset;
      out = variable(idx, idx < static_cast<int>(names.size()) ? names[idx]
                                                               : n->name);
    } else if (!n->lhs) {
      out = Expr(n);
    } else {
      Node copy = *n;
      copy.lhs = self(self, n->lhs).node_;
      if (n->rhs) copy.rhs = self(self, n->rhs).node_;
      out = Expr(std::make_shared<const Node>(std::move(copy)));
    }
    memo.emplace(n.get(), out);
    return out;
  };
  return rec(rec, node_);
}

Expr operator+(const Expr& a, const Expr& b) {
  if (a.is_constant() && b.is_constant()) return a.node_->value + b.node_->value;
  if (a.is_constant() && a.node_->value == 0.0) return b;
  if (b.is_constant() && b.node_->value == 0.0) return a;
  return Expr::binary(Expr::Kind::kAdd, a, b);
}

Expr operator-(const Expr& a, const Expr& b) {
  if (a.is_constant() && b.is_constant()) return a.node_->value - b.node_->value;
  if (b.is_constant() && b.node_->value == 0.0) return a;
  return Expr::binary(Expr::Kind::kSub, a, b);
}

Expr operator*(const Expr& a, const Expr& b) {
  if (a.is_constant() && b.is_constant()) return a.node_->value * b.node_->value;
  if (a.is_constant() && a.node_->value == 1.0) return b;
  if (b.is_constant() && b.node_->value == 1.0) return a;
  return Expr::binary(Expr::Kind::kMul, a, b);
}

Expr operator/(const Expr& a, const Expr& b) {
  if (a.is_constant() && b.is_constant() && b.node_->value != 0.0) {
    return a.node_->value / b.node_->value;
  }
  if (b.is_constant() && b.node_->value == 1.0) return a;
  return Expr::binary(Expr::Kind::kDiv, a, b);
}

Expr operator-(const Expr& a) {
  if (a.is_constant()) return -a.node_->value;
  return Expr::unary(Expr::Kind::kNeg, a);
}

Expr pow(const Expr& a, int exponent) {
  if (exponent == 1) return a;
  if (exponent == 0) return 1.0;
  return Expr::unary(Expr::Kind::kPow, a, exponent);
}

Expr sqrt(const Expr& a) { return Expr::unary(Expr::Kind::kSqrt, a); }
Expr exp(const Expr& a) { return Expr::unary(Expr::Kind::kExp, a); }
Expr log(const Expr& a) { return Expr::unary(Expr::Kind::kLog, a); }
Expr sin(const Expr& a) { return Expr::unary(Expr::Kind::kSin, a); }
Expr cos(const Expr& a) { return Expr::unary(Expr::Kind::kCos, a); }

JetEvaluator::JetEvaluator(std::vector<double> point, int order)
    : point_(std::move(point)), order_(order) {
  if (order < 0) throw ShapeMismatch("jet order must be non-negative");
}

Jet JetEvaluator::lift(const Expr& expr) { return lift_node(expr.node_); }

const Jet& JetEvaluator::lift_node(const std::shared_ptr<const Expr::Node>& np) {
  if (auto it = memo_.find(np.get()); it != memo_.end()) return it->second;
  using K = Expr::Kind;
  const Expr::Node& n = *np;
  const int nv = static_cast<int>(point_.size());
  auto domain_error = [&](const std::string& what, double arg) {
    return DomainError(what + " " + format_number(arg) + " in '" +
                       node_string(n) + "' at point " + format_point(point_));
  };

  Jet out(nv, order_);
  switch (n.kind) {
    case K::kConstant: out = Jet::constant(nv, order_, n.value); break;
    case K::kVariable:
      if (n.index >= nv) {
        throw DomainError("variable '" + n.name + "' is not a chart coordinate");
      }
      out = Jet::variable(nv, order_, n.index, point_[n.index]);
      break;
    case K::kAdd: out = lift_node(n.lhs) + lift_node(n.rhs); break;
    case K::kSub: out = lift_node(n.lhs) - lift_node(n.rhs); break;
    case K::kMul: out = lift_node(n.lhs) * lift_node(n.rhs); break;
    case K::kDiv: {
      const Jet& d = lift_node(n.rhs);
      if (d.value() == 0.0) throw domain_error("division by zero: denominator", 0.0);
      out = lift_node(n.lhs) * recip(d);
      break;
    }
    case K::kNeg: out = -lift_node(n.lhs); break;
    case K::kPow: {
      const Jet& b = lift_node(n.lhs);
      if (n.index < 0 && b.value() == 0.0) {
        throw domain_error("negative power of zero base", 0.0);
      }
      out = pow(b, n.index);
      break;
    }
    case K::kSqrt: {
      const Jet& a = lift_node(n.lhs);
      if (a.value() < 0.0) throw domain_error("sqrt of negative argument", a.value());
      if (a.value() == 0.0) {
        if (order_ > 0) {
          throw domain_error("sqrt is not differentiable at argument", 0.0);
        }
        out = Jet::constant(nv, order_, 0.0);
      } else {
        out = sqrt(a);
      }
      break;
    }
    case K::kExp: out = exp(lift_node(n.lhs)); break;
    case K::kLog: {
      const Jet& a = lift_node(n.lhs);
      if (a.value() <= 0.0) throw domain_error("log of non-positive argument", a.value());
      out = log(a);
      break;
    }
    case K::kSin: out = sin(lift_node(n.lhs)); break;
    case K::kCos: out = cos(lift_node(n.lhs)); break;
  }
  return memo_.emplace(np.get(), std::move(out)).first->second;
}

Jet lift(const Expr& expr, std::span<const double> point, int order) {
  JetEvaluator ev(std::vector<double>(point.begin(), point.end()), order);
  return ev.lift(expr);
}

namespace {

class Parser {
 public:
  Parser(const std::string& text, const std::vector<std::string>& vars)
      : text_(text), vars_(vars) {}

  Expr parse() {
    Expr e = parse_sum();
    skip_space();
    if (pos_ < text_.size()) fail("unexpected '" + std::string(1, text_[pos_]) + "'");
    return e;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw ParseError("expression '" + text_ + "': " + what + " at column " +
                         std::to_string(pos_ + 1),
                     1, static_cast<int>(pos_ + 1));
  }

  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_space();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  Expr parse_sum() {
    Expr e = parse_product();
    for (;;) {
      if (accept('+')) e = e + parse_product();
      else if (accept('-')) e = e - parse_product();
      else return e;
    }
  }

  Expr parse_product() {
    Expr e = parse_unary();
    for (;;) {
      if (accept('*')) e = e * parse_unary();
      else if (accept('/')) e = e / parse_unary();
      else return e;
    }
  }

  Expr parse_unary() {
    if (accept('-')) return -parse_unary();
    if (accept('+')) return parse_unary();
    return parse_power();
  }

  Expr parse_power() {
    Expr base = parse_primary();
    if (!accept('^')) return base;
    skip_space();
    bool negative = false;
    if (accept('-')) negative = true;
    else accept('+');
    skip_space();
    const std::size_t start = pos_;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    if (start == pos_) fail("expected an integer exponent");
    if (pos_ < text_.size() && (text_[pos_] == '.' || text_[pos_] == 'e' || text_[pos_] == 'E')) {
      fail("exponent must be an integer");
    }
    const int e = std::stoi(text_.substr(start, pos_ - start));
    return pow(base, negative ? -e : e);
  }

  Expr parse_primary() {
    skip_space();
    if (pos_ >= text_.size()) fail("unexpected end of expression");
    const char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      Expr e = parse_sum();
      if (!accept(')')) fail("expected ')'");
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      const char* begin = text_.c_str() + pos_;
      char* end = nullptr;
      const double v = std::strtod(begin, &end);
      if (end == begin) fail("malformed number");
      pos_ += static_cast<std::size_t>(end - begin);
      return v;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      const std::size_t start = pos_;
      while (pos_ < text_.size() &&
             (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) {
        ++pos_;
      }
      const std::string id = text_.substr(start, pos_ - start);
      skip_space();
      if (pos_ < text_.size() && text_[pos_] == '(') {
        ++pos_;
        Expr arg = parse_sum();
        if (!accept(')')) fail("expected ')' after argument of " + id);
        if (id == "sqrt") return sqrt(arg);
        if (id == "exp") return exp(arg);
        if (id == "log") return log(arg);
        if (id == "sin") return sin(arg);
        if (id == "cos") return cos(arg);
        pos_ = start;
        fail("unknown function '" + id + "'");
      }
      for (std::size_t i = 0; i < vars_.size(); ++i) {
        if (vars_[i] == id) return Expr::variable(static_cast<int>(i), id);
      }
      if (id == "pi") return std::numbers::pi;
      pos_ = start;
      fail("unknown identifier '" + id + "'");
    }
    fail("unexpected '" + std::string(1, c) + "'");
  }

  const std::string& text_;
  const std::vector<std::string>& vars_;
  std::size_t pos_ = 0;
};

}  // namespace

Expr parse_expression(const std::string& text,
                      const std::vector<std::string>& variables) {
  return Parser(text, variables).parse();
}

}  // namespace etlab
