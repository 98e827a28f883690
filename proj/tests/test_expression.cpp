#include <gtest/gtest.h>

#include <cmath>

#include "etlab/expression.hpp"

namespace etlab {
namespace {

const std::vector<std::string> kVars{"x", "y"};

TEST(ExpressionParse, Arithmetic) {
  const Expr e = parse_expression("2*x^2 - y/4 + sqrt(x) * exp(y) - -1", kVars);
  const double p[] = {1.5, -0.5};
  EXPECT_NEAR(e.evaluate(p),
              2 * 1.5 * 1.5 + 0.125 + std::sqrt(1.5) * std::exp(-0.5) + 1.0, 1e-14);
}

TEST(ExpressionParse, PowersBindTighterThanUnaryMinus) {
  const double p[] = {3.0, 0.0};
  EXPECT_DOUBLE_EQ(parse_expression("-x^2", kVars).evaluate(p), -9.0);
  EXPECT_DOUBLE_EQ(parse_expression("x^-2", kVars).evaluate(p), 1.0 / 9.0);
  EXPECT_DOUBLE_EQ(parse_expression("2^3", kVars).evaluate(p), 8.0);
}

TEST(ExpressionParse, FunctionsAndPi) {
  const double p[] = {0.25, 0.0};
  EXPECT_NEAR(parse_expression("sin(pi*x) + cos(pi*x) + log(4*x)", kVars).evaluate(p),
              std::sqrt(2.0), 1e-15);
}

TEST(ExpressionParse, ErrorsCarryColumn) {
  try {
    parse_expression("x + * y", kVars);
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 1);
    EXPECT_EQ(e.column(), 5);
  }
  EXPECT_THROW(parse_expression("x + z", kVars), ParseError);
  EXPECT_THROW(parse_expression("x^1.5", kVars), ParseError);
  EXPECT_THROW(parse_expression("tan(x)", kVars), ParseError);
  EXPECT_THROW(parse_expression("(x + y", kVars), ParseError);
  EXPECT_THROW(parse_expression("", kVars), ParseError);
}

TEST(ExpressionEvaluate, DomainErrorsNameTheNode) {
  const Expr e = parse_expression("1 + log(x)", kVars);
  const double p[] = {-1.0, 0.0};
  try {
    e.evaluate(p);
    FAIL();
  } catch (const DomainError& err) {
    EXPECT_NE(std::string(err.what()).find("log(x)"), std::string::npos) << err.what();
  }
  try {
    lift(e, p, 3);
    FAIL();
  } catch (const DomainError& err) {
    EXPECT_NE(std::string(err.what()).find("log(x)"), std::string::npos) << err.what();
  }
  const double q[] = {0.0, 0.0};
  EXPECT_THROW(parse_expression("1/x", kVars).evaluate(q), DomainError);
  EXPECT_THROW(parse_expression("sqrt(y - 1)", kVars).evaluate(q), DomainError);
}

TEST(ExpressionPrint, RoundTrip) {
  const char* texts[] = {"x - (y - 1)", "x / (y * 2)", "-(x + y)^3", "sqrt(x) * exp(-y)",
                         "x^-2 + cos(x*y)"};
  const double p[] = {1.3, 0.7};
  for (const char* t : texts) {
    const Expr e = parse_expression(t, kVars);
    const Expr back = parse_expression(e.to_string(), kVars);
    EXPECT_NEAR(back.evaluate(p), e.evaluate(p), 1e-15) << t << " -> " << e.to_string();
  }
}

TEST(ExpressionShift, RenumbersVariables) {
  const Expr e = parse_expression("x * y^2", kVars);
  EXPECT_EQ(e.max_variable(), 1);
  const Expr s = e.shift_variables(1, {"r", "a", "b"});
  EXPECT_EQ(s.max_variable(), 2);
  const double p[] = {100.0, 2.0, 3.0};
  EXPECT_DOUBLE_EQ(s.evaluate(p), 18.0);
  EXPECT_EQ(s.to_string().find('x'), std::string::npos);
}

TEST(ExpressionLift, SharedSubtreesAndMixedPartials) {
  const Expr x = Expr::variable(0, "x");
  const Expr y = Expr::variable(1, "y");
  const Expr s = sin(x * y);
  const Expr e = s * s + s;
  const double p[] = {0.4, 0.9};
  const Jet j = lift(e, p, 3);
  const double xy = 0.36;
  // d/dx [sin^2(xy) + sin(xy)] = y (2 sin cos + cos)
  EXPECT_NEAR(j.partial({1, 0}), 0.9 * (2 * std::sin(xy) * std::cos(xy) + std::cos(xy)), 1e-14);
}

}  // namespace
}  // namespace etlab
