#include <doctest.h>

#include <cmath>

#include "fp/expr.hpp"
#include "fp/sampling.hpp"

using namespace fp;

namespace {

ExprPtr rand_expr(Rng& rng, int n, int depth) {
  if (depth == 0 || rng.next_unit() < 0.25) {
    if (rng.next_unit() < 0.5) return Expr::make_number(rng.uniform(0.1, 2.0));
    return Expr::make_variable(static_cast<int>(rng.next_u64() % (2u * n)), n);
  }
  switch (rng.next_u64() % 8) {
    case 0: return Expr::make_binary(BinaryOp::Add, rand_expr(rng, n, depth - 1),
                                     rand_expr(rng, n, depth - 1));
    case 1: return Expr::make_binary(BinaryOp::Sub, rand_expr(rng, n, depth - 1),
                                     rand_expr(rng, n, depth - 1));
    case 2: return Expr::make_binary(BinaryOp::Mul, rand_expr(rng, n, depth - 1),
                                     rand_expr(rng, n, depth - 1));
    case 3: {
      // safe division: denominator 2 + u^2
      ExprPtr u = rand_expr(rng, n, depth - 1);
      ExprPtr den = Expr::make_binary(BinaryOp::Add, Expr::make_number(2.0),
                                      Expr::make_binary(BinaryOp::Mul, u, u));
      return Expr::make_binary(BinaryOp::Div, rand_expr(rng, n, depth - 1), den);
    }
    case 4: return Expr::make_unary(UnaryFn::Sin, rand_expr(rng, n, depth - 1));
    case 5: return Expr::make_unary(UnaryFn::Cos, rand_expr(rng, n, depth - 1));
    case 6: {
      ExprPtr u = rand_expr(rng, n, depth - 1);
      ExprPtr arg = Expr::make_binary(BinaryOp::Add, Expr::make_number(1.5),
                                      Expr::make_binary(BinaryOp::Mul, u, u));
      return Expr::make_unary(UnaryFn::Log, arg);
    }
    default: return Expr::make_unary(UnaryFn::Neg, rand_expr(rng, n, depth - 1));
  }
}

}  // namespace

TEST_SUITE("expr") {

TEST_CASE("grammar basics") {
  CHECK_NOTHROW(parse_expression("exp(x1)", 2));
  CHECK_NOTHROW(parse_expression("y1/sqrt(y1^2+y2^2)", 2));
  const ExprPtr e = parse_expression("exp(x1)", 2);
  CHECK(e->kind == Expr::Kind::Unary);
  CHECK(e->fn == UnaryFn::Exp);
  CHECK(e->a->kind == Expr::Kind::Variable);
}

TEST_CASE("bind-time variable range check") {
  CHECK_THROWS_WITH_AS(parse_expression("x3", 2), doctest::Contains("variable index out of range"),
                       ParseError);
  CHECK_THROWS_AS(parse_expression("y0", 2), ParseError);
  CHECK_NOTHROW(parse_expression("x3", 3));
}

TEST_CASE("syntax errors carry byte offsets") {
  try {
    parse_expression("x1 + * y2", 2);
    FAIL("expected ParseError");
  } catch (const ParseError& err) {
    CHECK(err.offset() == 5);
  }
  CHECK_THROWS_AS(parse_expression("", 2), ParseError);
  CHECK_THROWS_AS(parse_expression("sin(x1", 2), ParseError);
  CHECK_THROWS_AS(parse_expression("foo(x1)", 2), ParseError);
  CHECK_THROWS_AS(parse_expression("x1 !! y1", 2), ParseError);
}

TEST_CASE("precedence") {
  // ^ binds tightest and is right-associative; unary minus below ^.
  CHECK(equal(parse_expression("-x1^2", 2),
              Expr::make_unary(UnaryFn::Neg,
                               Expr::make_binary(BinaryOp::Pow, Expr::make_variable(0, 2),
                                                 Expr::make_number(2.0)))));
  CHECK(equal(parse_expression("x1^2^3", 2),
              Expr::make_binary(BinaryOp::Pow, Expr::make_variable(0, 2),
                                Expr::make_binary(BinaryOp::Pow, Expr::make_number(2.0),
                                                  Expr::make_number(3.0)))));
  CHECK(equal(parse_expression("x1 - x2 - y1", 2),
              Expr::make_binary(BinaryOp::Sub,
                                Expr::make_binary(BinaryOp::Sub, Expr::make_variable(0, 2),
                                                  Expr::make_variable(1, 2)),
                                Expr::make_variable(2, 2))));
  // pow(a, b) is the ^ node
  CHECK(equal(parse_expression("pow(x1, 2)", 2), parse_expression("x1^2", 2)));
}

TEST_CASE("evaluation examples") {
  const EvalPoint p({2.0, 0.0}, {0.0, 3.0});
  const Jet bilinear = evaluate(parse_expression("x1*y2", 2), p, 1);
  CHECK(bilinear.value() == doctest::Approx(6.0));
  CHECK(bilinear.partial(MultiIndex::of({1, 0, 0, 0})) == doctest::Approx(3.0));
  CHECK(bilinear.partial(MultiIndex::of({0, 0, 0, 1})) == doctest::Approx(2.0));

  const EvalPoint q({0.0, 0.0}, {3.0, 4.0});
  const Jet norm = evaluate(parse_expression("sqrt(y1^2+y2^2)", 2), q, 1);
  CHECK(norm.value() == doctest::Approx(5.0));
  CHECK(norm.partial(MultiIndex::of({0, 0, 1, 0})) == doctest::Approx(0.6));
  CHECK(norm.partial(MultiIndex::of({0, 0, 0, 1})) == doctest::Approx(0.8));
}

TEST_CASE("domain error names the offending subexpression") {
  const EvalPoint p({-1.0, 0.0}, {1.0, 1.0});
  try {
    evaluate(parse_expression("y1 + log(x1)", 2), p, 1);
    FAIL("expected DomainError");
  } catch (const DomainError& err) {
    CHECK(std::string(err.what()).find("log(x1)") != std::string::npos);
  }
}

TEST_CASE("pretty-print round trip is structurally identical") {
  Rng rng(5150);
  for (int trial = 0; trial < 200; ++trial) {
    const ExprPtr e = rand_expr(rng, 2, 4);
    const std::string printed = to_string(e);
    const ExprPtr reparsed = parse_expression(printed, 2);
    CHECK(equal(e, reparsed));
  }
}

TEST_CASE("fuzz corpus never crashes the parser") {
  Rng rng(424242);
  const std::string alphabet = "xy123+-*/^()., abqsinclogexprt";
  int rejected = 0;
  for (int trial = 0; trial < 2000; ++trial) {
    std::string text;
    const int len = 1 + static_cast<int>(rng.next_u64() % 24);
    for (int i = 0; i < len; ++i) {
      text.push_back(alphabet[rng.next_u64() % alphabet.size()]);
    }
    try {
      parse_expression(text, 2);
    } catch (const ParseError&) {
      ++rejected;
    }
  }
  CHECK(rejected > 0);  // most random strings are malformed
}

TEST_CASE("jet and plain-double evaluation agree") {
  Rng rng(777);
  for (int trial = 0; trial < 50; ++trial) {
    const ExprPtr e = rand_expr(rng, 2, 4);
    const EvalPoint p({rng.uniform(-1, 1), rng.uniform(-1, 1)},
                      {rng.uniform(0.5, 1.5), rng.uniform(0.5, 1.5)});
    double direct = 0.0;
    try {
      direct = evaluate_real(e, p);
    } catch (const DomainError&) {
      continue;
    }
    const Jet jet = evaluate(e, p, 0);
    CHECK(jet.value() == doctest::Approx(direct).epsilon(1e-12));
  }
}

TEST_CASE("abs is detected for validation warnings") {
  CHECK(contains_abs(parse_expression("abs(y1) + x1", 2)));
  CHECK_FALSE(contains_abs(parse_expression("y1 + x1", 2)));
}

}  // TEST_SUITE
