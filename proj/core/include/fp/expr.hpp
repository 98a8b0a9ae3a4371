#pragma once

#include <memory>
#include <span>
#include <string>
#include <vector>

#include "fp/errors.hpp"
#include "fp/eval_point.hpp"
#include "fp/jet.hpp"

namespace fp {

enum class UnaryFn { Neg, Sqrt, Exp, Log, Sin, Cos, Abs };
enum class BinaryOp { Add, Sub, Mul, Div, Pow };

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

/// Immutable expression tree over real literals, the chart variables
/// x1..xn / y1..yn, arithmetic, and the smooth function library. Trees are
/// freely shareable across threads.
struct Expr {
  enum class Kind { Number, Variable, Unary, Binary };

  Kind kind;
  double number = 0.0;
  int var = -1;  // flat variable id: [0, n) -> x, [n, 2n) -> y
  int dim = 0;   // n the tree was bound against
  UnaryFn fn = UnaryFn::Neg;
  BinaryOp op = BinaryOp::Add;
  ExprPtr a, b;

  static ExprPtr make_number(double v);
  static ExprPtr make_variable(int var, int dim);
  static ExprPtr make_unary(UnaryFn fn, ExprPtr a);
  static ExprPtr make_binary(BinaryOp op, ExprPtr a, ExprPtr b);
};

/// Parses an expression bound to dimension n. Standard precedence: ^ binds
/// tightest (right-associative), then unary minus, then * /, then + -.
/// Throws ParseError with the byte offset on malformed input, unknown
/// identifiers, or variable indices above n.
ExprPtr parse_expression(const std::string& text, int n);

/// Precedence-aware pretty printer; parsing the result reproduces the tree.
std::string to_string(const ExprPtr& expr);

/// Structural equality.
bool equal(const ExprPtr& a, const ExprPtr& b);

/// True when an abs node occurs anywhere in the tree (abs breaks
/// smoothness at zero, which frame validation warns about).
bool contains_abs(const ExprPtr& expr);

/// Jet of the expression at a point to the requested order. DomainError
/// messages name the offending subexpression.
Jet evaluate(const ExprPtr& expr, const EvalPoint& point, int order);

/// Jet evaluation against explicit per-variable jets (all 2n of them, in a
/// shared space). Used where the chart variables are themselves jets of
/// other coordinates.
Jet evaluate_with(const ExprPtr& expr, std::span<const Jet> vars);

/// Plain double evaluation; shares no code with jet arithmetic and backs
/// the finite-difference oracle.
double evaluate_real(const ExprPtr& expr, const EvalPoint& point);

}  // namespace fp
