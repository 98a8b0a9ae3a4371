#include "fp/expr.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstring>
#include <sstream>

namespace fp {

ExprPtr Expr::make_number(double v) {
  auto e = std::make_shared<Expr>();
  e->kind = Kind::Number;
  e->number = v;
  return e;
}

ExprPtr Expr::make_variable(int var, int dim) {
  auto e = std::make_shared<Expr>();
  e->kind = Kind::Variable;
  e->var = var;
  e->dim = dim;
  return e;
}

ExprPtr Expr::make_unary(UnaryFn fn, ExprPtr a) {
  auto e = std::make_shared<Expr>();
  e->kind = Kind::Unary;
  e->fn = fn;
  e->a = std::move(a);
  return e;
}

ExprPtr Expr::make_binary(BinaryOp op, ExprPtr a, ExprPtr b) {
  auto e = std::make_shared<Expr>();
  e->kind = Kind::Binary;
  e->op = op;
  e->a = std::move(a);
  e->b = std::move(b);
  return e;
}

// ---------------------------------------------------------------------------
// Parser
// ---------------------------------------------------------------------------

namespace {

struct Parser {
  const std::string& text;
  int n;
  std::size_t pos = 0;

  [[noreturn]] void fail(const std::string& msg) const { throw ParseError(msg, pos); }

  void skip_ws() {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
  }

  bool eat(char c) {
    skip_ws();
    if (pos < text.size() && text[pos] == c) {
      ++pos;
      return true;
    }
    return false;
  }

  char peek() {
    skip_ws();
    return pos < text.size() ? text[pos] : '\0';
  }

  ExprPtr parse() {
    skip_ws();
    if (pos >= text.size()) fail("empty expression");
    ExprPtr e = expression();
    skip_ws();
    if (pos != text.size()) fail("unexpected trailing input");
    return e;
  }

  ExprPtr expression() {
    ExprPtr e = term();
    while (true) {
      if (eat('+')) {
        e = Expr::make_binary(BinaryOp::Add, e, term());
      } else if (eat('-')) {
        e = Expr::make_binary(BinaryOp::Sub, e, term());
      } else {
        return e;
      }
    }
  }

  ExprPtr term() {
    ExprPtr e = unary();
    while (true) {
      if (eat('*')) {
        e = Expr::make_binary(BinaryOp::Mul, e, unary());
      } else if (eat('/')) {
        e = Expr::make_binary(BinaryOp::Div, e, unary());
      } else {
        return e;
      }
    }
  }

  ExprPtr unary() {
    if (eat('-')) return Expr::make_unary(UnaryFn::Neg, unary());
    return power();
  }

  ExprPtr power() {
    ExprPtr base = primary();
    if (eat('^')) {
      // Right-associative; the exponent admits a leading unary minus.
      return Expr::make_binary(BinaryOp::Pow, base, unary());
    }
    return base;
  }

  ExprPtr primary() {
    skip_ws();
    if (pos >= text.size()) fail("unexpected end of expression");
    const char c = text[pos];
    if (c == '(') {
      ++pos;
      ExprPtr e = expression();
      if (!eat(')')) fail("expected ')'");
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (std::isalpha(static_cast<unsigned char>(c))) return identifier();
    fail(std::string("unexpected character '") + c + "'");
  }

  ExprPtr number() {
    const char* begin = text.data() + pos;
    const char* end = text.data() + text.size();
    double value = 0.0;
    auto result = std::from_chars(begin, end, value);
    if (result.ec != std::errc()) fail("malformed number literal");
    pos += static_cast<std::size_t>(result.ptr - begin);
    return Expr::make_number(value);
  }

  ExprPtr identifier() {
    const std::size_t start = pos;
    while (pos < text.size() &&
           (std::isalnum(static_cast<unsigned char>(text[pos])) || text[pos] == '_')) {
      ++pos;
    }
    const std::string name = text.substr(start, pos - start);

    if ((name[0] == 'x' || name[0] == 'y') && name.size() > 1) {
      bool digits = true;
      for (std::size_t i = 1; i < name.size(); ++i) {
        if (!std::isdigit(static_cast<unsigned char>(name[i]))) {
          digits = false;
          break;
        }
      }
      if (digits) {
        const int index = std::atoi(name.c_str() + 1);
        if (index < 1 || index > n) {
          pos = start;
          fail("variable index out of range: " + name);
        }
        const int var = (name[0] == 'x' ? 0 : n) + (index - 1);
        return Expr::make_variable(var, n);
      }
    }

    if (name == "pow") {
      if (!eat('(')) fail("expected '(' after pow");
      ExprPtr a = expression();
      if (!eat(',')) fail("expected ',' in pow(a, b)");
      ExprPtr b = expression();
      if (!eat(')')) fail("expected ')'");
      return Expr::make_binary(BinaryOp::Pow, a, b);
    }

    UnaryFn fn;
    if (name == "sqrt") {
      fn = UnaryFn::Sqrt;
    } else if (name == "exp") {
      fn = UnaryFn::Exp;
    } else if (name == "log") {
      fn = UnaryFn::Log;
    } else if (name == "sin") {
      fn = UnaryFn::Sin;
    } else if (name == "cos") {
      fn = UnaryFn::Cos;
    } else if (name == "abs") {
      fn = UnaryFn::Abs;
    } else {
      pos = start;
      fail("unknown identifier: " + name);
    }
    if (!eat('(')) fail("expected '(' after " + name);
    ExprPtr a = expression();
    if (!eat(')')) fail("expected ')'");
    return Expr::make_unary(fn, a);
  }
};

}  // namespace

ExprPtr parse_expression(const std::string& text, int n) {
  if (n < 1) throw Error("parse_expression: dimension must be positive");
  Parser parser{text, n};
  return parser.parse();
}

// ---------------------------------------------------------------------------
// Printer
// ---------------------------------------------------------------------------

namespace {

constexpr int kPrecAdd = 1;
constexpr int kPrecMul = 2;
constexpr int kPrecUnary = 3;
constexpr int kPrecPow = 4;
constexpr int kPrecAtom = 5;

int precedence(const Expr& e) {
  switch (e.kind) {
    case Expr::Kind::Number:
      return e.number < 0 ? kPrecUnary : kPrecAtom;
    case Expr::Kind::Variable:
      return kPrecAtom;
    case Expr::Kind::Unary:
      return e.fn == UnaryFn::Neg ? kPrecUnary : kPrecAtom;
    case Expr::Kind::Binary:
      switch (e.op) {
        case BinaryOp::Add:
        case BinaryOp::Sub:
          return kPrecAdd;
        case BinaryOp::Mul:
        case BinaryOp::Div:
          return kPrecMul;
        case BinaryOp::Pow:
          return kPrecPow;
      }
  }
  return kPrecAtom;
}

void print_number(std::ostream& os, double v) {
  std::ostringstream tmp;
  tmp.precision(17);
  tmp << v;
  os << tmp.str();
}

void print(std::ostream& os, const Expr& e, int min_prec) {
  const bool parens = precedence(e) < min_prec;
  if (parens) os << '(';
  switch (e.kind) {
    case Expr::Kind::Number:
      print_number(os, e.number);
      break;
    case Expr::Kind::Variable: {
      const int n = e.dim;
      if (e.var < n) {
        os << 'x' << (e.var + 1);
      } else {
        os << 'y' << (e.var - n + 1);
      }
      break;
    }
    case Expr::Kind::Unary:
      if (e.fn == UnaryFn::Neg) {
        os << '-';
        print(os, *e.a, kPrecUnary);
      } else {
        switch (e.fn) {
          case UnaryFn::Sqrt: os << "sqrt"; break;
          case UnaryFn::Exp: os << "exp"; break;
          case UnaryFn::Log: os << "log"; break;
          case UnaryFn::Sin: os << "sin"; break;
          case UnaryFn::Cos: os << "cos"; break;
          case UnaryFn::Abs: os << "abs"; break;
          case UnaryFn::Neg: break;
        }
        os << '(';
        print(os, *e.a, 0);
        os << ')';
      }
      break;
    case Expr::Kind::Binary: {
      const int prec = precedence(e);
      const char* sym = "+";
      switch (e.op) {
        case BinaryOp::Add: sym = " + "; break;
        case BinaryOp::Sub: sym = " - "; break;
        case BinaryOp::Mul: sym = "*"; break;
        case BinaryOp::Div: sym = "/"; break;
        case BinaryOp::Pow: sym = "^"; break;
      }
      if (e.op == BinaryOp::Pow) {
        // '^' is right-associative and binds above unary minus, so the base
        // must be an atom and the exponent at least a unary expression.
        print(os, *e.a, kPrecAtom);
        os << sym;
        print(os, *e.b, kPrecUnary);
      } else {
        print(os, *e.a, prec);
        os << sym;
        print(os, *e.b, prec + 1);
      }
      break;
    }
  }
  if (parens) os << ')';
}

}  // namespace

std::string to_string(const ExprPtr& expr) {
  if (!expr) return "";
  std::ostringstream os;
  print(os, *expr, 0);
  return os.str();
}

bool equal(const ExprPtr& a, const ExprPtr& b) {
  if (a == b) return true;
  if (!a || !b) return false;
  if (a->kind != b->kind) return false;
  switch (a->kind) {
    case Expr::Kind::Number:
      return a->number == b->number;
    case Expr::Kind::Variable:
      return a->var == b->var && a->dim == b->dim;
    case Expr::Kind::Unary:
      return a->fn == b->fn && equal(a->a, b->a);
    case Expr::Kind::Binary:
      return a->op == b->op && equal(a->a, b->a) && equal(a->b, b->b);
  }
  return false;
}

bool contains_abs(const ExprPtr& expr) {
  if (!expr) return false;
  if (expr->kind == Expr::Kind::Unary && expr->fn == UnaryFn::Abs) return true;
  return contains_abs(expr->a) || contains_abs(expr->b);
}

// ---------------------------------------------------------------------------
// Evaluation
// ---------------------------------------------------------------------------

namespace {

Jet eval_jet(const Expr& e, std::span<const Jet> vars) {
  try {
    switch (e.kind) {
      case Expr::Kind::Number:
        return Jet::constant(vars[0].space(), e.number, vars[0].order());
      case Expr::Kind::Variable:
        if (e.var >= static_cast<int>(vars.size())) {
          throw Error("expression bound for a larger dimension than the point");
        }
        return vars[static_cast<std::size_t>(e.var)];
      case Expr::Kind::Unary: {
        Jet a = eval_jet(*e.a, vars);
        switch (e.fn) {
          case UnaryFn::Neg: return -a;
          case UnaryFn::Sqrt: return sqrt(a);
          case UnaryFn::Exp: return exp(a);
          case UnaryFn::Log: return log(a);
          case UnaryFn::Sin: return sin(a);
          case UnaryFn::Cos: return cos(a);
          case UnaryFn::Abs: return abs(a);
        }
        break;
      }
      case Expr::Kind::Binary: {
        // Constant integer exponents stay on the integer-power path so
        // negative bases work.
        if (e.op == BinaryOp::Pow && e.b->kind == Expr::Kind::Number) {
          return pow(eval_jet(*e.a, vars), e.b->number);
        }
        Jet a = eval_jet(*e.a, vars);
        Jet b = eval_jet(*e.b, vars);
        switch (e.op) {
          case BinaryOp::Add: return a + b;
          case BinaryOp::Sub: return a - b;
          case BinaryOp::Mul: return a * b;
          case BinaryOp::Div: return a / b;
          case BinaryOp::Pow: return pow(a, b);
        }
        break;
      }
    }
  } catch (const DomainError& err) {
    std::string msg = err.what();
    if (msg.find(" in subexpression: ") == std::string::npos) {
      ExprPtr self = std::make_shared<Expr>(e);
      throw DomainError(msg + " in subexpression: " + to_string(self));
    }
    throw;
  }
  throw Error("expression evaluation fell through");
}

double eval_real(const Expr& e, const EvalPoint& p) {
  switch (e.kind) {
    case Expr::Kind::Number:
      return e.number;
    case Expr::Kind::Variable:
      return p.coord(e.var);
    case Expr::Kind::Unary: {
      const double a = eval_real(*e.a, p);
      switch (e.fn) {
        case UnaryFn::Neg: return -a;
        case UnaryFn::Sqrt:
          if (a < 0.0) throw DomainError("sqrt of a negative value");
          return std::sqrt(a);
        case UnaryFn::Exp: return std::exp(a);
        case UnaryFn::Log:
          if (a <= 0.0) throw DomainError("log of a non-positive value");
          return std::log(a);
        case UnaryFn::Sin: return std::sin(a);
        case UnaryFn::Cos: return std::cos(a);
        case UnaryFn::Abs: return std::fabs(a);
      }
      break;
    }
    case Expr::Kind::Binary: {
      const double a = eval_real(*e.a, p);
      const double b = eval_real(*e.b, p);
      switch (e.op) {
        case BinaryOp::Add: return a + b;
        case BinaryOp::Sub: return a - b;
        case BinaryOp::Mul: return a * b;
        case BinaryOp::Div:
          if (b == 0.0) throw DomainError("division by zero");
          return a / b;
        case BinaryOp::Pow:
          if (a <= 0.0 && b != std::floor(b)) {
            throw DomainError("pow with non-integer exponent needs a positive base");
          }
          return std::pow(a, b);
      }
      break;
    }
  }
  throw Error("expression evaluation fell through");
}

}  // namespace

Jet evaluate(const ExprPtr& expr, const EvalPoint& point, int order) {
  if (!expr) throw Error("evaluate: null expression");
  const std::vector<Jet> seeds = jet_lift(point, order);
  return eval_jet(*expr, seeds);
}

Jet evaluate_with(const ExprPtr& expr, std::span<const Jet> vars) {
  if (!expr) throw Error("evaluate: null expression");
  if (vars.empty()) throw Error("evaluate: no variable jets supplied");
  return eval_jet(*expr, vars);
}

double evaluate_real(const ExprPtr& expr, const EvalPoint& point) {
  if (!expr) throw Error("evaluate: null expression");
  return eval_real(*expr, point);
}

}  // namespace fp
