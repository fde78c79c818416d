#include "revsurf/expr.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <utility>
#include <vector>

namespace revsurf {

enum class Kind {
  Constant,
  Variable,
  Neg,
  Sin,
  Cos,
  Tan,
  Exp,
  Log,
  Sqrt,
  Abs,
  Add,
  Sub,
  Mul,
  Div,
  Pow,
};

struct Expr::Node {
  Kind kind;
  double value = 0.0;  // Constant payload, or the exponent for Pow
  std::shared_ptr<const Node> a;
  std::shared_ptr<const Node> b;
};

namespace {

using NodePtr = std::shared_ptr<const Expr::Node>;

NodePtr make(Kind k, double v, NodePtr a = nullptr, NodePtr b = nullptr) {
  auto n = std::make_shared<Expr::Node>();
  n->kind = k;
  n->value = v;
  n->a = std::move(a);
  n->b = std::move(b);
  return n;
}

NodePtr make_const(double v) { return make(Kind::Constant, v); }

bool const_of(const NodePtr& n, double* v) {
  if (n->kind != Kind::Constant) return false;
  if (v) *v = n->value;
  return true;
}

bool is_const_val(const NodePtr& n, double v) {
  return n->kind == Kind::Constant && n->value == v;
}

double apply_unary(Kind k, double x) {
  switch (k) {
    case Kind::Neg:  return -x;
    case Kind::Sin:  return std::sin(x);
    case Kind::Cos:  return std::cos(x);
    case Kind::Tan:  return std::tan(x);
    case Kind::Exp:  return std::exp(x);
    case Kind::Log:  return std::log(x);
    case Kind::Sqrt: return std::sqrt(x);
    case Kind::Abs:  return std::fabs(x);
    default:         return 0.0;  // unreachable
  }
}

// Folding happens only at construction time: constant subtrees collapse
// when the folded value is finite, otherwise the tree is kept as written
// so the fault surfaces at evaluation with a point attached.
NodePtr make_unary(Kind k, NodePtr a) {
  double v;
  if (const_of(a, &v)) {
    const double r = apply_unary(k, v);
    if (std::isfinite(r)) return make_const(r);
  }
  if (k == Kind::Neg && a->kind == Kind::Neg) return a->a;
  return make(k, 0.0, std::move(a));
}

NodePtr make_add(NodePtr a, NodePtr b) {
  double x, y;
  if (const_of(a, &x) && const_of(b, &y) && std::isfinite(x + y))
    return make_const(x + y);
  if (is_const_val(a, 0.0)) return b;
  if (is_const_val(b, 0.0)) return a;
  return make(Kind::Add, 0.0, std::move(a), std::move(b));
}

NodePtr make_sub(NodePtr a, NodePtr b) {
  double x, y;
  if (const_of(a, &x) && const_of(b, &y) && std::isfinite(x - y))
    return make_const(x - y);
  if (is_const_val(b, 0.0)) return a;
  if (is_const_val(a, 0.0)) return make_unary(Kind::Neg, std::move(b));
  return make(Kind::Sub, 0.0, std::move(a), std::move(b));
}

NodePtr make_mul(NodePtr a, NodePtr b) {
  double x, y;
  if (const_of(a, &x) && const_of(b, &y) && std::isfinite(x * y))
    return make_const(x * y);
  if (is_const_val(a, 0.0) || is_const_val(b, 0.0)) return make_const(0.0);
  if (is_const_val(a, 1.0)) return b;
  if (is_const_val(b, 1.0)) return a;
  return make(Kind::Mul, 0.0, std::move(a), std::move(b));
}

NodePtr make_div(NodePtr a, NodePtr b) {
  double x, y;
  if (const_of(a, &x) && const_of(b, &y)) {
    const double r = x / y;
    if (std::isfinite(r)) return make_const(r);
  }
  if (is_const_val(b, 1.0)) return a;
  // 0/x is not folded: it would erase a pole of x from the domain.
  return make(Kind::Div, 0.0, std::move(a), std::move(b));
}

NodePtr make_pow(NodePtr base, double expo) {
  double x;
  if (const_of(base, &x)) {
    const double r = std::pow(x, expo);
    if (std::isfinite(r)) return make_const(r);
  }
  if (expo == 1.0) return base;
  if (expo == 0.0) return make_const(1.0);
  return make(Kind::Pow, expo, std::move(base));
}

double eval_node(const Expr::Node* n, double t) {
  switch (n->kind) {
    case Kind::Constant: return n->value;
    case Kind::Variable: return t;
    case Kind::Add: return eval_node(n->a.get(), t) + eval_node(n->b.get(), t);
    case Kind::Sub: return eval_node(n->a.get(), t) - eval_node(n->b.get(), t);
    case Kind::Mul: return eval_node(n->a.get(), t) * eval_node(n->b.get(), t);
    case Kind::Div: return eval_node(n->a.get(), t) / eval_node(n->b.get(), t);
    case Kind::Pow: return std::pow(eval_node(n->a.get(), t), n->value);
    default:        return apply_unary(n->kind, eval_node(n->a.get(), t));
  }
}

NodePtr diff_node(const NodePtr& n) {
  switch (n->kind) {
    case Kind::Constant: return make_const(0.0);
    case Kind::Variable: return make_const(1.0);
    case Kind::Neg: return make_unary(Kind::Neg, diff_node(n->a));
    case Kind::Sin:
      return make_mul(make_unary(Kind::Cos, n->a), diff_node(n->a));
    case Kind::Cos:
      return make_unary(Kind::Neg,
                        make_mul(make_unary(Kind::Sin, n->a), diff_node(n->a)));
    case Kind::Tan:
      // u' / cos(u)^2
      return make_div(diff_node(n->a),
                      make_pow(make_unary(Kind::Cos, n->a), 2.0));
    case Kind::Exp:
      return make_mul(make_unary(Kind::Exp, n->a), diff_node(n->a));
    case Kind::Log:
      return make_div(diff_node(n->a), n->a);
    case Kind::Sqrt:
      // u' / (2*sqrt(u))
      return make_div(diff_node(n->a),
                      make_mul(make_const(2.0), make_unary(Kind::Sqrt, n->a)));
    case Kind::Abs:
      // u' * abs(u)/u, undefined at u = 0 where evaluation faults
      return make_mul(diff_node(n->a),
                      make_div(make_unary(Kind::Abs, n->a), n->a));
    case Kind::Add: return make_add(diff_node(n->a), diff_node(n->b));
    case Kind::Sub: return make_sub(diff_node(n->a), diff_node(n->b));
    case Kind::Mul:
      return make_add(make_mul(diff_node(n->a), n->b),
                      make_mul(n->a, diff_node(n->b)));
    case Kind::Div:
      // (u'v - uv') / v^2
      return make_div(make_sub(make_mul(diff_node(n->a), n->b),
                               make_mul(n->a, diff_node(n->b))),
                      make_pow(n->b, 2.0));
    case Kind::Pow:
      // c * u^(c-1) * u'
      return make_mul(
          make_mul(make_const(n->value), make_pow(n->a, n->value - 1.0)),
          diff_node(n->a));
  }
  return make_const(0.0);  // unreachable
}

// Printing levels: + - are 1, * / are 2, unary minus 3, ^ 4, atoms 5.
int prec(const Expr::Node* n) {
  switch (n->kind) {
    case Kind::Add:
    case Kind::Sub: return 1;
    case Kind::Mul:
    case Kind::Div: return 2;
    case Kind::Neg: return 3;
    case Kind::Pow: return 4;
    case Kind::Constant: return n->value < 0.0 ? 3 : 5;
    default: return 5;  // variable and function calls
  }
}

void print_node(const Expr::Node* n, std::string& out);

void print_child(const Expr::Node* c, int min_prec, std::string& out) {
  if (prec(c) < min_prec) {
    out += '(';
    print_node(c, out);
    out += ')';
  } else {
    print_node(c, out);
  }
}

void print_node(const Expr::Node* n, std::string& out) {
  switch (n->kind) {
    case Kind::Constant: out += format_double(n->value); return;
    case Kind::Variable: out += 't'; return;
    case Kind::Neg:
      out += '-';
      // Parenthesize anything but atoms so -a*b round-trips as written.
      print_child(n->a.get(), 5, out);
      return;
    case Kind::Sin: case Kind::Cos: case Kind::Tan: case Kind::Exp:
    case Kind::Log: case Kind::Sqrt: case Kind::Abs: {
      switch (n->kind) {
        case Kind::Sin: out += "sin"; break;
        case Kind::Cos: out += "cos"; break;
        case Kind::Tan: out += "tan"; break;
        case Kind::Exp: out += "exp"; break;
        case Kind::Log: out += "log"; break;
        case Kind::Sqrt: out += "sqrt"; break;
        default: out += "abs"; break;
      }
      out += '(';
      print_node(n->a.get(), out);
      out += ')';
      return;
    }
    case Kind::Add:
      print_child(n->a.get(), 1, out);
      out += '+';
      // The right side needs parens when it is itself + or - so the
      // reparse groups identically.
      print_child(n->b.get(), 2, out);
      return;
    case Kind::Sub:
      print_child(n->a.get(), 1, out);
      out += '-';
      print_child(n->b.get(), 2, out);
      return;
    case Kind::Mul:
      print_child(n->a.get(), 2, out);
      out += '*';
      print_child(n->b.get(), 3, out);
      return;
    case Kind::Div:
      print_child(n->a.get(), 2, out);
      out += '/';
      print_child(n->b.get(), 3, out);
      return;
    case Kind::Pow:
      print_child(n->a.get(), 5, out);
      out += '^';
      out += format_double(n->value);
      return;
  }
}

// ---------------------------------------------------------------------
// Parser

struct Parser {
  std::string_view text;
  std::size_t pos = 0;

  [[noreturn]] void fail(const std::string& msg, std::size_t at) {
    throw ParseError(msg + " at position " + std::to_string(at), at);
  }

  void skip_ws() {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos])))
      ++pos;
  }

  bool peek(char c) {
    skip_ws();
    return pos < text.size() && text[pos] == c;
  }

  bool accept(char c) {
    if (!peek(c)) return false;
    ++pos;
    return true;
  }

  NodePtr parse_expr() {
    NodePtr lhs = parse_term();
    for (;;) {
      if (accept('+')) lhs = make_add(lhs, parse_term());
      else if (accept('-')) lhs = make_sub(lhs, parse_term());
      else return lhs;
    }
  }

  NodePtr parse_term() {
    NodePtr lhs = parse_unary();
    for (;;) {
      if (accept('*')) lhs = make_mul(lhs, parse_unary());
      else if (accept('/')) lhs = make_div(lhs, parse_unary());
      else return lhs;
    }
  }

  NodePtr parse_unary() {
    if (accept('-')) return make_unary(Kind::Neg, parse_unary());
    return parse_power();
  }

  NodePtr parse_power() {
    NodePtr base = parse_primary();
    skip_ws();
    if (accept('^')) {
      const std::size_t at = pos;
      NodePtr e = parse_unary();
      double v;
      if (!const_of(e, &v))
        fail("exponent must be a constant", at);
      return make_pow(std::move(base), v);
    }
    return base;
  }

  NodePtr parse_primary() {
    skip_ws();
    if (pos >= text.size()) fail("unexpected end of input", pos);
    const char c = text[pos];

    if (c == '(') {
      ++pos;
      NodePtr inner = parse_expr();
      if (!accept(')')) fail("expected ')'", pos);
      return inner;
    }

    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.')
      return parse_number();

    if (std::isalpha(static_cast<unsigned char>(c))) {
      const std::size_t start = pos;
      while (pos < text.size() &&
             std::isalpha(static_cast<unsigned char>(text[pos])))
        ++pos;
      const std::string_view name = text.substr(start, pos - start);
      if (name == "t") return make(Kind::Variable, 0.0);
      if (name == "pi") return make_const(kPi);
      Kind k;
      if (name == "sin") k = Kind::Sin;
      else if (name == "cos") k = Kind::Cos;
      else if (name == "tan") k = Kind::Tan;
      else if (name == "exp") k = Kind::Exp;
      else if (name == "log") k = Kind::Log;
      else if (name == "sqrt") k = Kind::Sqrt;
      else if (name == "abs") k = Kind::Abs;
      else fail("unknown identifier '" + std::string(name) + "'", start);
      if (!accept('('))
        fail("expected '(' after '" + std::string(name) + "'", pos);
      NodePtr arg = parse_expr();
      if (!accept(')')) fail("expected ')'", pos);
      return make_unary(k, std::move(arg));
    }

    fail(std::string("unexpected character '") + c + "'", pos);
  }

  NodePtr parse_number() {
    const std::size_t start = pos;
    double v;
    auto res = std::from_chars(text.data() + pos, text.data() + text.size(), v);
    if (res.ec != std::errc())
      fail("malformed number", start);
    pos = static_cast<std::size_t>(res.ptr - text.data());
    // Reject forms from_chars accepted but the grammar does not, like a
    // second '.' glued on (1..2 stops at '1.' leaving '.2').
    if (pos < text.size() && text[pos] == '.')
      fail("malformed number", start);
    return make_const(v);
  }
};

}  // namespace

Expr::Expr() : node_(make_const(0.0)) {}

Expr Expr::constant(double v) { return Expr(make_const(v)); }
Expr Expr::variable() { return Expr(make(Kind::Variable, 0.0)); }

double Expr::evaluate(double t) const {
  const double r = eval_node(node_.get(), t);
  if (!std::isfinite(r))
    throw EvalError("expression '" + to_string() +
                        "' evaluated to a non-finite value at t = " +
                        format_double(t),
                    t);
  return r;
}

double Expr::evaluate_unchecked(double t) const {
  return eval_node(node_.get(), t);
}

Expr Expr::differentiate() const { return Expr(diff_node(node_)); }

std::string Expr::to_string() const {
  std::string out;
  print_node(node_.get(), out);
  return out;
}

bool Expr::is_constant(double* value) const {
  return const_of(node_, value);
}

Expr operator-(const Expr& e) { return Expr(make_unary(Kind::Neg, e.node_)); }
Expr operator+(const Expr& a, const Expr& b) {
  return Expr(make_add(a.node_, b.node_));
}
Expr operator-(const Expr& a, const Expr& b) {
  return Expr(make_sub(a.node_, b.node_));
}
Expr operator*(const Expr& a, const Expr& b) {
  return Expr(make_mul(a.node_, b.node_));
}
Expr operator/(const Expr& a, const Expr& b) {
  return Expr(make_div(a.node_, b.node_));
}
Expr pow(const Expr& base, double exponent) {
  return Expr(make_pow(base.node_, exponent));
}
Expr sin(const Expr& e) { return Expr(make_unary(Kind::Sin, e.node_)); }
Expr cos(const Expr& e) { return Expr(make_unary(Kind::Cos, e.node_)); }
Expr tan(const Expr& e) { return Expr(make_unary(Kind::Tan, e.node_)); }
Expr exp(const Expr& e) { return Expr(make_unary(Kind::Exp, e.node_)); }
Expr log(const Expr& e) { return Expr(make_unary(Kind::Log, e.node_)); }
Expr sqrt(const Expr& e) { return Expr(make_unary(Kind::Sqrt, e.node_)); }
Expr abs(const Expr& e) { return Expr(make_unary(Kind::Abs, e.node_)); }

Expr parse_expression(std::string_view text) {
  Parser p{text};
  NodePtr root = p.parse_expr();
  p.skip_ws();
  if (p.pos != text.size())
    p.fail(std::string("unexpected trailing input '") +
               std::string(text.substr(p.pos)) + "'",
           p.pos);
  return Expr(std::move(root));
}

}  // namespace revsurf
