#ifndef REVSURF_EXPR_HPP
#define REVSURF_EXPR_HPP

#include <memory>
#include <string>
#include <string_view>

#include "revsurf/common.hpp"

namespace revsurf {

// Immutable symbolic expression in one variable t.
//
// Supported forms: decimal literals, the constant pi, the variable t,
// unary minus, sin cos tan exp log sqrt abs, binary + - * /, and ^ with
// a constant exponent. Expressions are built by parse_expression() or by
// the factory functions below, and simplified on construction by
// constant folding plus the 0/1 identities (x+0, 1*x, x^1, ...). No
// other rewriting is performed, so what you build is what evaluates.
//
// Expr is a value type over a shared immutable tree: copies are cheap
// and all const operations are safe to call concurrently.
class Expr {
 public:
  // Defaults to the constant 0.
  Expr();

  static Expr constant(double v);
  static Expr variable();

  // Evaluates at t. Throws EvalError carrying t if the result is not
  // finite (division by zero, log of a non-positive value, ...).
  double evaluate(double t) const;

  // Evaluates without the finiteness check; may return inf or NaN.
  double evaluate_unchecked(double t) const;

  // Exact symbolic derivative. The result is again an Expr, so it can
  // be differentiated repeatedly.
  Expr differentiate() const;

  // Canonical textual form. Parsing it back yields an identical tree,
  // and printing that tree yields the identical string.
  std::string to_string() const;

  // True when the whole expression folded to a single number.
  bool is_constant(double* value = nullptr) const;

  friend Expr operator-(const Expr& e);
  friend Expr operator+(const Expr& a, const Expr& b);
  friend Expr operator-(const Expr& a, const Expr& b);
  friend Expr operator*(const Expr& a, const Expr& b);
  friend Expr operator/(const Expr& a, const Expr& b);
  friend Expr pow(const Expr& base, double exponent);
  friend Expr sin(const Expr& e);
  friend Expr cos(const Expr& e);
  friend Expr tan(const Expr& e);
  friend Expr exp(const Expr& e);
  friend Expr log(const Expr& e);
  friend Expr sqrt(const Expr& e);
  friend Expr abs(const Expr& e);
  friend Expr parse_expression(std::string_view text);

  struct Node;

 private:
  explicit Expr(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const Node> node_;
};

// Parses the grammar
//   expr    := term (('+'|'-') term)*
//   term    := unary (('*'|'/') unary)*
//   unary   := '-' unary | power
//   power   := primary ('^' unary)?          right associative
//   primary := number | 'pi' | 't' | name '(' expr ')' | '(' expr ')'
// so ^ binds tighter than unary minus (-t^2 is -(t^2)) and tighter than
// * and / (2*t^3 is 2*(t^3)). The exponent must fold to a constant.
// Throws ParseError with the byte position of the offending token.
Expr parse_expression(std::string_view text);

}  // namespace revsurf

#endif
