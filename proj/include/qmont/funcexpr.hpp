#pragma once

#include <memory>
#include <string>
#include <string_view>

#include "qmont/qcontext.hpp"

namespace qmont::funcexpr {

/// An immutable expression tree over the single variable `t`.
///
/// Grammar (whitespace-insensitive):
///
///   expr    := term (("+"|"-") term)*
///   term    := factor (("*"|"/") factor)*
///   factor  := "-" factor | power
///   power   := atom ("^" factor)?
///   atom    := NUMBER | "t" | IDENT "(" expr ")" | "(" expr ")"
///   IDENT   := "exp" | "ln" | "sin" | "cos" | "sqrt" | "abs"
///   NUMBER  := decimal or scientific literal
///
/// `^` is right-associative and binds tighter than unary minus, so
/// "-2^2" is -(2^2) = -4. Trees are shareable across threads.
class Expr {
 public:
  /// Evaluates with `t` bound to the argument. Throws EvalError on ln or
  /// sqrt of a negative argument, division by zero, a fractional power of
  /// a negative base, or any non-finite result.
  double eval(double t) const;

  /// Renders the tree as a string that parses back to an identical tree.
  std::string str() const;

  /// Structural equality (same shape, operators, and literal values).
  friend bool operator==(const Expr& lhs, const Expr& rhs);

  struct Node;

 private:
  explicit Expr(std::shared_ptr<const Node> root) : root_(std::move(root)) {}
  std::shared_ptr<const Node> root_;

  friend Expr parse(std::string_view src);
};

/// Parses `src` against the grammar above. Throws SyntaxError carrying the
/// byte offset of the offending token and the set of tokens that would
/// have been accepted there.
Expr parse(std::string_view src);

/// Wraps an expression as a RealFn with the given label.
RealFn as_realfn(const Expr& e, std::string label);

}  // namespace qmont::funcexpr
