#pragma once

#include <memory>
#include <string>
#include <string_view>

#include "cde/complex.hpp"

namespace cde {

/// Immutable expression tree over {complex literals, one free variable, + - *
/// /, integer ^, exp, log}. log is the principal branch; on the negative real
/// axis evaluation takes the upper-side limit. Evaluation at distinct points
/// is safe concurrently.
///
/// Grammar (whitespace insignificant):
///   expr   := term (('+'|'-') term)*
///   term   := unary (('*'|'/') unary)*
///   unary  := ('+'|'-')* factor
///   factor := base ('^' signed-int)?
///   base   := number | 'i' | var | '(' expr ')' | ('exp'|'log') '(' expr ')'
class CoeffExpr {
 public:
  CoeffExpr();  // the constant 0

  /// Parse from source text; `var` names the free variable ("z" or "y").
  /// Throws ParseError with the byte offset of the first offending character.
  static CoeffExpr parse(std::string_view src, std::string_view var = "z");

  static CoeffExpr constant(const Cplx& c);
  static CoeffExpr variable();

  /// Throws EvalError on division by zero / log of zero at the point.
  Cplx eval(const Cplx& at) const;

  bool is_constant() const;

  /// Round-trippable rendering in the grammar above.
  std::string to_string(std::string_view var = "z") const;

  friend CoeffExpr operator+(const CoeffExpr& a, const CoeffExpr& b);
  friend CoeffExpr operator-(const CoeffExpr& a, const CoeffExpr& b);
  friend CoeffExpr operator*(const CoeffExpr& a, const CoeffExpr& b);
  friend CoeffExpr operator/(const CoeffExpr& a, const CoeffExpr& b);
  friend CoeffExpr operator-(const CoeffExpr& a);
  static CoeffExpr pow(const CoeffExpr& a, long n);

  struct Node;
  explicit CoeffExpr(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  const std::shared_ptr<const Node>& node() const { return node_; }

 private:
  std::shared_ptr<const Node> node_;
};

}  // namespace cde
