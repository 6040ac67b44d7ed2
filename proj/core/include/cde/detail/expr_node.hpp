#pragma once

#include <memory>

#include "cde/expr.hpp"

namespace cde {

/// Internal representation of CoeffExpr trees. Exposed for the equation
/// module's rational-map folding; not part of the stable surface.
struct CoeffExpr::Node {
  enum class Kind { Const, Var, Add, Sub, Mul, Div, Neg, Pow, Exp, Log };
  Kind kind;
  Cplx value;         // Const
  long exponent = 0;  // Pow
  std::shared_ptr<const Node> lhs, rhs;
};

}  // namespace cde
