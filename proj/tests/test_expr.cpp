#include <doctest.h>

#include "cde/expr.hpp"
#include "test_helpers.hpp"

using namespace cde;
using cde::test::check_close;

TEST_CASE("parse and evaluate") {
  check_close(CoeffExpr::parse("2*z + 1").eval(Cplx(3)), Cplx(7), coeff_tol());
  check_close(CoeffExpr::parse("exp(z)").eval(Cplx(0)), Cplx(1), coeff_tol());
  check_close(CoeffExpr::parse("(1+i)^2").eval(Cplx(0)), Cplx(0, 2), coeff_tol());
  check_close(CoeffExpr::parse("z^-2").eval(Cplx(2)), Cplx(0.25), coeff_tol());
  check_close(CoeffExpr::parse("-z + 2").eval(Cplx(1)), Cplx(1), coeff_tol());
  check_close(CoeffExpr::parse("1.5e2").eval(Cplx(0)), Cplx(150), coeff_tol());
  check_close(CoeffExpr::parse("log(exp(1))").eval(Cplx(0)), Cplx(1), coeff_tol());
  check_close(CoeffExpr::parse("y^2 + y", "y").eval(Cplx(2)), Cplx(6), coeff_tol());
}

TEST_CASE("principal log takes the upper-side limit on the negative axis") {
  Cplx v = CoeffExpr::parse("log(z)").eval(Cplx(-1));
  check_close(v, Cplx(Real(0), pi_value()), coeff_tol());
}

TEST_CASE("syntax errors carry byte offsets") {
  try {
    CoeffExpr::parse("2*z + ");
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.offset() == 6);
  }
  try {
    CoeffExpr::parse("2*q");
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.offset() == 2);
  }
  CHECK_THROWS_AS(CoeffExpr::parse("z^1.5"), ParseError);
  CHECK_THROWS_AS(CoeffExpr::parse("(z"), ParseError);
}

TEST_CASE("division by zero is an evaluation-time error") {
  CoeffExpr e = CoeffExpr::parse("1/z");
  CHECK_THROWS_AS(e.eval(Cplx(0)), EvalError);
  check_close(e.eval(Cplx(2)), Cplx(0.5), coeff_tol());
}

TEST_CASE("to_string round-trips through the parser") {
  const char* sources[] = {"2*z + 1", "exp(z)*z - 3/(z+1)", "(1+i)^2 - z^-3"};
  for (const char* src : sources) {
    CoeffExpr e = CoeffExpr::parse(src);
    CoeffExpr back = CoeffExpr::parse(e.to_string());
    for (double x : {0.3, -1.7, 2.9}) {
      Cplx at(x, 0.4);
      check_close(back.eval(at), e.eval(at), coeff_tol());
    }
  }
}
