#include <doctest.h>

#include "cde/continuation.hpp"
#include "cde/rng.hpp"
#include "cde/surface.hpp"
#include "test_helpers.hpp"

using namespace cde;
using cde::test::check_close;
using cde::test::dbl;

namespace {

const ModelSolution& model_half() {
  static ModelSolution ms = solve_model(Cplx(0.5), Cplx(-1), 300, Real("1e-20"));
  return ms;
}

}  // namespace

TEST_CASE("step_forward") {
  EquationSpec eq = EquationSpec::model(Cplx(0.5));
  check_close(step_forward(eq, Cplx(0), Cplx(0)), Cplx(0), Real(0));
  check_close(step_forward(eq, Cplx(0), Cplx(1)), Cplx(1.5), coeff_tol());

  EquationSpec ric;
  ric.lambda = Cplx(1);
  ric.autonomous = RationalMap::parse("y/(1+y)");
  CHECK_THROWS_AS(step_forward(ric, Cplx(0), Cplx(-1)), EvalError);
}

TEST_CASE("step_backward_model") {
  Cplx lambda(0.5);
  // fixed point preimage: 0 -> 0 with a hint near 0
  check_close(step_backward_model(lambda, Cplx(0), Cplx(Real("0.01"))), Cplx(0),
              coeff_tol());
  // branch point hit
  CHECK_THROWS_AS(step_backward_model(lambda, Cplx(-lambda * lambda / Cplx(4)), Cplx(0)),
                  NumericalError);
  // lambda = 1/2, forward value 3/16, hint near 1/4 -> 1/4
  check_close(step_backward_model(lambda, Cplx(Real(3) / Real(16)), Cplx(0.25)),
              Cplx(0.25), coeff_tol());
  // equidistant hint is a tie
  CHECK_THROWS_AS(step_backward_model(lambda, Cplx(Real(3) / Real(16)), Cplx(-0.25)),
                  NumericalError);
}

TEST_CASE("backward then forward is the identity") {
  Cplx lambda(0.5);
  EquationSpec eq = EquationSpec::model(lambda);
  for (double re : {0.1, -0.3, 0.4}) {
    Cplx v(re, 0.2);
    Cplx pre = step_backward_model(lambda, v, Cplx(re, 0.2));
    check_close(step_forward(eq, Cplx(0), pre), v, coeff_tol());
  }
}

TEST_CASE("general backward stepping solves the preimage polynomial") {
  RationalMap R = RationalMap::parse("(2*y + y^2)/(1 + 0.25*y)");
  Cplx y0(0.3, 0.2);
  Cplx v = R.eval(y0);
  BackwardStep bs = step_backward(R, v, y0 + Cplx(Real("0.001")), Real("1e-24"));
  REQUIRE(bs.chosen >= 0);
  check_close(bs.preimages[static_cast<std::size_t>(bs.chosen)], y0, Real("1e-18"));
  CHECK(bs.preimages.size() == 2);
}

TEST_CASE("continue_along: trivial and regular paths") {
  const ModelSolution& ms = model_half();
  Real rhat = ms.r_hat;

  int depth = required_depth(ms.lambda, ms.series, rhat);
  ModelTowerEvaluator eval(ms.lambda, ms.series, SheetLabel{"0"}.sign_path(), depth);

  // zero-length path
  PathSpec path;
  path.shape = SegmentPath{Cplx(rhat / 2), Cplx(rhat / 2)};
  Cplx v0 = eval.start(Cplx(rhat / 2));
  FunctionElement start{PlaneTag::W, Cplx(rhat / 2), v0, {}};
  FunctionElement end = continue_along(path, start, eval, Real("1e-9"));
  check_close(end.value, v0, Real("1e-12"));

  // a loop around a regular point returns to the start value
  Cplx center(rhat * Real("0.6"), rhat * Real("0.3"));
  PathSpec circle;
  circle.shape = CirclePath{center, rhat / 8, Real(0), Real(1)};
  ModelTowerEvaluator eval2(ms.lambda, ms.series, SheetLabel{"0"}.sign_path(), depth);
  Cplx p0 = center + polar(rhat / 8, Real(0));
  Cplx w0 = eval2.start(p0);
  FunctionElement s2{PlaneTag::W, p0, w0, {}};
  FunctionElement e2 = continue_along(circle, s2, eval2, Real("1e-9"));
  check_close(e2.value, w0, Real("1e-10"));
  CHECK(e2.history.size() > 10);

  // history steps satisfy the defining relation g(lambda w) = lambda g + g^2
  for (std::size_t i = 0; i < e2.history.size(); i += 5) {
    auto& [pt, val] = e2.history[i];
    Cplx lhs = evaluate_sheet(ms.lambda, ms.series, ms.lambda * pt,
                              SheetLabel{"0"}.sign_path());
    check_close(lhs, ms.lambda * val + val * val, Real("1e-12"));
  }
}

TEST_CASE("monodromy around r_hat exchanges h0 and h1") {
  const ModelSolution& ms = model_half();
  MonodromyResult one = sheet_monodromy(ms, 0, Real("0.3"), SheetLabel{"0"}, 1, Real("1e-6"));
  CHECK(one.swapped);
  check_close(one.end_value, -ms.lambda - one.start_value, Real("1e-9"));

  MonodromyResult two = sheet_monodromy(ms, 0, Real("0.3"), SheetLabel{"0"}, 2, Real("1e-6"));
  CHECK(!two.swapped);
  check_close(two.end_value, two.start_value, Real("1e-9"));
}

TEST_CASE("monodromy around a regular point between ladder rungs") {
  const ModelSolution& ms = model_half();
  Real center = ms.r_hat * Real("1.5");  // between w_0 and w_1 = 2 r_hat
  PathSpec params;
  params.max_step = Real("0.01");
  params.min_step = Real("1e-9");
  params.jump_tol = Real("0.25");
  MonodromyResult res =
      monodromy_loop(ms.lambda, ms.series, Cplx(center), ms.r_hat / 8,
                     SheetLabel{"0"}.sign_path(), 1, Real("1e-6"), pi_value() / 2, params);
  CHECK(!res.swapped);
}

TEST_CASE("evaluate_sheet") {
  const ModelSolution& ms = model_half();
  Real rhat = ms.r_hat;

  // empty sign path in the disk evaluates the series directly
  Cplx w(rhat / 3, rhat / 5);
  check_close(evaluate_sheet(ms.lambda, ms.series, w, {}), series_eval(ms.series, w),
              Real("1e-25"));

  // the two level-1 values sum to -lambda
  Cplx wa(rhat * Real("1.2"), rhat * Real("0.4"));
  Cplx plus = evaluate_sheet(ms.lambda, ms.series, wa, {1});
  Cplx minus = evaluate_sheet(ms.lambda, ms.series, wa, {-1});
  check_close(plus + minus, -ms.lambda, Real("1e-20"));

  // unwinding with continuity-selected signs reproduces the series on (0, r_hat)
  for (double frac : {0.3, 0.55, 0.8}) {
    Cplx x(rhat * Real(frac));
    Cplx direct = series_eval(ms.series, x);
    Cplx unwound = evaluate_sheet(ms.lambda, ms.series, x, {1});
    check_close(unwound, direct, Real("1e-20"));
  }

  // path-reversal consistency: out along a segment and back
  int depth = required_depth(ms.lambda, ms.series, rhat * 2);
  ModelTowerEvaluator eval(ms.lambda, ms.series, SheetLabel{"0"}.sign_path(), depth);
  Cplx a(rhat / 2, rhat / 4);
  Cplx b(rhat * Real("1.4"), rhat);
  PathSpec out;
  out.shape = SegmentPath{a, b};
  Cplx va = eval.start(a);
  FunctionElement fe{PlaneTag::W, a, va, {}};
  FunctionElement atb = continue_along(out, fe, eval, Real("1e-9"));
  ModelTowerEvaluator eval_back(ms.lambda, ms.series, SheetLabel{"0"}.sign_path(), depth);
  PathSpec back;
  back.shape = SegmentPath{b, a};
  // both endpoints sit in the upper half plane, so the fixed-sign chain at b
  // agrees with the continued branch and the reverse walk can start fresh
  FunctionElement fb{PlaneTag::W, b, atb.value, {}};
  FunctionElement home = continue_along(back, fb, eval_back, Real("1e-6"));
  check_close(home.value, va, Real("1e-12"));
}
