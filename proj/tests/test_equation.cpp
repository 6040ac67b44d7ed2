#include <doctest.h>

#include "cde/equation.hpp"
#include "cde/rng.hpp"
#include "test_helpers.hpp"

using namespace cde;
using cde::test::check_close;
using cde::test::dbl;

TEST_CASE("fixed points of lambda y + y^2") {
  RationalMap R = RationalMap::parse("0.5*y + y^2");
  auto res = fixed_points(R, Real("1e-25"));
  REQUIRE(res.points.size() == 2);
  check_close(res.points[0].gamma, Cplx(0), Real("1e-20"));
  check_close(res.points[0].multiplier, Cplx(0.5), Real("1e-20"));
  CHECK(res.points[0].cls == FixedPointClass::Contracting);
  check_close(res.points[1].gamma, Cplx(0.5), Real("1e-20"));
  check_close(res.points[1].multiplier, Cplx(1.5), Real("1e-20"));
  CHECK(res.points[1].cls == FixedPointClass::Expanding);
  CHECK(res.julia_witness);
}

TEST_CASE("fixed points of y/(1+y) and a linear map") {
  RationalMap ric = RationalMap::parse("y/(1+y)");
  auto res = fixed_points(ric, Real("1e-25"));
  REQUIRE(res.points.size() == 1);
  // double root at 0: the centroid is only tol^(1/2)-accurate
  check_close(res.points[0].gamma, Cplx(0), Real("1e-11"));
  CHECK(res.points[0].multiplicity == 2);
  CHECK(dbl(abs(ric.eval(res.points[0].gamma) - res.points[0].gamma)) <= 1e-25);
  check_close(res.points[0].multiplier, Cplx(1), Real("1e-11"));
  CHECK(res.points[0].cls == FixedPointClass::Parabolic);

  auto lin = fixed_points(RationalMap::parse("2*y"), Real("1e-25"));
  REQUIRE(lin.points.size() == 1);
  check_close(lin.points[0].gamma, Cplx(0), Real("1e-20"));
  check_close(lin.points[0].multiplier, Cplx(2), Real("1e-20"));
  CHECK(lin.points[0].cls == FixedPointClass::Expanding);
}

TEST_CASE("multiplier agrees with a centered finite difference") {
  RationalMap R = RationalMap::parse("(2*y + 3*y^2)/(1 + y + y^3)");
  auto res = fixed_points(R, Real("1e-25"));
  REQUIRE(!res.points.empty());
  Real h("1e-8");
  for (const auto& fp : res.points) {
    CHECK(dbl(abs(R.eval(fp.gamma) - fp.gamma)) <= 1e-18);
    Cplx fd = (R.eval(fp.gamma + Cplx(h)) - R.eval(fp.gamma - Cplx(h))) / Cplx(2 * h);
    check_close(fp.multiplier, fd, Real("1e-6"));
  }
}

TEST_CASE("julia witness exists for random degree >= 2 maps") {
  Rng rng(23);
  int tested = 0;
  for (int trial = 0; trial < 12 && tested < 6; ++trial) {
    Polynomial num, den;
    num.coeffs = {Cplx(0), rng.disk(Real(2)) + Cplx(0.5), rng.disk(Real(1)), Cplx(1)};
    den.coeffs = {Cplx(1), rng.disk(Real(0.5))};
    RationalMap R{num, den};
    try {
      R.check_coprime(Real("1e-24"));
      auto res = fixed_points(R, Real("1e-24"));
      if (res.points.empty()) continue;
      CHECK(res.julia_witness);
      ++tested;
    } catch (const Error&) {
      continue;  // degenerate draw
    }
  }
  CHECK(tested >= 3);
}

TEST_CASE("expand_c: model equation has c_2 = 1 and nothing else") {
  EquationSpec eq = EquationSpec::model(Cplx(0.5));
  auto cs = expand_c(eq, 6);
  REQUIRE(cs.size() == 5);
  check_close(cs[0].expr.eval(Cplx(3, 1)), Cplx(1), coeff_tol());
  for (std::size_t i = 1; i < cs.size(); ++i)
    check_close(cs[i].expr.eval(Cplx(3, 1)), Cplx(0), coeff_tol());
}

TEST_CASE("expand_c matches the hand expansion for a pure denominator") {
  // a2 = 0, b1 = beta: c2 = -lambda beta, c3 = lambda beta^2
  Cplx lambda(2);
  Cplx beta(0, 1.5);
  EquationSpec eq;
  eq.lambda = lambda;
  eq.b.push_back(CoeffExpr::constant(beta));
  auto cs = expand_c(eq, 3);
  Cplx z(0.7, -0.2);
  check_close(cs[0].expr.eval(z), -lambda * beta, coeff_tol());
  check_close(cs[1].expr.eval(z), lambda * beta * beta, coeff_tol());
}

TEST_CASE("expand_c formal term count is 2^(j-1) for generic coefficients") {
  EquationSpec eq;
  eq.lambda = Cplx(2);
  for (int j = 2; j <= 8; ++j) eq.a_higher.push_back(CoeffExpr::constant(Cplx(1)));
  for (int k = 1; k <= 8; ++k) eq.b.push_back(CoeffExpr::constant(Cplx(1)));
  for (const auto& entry : expand_c(eq, 8))
    CHECK(entry.term_count == (1L << (entry.j - 1)));
}

TEST_CASE("expand_c consistency: F(z,y) - lambda y matches sum c_j y^j") {
  EquationSpec eq;
  eq.lambda = Cplx(2);
  eq.a_higher.push_back(CoeffExpr::parse("1/(1+z^2)"));  // a2
  eq.a_higher.push_back(CoeffExpr::constant(Cplx(0.3)));  // a3
  eq.b.push_back(CoeffExpr::parse("z/(4+z^2)"));  // b1
  int J = 10;
  auto cs = expand_c(eq, J);
  Rng rng(3);
  for (int trial = 0; trial < 50; ++trial) {
    Cplx z = Cplx(-5, 0) + rng.disk(Real(2));
    Cplx y = rng.disk(Real("0.05"));
    Cplx fy = eq.rhs(z, y);
    Cplx acc = eq.lambda * y;
    Cplx yp = y;
    for (const auto& entry : cs) {
      yp *= y;
      acc += entry.expr.eval(z) * yp;
    }
    // |remainder| <= C |y|^{J+1} with C estimated from one extra order
    auto cs1 = expand_c(eq, J + 1);
    Real C = 2 * abs(cs1.back().expr.eval(z)) + 1;
    CHECK(dbl(abs(fy - acc)) <= dbl(C * pow(abs(y), J + 1)));
  }
}

TEST_CASE("coefficient bound |c_j| <= |lambda| 2^(j-1) nu^((j-1)|z|) on samples") {
  EquationSpec eq;
  eq.lambda = Cplx(2);
  eq.a_higher.push_back(CoeffExpr::parse("exp(z)"));  // decays fast on the left
  eq.b.push_back(CoeffExpr::parse("exp(2*z)"));
  Real nu("1.5");
  auto rep = coeff_bound_check(eq, nu, Real(10), Real(1), StripSide::Left, 200);
  CHECK(rep.pass);
  auto cs = expand_c(eq, 8);
  Rng rng(17);
  for (int trial = 0; trial < 40; ++trial) {
    Cplx z(-10 - 30 * rng.uniform(), 2 * rng.uniform() - 1);
    for (const auto& entry : cs) {
      Real bound = abs(eq.lambda) * pow(Real(2), entry.j - 1) *
                   pow(nu, Real(entry.j - 1) * abs(z));
      CHECK(dbl(abs(entry.expr.eval(z))) <= dbl(bound * (1 + Real("1e-20"))));
    }
  }
}

TEST_CASE("coeff_bound_check failures") {
  // polynomial coefficient beats any decaying bound
  EquationSpec eq;
  eq.lambda = Cplx(2);
  eq.a_higher.push_back(CoeffExpr::parse("z"));
  auto rep = coeff_bound_check(eq, Real("0.9"), Real(5), Real(1), StripSide::Left, 300);
  CHECK(!rep.pass);

  // constant b1 passes for nu > 1
  EquationSpec c1;
  c1.lambda = Cplx(2);
  c1.b.push_back(CoeffExpr::constant(Cplx(1)));
  CHECK(coeff_bound_check(c1, Real("1.5"), Real(10), Real(1), StripSide::Left, 200).pass);

  // coefficient singularity inside the strip is reported
  EquationSpec sing;
  sing.lambda = Cplx(2);
  sing.a_higher.push_back(CoeffExpr::parse("1/(z+20)"));
  auto srep = coeff_bound_check(sing, Real("1.5"), Real(10), Real(1), StripSide::Left, 4000);
  CHECK(srep.singularity);
  CHECK(!srep.pass);
}

TEST_CASE("abel_normalize: y/(1+y) is exactly conjugate to a translation") {
  RationalMap R = RationalMap::parse("y/(1+y)");
  auto nf = abel_normalize(R, Cplx(0), 20, Real("1e-25"));
  CHECK(nf.m == 1);
  for (const auto& c : nf.c) CHECK(dbl(abs(c)) <= 1e-20);
}

TEST_CASE("abel_normalize: y + y^2 has c_1 = 1") {
  RationalMap R = RationalMap::parse("y + y^2");
  auto nf = abel_normalize(R, Cplx(0), 12, Real("1e-25"));
  CHECK(nf.m == 1);
  check_close(nf.c[0], Cplx(1), Real("1e-25"));
  // all c_j = 1 for this map (the normal form is u + 1 + sum u^-j exactly)
  for (const auto& c : nf.c) check_close(c, Cplx(1), Real("1e-25"));
}

TEST_CASE("abel_normalize: y + y^3 has m = 2") {
  RationalMap R = RationalMap::parse("y + y^3");
  auto nf = abel_normalize(R, Cplx(0), 8, Real("1e-25"));
  CHECK(nf.m == 2);
  // ladder starts at c_2 = 0 here; c_3 = 3/4 (the zeta^{-1} term)
  check_close(nf.c[1], Cplx(0), Real("1e-25"));
  check_close(nf.c[2], Cplx(0.75), Real("1e-25"));
}

TEST_CASE("abel_normalize rejects non-parabolic points") {
  RationalMap R = RationalMap::parse("2*y + y^2");
  CHECK_THROWS_AS(abel_normalize(R, Cplx(0), 8, Real("1e-25")), ValidationError);
}

TEST_CASE("schroder series for 2y + y^2 is e^zeta - 1") {
  RationalMap R = RationalMap::parse("2*y + y^2");
  PowerSeries w = schroder_series(R, Cplx(0), Cplx(1), 12, Real("1e-25"));
  Real fact(1);
  for (int n = 1; n <= 12; ++n) {
    fact *= n;
    check_close(w.coeff(n), Cplx(1 / fact), Real("1e-30"));
  }
}

TEST_CASE("schroder series trivial cases") {
  RationalMap R = RationalMap::parse("2*y + y^2");
  PowerSeries zero = schroder_series(R, Cplx(0), Cplx(0), 8, Real("1e-25"));
  for (int n = 0; n <= 7; ++n) check_close(zero.coeff(n), Cplx(0), Real("1e-30"));

  RationalMap lin = RationalMap::parse("0.5*y");
  PowerSeries w = schroder_series(lin, Cplx(0), Cplx(1), 8, Real("1e-25"));
  check_close(w.coeff(1), Cplx(1), Real("1e-30"));
  for (int n = 2; n <= 7; ++n) check_close(w.coeff(n), Cplx(0), Real("1e-30"));
}

TEST_CASE("schroder residual: w(lambda zeta) - R(w(zeta)) vanishes to order N") {
  RationalMap R = RationalMap::parse("(3*y + y^2)/(1 + 0.5*y)");
  int N = 14;
  Cplx gamma(0);
  Cplx lambda = R.derivative_at(gamma);
  PowerSeries w = schroder_series(R, gamma, Cplx(1), N, Real("1e-25"));

  // left side w(lambda zeta)
  PowerSeries lhs = w;
  Cplx lp(1);
  for (int n = 0; n <= N; ++n) {
    lhs.set_coeff(n, w.coeff(n) * lp);
    lp *= lambda;
  }
  // right side R(w(zeta)) via taylor coefficients of R at gamma
  std::vector<Cplx> r = R.taylor_at(gamma, N + 1);
  PowerSeries dev = w;
  dev.set_coeff(0, Cplx(0));
  PowerSeries acc = PowerSeries::zero(Cplx(0), N + 1);
  for (int j = N; j >= 1; --j) {
    acc = series_mul(acc, dev);
    acc.order = N + 1;
    acc.coeffs.resize(static_cast<std::size_t>(N + 1), Cplx(0));
    acc.set_coeff(0, acc.coeff(0) + r[static_cast<std::size_t>(j)]);
  }
  acc = series_mul(acc, dev);
  acc.set_coeff(0, acc.coeff(0) + r[0]);
  for (int n = 0; n <= N; ++n) check_close(lhs.coeff(n), acc.coeff(n), Real("1e-25"));

  // asymptotics: y(z) = w(lambda^z) has (y - gamma) lambda^{-z} -> alpha
  for (double re : {-20.0, -30.0}) {
    Cplx z(re, 0.3);
    Cplx zeta = exp(z * log(lambda));
    Cplx y = series_eval(w, zeta);
    check_close((y - gamma) / zeta, Cplx(1), Real("1e-8"));
  }
}

TEST_CASE("equation json echo and autonomous sampling equivalence") {
  EquationSpec eq = EquationSpec::model(Cplx(0.5));
  std::string js = eq.to_json();
  CHECK(js.find("\"lambda\"") != std::string::npos);

  Rng rng(9);
  for (int i = 0; i < 20; ++i) {
    Cplx z = rng.disk(Real(3));
    Cplx y = rng.disk(Real("0.4"));
    check_close(eq.rhs(z, y), eq.autonomous->eval(y), coeff_tol());
  }
}

TEST_CASE("superattracting fixed point classification") {
  // R(y) = 2y + y^2 fixes -1 with R'(-1) = 0
  auto res = fixed_points(RationalMap::parse("2*y + y^2"), Real("1e-25"));
  REQUIRE(res.points.size() == 2);
  check_close(res.points[0].gamma, Cplx(-1), Real("1e-20"));
  CHECK(res.points[0].cls == FixedPointClass::Superattracting);
  check_close(res.points[1].gamma, Cplx(0), Real("1e-20"));
  CHECK(res.points[1].cls == FixedPointClass::Expanding);
}
