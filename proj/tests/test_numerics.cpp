#include <doctest.h>

#include "cde/polynomial.hpp"
#include "cde/rng.hpp"
#include "cde/series.hpp"
#include "test_helpers.hpp"

using namespace cde;
using cde::test::check_close;
using cde::test::dbl;

namespace {

PowerSeries from_doubles(std::vector<double> v) {
  std::vector<Cplx> c;
  for (double x : v) c.emplace_back(x);
  return PowerSeries::taylor(std::move(c));
}

}  // namespace

TEST_CASE("series add/mul basics") {
  // (1 + w)(1 - w) truncated at order 3 = 1 - w^2
  PowerSeries a = from_doubles({1, 1, 0});
  PowerSeries b = from_doubles({1, -1, 0});
  PowerSeries p = series_mul(a, b);
  CHECK(p.order == 3);
  check_close(p.coeff(0), Cplx(1), coeff_tol());
  check_close(p.coeff(1), Cplx(0), coeff_tol());
  check_close(p.coeff(2), Cplx(-1), coeff_tol());

  // annihilator
  PowerSeries z = PowerSeries::zero(Cplx(0), 3);
  PowerSeries az = series_mul(a, z);
  for (int d = 0; d < az.order; ++d) CHECK(az.coeff(d).is_zero());

  // center mismatch rejected
  PowerSeries off = from_doubles({1, 1});
  off.center = Cplx(1);
  CHECK_THROWS_AS(series_mul(a, off), ValidationError);
}

TEST_CASE("cauchy product coefficient: w^3 of (g1 w + g2 w^2)^2") {
  // g1 = -1, g2 = -4 -> 2 g1 g2 = 8
  PowerSeries g = from_doubles({0, -1, -4, 0, 0});
  PowerSeries sq = series_mul(g, g);
  check_close(sq.coeff(3), Cplx(8), coeff_tol());
}

TEST_CASE("series recip") {
  // geometric series
  PowerSeries a = from_doubles({1, 1, 0, 0, 0, 0});
  PowerSeries r = series_recip(a);
  for (int d = 0; d < 6; ++d)
    check_close(r.coeff(d), Cplx(d % 2 == 0 ? 1 : -1), coeff_tol());

  // constants
  PowerSeries two = PowerSeries::constant(Cplx(2), 3);
  check_close(series_recip(two).coeff(0), Cplx(0.5), coeff_tol());

  // 1/(1 + w + w^2): coefficient of w^2 vanishes
  PowerSeries b = from_doubles({1, 1, 1, 0, 0});
  check_close(series_recip(b).coeff(2), Cplx(0), coeff_tol());

  CHECK_THROWS_AS(series_recip(PowerSeries::zero(Cplx(0), 4)), ValidationError);
}

TEST_CASE("series recip round-trip invariant") {
  Rng rng(11);
  for (int trial = 0; trial < 10; ++trial) {
    PowerSeries a = PowerSeries::zero(Cplx(0), 12);
    a.set_coeff(0, Cplx(1) + rng.disk(Real(0.5)));
    for (int d = 1; d < 12; ++d) a.set_coeff(d, rng.disk(Real(2)));
    PowerSeries prod = series_mul(a, series_recip(a));
    check_close(prod.coeff(0), Cplx(1), coeff_tol());
    for (int d = 1; d < prod.order; ++d) check_close(prod.coeff(d), Cplx(0), coeff_tol());
  }
}

TEST_CASE("series compose") {
  // w^2 o (w + w^2) = w^2 + 2w^3 + w^4
  PowerSeries outer = from_doubles({0, 0, 1, 0, 0});
  PowerSeries inner = from_doubles({0, 1, 1, 0, 0});
  PowerSeries comp = series_compose(outer, inner);
  check_close(comp.coeff(2), Cplx(1), coeff_tol());
  check_close(comp.coeff(3), Cplx(2), coeff_tol());
  check_close(comp.coeff(4), Cplx(1), coeff_tol());

  // identity outer leaves inner unchanged
  PowerSeries id = from_doubles({0, 1, 0, 0, 0});
  PowerSeries same = series_compose(id, inner);
  for (int d = 0; d < same.order; ++d) check_close(same.coeff(d), inner.coeff(d), coeff_tol());

  // exp o (2w): coefficient of w^2 is 2^2/2! = 2
  std::vector<Cplx> ec;
  Real fact(1);
  for (int n = 0; n < 6; ++n) {
    if (n > 0) fact *= n;
    ec.emplace_back(Real(1) / fact);
  }
  PowerSeries expser = PowerSeries::taylor(ec);
  PowerSeries twow = from_doubles({0, 2, 0, 0, 0, 0});
  check_close(series_compose(expser, twow).coeff(2), Cplx(2), coeff_tol());

  // nonzero constant term rejected
  PowerSeries bad = from_doubles({1, 1, 0});
  CHECK_THROWS_AS(series_compose(outer, bad), ValidationError);
}

TEST_CASE("laurent support: minDegree -1 evaluates against direct summation") {
  PowerSeries s;
  s.center = Cplx(0);
  s.min_degree = -1;
  s.order = 3;
  s.coeffs = {Cplx(2), Cplx(0), Cplx(1), Cplx(3)};  // 2/u + u + 3u^2
  Cplx u(0.3, 0.1);
  Cplx direct = Cplx(2) / u + u + Cplx(3) * u * u;
  check_close(series_eval(s, u), direct, coeff_tol());
}

TEST_CASE("series json round trip") {
  PowerSeries s;
  s.center = Cplx(Real("0.5"), Real("-1.25"));
  s.min_degree = -2;
  s.order = 2;
  s.coeffs = {Cplx(1), Cplx(Real("1e-30"), Real(3)), Cplx(0), Cplx(-7)};
  PowerSeries back = series_from_json(series_to_json(s));
  CHECK(back.min_degree == s.min_degree);
  CHECK(back.order == s.order);
  CHECK(back.center == s.center);
  REQUIRE(back.coeffs.size() == s.coeffs.size());
  for (std::size_t i = 0; i < s.coeffs.size(); ++i) CHECK(back.coeffs[i] == s.coeffs[i]);
}

TEST_CASE("poly_roots") {
  Real tol("1e-25");

  // y^2 + (lambda - 1) y, lambda = 0.5 -> {0, 0.5}
  Polynomial p({Cplx(0), Cplx(-0.5), Cplx(1)});
  auto roots = poly_roots(p, tol);
  REQUIRE(roots.size() == 2);
  check_close(roots[0].value, Cplx(0), Real("1e-20"));
  check_close(roots[1].value, Cplx(0.5), Real("1e-20"));

  // y^2 + 1 -> {i, -i} (order-free comparison)
  Polynomial q({Cplx(1), Cplx(0), Cplx(1)});
  auto qr = poly_roots(q, tol);
  REQUIRE(qr.size() == 2);
  for (const Cplx& want : {Cplx(0, 1), Cplx(0, -1)}) {
    Real best("1e300");
    for (const auto& r : qr) best = std::min(best, abs(r.value - want), std::less<Real>());
    CHECK(dbl(best) <= 1e-20);
  }

  // (y-1)^3 -> root 1 with multiplicity 3
  Polynomial c({Cplx(-1), Cplx(3), Cplx(-3), Cplx(1)});
  auto cr = poly_roots(c, Real("1e-24"));
  REQUIRE(cr.size() == 1);
  CHECK(cr[0].multiplicity == 3);
  check_close(cr[0].value, Cplx(1), Real("1e-7"));

  CHECK_THROWS_AS(poly_roots(Polynomial({Cplx(3)}), tol), ValidationError);
}

TEST_CASE("poly_roots residual invariant on random polynomials") {
  Rng rng(5);
  Real tol("1e-24");
  for (int trial = 0; trial < 8; ++trial) {
    int deg = 2 + static_cast<int>(rng.next() % 5);
    Polynomial p;
    for (int i = 0; i <= deg; ++i) p.coeffs.push_back(rng.disk(Real(3)));
    if (abs(p.coeffs.back()) < Real("0.2")) p.coeffs.back() = Cplx(1);
    Real scale = p.coeff_scale();
    int total = 0;
    for (const auto& r : poly_roots(p, tol)) {
      total += r.multiplicity;
      CHECK(dbl(abs(p.eval(r.value))) <= dbl(tol * scale));
    }
    CHECK(total == deg);
  }
}
