#include "cde/equation.hpp"

#include <algorithm>
#include <functional>

#include <nlohmann/json.hpp>

#include "cde/detail/expr_node.hpp"
#include "cde/errors.hpp"
#include "cde/rng.hpp"

namespace cde {

namespace {

struct RationalPoly {
  Polynomial num;
  Polynomial den;
};

RationalPoly rp_const(const Cplx& c) { return {Polynomial({c}), Polynomial({Cplx(1)})}; }

RationalPoly rp_var() { return {Polynomial({Cplx(0), Cplx(1)}), Polynomial({Cplx(1)})}; }

RationalPoly rp_add(const RationalPoly& a, const RationalPoly& b) {
  return {poly_add(poly_mul(a.num, b.den), poly_mul(b.num, a.den)),
          poly_mul(a.den, b.den)};
}

RationalPoly rp_mul(const RationalPoly& a, const RationalPoly& b) {
  return {poly_mul(a.num, b.num), poly_mul(a.den, b.den)};
}

RationalPoly rp_div(const RationalPoly& a, const RationalPoly& b) {
  if (b.num.is_zero()) throw ValidationError("rational map: division by zero polynomial");
  return {poly_mul(a.num, b.den), poly_mul(a.den, b.num)};
}

RationalPoly rp_pow(const RationalPoly& a, long n) {
  if (n < 0) return rp_div(rp_const(Cplx(1)), rp_pow(a, -n));
  RationalPoly acc = rp_const(Cplx(1));
  for (long i = 0; i < n; ++i) acc = rp_mul(acc, a);
  return acc;
}

RationalPoly fold_node(const CoeffExpr::Node& n);

// Fold an expression tree (variable y, rational operators only) into num/den.
RationalPoly fold_rational(const CoeffExpr& e) { return fold_node(*e.node()); }

RationalPoly fold_node(const CoeffExpr::Node& n) {
  using Kind = CoeffExpr::Node::Kind;
  switch (n.kind) {
    case Kind::Const:
      return rp_const(n.value);
    case Kind::Var:
      return rp_var();
    case Kind::Add:
      return rp_add(fold_node(*n.lhs), fold_node(*n.rhs));
    case Kind::Sub: {
      RationalPoly b = fold_node(*n.rhs);
      b.num = poly_scale(b.num, Cplx(-1));
      return rp_add(fold_node(*n.lhs), b);
    }
    case Kind::Mul:
      return rp_mul(fold_node(*n.lhs), fold_node(*n.rhs));
    case Kind::Div:
      return rp_div(fold_node(*n.lhs), fold_node(*n.rhs));
    case Kind::Neg: {
      RationalPoly a = fold_node(*n.lhs);
      a.num = poly_scale(a.num, Cplx(-1));
      return a;
    }
    case Kind::Pow:
      return rp_pow(fold_node(*n.lhs), n.exponent);
    case Kind::Exp:
    case Kind::Log:
      throw ValidationError("rational map: exp/log are not rational in y");
  }
  throw Error("unreachable");
}

}  // namespace

RationalMap RationalMap::from_polynomial(Polynomial p) {
  RationalMap r;
  r.num = std::move(p);
  r.den = Polynomial({Cplx(1)});
  return r;
}

RationalMap RationalMap::parse(std::string_view src) {
  CoeffExpr e = CoeffExpr::parse(src, "y");
  RationalPoly rp = fold_rational(e);
  RationalMap r;
  r.num = rp.num.normalized(real_eps());
  r.den = rp.den.normalized(real_eps());
  if (r.den.is_zero()) throw ValidationError("rational map: denominator is zero");
  // scale so the denominator's leading coefficient is 1 (deterministic form)
  Cplx lead = r.den.coeffs.back();
  r.num = poly_scale(r.num, Cplx(1) / lead);
  r.den = poly_scale(r.den, Cplx(1) / lead);
  r.check_coprime(coeff_tol());
  return r;
}

int RationalMap::degree() const { return std::max(num.degree(), den.degree()); }

Cplx RationalMap::eval(const Cplx& y) const {
  Cplx d = den.eval(y);
  if (d.is_zero()) throw EvalError("pole of rational map at " + to_string(y));
  return num.eval(y) / d;
}

Cplx RationalMap::derivative_at(const Cplx& y) const {
  Cplx d = den.eval(y);
  if (d.is_zero()) throw EvalError("pole of rational map at " + to_string(y));
  Cplx n = num.eval(y);
  Cplx dn = num.derivative().eval(y);
  Cplx dd = den.derivative().eval(y);
  return (dn * d - n * dd) / (d * d);
}

bool RationalMap::is_pole(const Cplx& y, const Real& tol) const {
  return abs(den.eval(y)) <= tol * std::max(den.coeff_scale(), Real(1), std::less<Real>());
}

std::vector<Cplx> RationalMap::taylor_at(const Cplx& gamma, int n) const {
  // shift both polynomials to series in w = y - gamma, then divide
  auto shifted = [&](const Polynomial& p) {
    // p(gamma + w) via Horner with series coefficients
    PowerSeries acc = PowerSeries::zero(Cplx(0), n);
    PowerSeries w = PowerSeries::zero(Cplx(0), n);
    if (n > 1) w.set_coeff(1, Cplx(1));
    for (auto it = p.coeffs.rbegin(); it != p.coeffs.rend(); ++it) {
      acc = series_mul(acc, w);
      acc.order = n;  // mul against exact-degree-1 series keeps validity
      acc.coeffs.resize(static_cast<std::size_t>(n), Cplx(0));
      acc.set_coeff(0, acc.coeff(0) + *it);
    }
    return acc;
  };
  PowerSeries ns = shifted(num);
  PowerSeries ds = shifted(den);
  if (ds.coeff(0).is_zero())
    throw EvalError("taylor_at: expansion point is a pole");
  PowerSeries q = series_mul(ns, series_recip(ds));
  std::vector<Cplx> out;
  out.reserve(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j) out.push_back(q.coeff(j));
  return out;
}

void RationalMap::check_coprime(const Real& tol) const {
  if (num.degree() < 1 || den.degree() < 1) return;
  auto nr = poly_roots(num, tol);
  auto dr = poly_roots(den, tol);
  Real sep = pow(tol, Real(1) / Real(std::max(num.degree(), den.degree())));
  for (const auto& a : nr)
    for (const auto& b : dr)
      if (abs(a.value - b.value) < sep)
        throw ValidationError("rational map: num and den share a root near " +
                              to_string(a.value));
}

std::string to_string(FixedPointClass c) {
  switch (c) {
    case FixedPointClass::Expanding: return "expanding";
    case FixedPointClass::Contracting: return "contracting";
    case FixedPointClass::Parabolic: return "parabolic";
    case FixedPointClass::Superattracting: return "superattracting";
    case FixedPointClass::Neutral: return "neutral";
  }
  return "?";
}

FixedPointsResult fixed_points(const RationalMap& R, const Real& tol) {
  // roots of num(y) - y den(y)
  Polynomial shifted = poly_sub(R.num, poly_mul(Polynomial({Cplx(0), Cplx(1)}), R.den));
  shifted = shifted.normalized(real_eps());
  FixedPointsResult res;
  if (shifted.degree() < 1) {
    if (!shifted.is_zero()) return res;  // no finite fixed point
    throw ValidationError("fixed_points: identity map is degenerate");
  }
  auto roots = poly_roots(shifted, tol);
  for (const auto& r : roots) {
    if (R.is_pole(r.value, tol)) continue;
    FixedPointReport rep;
    rep.gamma = r.value;
    rep.multiplicity = r.multiplicity;
    rep.multiplier = R.derivative_at(r.value);
    // a multiplicity-mu cluster locates its centroid only to ~tol^(1/mu),
    // so the classification tolerance must widen accordingly
    Real loc_err = pow(tol * std::max(shifted.coeff_scale(), Real(1), std::less<Real>()),
                       Real(1) / Real(r.multiplicity));
    Real class_tol = std::max(sqrt(real_eps()), 100 * loc_err, std::less<Real>());
    Real mag = abs(rep.multiplier);
    if (abs(rep.multiplier - Cplx(1)) <= class_tol) {
      rep.cls = FixedPointClass::Parabolic;
    } else if (mag <= class_tol) {
      rep.cls = FixedPointClass::Superattracting;
    } else if (mag > 1 + class_tol) {
      rep.cls = FixedPointClass::Expanding;
    } else if (mag < 1 - class_tol) {
      rep.cls = FixedPointClass::Contracting;
    } else {
      rep.cls = FixedPointClass::Neutral;
    }
    if (rep.cls == FixedPointClass::Expanding || rep.cls == FixedPointClass::Parabolic)
      res.julia_witness = true;
    res.points.push_back(std::move(rep));
  }
  std::sort(res.points.begin(), res.points.end(),
            [](const FixedPointReport& a, const FixedPointReport& b) {
              if (a.gamma.re != b.gamma.re) return a.gamma.re < b.gamma.re;
              return a.gamma.im < b.gamma.im;
            });
  return res;
}

int MultiIndex::degree() const {
  int d = 0;
  for (int v : j) d += v;
  return d;
}

int MultiIndex::weight() const {
  int w = 0;
  for (std::size_t k = 0; k < j.size(); ++k) w += static_cast<int>(k + 1) * j[k];
  return w;
}

EquationSpec EquationSpec::model(const Cplx& lambda) {
  EquationSpec eq;
  eq.lambda = lambda;
  eq.a_higher.push_back(CoeffExpr::constant(Cplx(1)));
  RationalMap R;
  R.num = Polynomial({Cplx(0), lambda, Cplx(1)});
  R.den = Polynomial({Cplx(1)});
  eq.autonomous = R;
  return eq;
}

EquationSpec EquationSpec::from_rational_map(const RationalMap& R, const Real& tol) {
  // requires F(0)=0 with den(0) normalized to 1 (the equation's fixed form)
  if (R.num.coeffs.empty() || !(abs(R.num.coeffs[0]) <= tol))
    throw ValidationError("from_rational_map: map must fix y=0 (num(0)=0)");
  if (R.den.coeffs.empty() || R.den.coeffs[0].is_zero())
    throw ValidationError("from_rational_map: den(0) must be nonzero");
  Cplx d0 = R.den.coeffs[0];
  EquationSpec eq;
  eq.lambda = (R.num.coeffs.size() > 1 ? R.num.coeffs[1] : Cplx(0)) / d0;
  if (eq.lambda.is_zero()) throw ValidationError("from_rational_map: lambda must be nonzero");
  for (std::size_t j = 2; j < R.num.coeffs.size(); ++j)
    eq.a_higher.push_back(CoeffExpr::constant(R.num.coeffs[j] / d0));
  for (std::size_t k = 1; k < R.den.coeffs.size(); ++k)
    eq.b.push_back(CoeffExpr::constant(R.den.coeffs[k] / d0));
  RationalMap norm;
  norm.num = poly_scale(R.num, Cplx(1) / d0);
  norm.den = poly_scale(R.den, Cplx(1) / d0);
  eq.autonomous = std::move(norm);
  return eq;
}

Cplx EquationSpec::a_at(int j, const Cplx& z) const {
  if (j == 1) return lambda;
  int idx = j - 2;
  if (idx < 0 || idx >= static_cast<int>(a_higher.size())) return Cplx(0);
  return a_higher[static_cast<std::size_t>(idx)].eval(z);
}

Cplx EquationSpec::b_at(int k, const Cplx& z) const {
  int idx = k - 1;
  if (idx < 0 || idx >= static_cast<int>(b.size())) return Cplx(0);
  return b[static_cast<std::size_t>(idx)].eval(z);
}

Cplx EquationSpec::rhs(const Cplx& z, const Cplx& y) const {
  Cplx numv(0);
  for (int j = p(); j >= 1; --j) {
    numv *= y;
    numv += a_at(j, z);
  }
  numv *= y;
  Cplx denv(0);
  for (int k = q(); k >= 1; --k) {
    denv *= y;
    denv += b_at(k, z);
  }
  denv = denv * y + Cplx(1);
  if (denv.is_zero()) throw EvalError("pole of F at y = " + to_string(y));
  return numv / denv;
}

std::string EquationSpec::to_json() const {
  nlohmann::json j;
  j["formatVersion"] = 1;
  j["lambda"] = {to_string(lambda.re), to_string(lambda.im)};
  nlohmann::json a = nlohmann::json::object();
  for (std::size_t i = 0; i < a_higher.size(); ++i)
    a[std::to_string(i + 2)] = a_higher[i].to_string();
  j["a"] = std::move(a);
  nlohmann::json bb = nlohmann::json::object();
  for (std::size_t i = 0; i < b.size(); ++i) bb[std::to_string(i + 1)] = b[i].to_string();
  j["b"] = std::move(bb);
  j["flavor"] = autonomous ? "autonomous" : "nonAutonomous";
  return j.dump(2);
}

namespace {

// enumerate multi-indices tau over b_1..b_q with weight(tau) = target
void enumerate_weighted(int q, int target, int k, MultiIndex& cur,
                        const std::function<void(const MultiIndex&)>& emit) {
  if (target == 0) {
    emit(cur);
    return;
  }
  if (k > q || k > target) return;
  // j_k copies of weight k
  for (int jk = 0; jk * k <= target; ++jk) {
    cur.j[static_cast<std::size_t>(k - 1)] = jk;
    enumerate_weighted(q, target - jk * k, k + 1, cur, emit);
  }
  cur.j[static_cast<std::size_t>(k - 1)] = 0;
}

long multinomial_exact(const MultiIndex& t) {
  // n! / prod(j_k!) via iterated binomials: safe for the small degrees here
  long n = t.degree();
  auto binom = [](long a, long b) {
    long r = 1;
    for (long i = 1; i <= b; ++i) r = r * (a - b + i) / i;
    return r;
  };
  long result = 1;
  long used = 0;
  for (int jk : t.j) {
    used += jk;
    result *= binom(used, jk);
  }
  (void)n;
  return result;
}

}  // namespace

std::vector<CExpansionEntry> expand_c(const EquationSpec& eq, int J) {
  if (J < 2) throw ValidationError("expand_c: J must be >= 2");
  std::vector<CExpansionEntry> out;
  int q = eq.q();
  for (int m = 2; m <= J; ++m) {
    CoeffExpr sum = CoeffExpr::constant(Cplx(0));
    long terms = 0;
    for (int jp = 1; jp <= std::min(eq.p(), m); ++jp) {
      int target = m - jp;
      if (target == 0) {
        if (jp >= 2 && jp - 2 < static_cast<int>(eq.a_higher.size())) {
          sum = sum + eq.a_higher[static_cast<std::size_t>(jp - 2)];
          terms += 1;
        }
        continue;
      }
      if (q == 0) continue;
      MultiIndex cur;
      cur.j.assign(static_cast<std::size_t>(q), 0);
      enumerate_weighted(q, target, 1, cur, [&](const MultiIndex& tau) {
        long mult = multinomial_exact(tau);
        CoeffExpr term = jp == 1 ? CoeffExpr::constant(eq.lambda)
                                 : (jp - 2 < static_cast<int>(eq.a_higher.size())
                                        ? eq.a_higher[static_cast<std::size_t>(jp - 2)]
                                        : CoeffExpr::constant(Cplx(0)));
        bool vanishes = jp >= 2 && jp - 2 >= static_cast<int>(eq.a_higher.size());
        for (int k = 1; k <= q && !vanishes; ++k) {
          int jk = tau.j[static_cast<std::size_t>(k - 1)];
          if (jk > 0)
            term = term * CoeffExpr::pow(eq.b[static_cast<std::size_t>(k - 1)],
                                         static_cast<long>(jk));
        }
        if (vanishes) return;
        int sign = tau.degree() % 2 == 0 ? 1 : -1;
        Cplx factor(Real(sign * mult));
        sum = sum + CoeffExpr::constant(factor) * term;
        terms += mult;
      });
    }
    out.push_back({m, sum, terms});
  }
  return out;
}

BoundCheckReport coeff_bound_check(const EquationSpec& eq, const Real& nu, const Real& rho,
                                   const Real& sigma, StripSide side, int samples,
                                   std::uint64_t seed) {
  if (!(nu > 0)) throw ValidationError("coeff_bound_check: nu must be positive");
  if (side == StripSide::Left && !(nu < abs(eq.lambda)))
    throw ValidationError("coeff_bound_check: need nu < |lambda| on the left strip");
  if (side == StripSide::Right && !(nu < abs(eq.lambda) && abs(eq.lambda) < 1))
    throw ValidationError("coeff_bound_check: need nu < |lambda| < 1 on the right strip");

  BoundCheckReport rep;
  auto probe = [&](const Cplx& z) {
    Real denom = pow(nu, abs(z));
    try {
      for (int j = 2; j <= eq.p(); ++j) {
        Real r = abs(eq.a_at(j, z)) / denom;
        rep.max_ratio_a = std::max(rep.max_ratio_a, r, std::less<Real>());
      }
      for (int k = 1; k <= eq.q(); ++k) {
        Real r = abs(eq.b_at(k, z)) / denom;
        rep.max_ratio_b = std::max(rep.max_ratio_b, r, std::less<Real>());
      }
      return true;
    } catch (const EvalError&) {
      rep.singularity = true;
      rep.singular_point = z;
      rep.pass = false;
      return false;
    }
  };

  Real span = 5 * rho + 50;
  // structured lattice first (it pins poles on simple loci), seeded fill after
  Real steps[] = {Real(0), sigma / 2, -sigma / 2, sigma * Real("0.9"), -sigma * Real("0.9")};
  for (const Real& im : steps) {
    Real re = side == StripSide::Left ? -rho : rho;
    Real dir = side == StripSide::Left ? Real("-0.25") : Real("0.25");
    for (int i = 0; i * 1 <= 4 * span.convert_to<long>(); ++i) {
      if (!probe(Cplx(re, im))) return rep;
      re += dir;
    }
  }
  Rng rng(seed);
  for (int s = 0; s < samples; ++s) {
    Real re = side == StripSide::Left ? -rho - rng.uniform() * span
                                      : rho + rng.uniform() * span;
    Real im = (2 * rng.uniform() - 1) * sigma;
    if (!probe(Cplx(re, im))) return rep;
  }
  rep.pass = rep.max_ratio_a <= 1 && rep.max_ratio_b <= 1;
  return rep;
}

AbelCoefficients abel_normalize(const RationalMap& R, const Cplx& gamma, int J,
                                const Real& tol) {
  int need = J + 4;
  std::vector<Cplx> r = R.taylor_at(gamma, need + 2);
  if (abs(r[0] - gamma) > tol)
    throw ValidationError("abel_normalize: gamma is not a fixed point");
  if (abs(r[1] - Cplx(1)) > tol)
    throw ValidationError("abel_normalize: multiplier at gamma is not 1");

  Real scale(0);
  for (const auto& c : r) scale = std::max(scale, abs(c), std::less<Real>());
  int m = 0;
  for (int j = 2; j < static_cast<int>(r.size()); ++j) {
    if (abs(r[static_cast<std::size_t>(j)]) > tol * std::max(scale, Real(1), std::less<Real>())) {
      m = j - 1;
      break;
    }
  }
  if (m == 0)
    throw ValidationError("abel_normalize: all derivatives up to J vanish (degenerate)");

  AbelCoefficients out;
  out.m = m;
  const Cplx rm1 = r[static_cast<std::size_t>(m + 1)];  // R^(m+1)(gamma)/(m+1)!
  // -(m+1)!/(m R^(m+1)(gamma)) = -1/(m * rm1)
  out.scale = Cplx(-1) / (Cplx(Real(m)) * rm1);

  if (m == 1) {
    // F(t) = -(1/r2) * recip(W(t)), W(t) = sum_{j>=1} r_j (-1/r2)^j t^j;
    // c_j = [t^j] F for j >= 1 (and [t^-1]=1, [t^0]=1 as a sanity check).
    const Cplx& r2 = r[2];
    int n = J + 2;
    PowerSeries W;
    W.center = Cplx(0);
    W.min_degree = 1;
    W.order = n + 1;
    W.coeffs.assign(static_cast<std::size_t>(n), Cplx(0));
    Cplx mr = Cplx(-1) / r2;
    Cplx powacc = mr;
    for (int j = 1; j <= n; ++j) {
      W.set_coeff(j, r[static_cast<std::size_t>(j)] * powacc);
      powacc *= mr;
    }
    PowerSeries F = series_scale(series_recip(W), -Cplx(1) / r2);
    if (abs(F.coeff(-1) - Cplx(1)) > sqrt(tol) || abs(F.coeff(0) - Cplx(1)) > sqrt(tol))
      throw NumericalError("abel_normalize: normal form leading terms are off");
    for (int j = 1; j <= J; ++j) out.c.push_back(F.coeff(j));
    return out;
  }

  // m >= 2: Ftilde(zeta) = zeta (1+h(t))^{-m}, t = zeta^{-1/m},
  // h(t) = sum_{j>=m+1} r_j mu^{j-1} t^{j-1}, mu = (-m rm1)^{-1/m};
  // c_j = [t^{j+1}] (1+h)^{-m} for j >= m.
  Cplx mu = pow(Cplx(-1) * Cplx(Real(m)) * rm1, Cplx(Real(-1) / Real(m)));
  int n = J + 2;
  PowerSeries h = PowerSeries::zero(Cplx(0), n + 1);
  Cplx mupow = pow(mu, static_cast<long>(m));
  for (int j = m + 1; j <= n; ++j) {
    if (j >= static_cast<int>(r.size())) break;
    h.set_coeff(j - 1, r[static_cast<std::size_t>(j)] * mupow);
    mupow *= mu;
  }
  // (1+h)^{-m} via repeated recip/mul of (1+h)
  PowerSeries oneph = h;
  oneph.set_coeff(0, oneph.coeff(0) + Cplx(1));
  PowerSeries inv = series_recip(oneph);
  PowerSeries acc = PowerSeries::constant(Cplx(1), n + 1);
  for (int i = 0; i < m; ++i) {
    acc = series_mul(acc, inv);
    acc.order = n + 1;
    acc.coeffs.resize(static_cast<std::size_t>(n + 1), Cplx(0));
  }
  if (abs(acc.coeff(m) - Cplx(1)) > sqrt(tol))
    throw NumericalError("abel_normalize: m>=2 normal form constant term is off");
  for (int j = 1; j <= J; ++j) {
    // c_j defined for j >= m; below that the ladder has no term
    out.c.push_back(j >= m && j + 1 <= n ? acc.coeff(j + 1) : Cplx(0));
  }
  return out;
}

PowerSeries schroder_series(const RationalMap& R, const Cplx& gamma, const Cplx& alpha,
                            int N, const Real& tol) {
  std::vector<Cplx> r = R.taylor_at(gamma, N + 1);
  if (abs(r[0] - gamma) > tol)
    throw ValidationError("schroder_series: gamma is not a fixed point");
  Cplx lambda = r[1];
  Real mag = abs(lambda);
  if (mag <= tol || abs(mag - 1) <= tol)
    throw ValidationError("schroder_series: need |R'(gamma)| not in {0, 1}");

  PowerSeries w = PowerSeries::zero(Cplx(0), N + 1);
  w.set_coeff(0, gamma);
  if (N >= 1) w.set_coeff(1, alpha);
  if (alpha.is_zero()) return w;  // the constant-germ solution

  // deviation u = w - gamma as a series with zero constant term
  PowerSeries u = w;
  u.set_coeff(0, Cplx(0));

  for (int n = 2; n <= N; ++n) {
    // [zeta^n] of sum_{j>=2} r_j u(zeta)^j using u known through degree n-1
    PowerSeries acc = PowerSeries::zero(Cplx(0), n + 1);
    PowerSeries un = u.truncated(n + 1);
    // Horner over j = deg..2
    int jmax = std::min(static_cast<int>(r.size()) - 1, n);
    for (int j = jmax; j >= 2; --j) {
      acc = series_mul(acc, un);
      acc.order = n + 1;
      acc.coeffs.resize(static_cast<std::size_t>(n + 1), Cplx(0));
      acc.set_coeff(0, acc.coeff(0) + r[static_cast<std::size_t>(j)]);
    }
    acc = series_mul(acc, un);
    acc = series_mul(acc, un);
    Cplx resonant = pow(lambda, static_cast<long>(n)) - lambda;
    if (abs(resonant) < tol)
      throw NumericalError("schroder_series: resonance lambda^n = lambda at n = " +
                           std::to_string(n));
    Cplx wn = acc.coeff(n) / resonant;
    w.set_coeff(n, wn);
    u.set_coeff(n, wn);
  }
  return w;
}

}  // namespace cde
