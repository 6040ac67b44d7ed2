#include "cde/polynomial.hpp"

#include <algorithm>

#include "cde/errors.hpp"

namespace cde {

bool Polynomial::is_zero() const {
  return std::all_of(coeffs.begin(), coeffs.end(),
                     [](const Cplx& c) { return c.is_zero(); });
}

Cplx Polynomial::eval(const Cplx& x) const {
  Cplx acc(0);
  for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) {
    acc *= x;
    acc += *it;
  }
  return acc;
}

Polynomial Polynomial::derivative() const {
  Polynomial d;
  for (std::size_t i = 1; i < coeffs.size(); ++i)
    d.coeffs.push_back(coeffs[i] * Cplx(Real(static_cast<int>(i))));
  return d;
}

Real Polynomial::coeff_scale() const {
  Real m(0);
  for (const auto& c : coeffs) m = std::max(m, abs(c), std::less<Real>());
  return m;
}

Polynomial Polynomial::normalized(const Real& rel_tol) const {
  Real cut = rel_tol * coeff_scale();
  Polynomial p = *this;
  while (p.coeffs.size() > 1 && abs(p.coeffs.back()) <= cut) p.coeffs.pop_back();
  return p;
}

Polynomial poly_add(const Polynomial& a, const Polynomial& b) {
  Polynomial r;
  r.coeffs.assign(std::max(a.coeffs.size(), b.coeffs.size()), Cplx(0));
  for (std::size_t i = 0; i < a.coeffs.size(); ++i) r.coeffs[i] += a.coeffs[i];
  for (std::size_t i = 0; i < b.coeffs.size(); ++i) r.coeffs[i] += b.coeffs[i];
  return r;
}

Polynomial poly_sub(const Polynomial& a, const Polynomial& b) {
  return poly_add(a, poly_scale(b, Cplx(-1)));
}

Polynomial poly_mul(const Polynomial& a, const Polynomial& b) {
  if (a.coeffs.empty() || b.coeffs.empty()) return Polynomial{};
  Polynomial r;
  r.coeffs.assign(a.coeffs.size() + b.coeffs.size() - 1, Cplx(0));
  for (std::size_t i = 0; i < a.coeffs.size(); ++i) {
    if (a.coeffs[i].is_zero()) continue;
    for (std::size_t j = 0; j < b.coeffs.size(); ++j)
      r.coeffs[i + j] += a.coeffs[i] * b.coeffs[j];
  }
  return r;
}

Polynomial poly_scale(const Polynomial& a, const Cplx& c) {
  Polynomial r = a;
  for (auto& v : r.coeffs) v *= c;
  return r;
}

std::vector<Root> poly_roots(const Polynomial& p_in, const Real& tol) {
  Polynomial p = p_in.normalized(real_eps());
  int n = p.degree();
  if (n < 1) throw ValidationError("poly_roots: degree must be >= 1");
  Real scale = p.coeff_scale();
  if (scale.is_zero()) throw ValidationError("poly_roots: zero polynomial");
  Real abs_tol = tol * scale;
  Polynomial dp = p.derivative();

  // Cauchy bound on root magnitude and a centroid shift
  const Cplx& lead = p.coeffs.back();
  Real bound(0);
  for (int i = 0; i < n; ++i)
    bound = std::max(bound, abs(p.coeffs[static_cast<std::size_t>(i)]) / abs(lead),
                     std::less<Real>());
  bound += 1;
  Cplx centroid = -p.coeffs[static_cast<std::size_t>(n - 1)] / (Cplx(Real(n)) * lead);

  // initial guesses on a circle, angle-offset to dodge axis symmetry
  std::vector<Cplx> x(static_cast<std::size_t>(n));
  Real two_pi = 2 * pi_value();
  for (int i = 0; i < n; ++i)
    x[static_cast<std::size_t>(i)] =
        centroid + polar(bound, two_pi * (Real(i) + Real(0.37)) / Real(n));

  const int max_iter = 400;
  std::vector<Cplx> pv(static_cast<std::size_t>(n));
  bool converged = false;
  for (int iter = 0; iter < max_iter && !converged; ++iter) {
    converged = true;
    for (int i = 0; i < n; ++i) {
      Cplx& xi = x[static_cast<std::size_t>(i)];
      Cplx f = p.eval(xi);
      pv[static_cast<std::size_t>(i)] = f;
      if (abs(f) <= abs_tol) continue;
      converged = false;
      Cplx df = dp.eval(xi);
      if (df.is_zero()) {
        // sitting on a critical point: nudge deterministically
        xi += Cplx(abs_tol + real_eps(), abs_tol + real_eps());
        continue;
      }
      Cplx ratio = f / df;
      Cplx rep(0);
      for (int j = 0; j < n; ++j) {
        if (j == i) continue;
        Cplx diff = xi - x[static_cast<std::size_t>(j)];
        if (diff.is_zero()) {
          diff = Cplx(real_eps(), real_eps());
        }
        rep += Cplx(1) / diff;
      }
      Cplx denom = Cplx(1) - ratio * rep;
      if (denom.is_zero()) {
        xi -= ratio;
      } else {
        xi -= ratio / denom;
      }
    }
  }
  for (int i = 0; i < n; ++i)
    if (abs(p.eval(x[static_cast<std::size_t>(i)])) > abs_tol)
      throw NumericalError("poly_roots: Aberth iteration did not converge");

  // cluster nearby iterates (multiple roots converge linearly to a tight blob)
  Real cluster_radius = 10 * pow(abs_tol / std::max(scale, Real(1), std::less<Real>()),
                                 Real(1) / Real(n));
  std::sort(x.begin(), x.end(), [](const Cplx& a, const Cplx& b) {
    if (a.re != b.re) return a.re < b.re;
    return a.im < b.im;
  });
  std::vector<Root> roots;
  std::vector<bool> used(static_cast<std::size_t>(n), false);
  for (int i = 0; i < n; ++i) {
    if (used[static_cast<std::size_t>(i)]) continue;
    std::vector<int> cluster{i};
    used[static_cast<std::size_t>(i)] = true;
    for (int j = i + 1; j < n; ++j) {
      if (used[static_cast<std::size_t>(j)]) continue;
      for (int k : cluster) {
        if (abs(x[static_cast<std::size_t>(j)] - x[static_cast<std::size_t>(k)]) <=
            cluster_radius) {
          cluster.push_back(j);
          used[static_cast<std::size_t>(j)] = true;
          break;
        }
      }
    }
    Cplx sum(0);
    for (int k : cluster) sum += x[static_cast<std::size_t>(k)];
    roots.push_back({sum / Cplx(Real(static_cast<int>(cluster.size()))),
                     static_cast<int>(cluster.size())});
  }
  return roots;
}

}  // namespace cde
