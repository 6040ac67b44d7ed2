#pragma once

#include <vector>

#include "cde/complex.hpp"

namespace cde {

/// Dense polynomial, coefficients ascending in degree. Trailing zeros are
/// trimmed on normalize() so the leading coefficient is nonzero.
struct Polynomial {
  std::vector<Cplx> coeffs;

  Polynomial() = default;
  explicit Polynomial(std::vector<Cplx> c) : coeffs(std::move(c)) {}

  int degree() const { return static_cast<int>(coeffs.size()) - 1; }
  bool is_zero() const;

  Cplx eval(const Cplx& x) const;
  Polynomial derivative() const;
  /// Largest coefficient magnitude (the residual scale for root acceptance).
  Real coeff_scale() const;
  /// Drop trailing coefficients below rel_tol * coeff_scale().
  Polynomial normalized(const Real& rel_tol) const;
};

Polynomial poly_add(const Polynomial& a, const Polynomial& b);
Polynomial poly_sub(const Polynomial& a, const Polynomial& b);
Polynomial poly_mul(const Polynomial& a, const Polynomial& b);
Polynomial poly_scale(const Polynomial& a, const Cplx& c);

struct Root {
  Cplx value;
  int multiplicity = 1;
};

/// All complex roots by Aberth–Ehrlich simultaneous iteration (no deflation).
/// Every returned root satisfies |p(root)| <= tol * max|coeff|; nearby
/// converged iterates are merged into one Root with the cluster centroid and
/// multiplicity equal to the cluster size.
/// Throws NumericalError if the iteration does not converge.
std::vector<Root> poly_roots(const Polynomial& p, const Real& tol);

}  // namespace cde
