#pragma once

#include <string>

#include "cde/precision.hpp"

namespace cde {

/// Complex scalar over the configurable-precision Real. std::complex is not
/// specified for user-defined value types, so the handful of operations the
/// library needs live here.
struct Cplx {
  Real re{};
  Real im{};

  Cplx() = default;
  Cplx(Real r) : re(std::move(r)) {}  // NOLINT: implicit by design
  Cplx(Real r, Real i) : re(std::move(r)), im(std::move(i)) {}
  Cplx(double r) : re(r) {}  // NOLINT
  Cplx(double r, double i) : re(r), im(i) {}
  Cplx(int r) : re(r) {}  // NOLINT

  Cplx& operator+=(const Cplx& o);
  Cplx& operator-=(const Cplx& o);
  Cplx& operator*=(const Cplx& o);
  Cplx& operator/=(const Cplx& o);

  bool is_zero() const { return re.is_zero() && im.is_zero(); }
};

Cplx operator+(const Cplx& a, const Cplx& b);
Cplx operator-(const Cplx& a, const Cplx& b);
Cplx operator*(const Cplx& a, const Cplx& b);
Cplx operator/(const Cplx& a, const Cplx& b);
Cplx operator-(const Cplx& a);
bool operator==(const Cplx& a, const Cplx& b);

Cplx conj(const Cplx& z);
Real abs(const Cplx& z);
Real norm(const Cplx& z);  // |z|^2

/// Principal argument in (-pi, pi]; on the negative real axis returns +pi
/// (the upper-side limit).
Real arg(const Cplx& z);

Cplx polar(const Real& r, const Real& theta);

/// Principal square root (cut along the negative real axis; sqrt of a
/// negative real is +i*sqrt(|x|)).
Cplx sqrt(const Cplx& z);

Cplx exp(const Cplx& z);

/// Principal logarithm (cut along the negative real axis, upper-side limit
/// on the cut). Throws EvalError at 0.
Cplx log(const Cplx& z);

/// Logarithm with the branch cut along [0, +inf): analytic on left half-plane
/// strips that straddle the negative real axis. Agrees with the principal
/// branch on and above the negative real axis.
Cplx log_positive_cut(const Cplx& z);

Cplx pow(const Cplx& z, long n);
/// Principal power exp(w * log z).
Cplx pow(const Cplx& z, const Cplx& w);

/// Full-precision decimal rendering that round-trips through parse_real.
std::string to_string(const Real& x);
std::string to_string(const Cplx& z);
Real parse_real(const std::string& s);

}  // namespace cde
