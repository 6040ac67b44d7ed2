#include "cde/complex.hpp"

#include <sstream>

#include "cde/errors.hpp"

namespace cde {

Cplx& Cplx::operator+=(const Cplx& o) {
  re += o.re;
  im += o.im;
  return *this;
}

Cplx& Cplx::operator-=(const Cplx& o) {
  re -= o.re;
  im -= o.im;
  return *this;
}

Cplx& Cplx::operator*=(const Cplx& o) {
  Real r = re * o.re - im * o.im;
  im = re * o.im + im * o.re;
  re = std::move(r);
  return *this;
}

Cplx& Cplx::operator/=(const Cplx& o) {
  Real d = o.re * o.re + o.im * o.im;
  if (d.is_zero()) throw EvalError("complex division by zero");
  Real r = (re * o.re + im * o.im) / d;
  im = (im * o.re - re * o.im) / d;
  re = std::move(r);
  return *this;
}

Cplx operator+(const Cplx& a, const Cplx& b) { Cplx r = a; r += b; return r; }
Cplx operator-(const Cplx& a, const Cplx& b) { Cplx r = a; r -= b; return r; }
Cplx operator*(const Cplx& a, const Cplx& b) { Cplx r = a; r *= b; return r; }
Cplx operator/(const Cplx& a, const Cplx& b) { Cplx r = a; r /= b; return r; }
Cplx operator-(const Cplx& a) { return {-a.re, -a.im}; }
bool operator==(const Cplx& a, const Cplx& b) { return a.re == b.re && a.im == b.im; }

Cplx conj(const Cplx& z) { return {z.re, -z.im}; }

Real abs(const Cplx& z) {
  if (z.im.is_zero()) return abs(z.re);
  if (z.re.is_zero()) return abs(z.im);
  return hypot(z.re, z.im);
}

Real norm(const Cplx& z) { return z.re * z.re + z.im * z.im; }

Real arg(const Cplx& z) {
  if (z.is_zero()) return Real(0);
  if (z.im.is_zero() && z.re < 0) return pi_value();
  return atan2(z.im, z.re);
}

Cplx polar(const Real& r, const Real& theta) {
  return {r * cos(theta), r * sin(theta)};
}

Cplx sqrt(const Cplx& z) {
  if (z.is_zero()) return Cplx(0);
  Real m = abs(z);
  if (z.re >= 0) {
    Real t = sqrt((m + z.re) / 2);
    return {t, z.im / (2 * t)};
  }
  Real u = sqrt((m - z.re) / 2);
  if (z.im.is_zero()) return {Real(0), u};  // upper-side value on the cut
  if (z.im < 0) return {-z.im / (2 * u), -u};
  return {z.im / (2 * u), u};
}

Cplx exp(const Cplx& z) {
  Real m = exp(z.re);
  if (z.im.is_zero()) return {m, Real(0)};
  return {m * cos(z.im), m * sin(z.im)};
}

Cplx log(const Cplx& z) {
  if (z.is_zero()) throw EvalError("log of zero");
  return {log(abs(z)), arg(z)};
}

Cplx log_positive_cut(const Cplx& z) {
  if (z.is_zero()) throw EvalError("log of zero");
  return log(Cplx(-z.re, -z.im)) + Cplx(Real(0), pi_value());
}

Cplx pow(const Cplx& z, long n) {
  if (n == 0) return Cplx(1);
  if (n < 0) return Cplx(1) / pow(z, -n);
  Cplx base = z;
  Cplx acc(1);
  long e = n;
  while (e > 0) {
    if (e & 1) acc *= base;
    e >>= 1;
    if (e > 0) base *= base;
  }
  return acc;
}

Cplx pow(const Cplx& z, const Cplx& w) {
  if (z.is_zero()) {
    if (w.is_zero()) return Cplx(1);
    return Cplx(0);
  }
  return exp(w * log(z));
}

std::string to_string(const Real& x) {
  return x.str(serialization_digits(), std::ios_base::scientific);
}

std::string to_string(const Cplx& z) {
  return "(" + to_string(z.re) + ", " + to_string(z.im) + ")";
}

Real parse_real(const std::string& s) {
  try {
    return Real(s);
  } catch (const std::exception&) {
    throw ValidationError("not a real number: '" + s + "'");
  }
}

}  // namespace cde
