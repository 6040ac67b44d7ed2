#pragma once

#include <boost/multiprecision/mpfr.hpp>

namespace cde {

/// Arbitrary-precision real scalar. Precision is a process-global setting in
/// bits (default 128); values created after a precision change carry the new
/// precision. Branch-point location and deep backward recursion lose digits
/// geometrically, so everything downstream is built on this type rather than
/// on double.
using Real = boost::multiprecision::number<boost::multiprecision::mpfr_float_backend<0>,
                                           boost::multiprecision::et_off>;

/// Set the working precision. Call once at startup, before any Real exists.
void set_precision_bits(unsigned bits);

unsigned precision_bits();

/// Decimal digits that round-trip at the current precision (with guard digits).
unsigned serialization_digits();

/// 2^(1-bits): unit roundoff scale at the current precision.
Real real_eps();

/// 10^(-bits/8): the default per-coefficient tolerance used by the series
/// round-trip invariants.
Real coeff_tol();

Real pi_value();

}  // namespace cde
