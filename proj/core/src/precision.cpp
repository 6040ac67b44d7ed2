#include "cde/precision.hpp"

#include <cmath>

#include "cde/errors.hpp"

namespace cde {

namespace {
unsigned g_bits = 0;

unsigned digits10_for_bits(unsigned bits) {
  // ceil(bits * log10(2)) + a couple of guard digits
  return static_cast<unsigned>(bits * 30103ULL / 100000ULL) + 2;
}
}  // namespace

void set_precision_bits(unsigned bits) {
  if (bits < 24) throw ValidationError("precision must be at least 24 bits");
  g_bits = bits;
  Real::default_precision(digits10_for_bits(bits));
}

unsigned precision_bits() {
  if (g_bits == 0) set_precision_bits(128);
  return g_bits;
}

unsigned serialization_digits() { return digits10_for_bits(precision_bits()) + 2; }

Real real_eps() {
  return ldexp(Real(1), 1 - static_cast<int>(precision_bits()));
}

Real coeff_tol() {
  return pow(Real(10), -static_cast<int>(precision_bits() / 8));
}

Real pi_value() {
  return 4 * atan(Real(1));
}

}  // namespace cde
