#pragma once

#include <doctest.h>

#include "cde/complex.hpp"
#include "cde/errors.hpp"

namespace cde::test {

inline double dbl(const Real& x) { return x.convert_to<double>(); }

inline void check_close(const Cplx& got, const Cplx& want, const Real& tol) {
  CAPTURE(to_string(got));
  CAPTURE(to_string(want));
  CHECK(dbl(abs(got - want)) <= dbl(tol));
}

inline void check_close(const Real& got, const Real& want, const Real& tol) {
  CAPTURE(to_string(got));
  CAPTURE(to_string(want));
  CHECK(dbl(abs(got - want)) <= dbl(tol));
}

}  // namespace cde::test
