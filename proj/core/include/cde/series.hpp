#pragma once

#include <optional>
#include <string>
#include <vector>

#include "cde/complex.hpp"

namespace cde {

/// Optional a-posteriori tail estimate: |truncation error| <= bound inside
/// |x - center| < radius. Operations that cannot propagate it drop it.
struct TailBound {
  Real bound;
  Real radius;
};

/// Truncated Taylor/Laurent series around a center.
///
/// coeffs[i] is the coefficient of (x - center)^(min_degree + i); `order` is
/// the exclusive truncation degree, so coeffs.size() == order - min_degree.
/// min_degree may be negative.
struct PowerSeries {
  Cplx center{};
  int min_degree = 0;
  std::vector<Cplx> coeffs;
  int order = 0;
  std::optional<TailBound> tail;

  static PowerSeries zero(const Cplx& center, int order);
  static PowerSeries constant(const Cplx& value, int order);
  /// Taylor series from ascending coefficients c0, c1, ... centered at 0.
  static PowerSeries taylor(std::vector<Cplx> coeffs);

  int length() const { return static_cast<int>(coeffs.size()); }
  /// Coefficient of degree d (0 outside the stored window).
  const Cplx& coeff(int d) const;
  void set_coeff(int d, Cplx v);

  /// Drop leading/trailing exact zeros without changing represented content.
  PowerSeries trimmed() const;
  PowerSeries truncated(int new_order) const;

  bool same_center(const PowerSeries& o) const { return center == o.center; }
};

PowerSeries series_add(const PowerSeries& a, const PowerSeries& b);
PowerSeries series_sub(const PowerSeries& a, const PowerSeries& b);

/// Cauchy product. The result order is the largest degree whose coefficient
/// is fully determined by the truncated inputs; for two Taylor series this is
/// min(order_a, order_b).
PowerSeries series_mul(const PowerSeries& a, const PowerSeries& b);

/// Multiplicative inverse: a * recip(a) = 1 + O(x^order). The leading stored
/// coefficient must be nonzero; Laurent input of valuation v yields valuation
/// -v.
PowerSeries series_recip(const PowerSeries& a);

/// outer(inner(x)) truncated. inner must have zero constant term relative to
/// outer's center offset; outer must be a Taylor series (min_degree >= 0).
PowerSeries series_compose(const PowerSeries& outer, const PowerSeries& inner);

PowerSeries series_derivative(const PowerSeries& a);

/// Scale by constant c, and multiply by x^k (degree shift).
PowerSeries series_scale(const PowerSeries& a, const Cplx& c);
PowerSeries series_shift(const PowerSeries& a, int k);

/// Horner evaluation at x. When a tail bound is present, evaluation strictly
/// outside its validity radius throws ValidationError.
Cplx series_eval(const PowerSeries& a, const Cplx& x);

/// JSON per the wire schema {center, minDegree, coeffs, order}; numbers are
/// serialized as full-precision decimal strings.
std::string series_to_json(const PowerSeries& a);
PowerSeries series_from_json(const std::string& text);

}  // namespace cde
