#pragma once

#include <optional>
#include <string>
#include <vector>

#include "cde/expr.hpp"
#include "cde/polynomial.hpp"
#include "cde/series.hpp"

namespace cde {

/// Rational self-map of the y-plane. num and den must be coprime up to the
/// clustering tolerance (checked on normalize_checked).
struct RationalMap {
  Polynomial num;
  Polynomial den;

  static RationalMap from_polynomial(Polynomial p);
  /// Build from an expression in the variable y (+,-,*,/,^ only).
  static RationalMap parse(std::string_view src);

  int degree() const;
  /// Throws EvalError at poles.
  Cplx eval(const Cplx& y) const;
  Cplx derivative_at(const Cplx& y) const;
  bool is_pole(const Cplx& y, const Real& tol) const;

  /// Taylor coefficients r_j = R^(j)(gamma)/j! for j = 0..n-1, computed from
  /// the series quotient of num/den at gamma (exact to truncation order).
  std::vector<Cplx> taylor_at(const Cplx& gamma, int n) const;

  /// Verify num/den share no root within the clustering tolerance.
  void check_coprime(const Real& tol) const;
};

enum class FixedPointClass { Expanding, Contracting, Parabolic, Superattracting, Neutral };

std::string to_string(FixedPointClass c);

struct FixedPointReport {
  Cplx gamma;
  Cplx multiplier;
  FixedPointClass cls;
  int multiplicity = 1;
};

struct FixedPointsResult {
  std::vector<FixedPointReport> points;
  /// Julia's lemma witness: some fixed point with |R'|>1 or R'=1 (deg >= 2).
  bool julia_witness = false;
};

/// All finite fixed points R(y)=y with multipliers R'(gamma); multiple roots
/// are reported once per cluster with the derivative at the centroid.
FixedPointsResult fixed_points(const RationalMap& R, const Real& tol);

/// Multi-index over the denominator coefficients b_1..b_q:
/// degree d = sum j_k, weight w = sum k*j_k.
struct MultiIndex {
  std::vector<int> j;
  int degree() const;
  int weight() const;
};

/// The non-autonomous equation
///   y(z+1) = (lambda y + a_2(z) y^2 + ... + a_p y^p) / (1 + b_1(z) y + ... + b_q y^q).
/// a_higher[i] is a_{i+2}; b[i] is b_{i+1}; a_1 is the constant lambda.
struct EquationSpec {
  Cplx lambda;
  std::vector<CoeffExpr> a_higher;
  std::vector<CoeffExpr> b;
  std::optional<RationalMap> autonomous;

  static EquationSpec model(const Cplx& lambda);  // y(z+1) = lambda y + y^2
  static EquationSpec from_rational_map(const RationalMap& R, const Real& tol);

  int p() const { return static_cast<int>(a_higher.size()) + 1; }
  int q() const { return static_cast<int>(b.size()); }

  Cplx a_at(int j, const Cplx& z) const;  // j = 1..p
  Cplx b_at(int k, const Cplx& z) const;  // k = 1..q

  /// F(z, y); throws EvalError at poles of F or of the coefficients.
  Cplx rhs(const Cplx& z, const Cplx& y) const;

  std::string to_json() const;
};

/// One coefficient c_j(z) of y(z+1) - lambda y(z) = sum_{j>=2} c_j(z) y^j,
/// assembled from the geometric expansion of the denominator. term_count is
/// the number of formal terms (multinomial repetitions counted), 2^(j-1) for
/// generic a, b.
struct CExpansionEntry {
  int j;
  CoeffExpr expr;
  long term_count;
};

std::vector<CExpansionEntry> expand_c(const EquationSpec& eq, int J);

enum class StripSide { Left, Right };

struct BoundCheckReport {
  Real max_ratio_a{};
  Real max_ratio_b{};
  bool pass = false;
  bool singularity = false;
  Cplx singular_point;
};

/// Samples the strip D(rho,sigma) (left) or its right-half mirror and reports
/// max |a_j(z)| / nu^|z| and |b_k(z)| / nu^|z|; pass iff both <= 1 and no
/// coefficient singularity was hit.
BoundCheckReport coeff_bound_check(const EquationSpec& eq, const Real& nu, const Real& rho,
                                   const Real& sigma, StripSide side, int samples,
                                   std::uint64_t seed = 42);

struct AbelCoefficients {
  int m = 1;                 // smallest m with R^(m+1)(gamma) != 0
  std::vector<Cplx> c;       // c[j-1] = c_j, j = 1..J
  Cplx scale;                // the prefactor -(m+1)!/(m R^(m+1)(gamma))
};

/// Normal form near a parabolic fixed point (multiplier 1): for m=1 the
/// coefficients of F(zeta) = zeta + 1 + sum c_j zeta^-j; for m>=2 the
/// fractional-power ladder coefficients with beta = m c_m/(m-1).
AbelCoefficients abel_normalize(const RationalMap& R, const Cplx& gamma, int J,
                                const Real& tol);

/// Power-series solution of the inverse Schroeder equation w(lambda zeta) =
/// R(w(zeta)) with w(0)=gamma, w'(0)=alpha, solved order by order.
PowerSeries schroder_series(const RationalMap& R, const Cplx& gamma, const Cplx& alpha,
                            int N, const Real& tol);

}  // namespace cde
