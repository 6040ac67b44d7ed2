#pragma once

#include <cstdint>
#include <optional>

#include "cde/strip.hpp"

namespace cde {

/// Data of the Abel-type normal form F(zeta) = zeta + 1 + sum c_j zeta^{-j}
/// (m = 1), or the fractional ladder for m >= 2. beta is pinned by the
/// normal form: c_1 for m = 1, m c_m/(m-1) for m >= 2.
struct AbelNormalForm {
  int m = 1;
  std::vector<Cplx> c;  // c[j-1] = c_j
  Cplx alpha;
  Cplx beta;
  Real delta{0.5};

  static AbelNormalForm make(const AbelCoefficients& coeffs, const Cplx& alpha,
                             const Real& delta);
  Cplx c_at(int j) const {
    return j >= 1 && j <= static_cast<int>(c.size()) ? c[static_cast<std::size_t>(j - 1)]
                                                     : Cplx(0);
  }
};

struct SolveOptions {
  int max_iter = 200;
  Real tol = Real("1e-10");
  int trunc_j = 24;          // j-sum cut
  Real tail_depth = 2000;    // absolute depth of the k-sum cut (Abel operator)
  Real ball = 1;             // |w - alpha| <= ball membership
  int rho_doublings = 4;     // auto-escalation cap
  std::optional<std::vector<Cplx>> initial;  // defaults to the asymptote
};

/// Empirical norm checks behind the m=1 Abel operator, evaluated at W = 0 on
/// the grid. worst_t1..t3 are the componentwise sums normalized against
/// (1/3)|z|^{-1+delta}; worst_total is |T[0](z)| normalized against
/// |z|^{-1+delta}, which is what the solver's rho escalation keys on (the
/// componentwise sufficient condition is much more conservative than the
/// composite membership bound and can fail on strips where the iteration is
/// still a contraction).
struct AbelBoundReport {
  bool pass = false;             // composite: worst_total <= 1
  bool pass_components = false;  // all three componentwise gates <= 1
  Real worst_t1{}, worst_t2{}, worst_t3{};
  Real worst_total{};
};

AbelBoundReport check_abel_bounds(const AbelNormalForm& nf, const StripDomain& d,
                                  const SolveOptions& opt);

/// Solve W = T[W] for the parabolic (m=1) operator
///   T[W](z) = sum_k [ c1 (1/(z-k+s) - 1/(z-k)) + sum_{j>=2} c_j/(z-k+s)^j
///             + beta (1/(z-k) - log(1+1/(z-k))) ],  s = alpha + beta log(z-k) + W(z-k),
/// with the k-sum cut at an absolute depth so the telescoping back to the
/// difference equation is exact on the grid. The exposed solution is
/// Y(z) = z + alpha + beta log z + W(z) (log branch cut along [0,+inf)).
StripFunction abel_solve(const AbelNormalForm& nf, StripDomain domain, SolveOptions opt);

/// Equation residual of the exposed Y against F(zeta) = zeta + 1 + sum c_j zeta^{-j}.
Real abel_equation_residual(const AbelNormalForm& nf, const StripFunction& W);

/// Y(z) for a solved StripFunction (Abel): z + alpha + beta log z + W(z).
Cplx abel_Y(const AbelNormalForm& nf, const StripFunction& W, int col, int row);

/// Solve w = T[w] for the half-plane operator of the non-autonomous equation:
/// left (|lambda| > 1):  T[w](z) = alpha + sum_{k>=1} G(z-k),
/// right (|lambda| < 1): T[w](z) = alpha - sum_{k>=0} G(z+k),
/// where G(u) = sum_{j>=2} c_j(u) lambda^{(j-1)u-1} w(u)^j. Off-grid values
/// seed with alpha; the tail is cut when the geometric envelope drops below
/// tol/10.
StripFunction picard_solve(const EquationSpec& eq, const Cplx& alpha, StripDomain domain,
                           SolveOptions opt);

/// Single-sweep closures over a fixed domain, for contraction_probe.
StripOperator make_picard_operator(const EquationSpec& eq, const Cplx& alpha,
                                   const StripDomain& d, const SolveOptions& opt);
StripOperator make_abel_operator(const AbelNormalForm& nf, const StripDomain& d,
                                 const SolveOptions& opt);

/// Telescoping forward recursion (Eqs. of the w-difference): an independent
/// oracle for picard_solve. Left side seeds w(z-K)=alpha and marches forward;
/// right side seeds w(z+K)=alpha and marches back (implicit steps solved by
/// inner iteration).
Cplx forward_telescope(const EquationSpec& eq, const Cplx& alpha, const Cplx& z, int K,
                       int J);

/// Empirical Lipschitz constant of one sweep over `pairs` random ball pairs.
Real contraction_probe(const StripOperator& op, const StripDomain& d, const Cplx& center,
                       const Real& ball, int pairs, std::uint64_t seed);

struct ParabolicAnsatzReport {
  int m = 1;
  Cplx fitted_alpha;
  Cplx fitted_beta;
  Real max_tail_residual{};  // max |W(z_n)| |z_n|^{1/m - delta} over the tail
  bool pass = false;
  bool escaped = false;
  int steps_used = 0;
};

/// m >= 2 route: iterate R forward along an attracting petal from orbit_seed,
/// transform by u_n = -(m+1)!/(m R^(m+1)(gamma)) (y_n-gamma)^{-m}, fit
/// u_n ~ n + alpha + beta n^{(m-1)/m} (+ log n), and check the tail bound
/// |W| <= |z|^{-1/m+delta}.
ParabolicAnsatzReport verify_parabolic_ansatz(const RationalMap& R, const Cplx& gamma,
                                              int m, const Cplx& orbit_seed, int steps,
                                              const Real& delta);

}  // namespace cde
