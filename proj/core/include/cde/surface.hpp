#pragma once

#include <string>
#include <vector>

#include "cde/continuation.hpp"
#include "cde/series.hpp"

namespace cde {

/// The model q-difference solution g(lambda w) = lambda g(w) + g(w)^2 with
/// g(w) = g1 w + sum g_n w^n, plus its branch data once computed.
struct ModelSolution {
  Cplx lambda;
  Cplx g1;
  PowerSeries series;          // tail bound attached once r_hat is known
  Real r_hat{};                // radius of convergence = first branch point
  Real radius_lower_bound{};   // majorant bound
};

/// Coefficients g_2..g_N from the recurrence g_j = (lambda^j - lambda)^{-1}
/// sum_{s=1}^{j-1} g_s g_{j-s}. Throws NumericalError on resonance
/// lambda^j = lambda.
ModelSolution model_series(const Cplx& lambda, const Cplx& g1, int N);

/// Convergence-radius lower bound 1/(4 K |g1|) from the square-root majorant,
/// K = 1/(lambda - lambda^2) (the sup over j >= 2 is attained at j = 2 for
/// real lambda in (0,1)).
Real majorant_bound(const Real& lambda, const Cplx& g1);

/// Cauchy-Hadamard/ratio estimate of the convergence radius with
/// Richardson-style averaging over the last quartile of coefficient ratios.
/// Requires >= 20 nonzero coefficients.
Real estimate_radius(const PowerSeries& series);

/// The branch radius: the root of g(lambda w) + lambda^2/4 on the positive
/// axis (g real and decreasing there), bisected inside
/// [majorant_bound, 4 * estimate_radius]. Attaches the tail bound to
/// ms.series and fills r_hat / radius_lower_bound.
Real find_rhat(ModelSolution& ms, const Real& tol);

/// Convenience: series + radius data in one call.
ModelSolution solve_model(const Cplx& lambda, const Cplx& g1, int N, const Real& tol);

/// Branch ray of the model solution for a general nonzero g1: the scaling
/// symmetry w -> c w with c = -1/g1 reduces to the g1 = -1 case, so the
/// first branch point sits at (-1/g1) * r_hat(-1), i.e. on the ray of angle
/// arg(-1/g1) at modulus r_hat(-1)/|g1|. Real lambda in (0,1) only.
struct BranchRay {
  Real modulus;
  Real angle;
};
BranchRay find_branch_ray(const Cplx& lambda, const Cplx& g1, int N, const Real& tol);

/// Sheet of the model solution's Riemann surface, named by binary
/// subscripts: h0 = "0", h1 = "1", h10 = "10", ...
struct SheetLabel {
  std::string bits;

  /// Ladder index of the branch point this sheet was born at.
  int birth_index() const { return static_cast<int>(bits.size()) - 1; }

  /// Square-root sign choices (deepest unwind level first) realizing this
  /// sheet in evaluate_sheet: sign_k = +1 iff bit_{k-1} == bit_k with an
  /// implicit leading 0. Calibrated so that monodromy around lambda^{-1} r_hat
  /// exchanges h0 with h10 and h1 with h11, as the connection diagrams
  /// require.
  std::vector<int> sign_path() const;

  bool operator==(const SheetLabel& o) const { return bits == o.bits; }
  bool operator<(const SheetLabel& o) const {
    if (bits.size() != o.bits.size()) return bits.size() < o.bits.size();
    return bits < o.bits;
  }
};

/// All 2^M sheets alive at depth M: "0" plus every string starting with '1'
/// of length <= M.
std::vector<SheetLabel> sheets_at_depth(int M);

struct SurfaceEdge {
  int ladder_index;
  SheetLabel a, b;  // canonicalized: a < b
};

struct SurfaceGraph {
  Cplx lambda;
  Cplx g1;
  Real r_hat;
  int depth = 0;
  std::vector<Real> ladder;  // w_n = lambda^{-n} r_hat, n = 0..depth-1
  std::vector<SheetLabel> sheets;
  std::vector<SurfaceEdge> edges;

  std::string to_json() const;
};

struct SurfaceOptions {
  Real tol = Real("1e-9");
  Real radius_factor = Real("0.3");  // of the gap to the nearest ladder point
  int max_depth = 6;
  Real start_angle_frac = Real("0.25");  // start angle = frac * 2 pi
};

/// Enumerate sheets to depth M and discover every exchange edge by numeric
/// monodromy around each ladder point. Sheets born after index n are left
/// alone at w_n (their branch sets start at their birth index).
SurfaceGraph build_surface(const Cplx& lambda, int M, const SurfaceOptions& opt);

/// Monodromy around ladder point w_n from a named sheet; the circle radius
/// is radius_factor times the gap to the nearest ladder neighbour.
MonodromyResult sheet_monodromy(const ModelSolution& ms, int ladder_index,
                                const Real& radius_factor, const SheetLabel& start_sheet,
                                int loops, const Real& tol);

struct IdentityReport {
  std::string name;
  Real max_residual{};
  int samples = 0;
};

/// Residuals of the sheet identities (h0+h1=-lambda, the h0/h1 functional
/// equations, h10+h11=-lambda, and the two h10 relations) at seeded random
/// points in annuli clear of the ladder. Also reports the O(1) misfit of h1
/// against the original equation, confirming it solves a different one.
std::vector<IdentityReport> sheet_identity_check(const ModelSolution& ms, int samples,
                                                 std::uint64_t seed, const Real& tol);

struct Claim4Report {
  Real min_e_margin{};  // min over the e-tree of |e_j + lambda^2/4|
  Real min_d_abs{};     // min over the d-tree of |d_j|
  bool pass = false;
  /// The d-recursion is read as d_n = -lambda/2 +- sqrt(d_{n-1}); the
  /// additive constant mirrors the e-recursion.
  std::string d_reading = "d_n = -lambda/2 +- sqrt(d_{n-1})";
};

/// Enumerates both sign branches of the e- and d-sequences to the given
/// depth; pass iff both minima stay >= tol (so 0 is never a branch point and
/// the branch points stay quadratic).
Claim4Report claim4_sequences(const Real& lambda, int depth, const Real& tol);

/// w -> w^N reindexing of the series (a solution of the same equation with
/// b^N = lambda); the branch set rotates into N copies.
PowerSeries symmetry_lift(const ModelSolution& ms, int N);

}  // namespace cde
