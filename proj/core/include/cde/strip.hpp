#pragma once

#include <functional>
#include <vector>

#include "cde/complex.hpp"
#include "cde/equation.hpp"

namespace cde {

/// Rectangular sample grid inside the half-plane strip D(rho,sigma) (left:
/// Re z < -rho) or its right-half mirror. Columns step by re_step with
/// 1/re_step integral, so z - k lands on the grid for integer k; rows lie
/// strictly inside |Im z| < sigma.
struct StripDomain {
  Real rho;
  Real sigma;
  StripSide side;
  Real re_step;
  Real im_step;
  Real extent;
  std::vector<Real> re_points;  // ascending
  std::vector<Real> im_points;  // ascending

  static StripDomain make(StripSide side, const Real& rho, const Real& sigma,
                          const Real& extent, const Real& re_step, const Real& im_step);

  int cols() const { return static_cast<int>(re_points.size()); }
  int rows() const { return static_cast<int>(im_points.size()); }
  int size() const { return cols() * rows(); }
  /// Columns per unit of Re (the integer 1/re_step).
  int stride() const;
  Cplx point(int col, int row) const {
    return {re_points[static_cast<std::size_t>(col)], im_points[static_cast<std::size_t>(row)]};
  }
};

/// A gridded iterate/solution w on a StripDomain, with its asymptote alpha
/// and the truncation parameters used to make the operator finite.
struct StripFunction {
  StripDomain domain;
  std::vector<Cplx> values;  // [col * rows + row]
  Cplx asymptote;
  int trunc_k = 0;  // tail cut of the k-sum
  int trunc_j = 0;  // tail cut of the j-sum
  Real fixed_point_step{};    // ||T[w]-w|| at acceptance
  Real equation_residual{};   // max |y(z+1)-F(z,y(z))| over interior points
  int iterations = 0;
  Real rho_used{};            // final rho after any auto-escalation

  Cplx& at(int col, int row) { return values[static_cast<std::size_t>(col * domain.rows() + row)]; }
  const Cplx& at(int col, int row) const {
    return values[static_cast<std::size_t>(col * domain.rows() + row)];
  }
  /// Value at a grid point given by its complex coordinate (must be on grid).
  const Cplx& value_at(const Cplx& z) const;
  bool has_point(const Cplx& z) const;
};

/// One Jacobi sweep of a strip operator: new grid values from old. Used by
/// the Picard drivers and by contraction_probe.
using StripOperator = std::function<std::vector<Cplx>(const std::vector<Cplx>&)>;

}  // namespace cde
