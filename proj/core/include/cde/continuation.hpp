#pragma once

#include <memory>
#include <utility>
#include <variant>
#include <vector>

#include "cde/equation.hpp"
#include "cde/series.hpp"

namespace cde {

enum class PlaneTag { W, Z };

/// A germ of a continued solution: the point, the value there, and the path
/// walked to reach it. Immutable snapshot once returned.
struct FunctionElement {
  PlaneTag plane = PlaneTag::W;
  Cplx point;
  Cplx value;
  std::vector<std::pair<Cplx, Cplx>> history;
};

struct SegmentPath {
  Cplx a, b;
};

struct CirclePath {
  Cplx center;
  Real radius;
  Real start_angle;
  Real turns;  // may be fractional; negative = clockwise
};

struct PathSpec {
  std::variant<SegmentPath, CirclePath> shape;
  Real max_step{0.02};   // as a fraction of the path parameter
  Real min_step{Real("1e-6")};
  Real jump_tol{0.1};    // relative value jump that forces step halving

  Cplx point(const Real& t) const;  // t in [0,1]
  Real length() const;
};

/// Stateful evaluator advanced along a path; continuity selects branches.
/// clone() snapshots the state so the walker can retry a halved step.
class ContinuationEvaluator {
 public:
  virtual ~ContinuationEvaluator() = default;
  /// Initialize at the path start; returns the value there.
  virtual Cplx start(const Cplx& point) = 0;
  /// Move to `point` (assumed one small step away); returns the new value.
  /// Throws NumericalError when branch selection is ambiguous at this step.
  virtual Cplx advance(const Cplx& point) = 0;
  virtual std::unique_ptr<ContinuationEvaluator> clone() const = 0;
};

/// Forward step of the difference equation: exact rational evaluation of
/// F(z, y). Throws EvalError at a pole.
Cplx step_forward(const EquationSpec& eq, const Cplx& z, const Cplx& y);

/// The two preimages of the model map g -> lambda g + g^2: given
/// v = g(lambda w), the candidates are -lambda/2 +- sqrt(v + lambda^2/4).
std::pair<Cplx, Cplx> model_preimages(const Cplx& lambda, const Cplx& forward_value);

/// Preimage nearest the continuity hint. Throws NumericalError on an exact
/// branch-point hit (radicand ~ 0) or a tie (equidistant preimages within
/// 1e-3 of the preimage gap).
Cplx step_backward_model(const Cplx& lambda, const Cplx& forward_value,
                         const Cplx& continuity_hint);

/// General backward step for an autonomous equation: all solutions y of
/// R(y) = forward_value, plus the index chosen by the continuity rule
/// (-1 when ambiguous -- callers must then select explicitly).
struct BackwardStep {
  std::vector<Cplx> preimages;
  int chosen = -1;
};
BackwardStep step_backward(const RationalMap& R, const Cplx& forward_value,
                           const Cplx& continuity_hint, const Real& tol);

/// Walk `path` from `start` with adaptive step halving; the evaluator
/// re-solves the defining relation at each step with continuity selection.
/// Throws NumericalError on step collapse below min_step (suspected branch
/// point on the path).
FunctionElement continue_along(const PathSpec& path, const FunctionElement& start,
                               ContinuationEvaluator& evaluator, const Real& tol);

/// Value of the model solution's sheet at w given explicit square-root sign
/// choices (deepest level first; +1 <-> the principal-branch chain). The
/// series is pulled back by lambda^N w into its disk, then unwound N times.
/// signs shorter than the required depth are padded with +1 at the deep end.
Cplx evaluate_sheet(const Cplx& lambda, const PowerSeries& series_g, const Cplx& w,
                    const std::vector<int>& signs);

/// Tower evaluator tracking one branch of the model solution along a path:
/// level k holds the continued value at lambda^k w; each advance re-evaluates
/// the series at the deepest level and re-selects square-root signs by
/// continuity per level.
class ModelTowerEvaluator final : public ContinuationEvaluator {
 public:
  /// depth = number of unwind levels (chosen from max |w| on the path).
  ModelTowerEvaluator(Cplx lambda, const PowerSeries& series_g, std::vector<int> start_signs,
                      int depth, Real tie_frac = Real("1e-3"));

  Cplx start(const Cplx& point) override;
  Cplx advance(const Cplx& point) override;
  std::unique_ptr<ContinuationEvaluator> clone() const override;

  const std::vector<Cplx>& levels() const { return levels_; }

 private:
  Cplx lambda_;
  const PowerSeries* series_;
  std::vector<int> start_signs_;
  int depth_;
  Real tie_frac_;
  std::vector<Cplx> levels_;  // levels_[0] = top value ... levels_[depth] = series value
};

/// Number of unwind levels needed so |lambda^N w| stays within the series'
/// trusted disk for all |w| <= max_abs_w.
int required_depth(const Cplx& lambda, const PowerSeries& series_g, const Real& max_abs_w);

struct MonodromyResult {
  Cplx start_value;
  Cplx end_value;
  int loops = 0;
  bool swapped = false;
};

/// Continue around a circle `loops` times starting from the sheet pinned by
/// start_signs at the circle's start point; swapped iff the end value differs
/// from the start beyond tol.
MonodromyResult monodromy_loop(const Cplx& lambda, const PowerSeries& series_g,
                               const Cplx& center, const Real& radius,
                               const std::vector<int>& start_signs, int loops,
                               const Real& tol, const Real& start_angle,
                               const PathSpec& step_params);

}  // namespace cde
