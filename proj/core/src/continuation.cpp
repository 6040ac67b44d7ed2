#include "cde/continuation.hpp"

#include <algorithm>

#include "cde/errors.hpp"

namespace cde {

Cplx PathSpec::point(const Real& t) const {
  if (std::holds_alternative<SegmentPath>(shape)) {
    const auto& s = std::get<SegmentPath>(shape);
    return s.a + Cplx(t) * (s.b - s.a);
  }
  const auto& c = std::get<CirclePath>(shape);
  Real theta = c.start_angle + 2 * pi_value() * c.turns * t;
  return c.center + polar(c.radius, theta);
}

Real PathSpec::length() const {
  if (std::holds_alternative<SegmentPath>(shape)) {
    const auto& s = std::get<SegmentPath>(shape);
    return abs(s.b - s.a);
  }
  const auto& c = std::get<CirclePath>(shape);
  return 2 * pi_value() * c.radius * abs(c.turns);
}

Cplx step_forward(const EquationSpec& eq, const Cplx& z, const Cplx& y) {
  if (eq.autonomous) return eq.autonomous->eval(y);
  return eq.rhs(z, y);
}

std::pair<Cplx, Cplx> model_preimages(const Cplx& lambda, const Cplx& forward_value) {
  Cplx half = lambda / Cplx(2);
  Cplx root = sqrt(forward_value + half * half);
  return {-half + root, -half - root};
}

Cplx step_backward_model(const Cplx& lambda, const Cplx& forward_value,
                         const Cplx& continuity_hint) {
  Cplx half = lambda / Cplx(2);
  Cplx radicand = forward_value + half * half;
  Real scale = std::max(abs(forward_value), abs(half * half), std::less<Real>());
  if (abs(radicand) <= real_eps() * std::max(scale, Real(1), std::less<Real>()))
    throw NumericalError("step_backward_model: branch point hit (g = -lambda^2/4)");
  auto [p1, p2] = model_preimages(lambda, forward_value);
  Real d1 = abs(p1 - continuity_hint);
  Real d2 = abs(p2 - continuity_hint);
  Real gap = abs(p1 - p2);
  if (abs(d1 - d2) <= Real("1e-3") * gap)
    throw NumericalError("step_backward_model: tie between preimages");
  return d1 < d2 ? p1 : p2;
}

BackwardStep step_backward(const RationalMap& R, const Cplx& forward_value,
                           const Cplx& continuity_hint, const Real& tol) {
  // roots of num(y) - v den(y)
  Polynomial p = poly_sub(R.num, poly_scale(R.den, forward_value));
  p = p.normalized(real_eps());
  BackwardStep out;
  if (p.degree() < 1) return out;
  for (const auto& r : poly_roots(p, tol))
    for (int i = 0; i < r.multiplicity; ++i) out.preimages.push_back(r.value);
  if (out.preimages.empty()) return out;
  std::sort(out.preimages.begin(), out.preimages.end(), [](const Cplx& a, const Cplx& b) {
    if (a.re != b.re) return a.re < b.re;
    return a.im < b.im;
  });
  int best = 0;
  for (int i = 1; i < static_cast<int>(out.preimages.size()); ++i)
    if (abs(out.preimages[static_cast<std::size_t>(i)] - continuity_hint) <
        abs(out.preimages[static_cast<std::size_t>(best)] - continuity_hint))
      best = i;
  if (out.preimages.size() >= 2) {
    Real dbest = abs(out.preimages[static_cast<std::size_t>(best)] - continuity_hint);
    Real second = Real("1e300");
    Real gap = Real("1e300");
    for (int i = 0; i < static_cast<int>(out.preimages.size()); ++i) {
      if (i == best) continue;
      second = std::min(second,
                        abs(out.preimages[static_cast<std::size_t>(i)] - continuity_hint),
                        std::less<Real>());
      gap = std::min(gap,
                     abs(out.preimages[static_cast<std::size_t>(i)] -
                         out.preimages[static_cast<std::size_t>(best)]),
                     std::less<Real>());
    }
    if (abs(second - dbest) <= Real("1e-3") * gap) return out;  // ambiguous: chosen = -1
  }
  out.chosen = best;
  return out;
}

FunctionElement continue_along(const PathSpec& path, const FunctionElement& start,
                               ContinuationEvaluator& evaluator, const Real& tol) {
  Cplx p0 = path.point(Real(0));
  if (abs(p0 - start.point) > tol)
    throw ValidationError("continue_along: start element is not at the path start");

  // work on clones so a rejected trial step never corrupts walker state
  std::unique_ptr<ContinuationEvaluator> live = evaluator.clone();
  Cplx v0 = live->start(p0);
  if (abs(v0 - start.value) > 100 * tol)
    throw ValidationError("continue_along: start element disagrees with the evaluator");

  FunctionElement cur = start;
  cur.history.clear();
  cur.history.emplace_back(p0, v0);

  Real t(0);
  Real dt = path.max_step;
  Cplx prev_value = v0;
  while (t < 1) {
    Real t2 = std::min(Real(t + dt), Real(1), std::less<Real>());
    Cplx target = path.point(t2);
    auto trial = live->clone();
    bool ok = true;
    Cplx v;
    try {
      v = trial->advance(target);
      Real scale = std::max(abs(prev_value), Real("1e-6"), std::less<Real>());
      if (abs(v - prev_value) > path.jump_tol * scale) ok = false;
    } catch (const NumericalError&) {
      ok = false;
    } catch (const EvalError&) {
      ok = false;
    }
    if (!ok) {
      dt /= 2;
      if (dt < path.min_step)
        throw NumericalError("continue_along: step collapse (branch point on path?)");
      continue;
    }
    live = std::move(trial);
    t = t2;
    prev_value = v;
    cur.history.emplace_back(target, v);
    dt = std::min(Real(dt * Real(1.4)), path.max_step, std::less<Real>());
  }
  cur.point = path.point(Real(1));
  cur.value = prev_value;
  return cur;
}

int required_depth(const Cplx& lambda, const PowerSeries& series_g, const Real& max_abs_w) {
  Real disk = series_g.tail ? series_g.tail->radius * Real("0.5") : Real("0.02");
  Real mag = abs(lambda);
  if (!(mag > 0) || !(mag < 1))
    throw ValidationError("required_depth: need 0 < |lambda| < 1");
  int n = 0;
  Real cur = max_abs_w;
  while (cur >= disk && n < 4096) {
    cur *= mag;
    ++n;
  }
  return n;
}

namespace {

std::vector<int> padded_signs(const std::vector<int>& signs, int depth) {
  if (static_cast<int>(signs.size()) > depth)
    throw ValidationError("sign path longer than the unwind depth");
  std::vector<int> out(static_cast<std::size_t>(depth - static_cast<int>(signs.size())), 1);
  out.insert(out.end(), signs.begin(), signs.end());
  return out;
}

}  // namespace

Cplx evaluate_sheet(const Cplx& lambda, const PowerSeries& series_g, const Cplx& w,
                    const std::vector<int>& signs) {
  int depth = std::max<int>(required_depth(lambda, series_g, abs(w)),
                            static_cast<int>(signs.size()));
  std::vector<int> sp = padded_signs(signs, depth);
  Cplx quarter = lambda * lambda / Cplx(4);
  Cplx v = series_eval(series_g, pow(lambda, static_cast<long>(depth)) * w);
  for (int i = 0; i < depth; ++i) {
    Cplx radicand = v + quarter;
    if (radicand.is_zero())
      throw NumericalError("evaluate_sheet: branch point hit while unwinding");
    v = -lambda / Cplx(2) + Cplx(Real(sp[static_cast<std::size_t>(i)])) * sqrt(radicand);
  }
  return v;
}

ModelTowerEvaluator::ModelTowerEvaluator(Cplx lambda, const PowerSeries& series_g,
                                         std::vector<int> start_signs, int depth,
                                         Real tie_frac)
    : lambda_(std::move(lambda)),
      series_(&series_g),
      start_signs_(std::move(start_signs)),
      depth_(depth),
      tie_frac_(std::move(tie_frac)) {}

Cplx ModelTowerEvaluator::start(const Cplx& point) {
  std::vector<int> sp = padded_signs(start_signs_, depth_);
  levels_.assign(static_cast<std::size_t>(depth_ + 1), Cplx(0));
  levels_[static_cast<std::size_t>(depth_)] =
      series_eval(*series_, pow(lambda_, static_cast<long>(depth_)) * point);
  Cplx quarter = lambda_ * lambda_ / Cplx(4);
  for (int k = depth_ - 1; k >= 0; --k) {
    Cplx v = levels_[static_cast<std::size_t>(k + 1)] + quarter;
    levels_[static_cast<std::size_t>(k)] =
        -lambda_ / Cplx(2) +
        Cplx(Real(sp[static_cast<std::size_t>(depth_ - 1 - k)])) * sqrt(v);
  }
  return levels_[0];
}

Cplx ModelTowerEvaluator::advance(const Cplx& point) {
  if (levels_.empty()) throw ValidationError("ModelTowerEvaluator: advance before start");
  std::vector<Cplx> next(levels_.size());
  next[static_cast<std::size_t>(depth_)] =
      series_eval(*series_, pow(lambda_, static_cast<long>(depth_)) * point);
  Cplx quarter = lambda_ * lambda_ / Cplx(4);
  for (int k = depth_ - 1; k >= 0; --k) {
    Cplx root = sqrt(next[static_cast<std::size_t>(k + 1)] + quarter);
    Cplx c1 = -lambda_ / Cplx(2) + root;
    Cplx c2 = -lambda_ / Cplx(2) - root;
    const Cplx& hint = levels_[static_cast<std::size_t>(k)];
    Real d1 = abs(c1 - hint);
    Real d2 = abs(c2 - hint);
    Real gap = abs(c1 - c2);
    if (abs(d1 - d2) <= tie_frac_ * gap)
      throw NumericalError("ModelTowerEvaluator: ambiguous branch selection");
    next[static_cast<std::size_t>(k)] = d1 < d2 ? c1 : c2;
  }
  levels_ = std::move(next);
  return levels_[0];
}

std::unique_ptr<ContinuationEvaluator> ModelTowerEvaluator::clone() const {
  auto c = std::make_unique<ModelTowerEvaluator>(lambda_, *series_, start_signs_, depth_,
                                                 tie_frac_);
  c->levels_ = levels_;
  return c;
}

MonodromyResult monodromy_loop(const Cplx& lambda, const PowerSeries& series_g,
                               const Cplx& center, const Real& radius,
                               const std::vector<int>& start_signs, int loops,
                               const Real& tol, const Real& start_angle,
                               const PathSpec& step_params) {
  int depth = std::max<int>(required_depth(lambda, series_g, abs(center) + radius),
                            static_cast<int>(start_signs.size()));
  ModelTowerEvaluator eval(lambda, series_g, start_signs, depth);

  PathSpec path = step_params;
  path.shape = CirclePath{center, radius, start_angle, Real(loops)};

  Cplx p0 = path.point(Real(0));
  FunctionElement start{PlaneTag::W, p0, eval.start(p0), {}};
  FunctionElement end = continue_along(path, start, eval, tol);

  MonodromyResult res;
  res.start_value = start.value;
  res.end_value = end.value;
  res.loops = loops;
  res.swapped = abs(res.end_value - res.start_value) > tol;
  return res;
}

}  // namespace cde
