#include "cde/picard.hpp"

#include <algorithm>
#include <cmath>

#include "cde/errors.hpp"
#include "cde/rng.hpp"

namespace cde {

namespace {

Real round_real(const Real& x) {
  return floor(x + Real(0.5));
}

int to_int(const Real& x) { return static_cast<int>(x.convert_to<long>()); }

}  // namespace

StripDomain StripDomain::make(StripSide side, const Real& rho, const Real& sigma,
                              const Real& extent, const Real& re_step, const Real& im_step) {
  if (!(rho > 0) || !(sigma > 0) || !(extent > 0) || !(re_step > 0) || !(im_step > 0))
    throw ValidationError("strip domain: rho, sigma, extent, steps must be positive");
  Real inv = 1 / re_step;
  Real stride = round_real(inv);
  if (abs(stride - inv) > Real("1e-12"))
    throw ValidationError("strip domain: 1/re_step must be an integer so z-k stays on grid");

  StripDomain d;
  d.rho = rho;
  d.sigma = sigma;
  d.side = side;
  d.re_step = re_step;
  d.im_step = im_step;
  d.extent = extent;

  int cols = to_int(round_real(extent / re_step));
  if (cols < 1) throw ValidationError("strip domain: empty grid");
  for (int i = 0; i < cols; ++i) {
    // strictly inside the half plane: the shallow edge sits one step off rho
    Real re = side == StripSide::Left ? -rho - extent + Real(i) * re_step
                                      : rho + Real(i + 1) * re_step;
    d.re_points.push_back(re);
  }
  int half = to_int(round_real(sigma / im_step));
  for (int i = -(half - 1); i <= half - 1; ++i)
    d.im_points.push_back(Real(i) * im_step);
  if (d.im_points.empty()) d.im_points.push_back(Real(0));
  return d;
}

int StripDomain::stride() const { return to_int(round_real(1 / re_step)); }

const Cplx& StripFunction::value_at(const Cplx& z) const {
  const auto& re = domain.re_points;
  const auto& im = domain.im_points;
  Real ci = (z.re - re.front()) / domain.re_step;
  Real ri = im.size() > 1 ? (z.im - im.front()) / domain.im_step : Real(0);
  int c = to_int(round_real(ci));
  int r = to_int(round_real(ri));
  if (c < 0 || c >= domain.cols() || r < 0 || r >= domain.rows() ||
      abs(re[static_cast<std::size_t>(c)] - z.re) > Real("1e-20") ||
      abs(im[static_cast<std::size_t>(r)] - z.im) > Real("1e-20"))
    throw ValidationError("value_at: point is not on the grid");
  return at(c, r);
}

bool StripFunction::has_point(const Cplx& z) const {
  try {
    (void)value_at(z);
    return true;
  } catch (const ValidationError&) {
    return false;
  }
}

AbelNormalForm AbelNormalForm::make(const AbelCoefficients& coeffs, const Cplx& alpha,
                                    const Real& delta) {
  if (!(delta > 0) || !(delta < 1))
    throw ValidationError("AbelNormalForm: delta must lie in (0,1)");
  AbelNormalForm nf;
  nf.m = coeffs.m;
  nf.c = coeffs.c;
  nf.alpha = alpha;
  nf.delta = delta;
  if (nf.m == 1) {
    nf.beta = nf.c_at(1);
  } else {
    nf.beta = Cplx(Real(nf.m)) * nf.c_at(nf.m) / Cplx(Real(nf.m - 1));
  }
  return nf;
}

namespace {

// The m=1 summand: the three component terms of the operator at a shifted
// point u, given W(u). Closed forms: the inner n-sum of T1 is geometric and
// the T3 j-sum is 1/u - log(1+1/u).
struct AbelTerms {
  Cplx t1, t2, t3;
};

AbelTerms abel_terms(const AbelNormalForm& nf, const Cplx& u, const Cplx& Wu, int J) {
  AbelTerms t;
  Cplx s = nf.alpha + nf.beta * log_positive_cut(u) + Wu;
  Cplx ys = u + s;
  Cplx c1 = nf.c_at(1);
  if (!c1.is_zero()) t.t1 = c1 * (Cplx(1) / ys - Cplx(1) / u);
  Cplx invp = Cplx(1) / (ys * ys);
  Cplx inv = Cplx(1) / ys;
  for (int j = 2; j <= J; ++j) {
    Cplx cj = nf.c_at(j);
    if (!cj.is_zero()) t.t2 += cj * invp;
    invp *= inv;
  }
  if (!nf.beta.is_zero()) {
    Cplx x = Cplx(1) / u;
    t.t3 = nf.beta * (x - log(Cplx(1) + x));
  }
  return t;
}

Cplx abel_G(const AbelNormalForm& nf, const Cplx& u, const Cplx& Wu, int J) {
  AbelTerms t = abel_terms(nf, u, Wu, J);
  return t.t1 + t.t2 + t.t3;
}

bool abel_is_trivial(const AbelNormalForm& nf, int J) {
  if (!nf.beta.is_zero()) return false;
  for (int j = 1; j <= J; ++j)
    if (!nf.c_at(j).is_zero()) return false;
  return true;
}

// Deep prefix of the k-sum for one chain start z0: sum of G(u, 0) over
// u = z0-1, z0-2, ..., down to Re u >= -tail_depth. W vanishes off grid, so
// this is iteration independent.
Cplx abel_deep_prefix(const AbelNormalForm& nf, const Cplx& z0, const Real& tail_depth,
                      int J, int* k_used) {
  Cplx acc(0);
  Cplx u = z0 - Cplx(1);
  int k = 0;
  while (u.re >= -tail_depth) {
    acc += abel_G(nf, u, Cplx(0), J);
    u -= Cplx(1);
    ++k;
  }
  if (k_used) *k_used = k;
  return acc;
}

struct AbelSweeper {
  const AbelNormalForm& nf;
  const StripDomain& d;
  int J;
  Real tail_depth;
  std::vector<Cplx> deep;  // per (row, parity) chain prefix
  int tail_k = 0;

  AbelSweeper(const AbelNormalForm& nf_, const StripDomain& d_, const SolveOptions& opt)
      : nf(nf_), d(d_), J(opt.trunc_j), tail_depth(opt.tail_depth) {
    if (d.side != StripSide::Left)
      throw ValidationError("abel operator acts on the left strip");
    if (tail_depth < d.rho + d.extent + 2)
      tail_depth = d.rho + d.extent + 2;
    int stride = d.stride();
    deep.resize(static_cast<std::size_t>(d.rows() * stride));
    for (int r = 0; r < d.rows(); ++r)
      for (int p = 0; p < stride; ++p) {
        int k = 0;
        deep[static_cast<std::size_t>(r * stride + p)] =
            abel_deep_prefix(nf, d.point(p, r), tail_depth, J, &k);
        tail_k = std::max(tail_k, k);
      }
  }

  std::vector<Cplx> sweep(const std::vector<Cplx>& w) const {
    int stride = d.stride();
    std::vector<Cplx> out(w.size());
    for (int r = 0; r < d.rows(); ++r) {
      for (int p = 0; p < stride; ++p) {
        Cplx acc = deep[static_cast<std::size_t>(r * stride + p)];
        for (int c = p; c < d.cols(); c += stride) {
          out[static_cast<std::size_t>(c * d.rows() + r)] = acc;
          // the accumulated sum gains G(z_c) when stepping to z_c + 1
          acc += abel_G(nf, d.point(c, r), w[static_cast<std::size_t>(c * d.rows() + r)], J);
        }
      }
    }
    return out;
  }
};

}  // namespace

AbelBoundReport check_abel_bounds(const AbelNormalForm& nf, const StripDomain& d,
                                  const SolveOptions& opt) {
  AbelBoundReport rep;
  int J = opt.trunc_j;
  Real depth = std::max(opt.tail_depth, d.rho + d.extent + 2, std::less<Real>());
  for (int r = 0; r < d.rows(); ++r) {
    for (int c = 0; c < d.cols(); ++c) {
      Cplx z = d.point(c, r);
      Cplx t1(0), t2(0), t3(0);
      Cplx u = z - Cplx(1);
      while (u.re >= -depth) {
        AbelTerms t = abel_terms(nf, u, Cplx(0), J);
        t1 += t.t1;
        t2 += t.t2;
        t3 += t.t3;
        u -= Cplx(1);
      }
      // normalized so that a component check passes iff the value is <= 1
      Real gate = pow(abs(z), Real(1) - nf.delta);
      rep.worst_t1 = std::max(rep.worst_t1, 3 * abs(t1) * gate, std::less<Real>());
      rep.worst_t2 = std::max(rep.worst_t2, 3 * abs(t2) * gate, std::less<Real>());
      rep.worst_t3 = std::max(rep.worst_t3, 3 * abs(t3) * gate, std::less<Real>());
      rep.worst_total =
          std::max(rep.worst_total, abs(t1 + t2 + t3) * gate, std::less<Real>());
    }
  }
  rep.pass_components = rep.worst_t1 <= 1 && rep.worst_t2 <= 1 && rep.worst_t3 <= 1;
  rep.pass = rep.worst_total <= 1;
  return rep;
}

StripFunction abel_solve(const AbelNormalForm& nf, StripDomain domain, SolveOptions opt) {
  if (nf.m != 1) throw ValidationError("abel_solve: only the m=1 operator is iterated");

  // rho auto-escalation on failed empirical bounds
  StripDomain d = domain;
  for (int attempt = 0;; ++attempt) {
    if (abel_is_trivial(nf, opt.trunc_j)) break;
    AbelBoundReport rep = check_abel_bounds(nf, d, opt);
    if (rep.pass) break;
    if (attempt >= opt.rho_doublings)
      throw NumericalError("abel_solve: operator bounds fail at the escalation cap");
    d = StripDomain::make(d.side, d.rho * 2, d.sigma, d.extent, d.re_step, d.im_step);
  }

  AbelSweeper sweeper(nf, d, opt);
  StripFunction W;
  W.domain = d;
  W.asymptote = Cplx(0);
  W.trunc_j = opt.trunc_j;
  W.trunc_k = sweeper.tail_k;
  W.rho_used = d.rho;
  W.values = opt.initial && static_cast<int>(opt.initial->size()) == d.size()
                 ? *opt.initial
                 : std::vector<Cplx>(static_cast<std::size_t>(d.size()), Cplx(0));

  Real prev_step(0);
  int rising = 0;
  for (int it = 1; it <= opt.max_iter; ++it) {
    std::vector<Cplx> next = sweeper.sweep(W.values);
    Real step(0);
    for (std::size_t i = 0; i < next.size(); ++i)
      step = std::max(step, abs(next[i] - W.values[i]), std::less<Real>());
    W.values = std::move(next);
    W.iterations = it;
    W.fixed_point_step = step;
    if (step < opt.tol) break;
    if (it > 3 && step > prev_step) {
      if (++rising >= 3) throw NumericalError("abel_solve: non-contraction detected");
    } else {
      rising = 0;
    }
    prev_step = step;
    if (it == opt.max_iter)
      throw NumericalError("abel_solve: no convergence within max_iter");
  }

  // membership bound of the solution family
  for (int c = 0; c < d.cols(); ++c)
    for (int r = 0; r < d.rows(); ++r) {
      Cplx z = d.point(c, r);
      if (abs(W.at(c, r)) > pow(abs(z), -Real(1) + nf.delta))
        throw NumericalError("abel_solve: |W| exceeds |z|^{-1+delta} at " + to_string(z));
    }
  W.equation_residual = abel_equation_residual(nf, W);
  return W;
}

Cplx abel_Y(const AbelNormalForm& nf, const StripFunction& W, int col, int row) {
  Cplx z = W.domain.point(col, row);
  return z + nf.alpha + nf.beta * log_positive_cut(z) + W.at(col, row);
}

Real abel_equation_residual(const AbelNormalForm& nf, const StripFunction& W) {
  const StripDomain& d = W.domain;
  int stride = d.stride();
  Real worst(0);
  for (int c = 0; c + stride < d.cols(); ++c) {
    for (int r = 0; r < d.rows(); ++r) {
      Cplx Y = abel_Y(nf, W, c, r);
      Cplx Y1 = abel_Y(nf, W, c + stride, r);
      Cplx F = Y + Cplx(1);
      Cplx inv = Cplx(1) / Y;
      Cplx p = inv;
      for (int j = 1; j <= W.trunc_j; ++j) {
        F += nf.c_at(j) * p;
        p *= inv;
      }
      worst = std::max(worst, abs(Y1 - F), std::less<Real>());
    }
  }
  return worst;
}

namespace {

// G(u, w) = sum_{j=2..J} c_j(u) lambda^{(j-1)u - 1} w^j for the half-plane
// operator. c evaluators come from expand_c once per solve.
struct PicardKernel {
  Cplx lambda;
  Cplx log_lambda;
  std::vector<CoeffExpr> c;  // c[i] = c_{i+2}
  int J;

  PicardKernel(const EquationSpec& eq, int J_) : lambda(eq.lambda), J(J_) {
    log_lambda = log(lambda);
    for (auto& e : expand_c(eq, J)) c.push_back(e.expr);
  }

  Cplx G(const Cplx& u, const Cplx& w) const {
    Cplx lam_u = exp(u * log_lambda);  // lambda^u, principal branch
    Cplx factor = lam_u / lambda;      // lambda^{(j-1)u-1} at j=2
    Cplx wp = w * w;
    Cplx acc(0);
    for (int j = 2; j <= J; ++j) {
      Cplx cj = c[static_cast<std::size_t>(j - 2)].eval(u);
      if (!cj.is_zero()) acc += cj * factor * wp;
      factor *= lam_u;
      wp *= w;
    }
    return acc;
  }
};

struct PicardSweeper {
  PicardKernel kernel;
  const StripDomain& d;
  Cplx alpha;
  Real tol;
  std::vector<Cplx> deep;
  int tail_k = 0;

  // last grid column of the unit chain congruent to p (mod stride), or -1
  int chain_last(int p) const {
    int stride = d.stride();
    if (p >= d.cols()) return -1;
    return p + stride * ((d.cols() - 1 - p) / stride);
  }

  PicardSweeper(const EquationSpec& eq, const Cplx& alpha_, const StripDomain& d_,
                const SolveOptions& opt)
      : kernel(eq, opt.trunc_j), d(d_), alpha(alpha_), tol(opt.tol) {
    int stride = d.stride();
    deep.resize(static_cast<std::size_t>(d.rows() * stride), Cplx(0));
    for (int r = 0; r < d.rows(); ++r)
      for (int p = 0; p < stride; ++p) {
        int col = d.side == StripSide::Left ? p : chain_last(p);
        if (col < 0) continue;
        deep[static_cast<std::size_t>(r * stride + p)] = chain_seed(d.point(col, r));
      }
  }

  // shifts needed before the alpha-seeding error |lambda|^{Re u} drops below
  // tol/1000 (the march itself only propagates, never amplifies, that error)
  int seed_depth(const Real& re_edge) const {
    Real mag = abs(kernel.lambda);
    Real target = tol / 1000;
    int K = 8;
    while (K < 100000) {
      Real envelope = d.side == StripSide::Left ? pow(mag, re_edge - K)
                                                : pow(mag, re_edge + K);
      if (envelope < target) return K;
      ++K;
    }
    throw NumericalError("picard operator: off-grid tail did not decay");
  }

  // Iteration-independent seed for a unit chain. Left: the operator value at
  // the deepest grid point is exactly the telescoped w there. Right: the
  // k>=1 part of the tail equals alpha - w(z_R + 1) by the fixed-point
  // identity; both marches start from w = alpha far off the grid.
  Cplx chain_seed(const Cplx& z_edge) {
    int K = seed_depth(z_edge.re);
    tail_k = std::max(tail_k, K);
    if (d.side == StripSide::Left) {
      Cplx w = alpha;
      for (int k = K; k >= 1; --k) w += kernel.G(z_edge - Cplx(Real(k)), w);
      return w - alpha;  // sweep adds alpha back
    }
    Cplx w = alpha;
    for (int k = K; k >= 1; --k) {
      Cplx u = z_edge + Cplx(Real(k));
      Cplx x = w;
      for (int inner = 0; inner < 80; ++inner) {
        Cplx xn = w - kernel.G(u, x);
        if (abs(xn - x) < tol / 10000) {
          x = xn;
          break;
        }
        x = xn;
      }
      w = x;
    }
    return alpha - w;  // the tail sum_{k>=1} G(z_R+k, w)
  }

  std::vector<Cplx> sweep(const std::vector<Cplx>& w) const {
    int stride = d.stride();
    std::vector<Cplx> out(w.size());
    for (int r = 0; r < d.rows(); ++r) {
      for (int p = 0; p < stride; ++p) {
        if (d.side == StripSide::Left) {
          Cplx acc = alpha + deep[static_cast<std::size_t>(r * stride + p)];
          for (int c = p; c < d.cols(); c += stride) {
            out[static_cast<std::size_t>(c * d.rows() + r)] = acc;
            acc += kernel.G(d.point(c, r), w[static_cast<std::size_t>(c * d.rows() + r)]);
          }
        } else {
          int cstart = chain_last(p);
          if (cstart < 0) continue;
          Cplx tail = deep[static_cast<std::size_t>(r * stride + p)];
          Cplx prev;  // T at the column to the right
          bool have_prev = false;
          for (int c = cstart; c >= 0; c -= stride) {
            Cplx Gc = kernel.G(d.point(c, r), w[static_cast<std::size_t>(c * d.rows() + r)]);
            Cplx val;
            if (!have_prev) {
              val = alpha - Gc - tail;
              have_prev = true;
            } else {
              val = prev - Gc;
            }
            out[static_cast<std::size_t>(c * d.rows() + r)] = val;
            prev = val;
          }
        }
      }
    }
    return out;
  }
};

void validate_side(const EquationSpec& eq, StripSide side) {
  Real mag = abs(eq.lambda);
  if (side == StripSide::Left && !(mag > 1))
    throw ValidationError("picard_solve: left strip requires |lambda| > 1");
  if (side == StripSide::Right && !(mag < 1 && mag > 0))
    throw ValidationError("picard_solve: right strip requires 0 < |lambda| < 1");
}

}  // namespace

StripFunction picard_solve(const EquationSpec& eq, const Cplx& alpha, StripDomain domain,
                           SolveOptions opt) {
  validate_side(eq, domain.side);
  PicardSweeper sweeper(eq, alpha, domain, opt);

  StripFunction w;
  w.domain = domain;
  w.asymptote = alpha;
  w.trunc_j = opt.trunc_j;
  w.trunc_k = sweeper.tail_k;
  w.rho_used = domain.rho;
  w.values = opt.initial && static_cast<int>(opt.initial->size()) == domain.size()
                 ? *opt.initial
                 : std::vector<Cplx>(static_cast<std::size_t>(domain.size()), alpha);

  Real prev_step(0);
  int rising = 0;
  for (int it = 1; it <= opt.max_iter; ++it) {
    std::vector<Cplx> next = sweeper.sweep(w.values);
    Real step(0);
    for (std::size_t i = 0; i < next.size(); ++i)
      step = std::max(step, abs(next[i] - w.values[i]), std::less<Real>());
    w.values = std::move(next);
    w.iterations = it;
    w.fixed_point_step = step;
    for (const auto& v : w.values)
      if (abs(v - alpha) > opt.ball)
        throw NumericalError("picard_solve: iterate left the ball |w - alpha| <= b");
    if (step < opt.tol) break;
    if (it > 3 && step > prev_step) {
      if (++rising >= 3) throw NumericalError("picard_solve: non-contraction detected");
    } else {
      rising = 0;
    }
    prev_step = step;
    if (it == opt.max_iter)
      throw NumericalError("picard_solve: no convergence within max_iter");
  }

  // residual of the original equation at interior points
  const StripDomain& d = w.domain;
  int stride = d.stride();
  Real worst(0);
  for (int c = 0; c + stride < d.cols(); ++c) {
    for (int r = 0; r < d.rows(); ++r) {
      Cplx z = d.point(c, r);
      Cplx lam_z = exp(z * log(eq.lambda));
      Cplx y = lam_z * w.at(c, r);
      Cplx y1 = lam_z * eq.lambda * w.at(c + stride, r);
      worst = std::max(worst, abs(y1 - eq.rhs(z, y)), std::less<Real>());
    }
  }
  w.equation_residual = worst;
  return w;
}

StripOperator make_picard_operator(const EquationSpec& eq, const Cplx& alpha,
                                   const StripDomain& d, const SolveOptions& opt) {
  validate_side(eq, d.side);
  auto sweeper = std::make_shared<PicardSweeper>(eq, alpha, d, opt);
  return [sweeper](const std::vector<Cplx>& w) { return sweeper->sweep(w); };
}

StripOperator make_abel_operator(const AbelNormalForm& nf, const StripDomain& d,
                                 const SolveOptions& opt) {
  auto sweeper = std::make_shared<AbelSweeper>(nf, d, opt);
  return [sweeper](const std::vector<Cplx>& w) { return sweeper->sweep(w); };
}

Cplx forward_telescope(const EquationSpec& eq, const Cplx& alpha, const Cplx& z, int K,
                       int J) {
  if (K < 0) throw ValidationError("forward_telescope: K must be >= 0");
  PicardKernel kernel(eq, J);
  Real ball = 1;
  if (K == 0) return alpha;
  if (abs(eq.lambda) > 1) {
    // seed deep on the left, march the difference equation forward
    Cplx w = alpha;
    for (int k = K; k >= 1; --k) {
      Cplx u = z - Cplx(Real(k));
      w += kernel.G(u, w);
      if (abs(w - alpha) > 10 * (ball + abs(alpha)))
        throw NumericalError("forward_telescope: orbit left the ball");
    }
    return w;
  }
  // right side: seed at z+K, solve the implicit backward step
  Cplx w = alpha;
  for (int k = K - 1; k >= 0; --k) {
    Cplx u = z + Cplx(Real(k));
    Cplx x = w;
    bool ok = false;
    for (int inner = 0; inner < 60; ++inner) {
      Cplx xn = w - kernel.G(u, x);
      if (abs(xn - x) < Real("1e-40")) {
        x = xn;
        ok = true;
        break;
      }
      x = xn;
    }
    if (!ok) throw NumericalError("forward_telescope: implicit step did not settle");
    w = x;
    if (abs(w - alpha) > 10 * (ball + abs(alpha)))
      throw NumericalError("forward_telescope: orbit left the ball");
  }
  return w;
}

Real contraction_probe(const StripOperator& op, const StripDomain& d, const Cplx& center,
                       const Real& ball, int pairs, std::uint64_t seed) {
  Rng rng(seed);
  Real worst(0);
  std::size_t n = static_cast<std::size_t>(d.size());
  for (int p = 0; p < pairs; ++p) {
    std::vector<Cplx> f(n), g(n);
    for (std::size_t i = 0; i < n; ++i) {
      f[i] = center + rng.disk(ball);
      g[i] = center + rng.disk(ball);
    }
    Real dist(0);
    for (std::size_t i = 0; i < n; ++i)
      dist = std::max(dist, abs(f[i] - g[i]), std::less<Real>());
    if (dist.is_zero()) continue;
    std::vector<Cplx> tf = op(f);
    std::vector<Cplx> tg = op(g);
    Real tdist(0);
    for (std::size_t i = 0; i < n; ++i)
      tdist = std::max(tdist, abs(tf[i] - tg[i]), std::less<Real>());
    worst = std::max(worst, tdist / dist, std::less<Real>());
  }
  return worst;
}

ParabolicAnsatzReport verify_parabolic_ansatz(const RationalMap& R, const Cplx& gamma,
                                              int m, const Cplx& orbit_seed, int steps,
                                              const Real& delta) {
  if (m < 1) throw ValidationError("verify_parabolic_ansatz: m must be >= 1");
  if (steps < 64) throw ValidationError("verify_parabolic_ansatz: need at least 64 steps");
  ParabolicAnsatzReport rep;
  rep.m = m;

  std::vector<Cplx> taylor = R.taylor_at(gamma, m + 2);
  const Cplx rm1 = taylor[static_cast<std::size_t>(m + 1)];
  if (rm1.is_zero())
    throw ValidationError("verify_parabolic_ansatz: R^(m+1)(gamma) vanishes");
  Cplx scale = Cplx(-1) / (Cplx(Real(m)) * rm1);

  Real escape_radius = std::max(Real(1), 4 * abs(orbit_seed - gamma), std::less<Real>());
  std::vector<Cplx> u;
  u.reserve(static_cast<std::size_t>(steps));
  Cplx y = orbit_seed;
  for (int n = 0; n < steps; ++n) {
    try {
      y = R.eval(y);
    } catch (const EvalError&) {
      rep.escaped = true;
      return rep;
    }
    if (abs(y - gamma) > escape_radius || y == gamma) {
      rep.escaped = true;
      return rep;
    }
    u.push_back(scale / pow(y - gamma, static_cast<long>(m)));
  }
  if (abs(u.back()) < abs(u.front())) {  // transformed orbit must march out
    rep.escaped = true;
    return rep;
  }
  rep.steps_used = steps;

  // least squares over the tail: u_n - n = alpha + beta phi(n) [+ eta log n]
  int n0 = steps / 2;
  bool with_power = m >= 2;
  int dim = with_power ? 3 : 2;
  std::vector<std::vector<Real>> ata(static_cast<std::size_t>(dim),
                                     std::vector<Real>(static_cast<std::size_t>(dim), Real(0)));
  std::vector<Cplx> atb(static_cast<std::size_t>(dim), Cplx(0));
  Real ex = Real(m - 1) / Real(m);
  auto basis = [&](int n, int i) -> Real {
    if (i == 0) return Real(1);
    if (with_power && i == 1) return pow(Real(n), ex);
    return log(Real(n));
  };
  for (int n = n0; n < steps; ++n) {
    Cplx rhs = u[static_cast<std::size_t>(n)] - Cplx(Real(n + 1));
    for (int i = 0; i < dim; ++i) {
      Real bi = basis(n + 1, i);
      for (int j = 0; j < dim; ++j) ata[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] += bi * basis(n + 1, j);
      atb[static_cast<std::size_t>(i)] += Cplx(bi) * rhs;
    }
  }
  // Gaussian elimination (real SPD matrix, complex right-hand side)
  for (int i = 0; i < dim; ++i) {
    int piv = i;
    for (int r = i + 1; r < dim; ++r)
      if (abs(ata[static_cast<std::size_t>(r)][static_cast<std::size_t>(i)]) >
          abs(ata[static_cast<std::size_t>(piv)][static_cast<std::size_t>(i)]))
        piv = r;
    std::swap(ata[static_cast<std::size_t>(i)], ata[static_cast<std::size_t>(piv)]);
    std::swap(atb[static_cast<std::size_t>(i)], atb[static_cast<std::size_t>(piv)]);
    for (int r = i + 1; r < dim; ++r) {
      Real f = ata[static_cast<std::size_t>(r)][static_cast<std::size_t>(i)] /
               ata[static_cast<std::size_t>(i)][static_cast<std::size_t>(i)];
      for (int ccol = i; ccol < dim; ++ccol)
        ata[static_cast<std::size_t>(r)][static_cast<std::size_t>(ccol)] -=
            f * ata[static_cast<std::size_t>(i)][static_cast<std::size_t>(ccol)];
      atb[static_cast<std::size_t>(r)] -= Cplx(f) * atb[static_cast<std::size_t>(i)];
    }
  }
  std::vector<Cplx> sol(static_cast<std::size_t>(dim));
  for (int i = dim - 1; i >= 0; --i) {
    Cplx acc = atb[static_cast<std::size_t>(i)];
    for (int j = i + 1; j < dim; ++j)
      acc -= Cplx(ata[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]) *
             sol[static_cast<std::size_t>(j)];
    sol[static_cast<std::size_t>(i)] = acc / Cplx(ata[static_cast<std::size_t>(i)][static_cast<std::size_t>(i)]);
  }
  rep.fitted_alpha = sol[0];
  rep.fitted_beta = with_power ? sol[1] : sol[static_cast<std::size_t>(dim - 1)];

  Real worst(0);
  for (int n = n0; n < steps; ++n) {
    Cplx model = Cplx(Real(n + 1)) + sol[0];
    if (with_power) model += sol[1] * Cplx(pow(Real(n + 1), ex));
    model += sol[static_cast<std::size_t>(dim - 1)] * Cplx(log(Real(n + 1)));
    Real W = abs(u[static_cast<std::size_t>(n)] - model);
    worst = std::max(worst, W * pow(Real(n + 1), Real(1) / Real(m) - delta),
                     std::less<Real>());
  }
  rep.max_tail_residual = worst;
  rep.pass = worst <= 1;
  return rep;
}

}  // namespace cde
