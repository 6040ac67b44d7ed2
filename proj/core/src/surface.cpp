#include "cde/surface.hpp"

#include <algorithm>
#include <map>

#include <nlohmann/json.hpp>

#include "cde/errors.hpp"
#include "cde/rng.hpp"

namespace cde {

ModelSolution model_series(const Cplx& lambda, const Cplx& g1, int N) {
  if (N < 2) throw ValidationError("model_series: N must be >= 2");
  Real mag = abs(lambda);
  if (mag.is_zero() || abs(mag - 1) <= real_eps())
    throw ValidationError("model_series: need |lambda| not in {0, 1}");

  std::vector<Cplx> g(static_cast<std::size_t>(N + 1), Cplx(0));
  g[1] = g1;
  Cplx lam_pow = lambda;  // lambda^j
  for (int j = 2; j <= N; ++j) {
    lam_pow *= lambda;
    Cplx denom = lam_pow - lambda;
    if (abs(denom) <= real_eps() * std::max(Real(1), abs(lambda), std::less<Real>()))
      throw NumericalError("model_series: resonance lambda^j = lambda at j = " +
                           std::to_string(j));
    Cplx acc(0);
    for (int s = 1; s < j; ++s)
      acc += g[static_cast<std::size_t>(s)] * g[static_cast<std::size_t>(j - s)];
    g[static_cast<std::size_t>(j)] = acc / denom;
  }

  ModelSolution ms;
  ms.lambda = lambda;
  ms.g1 = g1;
  PowerSeries s;
  s.center = Cplx(0);
  s.min_degree = 1;
  s.order = N + 1;
  s.coeffs.assign(g.begin() + 1, g.end());
  ms.series = std::move(s);
  return ms;
}

Real majorant_bound(const Real& lambda, const Cplx& g1) {
  if (!(lambda > 0) || !(lambda < 1))
    throw ValidationError("majorant_bound: lambda must lie in (0,1)");
  if (g1.is_zero()) throw ValidationError("majorant_bound: g1 must be nonzero");
  Real K = 1 / (lambda - lambda * lambda);
  return 1 / (4 * K * abs(g1));
}

Real estimate_radius(const PowerSeries& series) {
  // ratio test t_n = n r_n - (n-1) r_{n-1} kills the 1/n bias of
  // r_n = |g_{n-1}/g_n|; average the last quartile
  std::map<int, Real> ratio;
  int nonzero = 0;
  for (int d = series.min_degree; d < series.order; ++d) {
    if (!series.coeff(d).is_zero()) ++nonzero;
    if (d > series.min_degree && !series.coeff(d).is_zero() &&
        !series.coeff(d - 1).is_zero())
      ratio[d] = abs(series.coeff(d - 1)) / abs(series.coeff(d));
  }
  if (nonzero < 20)
    throw ValidationError("estimate_radius: need at least 20 nonzero coefficients");
  std::vector<Real> t;
  for (const auto& [n, r] : ratio) {
    auto prev = ratio.find(n - 1);
    if (prev != ratio.end()) t.push_back(Real(n) * r - Real(n - 1) * prev->second);
  }
  if (t.size() < 4) {
    // sparse series (every k-th coefficient): fall back to the root test
    int d_last = series.order - 1;
    while (d_last >= series.min_degree && series.coeff(d_last).is_zero()) --d_last;
    return pow(abs(series.coeff(d_last)), -Real(1) / Real(d_last));
  }
  std::size_t q0 = t.size() - t.size() / 4;
  Real acc(0);
  for (std::size_t i = q0; i < t.size(); ++i) acc += t[i];
  return acc / Real(static_cast<int>(t.size() - q0));
}

Real find_rhat(ModelSolution& ms, const Real& tol) {
  if (!(abs(ms.g1 - Cplx(-1)) <= real_eps()))
    throw ValidationError("find_rhat: calibrated for g1 = -1 (rotate the lift otherwise)");
  Real lambda = ms.lambda.re;
  if (!ms.lambda.im.is_zero() || !(lambda > 0) || !(lambda < 1))
    throw ValidationError("find_rhat: lambda must be real in (0,1)");

  ms.series.tail = std::nullopt;
  ms.radius_lower_bound = majorant_bound(lambda, ms.g1);
  Real est = estimate_radius(ms.series);
  Real lo = ms.radius_lower_bound;
  Real hi = 4 * est;

  // g real decreasing on (0, r_hat]: solve g(lambda w) = -lambda^2/4; the
  // evaluation point lambda*w stays well inside the disk near the root.
  auto f = [&](const Real& w) {
    return series_eval(ms.series, Cplx(lambda * w)).re + lambda * lambda / 4;
  };
  Real flo = f(lo);
  Real fhi = f(hi);
  if (!(flo > 0) || !(fhi < 0))
    throw NumericalError("find_rhat: no sign change in the bisection bracket");
  while (hi - lo > tol * hi) {
    Real mid = (lo + hi) / 2;
    if (f(mid) > 0)
      lo = mid;
    else
      hi = mid;
  }
  ms.r_hat = (lo + hi) / 2;
  // validity radius 0.9 rHat: |g_n| w^n decays at least geometrically with
  // ratio 0.9 there, so the dropped tail is within 10x its first term
  int last = ms.series.order - 1;
  Real q("0.9");
  Real first_term = abs(ms.series.coeff(last)) * pow(q * ms.r_hat, last);
  ms.series.tail = TailBound{10 * first_term, q * ms.r_hat};
  return ms.r_hat;
}

ModelSolution solve_model(const Cplx& lambda, const Cplx& g1, int N, const Real& tol) {
  ModelSolution ms = model_series(lambda, g1, N);
  find_rhat(ms, tol);
  return ms;
}

BranchRay find_branch_ray(const Cplx& lambda, const Cplx& g1, int N, const Real& tol) {
  if (g1.is_zero()) throw ValidationError("find_branch_ray: g1 must be nonzero");
  ModelSolution base = solve_model(lambda, Cplx(-1), N, tol);
  Cplx c = Cplx(-1) / g1;
  BranchRay ray;
  ray.modulus = base.r_hat * abs(c);
  ray.angle = arg(c);
  return ray;
}

std::vector<int> SheetLabel::sign_path() const {
  std::vector<int> out;
  char prev = '0';
  for (char b : bits) {
    out.push_back(b == prev ? 1 : -1);
    prev = b;
  }
  return out;
}

std::vector<SheetLabel> sheets_at_depth(int M) {
  if (M < 1) throw ValidationError("sheets_at_depth: depth must be >= 1");
  std::vector<SheetLabel> out{{"0"}, {"1"}};
  for (int len = 2; len <= M; ++len) {
    int count = 1 << (len - 1);
    for (int v = 0; v < count; ++v) {
      std::string bits = "1";
      for (int k = len - 2; k >= 0; --k) bits += ((v >> k) & 1) ? '1' : '0';
      out.push_back({bits});
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

namespace {

std::vector<Real> make_ladder(const Real& r_hat, const Real& lambda, int M) {
  std::vector<Real> ladder;
  Real w = r_hat;
  for (int n = 0; n < M; ++n) {
    ladder.push_back(w);
    w /= lambda;
  }
  return ladder;
}

// distance from w_n to its nearest ladder neighbour; below w_0 the nearest
// obstruction is lambda r_hat (where the first unwind level acts)
Real ladder_gap(const Real& r_hat, const Real& lambda, int n) {
  Real wn = r_hat / pow(Real(lambda), n);
  Real up = wn * (1 / lambda - 1);
  Real down = wn * (1 - lambda);
  return std::min(up, down, std::less<Real>());
}

}  // namespace

MonodromyResult sheet_monodromy(const ModelSolution& ms, int ladder_index,
                                const Real& radius_factor, const SheetLabel& start_sheet,
                                int loops, const Real& tol) {
  if (ms.r_hat.is_zero()) throw ValidationError("sheet_monodromy: run find_rhat first");
  Real lambda = ms.lambda.re;
  Real wn = ms.r_hat / pow(lambda, ladder_index);
  Real gap = ladder_gap(ms.r_hat, lambda, ladder_index);
  Real radius = radius_factor * gap;
  if (!(radius < gap))
    throw ValidationError("sheet_monodromy: circle would reach a neighbouring rung");

  PathSpec params;
  params.max_step = Real("0.005");
  params.min_step = Real("1e-9");
  params.jump_tol = Real("0.25");
  return monodromy_loop(ms.lambda, ms.series, Cplx(wn), radius, start_sheet.sign_path(),
                        loops, tol, pi_value() / 2, params);
}

SurfaceGraph build_surface(const Cplx& lambda, int M, const SurfaceOptions& opt) {
  if (M < 1) throw ValidationError("build_surface: depth must be >= 1");
  if (M > opt.max_depth)
    throw ValidationError("build_surface: depth exceeds the configured cap");
  int N = 240 + 40 * M;
  ModelSolution ms = solve_model(lambda, Cplx(-1), N, opt.tol / 100);

  SurfaceGraph graph;
  graph.lambda = lambda;
  graph.g1 = Cplx(-1);
  graph.r_hat = ms.r_hat;
  graph.depth = M;
  graph.ladder = make_ladder(ms.r_hat, lambda.re, M);
  graph.sheets = sheets_at_depth(M);

  for (int n = 0; n < M; ++n) {
    Real radius = opt.radius_factor * ladder_gap(ms.r_hat, lambda.re, n);
    Cplx center(graph.ladder[static_cast<std::size_t>(n)]);
    Real start_angle = 2 * pi_value() * opt.start_angle_frac;
    Cplx probe_point = center + polar(radius, start_angle);

    // reference values of every sheet at the probe point
    std::vector<Cplx> ref;
    for (const auto& s : graph.sheets)
      ref.push_back(evaluate_sheet(lambda, ms.series, probe_point, s.sign_path()));

    std::vector<bool> paired(graph.sheets.size(), false);
    for (std::size_t i = 0; i < graph.sheets.size(); ++i) {
      const SheetLabel& s = graph.sheets[i];
      if (s.birth_index() > n) continue;  // not branched at w_n
      if (paired[i]) continue;
      PathSpec params;
      params.max_step = Real("0.005");
      params.min_step = Real("1e-9");
      params.jump_tol = Real("0.25");
      MonodromyResult mono = monodromy_loop(lambda, ms.series, center, radius,
                                            s.sign_path(), 1, opt.tol, start_angle, params);
      if (!mono.swapped)
        throw NumericalError("build_surface: sheet " + s.bits +
                             " did not swap at its own branch point w_" + std::to_string(n));
      // identify the landing sheet
      int best = -1;
      Real best_d(0);
      for (std::size_t j = 0; j < ref.size(); ++j) {
        Real dist = abs(ref[j] - mono.end_value);
        if (best < 0 || dist < best_d) {
          best = static_cast<int>(j);
          best_d = dist;
        }
      }
      if (best < 0 || best_d > 100 * opt.tol)
        throw NumericalError("build_surface: monodromy image of " + s.bits +
                             " matches no enumerated sheet at w_" + std::to_string(n));
      if (paired[static_cast<std::size_t>(best)] || best == static_cast<int>(i))
        throw NumericalError("build_surface: inconsistent pairing at w_" + std::to_string(n));
      paired[i] = paired[static_cast<std::size_t>(best)] = true;
      SheetLabel a = s, b = graph.sheets[static_cast<std::size_t>(best)];
      if (b < a) std::swap(a, b);
      graph.edges.push_back({n, a, b});
    }
  }
  std::sort(graph.edges.begin(), graph.edges.end(), [](const SurfaceEdge& x, const SurfaceEdge& y) {
    if (x.ladder_index != y.ladder_index) return x.ladder_index < y.ladder_index;
    return x.a < y.a;
  });
  return graph;
}

std::string SurfaceGraph::to_json() const {
  nlohmann::json j;
  j["formatVersion"] = 1;
  j["lambda"] = {to_string(lambda.re), to_string(lambda.im)};
  j["g1"] = {to_string(g1.re), to_string(g1.im)};
  j["rHat"] = to_string(r_hat);
  j["depth"] = depth;
  nlohmann::json lad = nlohmann::json::array();
  for (const auto& w : ladder) lad.push_back(to_string(w));
  j["ladder"] = std::move(lad);
  nlohmann::json sh = nlohmann::json::array();
  for (const auto& s : sheets) sh.push_back(s.bits);
  j["sheets"] = std::move(sh);
  nlohmann::json ed = nlohmann::json::array();
  for (const auto& e : edges)
    ed.push_back({{"n", e.ladder_index}, {"a", e.a.bits}, {"b", e.b.bits}});
  j["edges"] = std::move(ed);
  return j.dump(2);
}

std::vector<IdentityReport> sheet_identity_check(const ModelSolution& ms, int samples,
                                                 std::uint64_t seed, const Real& tol) {
  if (ms.r_hat.is_zero())
    throw ValidationError("sheet_identity_check: run find_rhat first");
  const Cplx& lambda = ms.lambda;
  Rng rng(seed);

  auto h = [&](const std::string& bits, const Cplx& w) {
    return evaluate_sheet(lambda, ms.series, w, SheetLabel{bits}.sign_path());
  };

  std::vector<Real> ladder = make_ladder(ms.r_hat, lambda.re, 8);
  auto sample_point = [&]() {
    for (int tries = 0; tries < 64; ++tries) {
      // log-uniform radius across the first few ladder rungs
      Real r = ms.r_hat * pow(Real(4) / lambda.re, rng.uniform()) / 2;
      Cplx w = polar(r, rng.uniform() * 2 * pi_value());
      bool safe = true;
      for (const auto& wn : ladder)
        if (abs(w - Cplx(wn)) < 10 * tol * wn) safe = false;
      if (safe) return w;
    }
    throw NumericalError("sheet_identity_check: could not sample a safe point");
  };

  struct Checker {
    std::string name;
    std::function<Real(const Cplx&)> residual;
  };
  Cplx lam = lambda;
  std::vector<Checker> checks;
  checks.push_back({"h0+h1 = -lambda", [&, lam](const Cplx& w) {
                      return abs(h("0", w) + h("1", w) + lam);
                    }});
  checks.push_back({"h0(lambda w) = h0^2 + lambda h0", [&, lam](const Cplx& w) {
                      Cplx v = h("0", w);
                      return abs(h("0", lam * w) - v * v - lam * v);
                    }});
  checks.push_back({"h0(lambda w) = h1^2 + lambda h1", [&, lam](const Cplx& w) {
                      Cplx v = h("1", w);
                      return abs(h("0", lam * w) - v * v - lam * v);
                    }});
  checks.push_back({"h1(lambda w) = -h1^2 - lambda h1 - lambda", [&, lam](const Cplx& w) {
                      Cplx v = h("1", w);
                      return abs(h("1", lam * w) + v * v + lam * v + lam);
                    }});
  checks.push_back({"h10+h11 = -lambda", [&, lam](const Cplx& w) {
                      return abs(h("10", w) + h("11", w) + lam);
                    }});
  checks.push_back({"(h10+lambda/2)^2 + (h1+lambda/2)^2 = lambda^2/2 - lambda",
                    [&, lam](const Cplx& w) {
                      Cplx a = h("10", w) + lam / Cplx(2);
                      Cplx b = h("1", w) + lam / Cplx(2);
                      return abs(a * a + b * b - lam * lam / Cplx(2) + lam);
                    }});
  checks.push_back({"h10 functional equation", [&, lam](const Cplx& w) {
                      Cplx a = h("10", lam * w) + lam / Cplx(2);
                      Cplx v = h("10", w);
                      Cplx b = v * v + lam * v + lam / Cplx(2);
                      return abs(a * a + b * b - lam * lam / Cplx(2) + lam);
                    }});

  std::vector<IdentityReport> out;
  for (auto& c : checks) {
    IdentityReport rep;
    rep.name = c.name;
    for (int s = 0; s < samples; ++s) {
      for (int attempt = 0;; ++attempt) {
        Cplx w = sample_point();
        try {
          rep.max_residual = std::max(rep.max_residual, c.residual(w), std::less<Real>());
          break;
        } catch (const Error&) {
          if (attempt >= 3) throw;
        }
      }
      ++rep.samples;
    }
    out.push_back(std::move(rep));
  }

  // misfit of h1 against the original equation (expected O(1))
  IdentityReport mis;
  mis.name = "h1 misfit vs original equation (min; expected O(1))";
  Real min_mis = Real("1e300");
  for (int s = 0; s < samples; ++s) {
    Cplx w = sample_point();
    Cplx v = h("1", w);
    min_mis = std::min(min_mis, abs(h("1", lam * w) - v * v - lam * v), std::less<Real>());
  }
  mis.max_residual = min_mis;
  mis.samples = samples;
  out.push_back(std::move(mis));
  return out;
}

Claim4Report claim4_sequences(const Real& lambda, int depth, const Real& tol) {
  if (!(lambda > 0) || !(lambda < 1))
    throw ValidationError("claim4_sequences: lambda must lie in (0,1)");
  Claim4Report rep;
  Real quarter = lambda * lambda / 4;

  Cplx e0(quarter - lambda);
  Real min_e = abs(e0 + Cplx(quarter));
  std::vector<Cplx> frontier{e0};
  for (int level = 0; level < depth; ++level) {
    std::vector<Cplx> next;
    next.reserve(frontier.size() * 2);
    for (const auto& e : frontier) {
      Cplx root = sqrt(Cplx(quarter) + e);
      for (int s : {1, -1}) {
        Cplx en = Cplx(-lambda / 2) + Cplx(Real(s)) * root;
        min_e = std::min(min_e, abs(en + Cplx(quarter)), std::less<Real>());
        next.push_back(en);
      }
    }
    frontier = std::move(next);
  }
  rep.min_e_margin = min_e;

  Cplx d0(quarter - lambda / 2);
  Real min_d = abs(d0);
  frontier = {d0};
  for (int level = 0; level < depth; ++level) {
    std::vector<Cplx> next;
    next.reserve(frontier.size() * 2);
    for (const auto& dv : frontier) {
      Cplx root = sqrt(dv);
      for (int s : {1, -1}) {
        Cplx dn = Cplx(-lambda / 2) + Cplx(Real(s)) * root;
        min_d = std::min(min_d, abs(dn), std::less<Real>());
        next.push_back(dn);
      }
    }
    frontier = std::move(next);
  }
  rep.min_d_abs = min_d;
  rep.pass = rep.min_e_margin >= tol && rep.min_d_abs >= tol;
  return rep;
}

PowerSeries symmetry_lift(const ModelSolution& ms, int N) {
  if (N < 1) throw ValidationError("symmetry_lift: N must be >= 1");
  if (N == 1) return ms.series;
  const PowerSeries& g = ms.series;
  PowerSeries out;
  out.center = Cplx(0);
  out.min_degree = N;  // g1 w^N leads
  out.order = (g.order - 1) * N + 1;
  out.coeffs.assign(static_cast<std::size_t>(out.order - out.min_degree), Cplx(0));
  for (int d = g.min_degree; d < g.order; ++d)
    if (!g.coeff(d).is_zero()) out.set_coeff(d * N, g.coeff(d));
  return out;
}

}  // namespace cde
