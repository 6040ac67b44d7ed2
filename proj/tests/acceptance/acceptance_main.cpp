// Acceptance suite: runs every criterion at its stated tolerance and prints
// one PASS/FAIL line per criterion. Exit code 0 iff all pass.

#include <chrono>
#include <cstdio>
#include <functional>
#include <set>
#include <string>
#include <vector>

#include "cde/continuation.hpp"
#include "cde/equation.hpp"
#include "cde/gridsample.hpp"
#include "cde/mahler.hpp"
#include "cde/picard.hpp"
#include "cde/precision.hpp"
#include "cde/surface.hpp"

using namespace cde;

namespace {

struct Harness {
  int failures = 0;

  void run(const std::string& name, double budget_seconds,
           const std::function<bool(std::string&)>& body) {
    std::string detail;
    bool ok = false;
    auto t0 = std::chrono::steady_clock::now();
    try {
      ok = body(detail);
    } catch (const std::exception& e) {
      detail = std::string("exception: ") + e.what();
      ok = false;
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (budget_seconds > 0 && secs > budget_seconds) {
      ok = false;
      detail += (detail.empty() ? "" : "; ") + std::string("over time budget");
    }
    std::printf("%s  %s (%.2f s)%s%s\n", ok ? "PASS" : "FAIL", name.c_str(), secs,
                detail.empty() ? "" : " -- ", detail.c_str());
    std::fflush(stdout);
    if (!ok) ++failures;
  }
};

double dbl(const Real& x) { return x.convert_to<double>(); }

Cplx closed_form_w(const Cplx& z) {
  Cplx pow2z = exp(z * log(Cplx(2)));
  return (exp(pow2z) - Cplx(1)) / pow2z;
}

StripDomain left10() {
  return StripDomain::make(StripSide::Left, Real(10), Real(1), Real(10), Real("0.5"),
                           Real("0.5"));
}

StripDomain right10() {
  return StripDomain::make(StripSide::Right, Real(10), Real(1), Real(10), Real("0.5"),
                           Real("0.5"));
}

}  // namespace

int main() {
  set_precision_bits(128);
  Harness h;

  // ---- 1. closed-form oracle for the left half-plane operator
  h.run("criterion 1: closed-form oracle (left strip, lambda=2)", 10, [&](std::string& out) {
    EquationSpec eq = EquationSpec::model(Cplx(2));
    SolveOptions opt;
    opt.tol = Real("1e-12");
    StripDomain d = left10();
    StripFunction w = picard_solve(eq, Cplx(1), d, opt);
    int good = 0, total = d.size();
    Real worst(0);
    for (int c = 0; c < d.cols(); ++c)
      for (int r = 0; r < d.rows(); ++r) {
        Real err = abs(w.at(c, r) - closed_form_w(d.point(c, r)));
        worst = std::max(worst, err, std::less<Real>());
        if (err <= Real("1e-8")) ++good;
      }
    bool match = good >= (total * 95 + 99) / 100;
    bool tele = true;
    for (int c = 0; c < d.cols(); c += 4)
      for (int r = 0; r < d.rows(); r += 2) {
        Cplx t = forward_telescope(eq, Cplx(1), d.point(c, r), 45, 16);
        if (dbl(abs(t - w.at(c, r))) > 1e-8) tele = false;
      }
    out = "max |w - closed form| = " + to_string(worst);
    return match && tele;
  });

  // ---- 2. parabolic oracle
  h.run("criterion 2: parabolic oracle (Abel operator)", 30, [&](std::string& out) {
    auto nf0 = abel_normalize(RationalMap::parse("y/(1+y)"), Cplx(0), 20, Real("1e-25"));
    for (const auto& c : nf0.c)
      if (dbl(abs(c)) > 1e-20) return false;
    AbelNormalForm form0 = AbelNormalForm::make(nf0, Cplx(0.4, 0.2), Real("0.5"));
    SolveOptions opt;
    opt.tol = Real("1e-12");
    StripFunction W0 = abel_solve(form0, left10(), opt);
    Real normW(0);
    for (const auto& v : W0.values) normW = std::max(normW, abs(v), std::less<Real>());
    if (dbl(normW) > 1e-10) return false;
    // Y = z + alpha to tolerance
    for (int c = 0; c < W0.domain.cols(); ++c)
      for (int r = 0; r < W0.domain.rows(); ++r) {
        Cplx Y = abel_Y(form0, W0, c, r);
        if (dbl(abs(Y - W0.domain.point(c, r) - form0.alpha)) > 1e-10) return false;
      }

    auto nf1 = abel_normalize(RationalMap::parse("y + y^2"), Cplx(0), 24, Real("1e-25"));
    AbelNormalForm form1 = AbelNormalForm::make(nf1, Cplx(0), Real("0.5"));
    if (dbl(abs(form1.beta - Cplx(1))) > 1e-20) return false;
    StripDomain d50 = StripDomain::make(StripSide::Left, Real(50), Real(1), Real(10),
                                        Real("0.5"), Real("0.5"));
    opt.tol = Real("1e-11");
    StripFunction W1 = abel_solve(form1, d50, opt);
    for (int c = 0; c < d50.cols(); ++c)
      for (int r = 0; r < d50.rows(); ++r)
        if (dbl(abs(W1.at(c, r))) > dbl(pow(abs(d50.point(c, r)), Real("-0.5"))))
          return false;
    out = "equation residual = " + to_string(W1.equation_residual);
    return dbl(W1.equation_residual) <= 1e-6;
  });

  // ---- 3. contraction + uniqueness
  h.run("criterion 3: contraction and uniqueness probes", 60, [&](std::string& out) {
    SolveOptions opt;
    opt.tol = Real("1e-12");
    EquationSpec eq = EquationSpec::model(Cplx(2));
    StripDomain d = left10();
    Real k1 = contraction_probe(make_picard_operator(eq, Cplx(1), d, opt), d, Cplx(1),
                                Real(1), 50, 42);

    auto nf1 = abel_normalize(RationalMap::parse("y + y^2"), Cplx(0), 24, Real("1e-25"));
    AbelNormalForm form1 = AbelNormalForm::make(nf1, Cplx(0), Real("0.5"));
    StripDomain d50 = StripDomain::make(StripSide::Left, Real(50), Real(1), Real(10),
                                        Real("0.5"), Real("0.5"));
    Real k2 = contraction_probe(make_abel_operator(form1, d50, opt), d50, Cplx(0),
                                pow(Real(50), Real("-0.5")), 50, 42);
    out = "picard k = " + to_string(k1) + ", abel k = " + to_string(k2);
    if (!(dbl(k1) < 1.0 && dbl(k2) < 1.0)) return false;

    StripFunction w1 = picard_solve(eq, Cplx(1), d, opt);
    SolveOptions opt2 = opt;
    std::vector<Cplx> init(static_cast<std::size_t>(d.size()), Cplx(1.3, -0.2));
    opt2.initial = init;
    StripFunction w2 = picard_solve(eq, Cplx(1), d, opt2);
    for (std::size_t i = 0; i < w1.values.size(); ++i)
      if (dbl(abs(w1.values[i] - w2.values[i])) > dbl(10 * opt.tol)) return false;
    return true;
  });

  // ---- 4. model series
  h.run("criterion 4: model series recurrence (N=200)", 1, [&](std::string& out) {
    ModelSolution ms = model_series(Cplx(0.5), Cplx(-1), 200);
    if (dbl(abs(ms.series.coeff(2) - Cplx(-4))) > 1e-30) return false;
    if (dbl(abs(ms.series.coeff(3) - Cplx(Real(-64) / Real(3)))) > 1e-28) return false;
    PowerSeries sq = series_mul(ms.series, ms.series);
    Real scale(1);
    for (int n = 1; n <= 200; ++n)
      scale = std::max(scale, abs(ms.series.coeff(n)), std::less<Real>());
    Real worst(0);
    for (int n = 1; n <= 200; ++n) {
      Cplx lhs = ms.series.coeff(n) * pow(Cplx(0.5), static_cast<long>(n));
      Cplx rhs = Cplx(0.5) * ms.series.coeff(n) + sq.coeff(n);
      worst = std::max(worst, abs(lhs - rhs) / scale, std::less<Real>());
    }
    out = "relative coefficient residual = " + to_string(worst);
    return dbl(worst) <= 1e-10;
  });

  // ---- 5. radius consistency
  h.run("criterion 5: radius consistency", 5, [&](std::string& out) {
    ModelSolution ms = solve_model(Cplx(0.5), Cplx(-1), 400, Real("1e-12"));
    Real est = estimate_radius(ms.series);
    if (!(dbl(ms.r_hat) >= 1.0 / 16.0)) return false;
    if (dbl(abs(ms.r_hat - est) / ms.r_hat) > 1e-3) return false;
    Cplx g_at = series_eval(ms.series, Cplx(Real("0.5") * ms.r_hat));
    Real resid = abs(g_at + Cplx(Real("0.0625")));
    out = "rHat = " + to_string(ms.r_hat) + ", |g(lambda rHat)+lambda^2/4| = " + to_string(resid);
    return dbl(resid) <= 1e-8;
  });

  // ---- 6. monodromy
  h.run("criterion 6: monodromy exchanges", 20, [&](std::string& out) {
    ModelSolution ms = solve_model(Cplx(0.5), Cplx(-1), 280, Real("1e-14"));
    MonodromyResult one = sheet_monodromy(ms, 0, Real("0.3"), SheetLabel{"0"}, 1, Real("1e-6"));
    if (!one.swapped) return false;
    if (dbl(abs(one.end_value + ms.lambda + one.start_value)) > 1e-6) return false;
    MonodromyResult two = sheet_monodromy(ms, 0, Real("0.3"), SheetLabel{"0"}, 2, Real("1e-6"));
    if (two.swapped) return false;
    if (dbl(abs(two.end_value - two.start_value)) > 1e-6) return false;

    // index 1: h0 -> h10 and h1 -> h11, distinct from the depth-1 pairing
    Real gap = ms.r_hat / Real("0.5") - ms.r_hat;
    Real radius = Real("0.3") * std::min(gap, ms.r_hat * (1 - Real("0.5")) / Real("0.5"),
                                         std::less<Real>());
    Cplx w1(ms.r_hat / Real("0.5"));
    Cplx probe = w1 + polar(radius, pi_value() / 2);
    MonodromyResult m0 = sheet_monodromy(ms, 1, Real("0.3"), SheetLabel{"0"}, 1, Real("1e-6"));
    MonodromyResult m1 = sheet_monodromy(ms, 1, Real("0.3"), SheetLabel{"1"}, 1, Real("1e-6"));
    Cplx h10 = evaluate_sheet(ms.lambda, ms.series, probe, SheetLabel{"10"}.sign_path());
    Cplx h11 = evaluate_sheet(ms.lambda, ms.series, probe, SheetLabel{"11"}.sign_path());
    Cplx h1v = evaluate_sheet(ms.lambda, ms.series, probe, SheetLabel{"1"}.sign_path());
    if (dbl(abs(m0.end_value - h10)) > 1e-6) return false;
    if (dbl(abs(m1.end_value - h11)) > 1e-6) return false;
    if (dbl(abs(h10 - h1v)) < 1e-3) return false;  // partner distinct from depth-1 pairing
    out = "loop(w0): h0 -> -lambda - h0; loop(w1): h0 -> h10, h1 -> h11";
    return true;
  });

  // ---- 7. surface structure
  h.run("criterion 7: surface structure at depth 3", 120, [&](std::string& out) {
    SurfaceOptions opt;
    SurfaceGraph g = build_surface(Cplx(0.5), 3, opt);
    if (g.sheets.size() != 8) return false;
    std::set<std::string> edges;
    for (const auto& e : g.edges)
      edges.insert(std::to_string(e.ladder_index) + ":" + e.a.bits + "-" + e.b.bits);
    if (edges.count("0:0-1") != 1 || edges.count("1:0-10") != 1 || edges.count("1:1-11") != 1)
      return false;
    std::set<std::string> touched;
    int idx2 = 0;
    for (const auto& e : g.edges)
      if (e.ladder_index == 2) {
        ++idx2;
        touched.insert(e.a.bits);
        touched.insert(e.b.bits);
      }
    if (idx2 != 4 || touched.size() != 8) return false;

    ModelSolution ms = solve_model(Cplx(0.5), Cplx(-1), 280, Real("1e-14"));
    auto reports = sheet_identity_check(ms, 100, 42, Real("1e-9"));
    Real worst(0);
    for (const auto& rep : reports) {
      if (rep.name.find("misfit") != std::string::npos) {
        if (dbl(rep.max_residual) < 0.01) return false;
      } else {
        worst = std::max(worst, rep.max_residual, std::less<Real>());
      }
    }
    out = "max identity residual = " + to_string(worst);
    return dbl(worst) <= 1e-8;
  });

  // ---- 8. claim 4
  h.run("criterion 8: claim 4 (0 is never a branch point)", 60, [&](std::string& out) {
    for (double lam : {0.3, 0.5, 0.7}) {
      Claim4Report rep = claim4_sequences(Real(lam), 12, Real("1e-6"));
      if (!(dbl(rep.min_e_margin) > 1e-6)) return false;
    }
    ModelSolution ms = solve_model(Cplx(0.5), Cplx(-1), 280, Real("1e-14"));
    PathSpec params;
    params.max_step = Real("0.01");
    params.min_step = Real("1e-9");
    params.jump_tol = Real("0.25");
    for (const auto& s : sheets_at_depth(3)) {
      MonodromyResult res =
          monodromy_loop(ms.lambda, ms.series, Cplx(0), ms.r_hat / 4, s.sign_path(), 1,
                         Real("1e-6"), pi_value() / 2, params);
      if (res.swapped) return false;
    }
    out = "e-tree margins clear; depth-<=3 loops around 0 unswapped";
    return true;
  });

  // ---- 9. Mahler
  h.run("criterion 9: Mahler solution family", 60, [&](std::string& out) {
    MahlerParams mp = to_mahler(Cplx(0.5));
    if (dbl(abs(mp.c - Cplx(Real(3) / Real(16)))) > 1e-30) return false;
    if (mp.case_tag != MahlerCase::Case1) return false;

    PowerSeries Y = mahler_laurent(mp.c, 100);
    if (!(Y.coeff(-1) == Cplx(1)) || !Y.coeff(0).is_zero()) return false;
    if (dbl(abs(Y.coeff(1) - Cplx(Real(-3) / Real(32)))) > 1e-30) return false;
    Real worst(0);
    for (int i = 0; i < 60; ++i) {
      Real t = Real(i) / Real(60);
      Cplx u = polar(Real("0.05") + Real("0.65") * t, 2 * pi_value() * 5 * t);
      worst = std::max(worst,
                       abs(series_eval(Y, u * u) - series_eval(Y, u) * series_eval(Y, u) -
                           mp.c),
                       std::less<Real>());
    }
    if (dbl(worst) > 1e-10) return false;

    StripList sl = strips(2);
    Real l2 = log(Real(2));
    for (const auto& s : sl.strips) {
      Real lo = log(Real(4 * s.n - 1) * pi_value() / 2) / l2;
      Real hi = log(Real(4 * s.n + 1) * pi_value() / 2) / l2;
      if (dbl(abs(s.lower - lo)) > 1e-12 || dbl(abs(s.upper - hi)) > 1e-12) return false;
    }

    std::vector<Real> radii1;
    for (int i = 0; i <= 500; ++i)
      radii1.push_back(Real("0.5") + (Real("0.999") - Real("0.5")) * Real(i) / Real(500));
    BoundaryProbeResult case1 =
        boundary_probe(mp.c, {Real(0), Real("0.7"), Real(2)}, radii1);
    if (!(dbl(case1.max_abs_y) < 1e3)) return false;

    std::vector<Real> radii2;
    for (int i = 0; i <= 3000; ++i)
      radii2.push_back(Real("0.5") + (Real("0.9999") - Real("0.5")) * Real(i) / Real(3000));
    BoundaryProbeResult case2 = boundary_probe(Cplx(Real("0.3")), {Real(0)}, radii2);
    out = "case1 max|Y| = " + to_string(case1.max_abs_y) +
          ", case2 events = " + std::to_string(case2.total_ambiguity_events);
    return case2.total_ambiguity_events >= 1;
  });

  // ---- 10. right half-plane solution against the sheet evaluation
  h.run("criterion 10: right-strip solve matches the series sheet", 10, [&](std::string& out) {
    EquationSpec eq = EquationSpec::model(Cplx(0.5));
    SolveOptions opt;
    opt.tol = Real("1e-12");
    StripDomain d = right10();
    StripFunction w = picard_solve(eq, Cplx(-1), d, opt);
    if (dbl(w.equation_residual) > 1e-8) return false;
    ModelSolution ms = solve_model(Cplx(0.5), Cplx(-1), 300, Real("1e-12"));
    Real worst(0);
    for (int c = 0; c < d.cols(); ++c)
      for (int r = 0; r < d.rows(); ++r) {
        Cplx z = d.point(c, r);
        Cplx wz = exp(z * log(Cplx(0.5)));
        Cplx sheet = evaluate_sheet(ms.lambda, ms.series, wz, {});
        worst = std::max(worst, abs(w.at(c, r) * wz - sheet), std::less<Real>());
      }
    out = "max |y - g(lambda^z)| = " + to_string(worst);
    return dbl(worst) <= 1e-6;
  });

  // ---- 11. determinism
  h.run("criterion 11: determinism of artifacts", 120, [&](std::string& out) {
    auto make_artifacts = [&]() {
      EquationSpec eq = EquationSpec::model(Cplx(2));
      SolveOptions opt;
      opt.tol = Real("1e-12");
      StripDomain d = left10();
      StripFunction w = picard_solve(eq, Cplx(1), d, opt);
      GridSample g;
      g.metadata["command"] = "solve-left";
      g.metadata["seed"] = "42";
      for (int c = 0; c < d.cols(); ++c)
        for (int r = 0; r < d.rows(); ++r)
          g.push(d.point(c, r), w.at(c, r), w.equation_residual);
      SurfaceOptions sopt;
      SurfaceGraph graph = build_surface(Cplx(0.5), 2, sopt);
      ModelSolution ms = solve_model(Cplx(0.5), Cplx(-1), 260, Real("1e-12"));
      auto idr = sheet_identity_check(ms, 25, 42, Real("1e-9"));
      std::string ids;
      for (const auto& r : idr) ids += r.name + "=" + to_string(r.max_residual) + "\n";
      return g.to_csv() + "\n---\n" + graph.to_json() + "\n---\n" + ids;
    };
    std::string a = make_artifacts();
    std::string b = make_artifacts();
    out = "artifact bytes = " + std::to_string(a.size());
    return a == b && !a.empty();
  });

  if (h.failures == 0) {
    std::printf("all acceptance criteria passed\n");
    return 0;
  }
  std::printf("%d acceptance criterion(s) failed\n", h.failures);
  return 1;
}
