// cde: construct, continue and analyze solutions of first-order complex
// difference equations y(z+1) = F(z, y(z)).

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "cde/errors.hpp"
#include "cde/continuation.hpp"
#include "cde/equation.hpp"
#include "cde/gridsample.hpp"
#include "cde/mahler.hpp"
#include "cde/picard.hpp"
#include "cde/surface.hpp"

using namespace cde;

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitValidation = 2;
constexpr int kExitNumerical = 3;

Cplx parse_cplx(const std::string& s) {
  auto comma = s.find(',');
  if (comma == std::string::npos) return Cplx(parse_real(s));
  return Cplx(parse_real(s.substr(0, comma)), parse_real(s.substr(comma + 1)));
}

std::string cplx_json(const Cplx& z) {
  return "[" + to_string(z.re) + ", " + to_string(z.im) + "]";
}

void write_output(const std::string& text, const std::string& path) {
  if (path.empty()) {
    std::cout << text << "\n";
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ValidationError("cannot open '" + path + "' for writing");
  out << text;
}

struct GlobalOptions {
  unsigned precision = 128;
  std::uint64_t seed = 42;
  std::string tol = "1e-10";
  std::string out;

  Real tol_value() const {
    Real t = parse_real(tol);
    Real floorv = ldexp(Real(1), -static_cast<int>(precision / 2));
    if (t < floorv)
      throw ValidationError("tol must be >= 2^(-precision/2) = " + to_string(floorv));
    return t;
  }
};

struct EquationInput {
  std::string config_path;
  std::string lambda_text;

  EquationSpec load() const {
    if (!config_path.empty()) {
      std::ifstream in(config_path);
      if (!in) throw ValidationError("cannot read config '" + config_path + "'");
      EquationSpec eq;
      bool have_lambda = false;
      std::map<int, CoeffExpr> a, b;
      std::string line;
      while (std::getline(in, line)) {
        auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        auto eqpos = line.find('=');
        if (eqpos == std::string::npos) continue;
        std::string key = line.substr(0, eqpos);
        std::string value = line.substr(eqpos + 1);
        auto strip = [](std::string& s) {
          while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front())))
            s.erase(s.begin());
          while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back())))
            s.pop_back();
        };
        strip(key);
        strip(value);
        if (key.empty()) continue;
        if (key == "lambda") {
          eq.lambda = parse_cplx(value);
          have_lambda = true;
        } else if (key[0] == 'a') {
          a.emplace(std::stoi(key.substr(1)), CoeffExpr::parse(value));
        } else if (key[0] == 'b') {
          b.emplace(std::stoi(key.substr(1)), CoeffExpr::parse(value));
        } else {
          throw ValidationError("unknown config key '" + key + "'");
        }
      }
      if (!have_lambda) throw ValidationError("config must set lambda");
      int pmax = a.empty() ? 1 : a.rbegin()->first;
      for (int j = 2; j <= pmax; ++j) {
        auto it = a.find(j);
        eq.a_higher.push_back(it == a.end() ? CoeffExpr::constant(Cplx(0)) : it->second);
      }
      int qmax = b.empty() ? 0 : b.rbegin()->first;
      for (int k = 1; k <= qmax; ++k) {
        auto it = b.find(k);
        eq.b.push_back(it == b.end() ? CoeffExpr::constant(Cplx(0)) : it->second);
      }
      return eq;
    }
    if (lambda_text.empty())
      throw ValidationError("pass --config FILE or --lambda VALUE");
    return EquationSpec::model(parse_cplx(lambda_text));
  }
};

void fill_metadata(GridSample& g, const std::string& command, const GlobalOptions& go,
                   const std::map<std::string, std::string>& extra) {
  g.metadata["formatVersion"] = "1";
  g.metadata["command"] = command;
  g.metadata["precisionBits"] = std::to_string(go.precision);
  g.metadata["seed"] = std::to_string(go.seed);
  g.metadata["tol"] = go.tol;
  for (const auto& [k, v] : extra) g.metadata[k] = v;
}

GridSample strip_to_grid(const StripFunction& w, const EquationSpec& eq) {
  GridSample g;
  g.domain_tag = "z-plane";
  const StripDomain& d = w.domain;
  int stride = d.stride();
  Cplx loglam = log(eq.lambda);
  for (int c = 0; c < d.cols(); ++c) {
    for (int r = 0; r < d.rows(); ++r) {
      Cplx z = d.point(c, r);
      Real resid = w.equation_residual;
      if (c + stride < d.cols()) {
        Cplx lam_z = exp(z * loglam);
        Cplx y = lam_z * w.at(c, r);
        Cplx y1 = lam_z * eq.lambda * w.at(c + stride, r);
        resid = abs(y1 - eq.rhs(z, y));
      }
      g.push(z, w.at(c, r), resid);
    }
  }
  return g;
}

int run_solve(StripSide side, const EquationInput& eqin, const GlobalOptions& go,
              const std::string& alpha_text, double rho, double sigma, double extent,
              double re_step, double im_step, int max_iter, int trunc_j,
              const std::string& format) {
  EquationSpec eq = eqin.load();
  Cplx alpha = parse_cplx(alpha_text);
  StripDomain d = StripDomain::make(side, Real(rho), Real(sigma), Real(extent),
                                    Real(re_step), Real(im_step));
  SolveOptions opt;
  opt.tol = go.tol_value();
  opt.max_iter = max_iter;
  opt.trunc_j = trunc_j;
  StripFunction w = picard_solve(eq, alpha, d, opt);

  GridSample g = strip_to_grid(w, eq);
  fill_metadata(g, side == StripSide::Left ? "solve-left" : "solve-right", go,
                {{"equation", eq.to_json()},
                 {"alpha", to_string(alpha.re) + "," + to_string(alpha.im)},
                 {"rho", std::to_string(rho)},
                 {"sigma", std::to_string(sigma)},
                 {"extent", std::to_string(extent)},
                 {"reStep", std::to_string(re_step)},
                 {"imStep", std::to_string(im_step)},
                 {"maxIter", std::to_string(max_iter)},
                 {"truncJ", std::to_string(trunc_j)},
                 {"truncK", std::to_string(w.trunc_k)}});
  write_output(format == "json" ? g.to_json() : g.to_csv(), go.out);
  std::cerr << "solve: " << d.size() << " grid points, " << w.iterations
            << " iterations, step " << to_string(w.fixed_point_step) << ", residual "
            << to_string(w.equation_residual) << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"cde: solutions of first-order complex difference equations"};
  app.require_subcommand(1);
  app.fallthrough();

  GlobalOptions go;
  app.add_option("--precision", go.precision, "working precision in bits (default 128)")
      ->envname("CDE_PRECISION");
  app.add_option("--seed", go.seed, "seed for randomized diagnostics (default 42)");
  app.add_option("--tol", go.tol, "solve/check tolerance (default 1e-10)");
  app.add_option("--out", go.out, "output file (default: stdout)");

  // ---- classify
  auto* classify = app.add_subcommand("classify", "fixed points and multipliers of a map");
  classify->fallthrough();
  std::string map_text;
  classify->add_option("--map", map_text, "rational map in y, e.g. \"2*y+y^2\"")
      ->required();

  // ---- series
  auto* series = app.add_subcommand("series", "model-solution series coefficients");
  series->fallthrough();
  std::string lambda_text = "0.5", g1_text = "-1";
  int order = 50;
  series->add_option("--lambda", lambda_text, "lambda (re or re,im)");
  series->add_option("--g1", g1_text, "leading coefficient (default -1)");
  series->add_option("--order", order, "truncation order (default 50)");

  // ---- radius
  auto* radius = app.add_subcommand("radius", "convergence radius of the model solution");
  radius->fallthrough();
  std::string rad_lambda = "0.5";
  int rad_order = 400;
  radius->add_option("--lambda", rad_lambda, "lambda in (0,1)");
  radius->add_option("--order", rad_order, "series order (default 400)");

  // ---- surface
  auto* surface = app.add_subcommand("surface", "sheet graph of the model solution");
  surface->fallthrough();
  std::string surf_lambda = "0.5";
  int depth = 2;
  surface->add_option("--lambda", surf_lambda, "lambda in (0,1)");
  surface->add_option("--depth", depth, "ladder depth M (default 2, cap 6)");

  // ---- monodromy
  auto* mono = app.add_subcommand("monodromy", "loop a sheet around a ladder point");
  mono->fallthrough();
  std::string mono_lambda = "0.5", sheet_bits = "0";
  int ladder_index = 0, loops = 1;
  double radius_factor = 0.3;
  mono->add_option("--lambda", mono_lambda, "lambda in (0,1)");
  mono->add_option("--ladder-index", ladder_index, "branch point index n (w_n)");
  mono->add_option("--sheet", sheet_bits, "start sheet bits (default \"0\")");
  mono->add_option("--loops", loops, "number of turns (default 1)");
  mono->add_option("--radius-factor", radius_factor, "circle radius as a gap fraction");

  // ---- solve-left / solve-right
  EquationInput eqin;
  std::string alpha_text = "1";
  double rho = 10, sigma = 1, extent = 10, re_step = 0.5, im_step = 0.5;
  int max_iter = 200, trunc_j = 24;
  std::string format = "csv";
  auto add_solve_opts = [&](CLI::App* cmd) {
    cmd->add_option("--config", eqin.config_path, "equation config file (key=value)");
    cmd->add_option("--lambda", eqin.lambda_text, "model equation y(z+1)=lambda y+y^2");
    cmd->add_option("--alpha", alpha_text, "asymptotic parameter alpha (re or re,im)");
    cmd->add_option("--rho", rho, "strip offset rho");
    cmd->add_option("--sigma", sigma, "strip half-height sigma");
    cmd->add_option("--extent", extent, "grid depth beyond rho");
    cmd->add_option("--re-step", re_step, "grid step in Re (1/step integral)");
    cmd->add_option("--im-step", im_step, "grid step in Im");
    cmd->add_option("--max-iter", max_iter, "Picard iteration cap (default 200)");
    cmd->add_option("--trunc-j", trunc_j, "j-sum truncation (default 24)");
    cmd->add_option("--format", format, "csv or json (default csv)");
  };
  auto* solve_left = app.add_subcommand("solve-left", "Picard solve on Re z < -rho");
  solve_left->fallthrough();
  add_solve_opts(solve_left);
  auto* solve_right = app.add_subcommand("solve-right", "Picard solve on Re z > rho");
  solve_right->fallthrough();
  add_solve_opts(solve_right);

  // ---- abel
  auto* abel = app.add_subcommand("abel", "parabolic normal form and Abel-type solve");
  abel->fallthrough();
  std::string abel_map = "y + y^2", gamma_text = "0", abel_alpha = "0";
  double abel_delta = 0.5, abel_rho = 50, abel_sigma = 1, abel_extent = 10;
  double abel_re_step = 0.5, abel_im_step = 0.5, tail_depth = 2000;
  int abel_J = 24, abel_max_iter = 200;
  abel->add_option("--map", abel_map, "rational map in y with a multiplier-1 fixed point");
  abel->add_option("--gamma", gamma_text, "the parabolic fixed point (default 0)");
  abel->add_option("--alpha", abel_alpha, "normalization constant alpha");
  abel->add_option("--delta", abel_delta, "bound exponent delta in (0,1)");
  abel->add_option("--rho", abel_rho, "strip offset rho");
  abel->add_option("--sigma", abel_sigma, "strip half-height sigma");
  abel->add_option("--extent", abel_extent, "grid depth beyond rho");
  abel->add_option("--re-step", abel_re_step, "grid step in Re");
  abel->add_option("--im-step", abel_im_step, "grid step in Im");
  abel->add_option("--tail-depth", tail_depth, "absolute k-sum cut (default 2000)");
  abel->add_option("--trunc-j", abel_J, "j-sum truncation (default 24)");
  abel->add_option("--max-iter", abel_max_iter, "iteration cap");
  abel->add_option("--format", format, "csv or json (default csv)");

  // ---- telescope
  auto* tele = app.add_subcommand("telescope", "single-point telescoped value");
  tele->fallthrough();
  std::string tele_z = "-10";
  int tele_K = 40, tele_J = 16;
  tele->add_option("--config", eqin.config_path, "equation config file");
  tele->add_option("--lambda", eqin.lambda_text, "model equation lambda");
  tele->add_option("--alpha", alpha_text, "asymptotic parameter alpha");
  tele->add_option("--z", tele_z, "evaluation point (re or re,im)");
  tele->add_option("--K", tele_K, "number of telescoping steps (default 40)");
  tele->add_option("--J", tele_J, "j-sum truncation (default 16)");

  // ---- mahler
  auto* mahler = app.add_subcommand("mahler", "Mahler companion solution probes");
  mahler->fallthrough();
  std::string mah_lambda = "0.5", mah_c;
  std::vector<std::string> probes;
  int mah_order = 220;
  mahler->add_option("--lambda", mah_lambda, "lambda (c computed as lambda/2-lambda^2/4)");
  mahler->add_option("--c", mah_c, "set c directly (overrides --lambda)");
  mahler->add_option("--probe", probes,
                     "ray probe angle=A,rmax=R,steps=N (repeatable)");
  mahler->add_option("--order", mah_order, "Laurent series order (default 220)");

  // ---- strips
  auto* strips_cmd = app.add_subcommand("strips", "natural-boundary strip intervals");
  strips_cmd->fallthrough();
  int nmax = 4;
  strips_cmd->add_option("--nmax", nmax, "number of strips (default 4)");

  // ---- grid
  auto* grid = app.add_subcommand("grid", "evaluate a model sheet on a w-plane grid");
  grid->fallthrough();
  std::string grid_lambda = "0.5", grid_sheet = "0";
  double re_min = -0.2, re_max = 0.2, im_min = -0.2, im_max = 0.2, grid_step = 0.05;
  grid->add_option("--lambda", grid_lambda, "lambda in (0,1)");
  grid->add_option("--sheet", grid_sheet, "sheet bits (default \"0\")");
  grid->add_option("--re-min", re_min, "grid window");
  grid->add_option("--re-max", re_max, "grid window");
  grid->add_option("--im-min", im_min, "grid window");
  grid->add_option("--im-max", im_max, "grid window");
  grid->add_option("--step", grid_step, "grid step");
  grid->add_option("--format", format, "csv or json (default csv)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    set_precision_bits(go.precision);
    Real tol = go.tol_value();

    if (*classify) {
      RationalMap R = RationalMap::parse(map_text);
      auto res = fixed_points(R, tol);
      nlohmann::json j;
      j["formatVersion"] = 1;
      j["map"] = map_text;
      nlohmann::json pts = nlohmann::json::array();
      for (const auto& fp : res.points) {
        pts.push_back({{"gamma", {to_string(fp.gamma.re), to_string(fp.gamma.im)}},
                       {"multiplier",
                        {to_string(fp.multiplier.re), to_string(fp.multiplier.im)}},
                       {"class", to_string(fp.cls)},
                       {"multiplicity", fp.multiplicity}});
      }
      j["fixedPoints"] = std::move(pts);
      j["juliaWitness"] = res.julia_witness;
      write_output(j.dump(2), go.out);
      std::cerr << "classify: " << res.points.size() << " finite fixed point(s)\n";
      return 0;
    }

    if (*series) {
      ModelSolution ms = model_series(parse_cplx(lambda_text), parse_cplx(g1_text), order);
      write_output(series_to_json(ms.series), go.out);
      std::cerr << "series: " << order << " coefficients, g2 = "
                << to_string(ms.series.coeff(2).re) << "\n";
      return 0;
    }

    if (*radius) {
      ModelSolution ms = solve_model(parse_cplx(rad_lambda), Cplx(-1), rad_order, tol);
      Real est = estimate_radius(ms.series);
      nlohmann::json j;
      j["formatVersion"] = 1;
      j["lambda"] = to_string(ms.lambda.re);
      j["majorantBound"] = to_string(ms.radius_lower_bound);
      j["ratioEstimate"] = to_string(est);
      j["rHat"] = to_string(ms.r_hat);
      Cplx g_at = series_eval(ms.series, ms.lambda * Cplx(ms.r_hat));
      j["branchValueResidual"] =
          to_string(abs(g_at + ms.lambda * ms.lambda / Cplx(4)));
      write_output(j.dump(2), go.out);
      std::cerr << "radius: rHat = " << to_string(ms.r_hat) << "\n";
      return 0;
    }

    if (*surface) {
      SurfaceOptions opt;
      opt.tol = tol;
      SurfaceGraph g = build_surface(parse_cplx(surf_lambda), depth, opt);
      write_output(g.to_json(), go.out);
      std::cerr << "surface: " << g.sheets.size() << " sheets, " << g.edges.size()
                << " edges\n";
      return 0;
    }

    if (*mono) {
      ModelSolution ms = solve_model(parse_cplx(mono_lambda), Cplx(-1), 280, tol / 100);
      MonodromyResult res = sheet_monodromy(ms, ladder_index, Real(radius_factor),
                                            SheetLabel{sheet_bits}, loops, tol);
      nlohmann::json j;
      j["formatVersion"] = 1;
      j["ladderIndex"] = ladder_index;
      j["sheet"] = sheet_bits;
      j["loops"] = res.loops;
      j["startValue"] = {to_string(res.start_value.re), to_string(res.start_value.im)};
      j["endValue"] = {to_string(res.end_value.re), to_string(res.end_value.im)};
      j["swapped"] = res.swapped;
      write_output(j.dump(2), go.out);
      std::cerr << "monodromy: " << (res.swapped ? "swapped" : "unswapped") << "\n";
      return 0;
    }

    if (*solve_left)
      return run_solve(StripSide::Left, eqin, go, alpha_text, rho, sigma, extent, re_step,
                       im_step, max_iter, trunc_j, format);
    if (*solve_right)
      return run_solve(StripSide::Right, eqin, go, alpha_text, rho, sigma, extent,
                       re_step, im_step, max_iter, trunc_j, format);

    if (*abel) {
      RationalMap R = RationalMap::parse(abel_map);
      Cplx gamma = parse_cplx(gamma_text);
      auto coeffs = abel_normalize(R, gamma, abel_J, Real("1e-20"));
      if (coeffs.m != 1)
        throw ValidationError("abel solve iterates the m=1 operator; this map has m = " +
                              std::to_string(coeffs.m));
      AbelNormalForm nf = AbelNormalForm::make(coeffs, parse_cplx(abel_alpha),
                                               Real(abel_delta));
      StripDomain d = StripDomain::make(StripSide::Left, Real(abel_rho), Real(abel_sigma),
                                        Real(abel_extent), Real(abel_re_step),
                                        Real(abel_im_step));
      SolveOptions opt;
      opt.tol = tol;
      opt.max_iter = abel_max_iter;
      opt.trunc_j = abel_J;
      opt.tail_depth = Real(tail_depth);
      StripFunction W = abel_solve(nf, d, opt);
      GridSample g;
      g.domain_tag = "z-plane";
      for (int c = 0; c < W.domain.cols(); ++c)
        for (int r = 0; r < W.domain.rows(); ++r)
          g.push(W.domain.point(c, r), W.at(c, r), W.equation_residual);
      fill_metadata(g, "abel", go,
                    {{"map", abel_map},
                     {"beta", to_string(nf.beta.re) + "," + to_string(nf.beta.im)},
                     {"delta", std::to_string(abel_delta)},
                     {"rho", std::to_string(abel_rho)},
                     {"rhoUsed", to_string(W.rho_used)}});
      write_output(format == "json" ? g.to_json() : g.to_csv(), go.out);
      std::cerr << "abel: m=1, beta = " << to_string(nf.beta.re) << ", residual "
                << to_string(W.equation_residual) << "\n";
      return 0;
    }

    if (*tele) {
      EquationSpec eq = eqin.load();
      Cplx w = forward_telescope(eq, parse_cplx(alpha_text), parse_cplx(tele_z), tele_K,
                                 tele_J);
      nlohmann::json j;
      j["formatVersion"] = 1;
      j["z"] = {to_string(parse_cplx(tele_z).re), to_string(parse_cplx(tele_z).im)};
      j["K"] = tele_K;
      j["w"] = {to_string(w.re), to_string(w.im)};
      write_output(j.dump(2), go.out);
      std::cerr << "telescope: w = " << to_string(w) << "\n";
      return 0;
    }

    if (*mahler) {
      Cplx cval;
      MahlerParams mp;
      if (!mah_c.empty()) {
        cval = parse_cplx(mah_c);
        mp.lambda = Cplx(0);
        mp.c = cval;
        mp.case_tag = classify_c(cval);
      } else {
        mp = to_mahler(parse_cplx(mah_lambda));
        cval = mp.c;
      }
      nlohmann::json j;
      j["formatVersion"] = 1;
      j["lambda"] = {to_string(mp.lambda.re), to_string(mp.lambda.im)};
      j["c"] = {to_string(cval.re), to_string(cval.im)};
      j["case"] = to_string(mp.case_tag);
      if (probes.empty()) {
        write_output(j.dump(2), go.out);
      } else {
        std::vector<Real> angles;
        std::ostringstream csv;
        csv << "# " << j.dump() << "\n";
        csv << "angle,r,abs_y,dabsy_dr\n";
        int total_events = 0;
        for (const auto& p : probes) {
          double angle = 0, rmax = 0.999;
          int steps = 400;
          std::istringstream is(p);
          std::string kv;
          while (std::getline(is, kv, ',')) {
            auto eqp = kv.find('=');
            if (eqp == std::string::npos)
              throw ValidationError("probe spec must be angle=A,rmax=R,steps=N");
            std::string key = kv.substr(0, eqp);
            double val = std::stod(kv.substr(eqp + 1));
            if (key == "angle") angle = val;
            else if (key == "rmax") rmax = val;
            else if (key == "steps") steps = static_cast<int>(val);
            else throw ValidationError("unknown probe key '" + key + "'");
          }
          std::vector<Real> radii;
          for (int i = 0; i <= steps; ++i)
            radii.push_back(Real("0.3") + (Real(rmax) - Real("0.3")) * Real(i) / Real(steps));
          BoundaryProbeResult res = boundary_probe(cval, {Real(angle)}, radii, mah_order);
          total_events += res.total_ambiguity_events;
          for (const auto& s : res.rays[0].samples)
            csv << to_string(Real(angle)) << "," << to_string(s.r) << ","
                << to_string(s.abs_y) << "," << to_string(s.d_abs_y_dr) << "\n";
        }
        csv << "# ambiguity_events," << total_events << "\n";
        write_output(csv.str(), go.out);
        std::cerr << "mahler: case " << to_string(mp.case_tag) << ", "
                  << total_events << " ambiguity event(s)\n";
        return 0;
      }
      std::cerr << "mahler: c = " << to_string(cval.re) << ", case "
                << to_string(mp.case_tag) << "\n";
      return 0;
    }

    if (*strips_cmd) {
      StripList sl = strips(nmax);
      write_output(sl.to_json(), go.out);
      std::cerr << "strips: " << sl.strips.size() << " interval(s)\n";
      return 0;
    }

    if (*grid) {
      Cplx lam = parse_cplx(grid_lambda);
      ModelSolution ms = solve_model(lam, Cplx(-1), 280, tol / 100);
      SheetLabel sheet{grid_sheet};
      auto signs = sheet.sign_path();
      GridSample g;
      g.domain_tag = "w-plane";
      for (Real re = Real(re_min); re <= Real(re_max) + Real("1e-15"); re += Real(grid_step)) {
        for (Real im = Real(im_min); im <= Real(im_max) + Real("1e-15");
             im += Real(grid_step)) {
          Cplx w(re, im);
          try {
            Cplx v = evaluate_sheet(lam, ms.series, w, signs);
            // birth-relation residual: parent(lambda w) + lambda^2/4 = (v + lambda/2)^2
            std::vector<int> parent_signs = signs;
            if (!parent_signs.empty()) parent_signs.pop_back();
            Cplx pv = evaluate_sheet(lam, ms.series, lam * w, parent_signs);
            Cplx lhs = pv + lam * lam / Cplx(4);
            Cplx rhs = (v + lam / Cplx(2)) * (v + lam / Cplx(2));
            g.push(w, v, abs(lhs - rhs));
          } catch (const Error&) {
            // branch point or pole on the sample: skip the node
          }
        }
      }
      fill_metadata(g, "grid", go,
                    {{"lambda", grid_lambda}, {"sheet", grid_sheet},
                     {"step", std::to_string(grid_step)}});
      write_output(format == "json" ? g.to_json() : g.to_csv(), go.out);
      std::cerr << "grid: " << g.points.size() << " samples on sheet h" << grid_sheet
                << "\n";
      return 0;
    }

    std::cerr << app.help() << "\n";
    return kExitUsage;
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const EvalError& e) {
    std::cerr << "evaluation failure: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  }
}
