#include "cde/mahler.hpp"

#include <algorithm>

#include <nlohmann/json.hpp>

#include "cde/errors.hpp"
#include "cde/rng.hpp"

namespace cde {

std::string to_string(MahlerCase c) {
  switch (c) {
    case MahlerCase::Case1: return "case1";
    case MahlerCase::Case2: return "case2";
    case MahlerCase::Other: return "other";
  }
  return "?";
}

MahlerCase classify_c(const Cplx& c) {
  if (!c.im.is_zero() || !(c.re > 0)) return MahlerCase::Other;
  return c.re <= Real(0.25) ? MahlerCase::Case1 : MahlerCase::Case2;
}

MahlerParams to_mahler(const Cplx& lambda) {
  MahlerParams mp;
  mp.lambda = lambda;
  mp.c = lambda / Cplx(2) - lambda * lambda / Cplx(4);
  // the case analysis presumes the real-lambda family; complex lambda falls
  // outside it even when c happens to land on the real axis
  mp.case_tag = lambda.im.is_zero() ? classify_c(mp.c) : MahlerCase::Other;
  // spot-check the transform identity (y + lambda/2)^2 + c = y^2 + lambda y + lambda/2
  Rng rng(7);
  for (int i = 0; i < 20; ++i) {
    Cplx y = rng.disk(Real(2));
    Cplx lhs = (y + lambda / Cplx(2)) * (y + lambda / Cplx(2)) + mp.c;
    Cplx rhs = y * y + lambda * y + lambda / Cplx(2);
    if (abs(lhs - rhs) > 1000 * real_eps() * (1 + abs(lhs)))
      throw NumericalError("to_mahler: transform identity failed a spot check");
  }
  return mp;
}

PowerSeries mahler_laurent(const Cplx& c, int N) {
  if (N < 1) throw ValidationError("mahler_laurent: N must be >= 1");
  // y[-1] = 1 (simple-pole matching y_{-1}^2 = y_{-1}), y0 = 0, y1 = -c/2;
  // degree m of Y(u)^2 + c matched against Y(u^2):
  //   [m even] y_{m/2} = 2 y_{m+1} + sum_{a+b=m, a,b>=1} y_a y_b
  //   [m odd]        0 = 2 y_{m+1} + sum_{a+b=m} y_a y_b
  std::vector<Cplx> y(static_cast<std::size_t>(N + 1), Cplx(0));  // y[n], n >= 1
  auto yat = [&](int n) -> Cplx {
    if (n == -1) return Cplx(1);
    if (n <= 0) return Cplx(0);
    return y[static_cast<std::size_t>(n)];
  };
  if (N >= 1) y[1] = -c / Cplx(2);
  for (int m = 1; m + 1 <= N; ++m) {
    Cplx conv(0);
    for (int a = 1; a < m; ++a) conv += yat(a) * yat(m - a);
    Cplx lhs = m % 2 == 0 ? yat(m / 2) : Cplx(0);
    y[static_cast<std::size_t>(m + 1)] = (lhs - conv) / Cplx(2);
  }

  PowerSeries s;
  s.center = Cplx(0);
  s.min_degree = -1;
  s.order = N + 1;
  s.coeffs.assign(static_cast<std::size_t>(N + 2), Cplx(0));
  s.set_coeff(-1, Cplx(1));
  for (int n = 1; n <= N; ++n) s.set_coeff(n, y[static_cast<std::size_t>(n)]);
  return s;
}

StripList strips(int n_max) {
  if (n_max < 1) throw ValidationError("strips: n_max must be >= 1");
  StripList out;
  Real pi = pi_value();
  Real log2 = log(Real(2));
  for (int n = 1; n <= n_max; ++n) {
    StripInterval s;
    s.n = n;
    s.lower = log(Real(4 * n - 1) * pi / 2) / log2;
    s.upper = log(Real(4 * n + 1) * pi / 2) / log2;
    out.strips.push_back(std::move(s));
  }
  out.note =
      "strips for n <= -1 follow by conjugation symmetry; the real axis lies in the "
      "principal strip around Im z = 0 whose exact bounds the formula does not give";
  return out;
}

std::string StripList::to_json() const {
  nlohmann::json j;
  j["formatVersion"] = 1;
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& s : strips)
    arr.push_back({{"n", s.n}, {"lower", to_string(s.lower)}, {"upper", to_string(s.upper)}});
  j["strips"] = std::move(arr);
  j["note"] = note;
  return j.dump(2);
}

BoundaryProbeResult boundary_probe(const Cplx& c, const std::vector<Real>& angles,
                                   const std::vector<Real>& radii, int series_order) {
  if (angles.empty() || radii.empty())
    throw ValidationError("boundary_probe: need at least one angle and one radius");
  for (const auto& r : radii)
    if (!(r > 0) || !(r < 1))
      throw ValidationError("boundary_probe: radii must lie strictly inside (0,1)");
  if (classify_c(c) == MahlerCase::Other)
    throw ValidationError("boundary_probe: c must be real positive (case 1 or 2)");

  PowerSeries Y = mahler_laurent(c, series_order);
  const Real disk("0.7");
  const Real tie_frac("1e-3");

  BoundaryProbeResult out;
  for (const auto& angle : angles) {
    RayProbe ray;
    ray.angle = angle;
    std::vector<Cplx> prev_levels;
    Real prev_r(0), prev_abs(0);
    bool have_prev = false;
    for (const auto& r : radii) {
      Cplx u = polar(r, angle);
      // points u, u^2, u^4, ... down into the series disk
      std::vector<Cplx> pts{u};
      while (abs(pts.back()) > disk) pts.push_back(pts.back() * pts.back());
      int k = static_cast<int>(pts.size()) - 1;
      std::vector<Cplx> levels(static_cast<std::size_t>(k + 1));
      levels[static_cast<std::size_t>(k)] = series_eval(Y, pts[static_cast<std::size_t>(k)]);
      for (int j = k - 1; j >= 0; --j) {
        Cplx radicand = levels[static_cast<std::size_t>(j + 1)] - c;
        Cplx root = sqrt(radicand);
        Cplx c1 = root, c2 = -root;
        Cplx hint;
        if (have_prev && j < static_cast<int>(prev_levels.size())) {
          hint = prev_levels[static_cast<std::size_t>(j)];
        } else if (abs(pts[static_cast<std::size_t>(j)]) <= Real("0.72")) {
          hint = series_eval(Y, pts[static_cast<std::size_t>(j)]);
        } else {
          hint = c1;
        }
        Real d1 = abs(c1 - hint);
        Real d2 = abs(c2 - hint);
        Real gap = abs(c1 - c2);
        if (abs(d1 - d2) <= tie_frac * std::max(gap, Real("1e-30"), std::less<Real>()))
          ++ray.ambiguity_events;
        levels[static_cast<std::size_t>(j)] = d1 <= d2 ? c1 : c2;
      }
      ProbeSample sample;
      sample.r = r;
      sample.abs_y = abs(levels[0]);
      sample.d_abs_y_dr = have_prev && r != prev_r ? (sample.abs_y - prev_abs) / (r - prev_r)
                                                   : Real(0);
      ray.max_abs_y = std::max(ray.max_abs_y, sample.abs_y, std::less<Real>());
      ray.samples.push_back(sample);
      prev_levels = std::move(levels);
      prev_abs = sample.abs_y;
      prev_r = r;
      have_prev = true;
    }
    out.total_ambiguity_events += ray.ambiguity_events;
    out.max_abs_y = std::max(out.max_abs_y, ray.max_abs_y, std::less<Real>());
    out.rays.push_back(std::move(ray));
  }
  return out;
}

}  // namespace cde
