#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "cde/series.hpp"

namespace cde {

enum class MahlerCase { Case1, Case2, Other };

std::string to_string(MahlerCase c);

/// Parameters of the companion equation Y(u^2) = Y(u)^2 + c reached from
/// y(z+1) = lambda y + y^2 via y = Y(u) - lambda/2, u = exp(-2^z).
struct MahlerParams {
  Cplx lambda;
  Cplx c;           // lambda/2 - lambda^2/4
  MahlerCase case_tag = MahlerCase::Other;
};

/// Case split on c alone: real c in (0, 1/4] -> Case1, real c > 1/4 ->
/// Case2, anything else -> Other. The boundary c = 1/4 is inclusive.
MahlerCase classify_c(const Cplx& c);

/// c from lambda, with the case split: real c in (0, 1/4] -> Case1 (analytic
/// on the disc, continuous natural boundary), real c > 1/4 -> Case2
/// (quadratic branches). The transform identity is spot-checked numerically.
MahlerParams to_mahler(const Cplx& lambda);

/// Laurent solution Y(u) = 1/u + sum_{n>=1} y_n u^n of Y(u^2) = Y(u)^2 + c,
/// solved degree by degree (each new coefficient enters linearly through
/// 2 y_{-1} y_{m+1}). Returns minDegree -1, coefficients through degree N.
PowerSeries mahler_laurent(const Cplx& c, int N);

struct StripInterval {
  int n;
  Real lower;  // log2((4n-1) pi / 2)
  Real upper;  // log2((4n+1) pi / 2)
};

/// Horizontal strips of the z-plane where the transported solution lives,
/// n = 1..n_max; negative-Im strips follow by conjugation symmetry, and the
/// real axis sits in the principal strip whose exact bounds the formula does
/// not cover (its n = 0 lower bound would be the log of a negative number).
struct StripList {
  std::vector<StripInterval> strips;
  std::string note;
  std::string to_json() const;
};

StripList strips(int n_max);

struct ProbeSample {
  Real r;
  Real abs_y;
  Real d_abs_y_dr;
};

struct RayProbe {
  Real angle;
  std::vector<ProbeSample> samples;
  int ambiguity_events = 0;
  Real max_abs_y{};
};

struct BoundaryProbeResult {
  std::vector<RayProbe> rays;
  int total_ambiguity_events = 0;
  Real max_abs_y{};
};

/// Walk rays r e^{i angle} outward, computing Y by the doubling relation
/// inverted from a trusted series disk (|u| <= 0.7): deep value by series,
/// then Y(u) = +-sqrt(Y(u^2) - c) unwound with per-level continuity along the
/// ray. An ambiguity event is recorded when the two preimages are nearly
/// equidistant from the continuity hint (the case-2 branch signature).
BoundaryProbeResult boundary_probe(const Cplx& c, const std::vector<Real>& angles,
                                   const std::vector<Real>& radii, int series_order = 220);

}  // namespace cde
