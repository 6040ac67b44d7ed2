#include <benchmark/benchmark.h>

#include "cde/polynomial.hpp"
#include "cde/surface.hpp"

using namespace cde;

namespace {

void setup() {
  static bool done = [] {
    set_precision_bits(128);
    return true;
  }();
  (void)done;
}

void BM_model_series(benchmark::State& state) {
  setup();
  int N = static_cast<int>(state.range(0));
  for (auto _ : state) {
    ModelSolution ms = model_series(Cplx(0.5), Cplx(-1), N);
    benchmark::DoNotOptimize(ms.series.coeffs.data());
  }
}
BENCHMARK(BM_model_series)->Arg(100)->Arg(200)->Arg(400);

void BM_series_mul(benchmark::State& state) {
  setup();
  int N = static_cast<int>(state.range(0));
  ModelSolution ms = model_series(Cplx(0.5), Cplx(-1), N);
  for (auto _ : state) {
    PowerSeries sq = series_mul(ms.series, ms.series);
    benchmark::DoNotOptimize(sq.coeffs.data());
  }
}
BENCHMARK(BM_series_mul)->Arg(100)->Arg(200);

void BM_series_eval(benchmark::State& state) {
  setup();
  ModelSolution ms = model_series(Cplx(0.5), Cplx(-1), 280);
  Cplx w(0.03, 0.01);
  for (auto _ : state) {
    Cplx v = series_eval(ms.series, w);
    benchmark::DoNotOptimize(&v);
  }
}
BENCHMARK(BM_series_eval);

void BM_poly_roots(benchmark::State& state) {
  setup();
  int deg = static_cast<int>(state.range(0));
  Polynomial p;
  for (int i = 0; i <= deg; ++i)
    p.coeffs.push_back(Cplx(Real(((i * 37) % 11) - 5), Real(((i * 17) % 7) - 3)));
  if (p.coeffs.back().is_zero()) p.coeffs.back() = Cplx(1);
  for (auto _ : state) {
    auto roots = poly_roots(p, Real("1e-24"));
    benchmark::DoNotOptimize(roots.data());
  }
}
BENCHMARK(BM_poly_roots)->Arg(4)->Arg(8)->Arg(16);

}  // namespace
