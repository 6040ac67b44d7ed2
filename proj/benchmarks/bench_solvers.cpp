#include <benchmark/benchmark.h>

#include "cde/continuation.hpp"
#include "cde/picard.hpp"
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

void BM_picard_solve_left(benchmark::State& state) {
  setup();
  EquationSpec eq = EquationSpec::model(Cplx(2));
  StripDomain d = StripDomain::make(StripSide::Left, Real(10), Real(1),
                                    Real(static_cast<int>(state.range(0))), Real("0.5"),
                                    Real("0.5"));
  SolveOptions opt;
  opt.tol = Real("1e-12");
  for (auto _ : state) {
    StripFunction w = picard_solve(eq, Cplx(1), d, opt);
    benchmark::DoNotOptimize(w.values.data());
  }
}
BENCHMARK(BM_picard_solve_left)->Arg(6)->Arg(12);

void BM_abel_sweep(benchmark::State& state) {
  setup();
  auto coeffs = abel_normalize(RationalMap::parse("y + y^2"), Cplx(0), 24, Real("1e-25"));
  AbelNormalForm nf = AbelNormalForm::make(coeffs, Cplx(0), Real("0.5"));
  StripDomain d = StripDomain::make(StripSide::Left, Real(50), Real(1), Real(10),
                                    Real("0.5"), Real("0.5"));
  SolveOptions opt;
  StripOperator T = make_abel_operator(nf, d, opt);
  std::vector<Cplx> w(static_cast<std::size_t>(d.size()), Cplx(0));
  for (auto _ : state) {
    w = T(w);
    benchmark::DoNotOptimize(w.data());
  }
}
BENCHMARK(BM_abel_sweep);

void BM_monodromy_loop(benchmark::State& state) {
  setup();
  static ModelSolution ms = solve_model(Cplx(0.5), Cplx(-1), 260, Real("1e-12"));
  for (auto _ : state) {
    MonodromyResult res =
        sheet_monodromy(ms, 1, Real("0.3"), SheetLabel{"0"}, 1, Real("1e-6"));
    benchmark::DoNotOptimize(&res);
  }
}
BENCHMARK(BM_monodromy_loop);

void BM_evaluate_sheet(benchmark::State& state) {
  setup();
  static ModelSolution ms = solve_model(Cplx(0.5), Cplx(-1), 260, Real("1e-12"));
  Cplx w = Cplx(ms.r_hat * 3, ms.r_hat);
  auto signs = SheetLabel{"11"}.sign_path();
  for (auto _ : state) {
    Cplx v = evaluate_sheet(ms.lambda, ms.series, w, signs);
    benchmark::DoNotOptimize(&v);
  }
}
BENCHMARK(BM_evaluate_sheet);

}  // namespace

BENCHMARK_MAIN();
