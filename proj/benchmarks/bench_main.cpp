#include <benchmark/benchmark.h>

#include "etlab/algebra.hpp"
#include "etlab/catalog.hpp"

namespace {

using namespace etlab;

void BM_JetProduct(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const int order = static_cast<int>(state.range(1));
  Rng rng = make_rng(1, 0);
  Jet a(n, order), b(n, order);
  for (auto& x : a.coefficients()) x = uniform(rng, -1, 1);
  for (auto& x : b.coefficients()) x = uniform(rng, -1, 1);
  for (auto _ : state) benchmark::DoNotOptimize(a * b);
  state.SetLabel(std::to_string(a.coefficients().size()) + " coefficients");
}
BENCHMARK(BM_JetProduct)->Args({4, 4})->Args({4, 6})->Args({5, 6})->Args({6, 6});

void BM_CurvatureBundle(benchmark::State& state) {
  const auto cs = make_catalog_structure("example1", {{"n", double(state.range(0))}});
  std::vector<double> p(cs.structure.chart.dim(), 0.2);
  p[0] = 2.0;
  for (auto _ : state) {
    CurvatureBundle b(cs.structure.chart, p, static_cast<int>(state.range(1)));
    benchmark::DoNotOptimize(b.scalar_curvature().value());
  }
}
BENCHMARK(BM_CurvatureBundle)->Args({4, 4})->Args({4, 6})->Args({5, 6})->Unit(benchmark::kMillisecond);

void BM_Div4Weyl(benchmark::State& state) {
  const auto cs = make_catalog_structure("curzon_product", {{"n", double(state.range(0))}});
  std::vector<double> p(cs.structure.chart.dim(), 0.3);
  p[0] = 1.0;
  const CurvatureBundle b(cs.structure.chart, p, 6);
  for (auto _ : state) benchmark::DoNotOptimize(div_weyl(b, 4));
}
BENCHMARK(BM_Div4Weyl)->Arg(4)->Arg(5)->Unit(benchmark::kMillisecond);

void BM_LemmaThirdOrder(benchmark::State& state) {
  const auto cs = make_catalog_structure("curzon_product", {{"n", double(state.range(0))}});
  std::vector<double> p(cs.structure.chart.dim(), 0.3);
  p[0] = 1.0;
  const StructurePoint sp(cs.structure, p, 6);
  for (auto _ : state) benchmark::DoNotOptimize(residual_lemma_third_order(sp).residual);
}
BENCHMARK(BM_LemmaThirdOrder)->Arg(4)->Arg(5)->Unit(benchmark::kMillisecond);

void BM_AlgebraSuite(benchmark::State& state) {
  AlgebraOptions opts;
  opts.threads = 1;
  for (auto _ : state)
    benchmark::DoNotOptimize(random_algebra_identity_suite(42, 100, opts).max_hessian_residual);
}
BENCHMARK(BM_AlgebraSuite)->Unit(benchmark::kMillisecond);

}  // namespace
