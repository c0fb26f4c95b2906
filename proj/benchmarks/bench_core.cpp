#include <benchmark/benchmark.h>

#include <cmath>

#include "frontlab/certify.hpp"
#include "frontlab/evolution.hpp"
#include "frontlab/front.hpp"
#include "frontlab/spectral.hpp"

using namespace frontlab;

namespace {

void BM_ApplyMultiplier(benchmark::State& state) {
  const spectral::Grid g(static_cast<std::size_t>(state.range(0)), 80.0);
  const auto spec = symbol::kdvb(-0.2);
  const auto u = spectral::Field::sample(g, [](double x) { return std::exp(-x * x); });
  for (auto _ : state) benchmark::DoNotOptimize(spectral::apply_multiplier(u, spec.expr));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_ApplyMultiplier)->RangeMultiplier(4)->Range(256, 16384)->Complexity();

void BM_Etdrk4Step(benchmark::State& state) {
  const spectral::Grid g(static_cast<std::size_t>(state.range(0)), 80.0);
  const auto f = front::solve_front(symbol::kdvb(-0.2), g);
  evolution::StepperConfig c;
  const evolution::Stepper stepper(f, f.op, c);
  evolution::PerturbationState s;
  s.v = evolution::make_perturbation(g, evolution::PerturbationKind::kGaussian, 0.5, 1.0);
  for (auto _ : state) benchmark::DoNotOptimize(stepper.step(s));
}
BENCHMARK(BM_Etdrk4Step)->Arg(512)->Arg(1024)->Arg(4096);

void BM_InertiaCount(benchmark::State& state) {
  const auto d = certify::discretize(
      [](double x) {
        const double s = 1.0 / std::cosh(0.5 * x);
        return -0.75 * s * s;
      },
      0.0, static_cast<std::size_t>(state.range(0)), 40.0);
  for (auto _ : state) benchmark::DoNotOptimize(certify::count_negative_eigenvalues(d.matrix));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_InertiaCount)->RangeMultiplier(4)->Range(1000, 64000)->Complexity(benchmark::oN);

void BM_NewtonFront(benchmark::State& state) {
  const spectral::Grid g(1024, 80.0);
  const auto spec = symbol::fractional({{1.0, 0.5}});
  for (auto _ : state) benchmark::DoNotOptimize(front::solve_front(spec, g));
}
BENCHMARK(BM_NewtonFront)->Unit(benchmark::kMillisecond);

void BM_ColeHopf(benchmark::State& state) {
  const spectral::Grid g(1024, 80.0);
  const auto u0 = spectral::Field::sample(g, [](double x) { return -std::tanh(0.5 * x) + 0.3 * std::exp(-x * x); });
  for (auto _ : state) benchmark::DoNotOptimize(evolution::cole_hopf_exact(u0, 1.0));
}
BENCHMARK(BM_ColeHopf)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
