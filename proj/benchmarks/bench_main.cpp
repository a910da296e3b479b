#include <benchmark/benchmark.h>

#include <cmath>

#include "shapegeo/curve_space.hpp"
#include "shapegeo/diffeo.hpp"
#include "shapegeo/hilbert.hpp"

using namespace shapegeo;

static void BM_Transform(benchmark::State& state) {
  const PeriodicGrid g(static_cast<int>(state.range(0)));
  const auto f = PeriodicFunction::sample(g, [](double x) { return std::exp(std::sin(x)); });
  for (auto _ : state) benchmark::DoNotOptimize(transform(f));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_Transform)->RangeMultiplier(4)->Range(64, 16384)->Complexity(benchmark::oNLogN);

static void BM_L2Metric(benchmark::State& state) {
  const PeriodicGrid g(static_cast<int>(state.range(0)));
  const Curve c = Curve::circle(g);
  const auto h = derivative(c.pos());
  for (auto _ : state) benchmark::DoNotOptimize(l2_metric(c, h, h));
}
BENCHMARK(BM_L2Metric)->RangeMultiplier(4)->Range(64, 4096);

static void BM_EnergyGradient(benchmark::State& state) {
  const PeriodicGrid g(64);
  const auto o = l2_curve_oracle(g, 2);
  Vec shift = Vec::Zero(2);
  shift[0] = 0.5;
  const Vec a = Curve::circle(g).pos().flat();
  const Vec b = Curve::circle(g, 1.0, shift).pos().flat();
  const Path p = Path::linear(a, b, static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(energy_gradient(p, o));
}
BENCHMARK(BM_EnergyGradient)->Arg(8)->Arg(32);

static void BM_SphereBvp(benchmark::State& state) {
  const auto o = sphere_oracle(10);
  Vec x = Vec::Zero(10), y = Vec::Zero(10);
  x[0] = 1;
  y[3] = 1;
  BvpOptions opts;
  opts.stall_window = 200;
  opts.throw_on_nonconvergence = false;
  for (auto _ : state) benchmark::DoNotOptimize(bvp_minimize(x, y, o, Path::linear(x, y, 32), opts));
}
BENCHMARK(BM_SphereBvp)->Unit(benchmark::kMillisecond);

static void BM_FlowAutonomous(benchmark::State& state) {
  const PeriodicGrid g(static_cast<int>(state.range(0)));
  const auto u = CircleField::sample(g, [](double x) { return 1 + 0.5 * std::sin(x); });
  for (auto _ : state) benchmark::DoNotOptimize(flow_autonomous(u, 1.0));
}
BENCHMARK(BM_FlowAutonomous)->Arg(64)->Arg(256)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
