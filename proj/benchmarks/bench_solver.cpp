#include <benchmark/benchmark.h>

#include <random>

#include "momenttoc/casesolver.hpp"
#include "momenttoc/oracle.hpp"

using namespace mtoc;

namespace {

void BM_RealRoots(benchmark::State& state) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> c(-3.0, 3.0);
  std::vector<double> coeffs(static_cast<size_t>(state.range(0)) + 1);
  for (double& v : coeffs) v = c(rng);
  const Polynomial p{std::vector<double>(coeffs)};
  for (auto _ : state) {
    auto roots = real_roots(p);
    benchmark::DoNotOptimize(roots);
  }
}
BENCHMARK(BM_RealRoots)->Arg(6)->Arg(12)->Arg(24);

void BM_HankelDet(benchmark::State& state) {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> c(-3.0, 3.0);
  MomentSequence seq;
  seq.c.resize(2 * static_cast<size_t>(state.range(0)));
  for (double& v : seq.c) v = c(rng);
  for (auto _ : state) {
    benchmark::DoNotOptimize(hankel_det(seq, static_cast<int>(state.range(0)), 1));
  }
}
BENCHMARK(BM_HankelDet)->Arg(2)->Arg(4)->Arg(8);

void BM_SylvesterResultant(benchmark::State& state) {
  const InitialState s{{1.0, 2.0, -3.0, 0.5}};
  const auto cases = enumerate_cases(4);
  const auto eqs = endpoint_equations(s, cases[3]);
  for (auto _ : state) {
    benchmark::DoNotOptimize(sylvester_resultant(eqs[0], eqs[1]));
  }
}
BENCHMARK(BM_SylvesterResultant);

void BM_SimulateExact(benchmark::State& state) {
  SynthesisSpec spec;
  spec.x1_0 = 1.0;
  spec.a = -1.66366;
  spec.b = 1.0;
  spec.interior_nodes = {0.608501};
  spec.interior_weights = {7.01356};
  const StairStepControl u = synthesize_control(spec);
  const std::vector<double> x0{1.0, -2.0, -6.0, 2.0};
  for (auto _ : state) {
    benchmark::DoNotOptimize(simulate_exact(x0, u));
  }
}
BENCHMARK(BM_SimulateExact);

void BM_Solve(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const ConstructedInstance inst = random_controllable_instance(42, n);
  for (auto _ : state) {
    benchmark::DoNotOptimize(solve(inst.x0));
  }
}
BENCHMARK(BM_Solve)->Arg(4)->Arg(5)->Arg(6)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
