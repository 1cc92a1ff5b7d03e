// Serial reference against the OpenMP kernels.

#include <benchmark/benchmark.h>

#include <random>

#include "flatscan/algorithms/algorithms.hpp"
#include "flatscan/kernels/kernels.hpp"
#include "flatscan/symexpr/expr.hpp"

using namespace flatscan;
using kernels::Policy;

namespace {

// n random polynomial rows of width n on x0..x{n-1}.
std::vector<kernels::SymRow> random_rows(std::size_t n) {
  std::vector<std::string> names;
  for (std::size_t i = 0; i < n; ++i) names.push_back("x" + std::to_string(i));
  symexpr::Chart chart(names);
  std::mt19937 rng(7);
  std::uniform_int_distribution<int> coef(-4, 4);
  std::uniform_int_distribution<std::size_t> var(0, n - 1);
  std::vector<kernels::SymRow> rows(n);
  for (auto& r : rows) {
    for (std::size_t j = 0; j < n; ++j) {
      std::string e = std::to_string(coef(rng));
      for (int t = 0; t < 3; ++t) e += " + " + std::to_string(coef(rng)) + "*" + names[var(rng)] + "*" + names[var(rng)];
      r.push_back(symexpr::parse_ratfunc(e, chart));
    }
  }
  return rows;
}

std::vector<symexpr::SamplePoint> points(std::size_t count) {
  std::vector<symexpr::SamplePoint> p;
  for (std::size_t i = 0; i < count; ++i) p.push_back(symexpr::SamplePoint::generated(11, i));
  return p;
}

void BM_Evaluate(benchmark::State& state, Policy policy) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto rows = random_rows(n);
  const auto pts = points(5);
  for (auto _ : state) benchmark::DoNotOptimize(kernels::evaluate(rows, n, pts, policy));
}

void BM_Rank(benchmark::State& state, Policy policy) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto m = kernels::evaluate(random_rows(n), n, points(1), Policy::Serial)[0];
  for (auto _ : state) benchmark::DoNotOptimize(kernels::rank(m, policy));
}

void BM_IndependentRows(benchmark::State& state, Policy policy) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto m = kernels::evaluate(random_rows(n), n, points(5), Policy::Serial);
  for (auto _ : state) benchmark::DoNotOptimize(kernels::independent_rows(m, policy));
}

// End to end: the refined algorithm on a ten-state prolongation.
void BM_Algorithm2(benchmark::State& state, Policy policy) {
  symexpr::Chart chart({"x", "vx", "z", "vz", "theta", "omega"}, {"eps"});
  auto parse = [&](std::vector<std::string> c) { return diffgeo::VectorField::parse(chart, c); };
  system::ControlAffineSystem vtol("vtol", chart, {"u1", "u2"}, parse({"vx", "0", "vz", "-1", "omega", "0"}),
                                   parse({"0", "-sin(theta)", "0", "cos(theta)", "0", "0"}),
                                   parse({"0", "eps*cos(theta)", "0", "eps*sin(theta)", "0", "1"}),
                                   {symexpr::parse_ratfunc("eps", chart)});
  const auto sys = system::prolong(vtol, 2, 2).system;
  const diffgeo::RankOracle oracle(symexpr::PointSource(1, sys.constraints()), policy);
  for (auto _ : state) benchmark::DoNotOptimize(algorithms::run_algorithm2(sys, oracle));
}

}  // namespace

BENCHMARK_CAPTURE(BM_Evaluate, serial, Policy::Serial)->Arg(8)->Arg(16);
BENCHMARK_CAPTURE(BM_Evaluate, parallel, Policy::Parallel)->Arg(8)->Arg(16);
BENCHMARK_CAPTURE(BM_Rank, serial, Policy::Serial)->Arg(8)->Arg(16);
BENCHMARK_CAPTURE(BM_Rank, parallel, Policy::Parallel)->Arg(8)->Arg(16);
BENCHMARK_CAPTURE(BM_IndependentRows, serial, Policy::Serial)->Arg(8)->Arg(16);
BENCHMARK_CAPTURE(BM_IndependentRows, parallel, Policy::Parallel)->Arg(8)->Arg(16);
BENCHMARK_CAPTURE(BM_Algorithm2, serial, Policy::Serial)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_Algorithm2, parallel, Policy::Parallel)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
