// Serial reference vs OpenMP for the two parallel kernels.
#include "accel/certify.hpp"
#include "accel/oracles.hpp"
#include "accel/restart.hpp"

#include <benchmark/benchmark.h>

#include <random>

using namespace accel;

namespace {

std::vector<Triplet> sample(int n, int d) {
  std::mt19937_64 rng(42);
  Oracle q = make_quadratic(random_eigs(d, 0.01, 1.0, rng), random_vector(d, rng), 7);
  std::vector<Triplet> s;
  for (int i = 0; i < n; ++i) {
    Vec x = random_vector(d, rng);
    s.push_back({x, q.gradient(x), q.value(x)});
  }
  return s;
}

void interpolation(benchmark::State& st, Exec exec) {
  auto s = sample(static_cast<int>(st.range(0)), 20);
  for (auto _ : st) benchmark::DoNotOptimize(min_interpolation_slack(s, 0.01, 1.0, exec));
  st.counters["pairs"] = double(s.size()) * (s.size() - 1);
}

void grid(benchmark::State& st, Exec exec) {
  std::mt19937_64 rng(43);
  const int d = 50;
  Oracle q = make_quadratic(random_eigs(d, 1e-3, 1.0, rng), random_vector(d, rng), 9);
  Vec x0 = random_vector(d, rng);
  const int N = static_cast<int>(st.range(0));
  for (auto _ : st) benchmark::DoNotOptimize(grid_cells(q, 1.0, x0, N, exec));
}

}  // namespace

BENCHMARK_CAPTURE(interpolation, serial, Exec::serial)->Arg(200)->Arg(800)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(interpolation, openmp, Exec::openmp)->Arg(200)->Arg(800)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(grid, serial, Exec::serial)->Arg(256)->Arg(1024)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(grid, openmp, Exec::openmp)->Arg(256)->Arg(1024)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
