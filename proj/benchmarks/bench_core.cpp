#include <benchmark/benchmark.h>

#include "opinion/dynamics.hpp"
#include "opinion/landscape.hpp"
#include "opinion/recurrence.hpp"

using namespace opinion;

namespace {

const ModelSpec& spec8() {
  static ModelSpec s(8, 3, 3, 1, Rational(2));
  return s;
}

SpinConfiguration random_config(const ModelSpec& spec, std::uint64_t stream) {
  CounterRng rng = CounterRng::keyed(99, stream);
  SpinConfiguration c(spec, -1);
  for (int i = 0; i < c.size(); ++i)
    if (rng.next_below(2)) c.flip(i);
  return c;
}

void bench_hamiltonian_direct(benchmark::State& state) {
  SpinConfiguration c = random_config(spec8(), 0);
  for (auto _ : state) benchmark::DoNotOptimize(c.hamiltonian_direct());
}
BENCHMARK(bench_hamiltonian_direct);

void bench_delta_h(benchmark::State& state) {
  SpinConfiguration c = random_config(spec8(), 1);
  int i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(c.delta_h(i));
    i = (i + 1) % c.size();
  }
}
BENCHMARK(bench_delta_h);

void bench_metropolis_step(benchmark::State& state) {
  ChainState chain = make_chain(homogeneous(spec8(), -1), 7);
  for (auto _ : state) metropolis_step(chain, 1.0);
}
BENCHMARK(bench_metropolis_step);

void bench_reduce_round(benchmark::State& state) {
  std::vector<SpinConfiguration> pool;
  for (std::uint64_t s = 0; s < 64; ++s)
    pool.push_back(random_config(spec8(), s));
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(reduce(spec8(), pool[i]));
    i = (i + 1) % pool.size();
  }
}
BENCHMARK(bench_reduce_round);

void bench_reduce_to_core(benchmark::State& state) {
  std::vector<SpinConfiguration> pool;
  for (std::uint64_t s = 0; s < 16; ++s)
    pool.push_back(random_config(spec8(), s));
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(reduce_to_core(spec8(), pool[i]));
    i = (i + 1) % pool.size();
  }
}
BENCHMARK(bench_reduce_to_core);

void bench_energy_key_of_mask(benchmark::State& state) {
  ModelSpec toy(4, 1, 1, 1, Rational(6, 5), false);
  std::uint64_t m = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(energy_key_of_mask(toy, m));
    m = (m + 2654435761u) & 0xffff;
  }
}
BENCHMARK(bench_energy_key_of_mask);

void bench_full_landscape_toy(benchmark::State& state) {
  ModelSpec toy(4, 1, 1, 1, Rational(6, 5), false);
  for (auto _ : state)
    benchmark::DoNotOptimize(landscape_report(toy));
}
BENCHMARK(bench_full_landscape_toy)->Unit(benchmark::kMillisecond);

}  // namespace
