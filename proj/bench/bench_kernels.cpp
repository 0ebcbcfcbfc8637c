// Microbenchmarks contrasting the OpenMP elimination kernel with the serial
// reference, plus throughput of the sharing primitives they feed.

#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "d2dsc/field.hpp"
#include "d2dsc/matrix.hpp"
#include "d2dsc/ramp.hpp"

namespace {

d2dsc::symbol_matrix random_matrix(const d2dsc::field& f, unsigned rows, unsigned cols,
                                   std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  d2dsc::symbol_matrix m(rows, cols);
  for (unsigned r = 0; r < rows; ++r) {
    for (unsigned c = 0; c < cols; ++c) {
      m.at(r, c) = static_cast<d2dsc::symbol>(rng() & (f.order() - 1));
    }
  }
  return m;
}

void bm_rank_parallel(benchmark::State& state) {
  const d2dsc::field f(d2dsc::field::default_spec(16));
  const unsigned n = static_cast<unsigned>(state.range(0));
  const auto m = random_matrix(f, n, n, 42);
  for (auto _ : state) {
    benchmark::DoNotOptimize(d2dsc::rank(f, m));
  }
}

void bm_rank_serial(benchmark::State& state) {
  const d2dsc::field f(d2dsc::field::default_spec(16));
  const unsigned n = static_cast<unsigned>(state.range(0));
  const auto m = random_matrix(f, n, n, 42);
  for (auto _ : state) {
    benchmark::DoNotOptimize(d2dsc::rank_serial(f, m));
  }
}

void bm_share_block(benchmark::State& state) {
  const d2dsc::field f(d2dsc::field::default_spec(16));
  const auto scheme = d2dsc::make_ramp_scheme(f, 60, 280);
  std::mt19937_64 rng(7);
  std::vector<d2dsc::symbol> secret(scheme.secret_len());
  std::vector<d2dsc::symbol> rnd(scheme.m);
  for (auto& s : secret) s = static_cast<d2dsc::symbol>(rng() & 0xFFFF);
  for (auto& s : rnd) s = static_cast<d2dsc::symbol>(rng() & 0xFFFF);
  for (auto _ : state) {
    benchmark::DoNotOptimize(d2dsc::share_block(f, scheme, secret, rnd));
  }
}

void bm_reconstruct(benchmark::State& state) {
  const d2dsc::field f(d2dsc::field::default_spec(16));
  const auto scheme = d2dsc::make_ramp_scheme(f, 60, 280);
  std::mt19937_64 rng(7);
  std::vector<d2dsc::symbol> secret(scheme.secret_len());
  std::vector<d2dsc::symbol> rnd(scheme.m);
  for (auto& s : secret) s = static_cast<d2dsc::symbol>(rng() & 0xFFFF);
  for (auto& s : rnd) s = static_cast<d2dsc::symbol>(rng() & 0xFFFF);
  const auto shares = d2dsc::share_block(f, scheme, secret, rnd);
  for (auto _ : state) {
    benchmark::DoNotOptimize(d2dsc::reconstruct(f, scheme, shares));
  }
}

}  // namespace

BENCHMARK(bm_rank_parallel)->Arg(128)->Arg(256)->Arg(512);
BENCHMARK(bm_rank_serial)->Arg(128)->Arg(256)->Arg(512);
BENCHMARK(bm_share_block);
BENCHMARK(bm_reconstruct);

BENCHMARK_MAIN();
