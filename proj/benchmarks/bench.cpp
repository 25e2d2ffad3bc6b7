#include <benchmark/benchmark.h>

#include "glitlab/gen.hpp"
#include "glitlab/glit.hpp"

using namespace glitlab;
using repcat::Module;

namespace {

const char* kAlg =
    "field 101\n"
    "vertices 1 2 3\n"
    "arrow a 1 1\n"
    "arrow b 1 2\n"
    "arrow c 2 3\n"
    "nilpotency 2\n"
    "relations\n"
    "a*a\n"
    "a*b\n"
    "b*c\n";

algebra::AlgebraPtr alg() {
  static algebra::AlgebraPtr a = algebra::parse_algebra(kAlg, "bench");
  return a;
}

Module sample(const algebra::AlgebraPtr& a) {
  // S1 + I2
  Module s1{a, {1, 0, 0}, {exactlin::Mat(1, 1), exactlin::Mat(0, 1), exactlin::Mat(0, 0)}};
  exactlin::Mat fb(1, 1);
  fb.at(0, 0) = 1;
  Module i2{a, {1, 1, 0}, {exactlin::Mat(1, 1), fb, exactlin::Mat(0, 1)}};
  return repcat::direct_sum(s1, i2);
}

void BM_rank(benchmark::State& state) {
  exactlin::FieldSpec F(101);
  int n = (int)state.range(0);
  std::mt19937_64 rng(7);
  exactlin::Mat m(n, n);
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c) m.at(r, c) = (std::uint32_t)(rng() % 101);
  for (auto _ : state) benchmark::DoNotOptimize(exactlin::rank(F, m));
}
BENCHMARK(BM_rank)->Arg(32)->Arg(64)->Arg(128);

void BM_syzygy(benchmark::State& state) {
  Module x = sample(alg());
  for (auto _ : state) benchmark::DoNotOptimize(repcat::syzygy(x));
}
BENCHMARK(BM_syzygy);

void BM_decompose(benchmark::State& state) {
  Module x = sample(alg());
  for (auto _ : state) {
    krull::ClassRegistry reg;
    reg.seed = 5;
    benchmark::DoNotOptimize(krull::decompose(x, reg));
  }
}
BENCHMARK(BM_decompose);

void BM_phi(benchmark::State& state) {
  Module x = sample(alg());
  for (auto _ : state) {
    krull::ClassRegistry reg;
    reg.seed = 5;
    itfun::Engine e(reg);
    benchmark::DoNotOptimize(e.phi(x));
  }
}
BENCHMARK(BM_phi);

void BM_triangular_phi(benchmark::State& state) {
  auto a = alg();
  auto c = morita::build_triangular(a, a, morita::regular_bimodule(a));
  Module lx = morita::to_lambda(c, morita::tuple_from_T(c, sample(a)));
  for (auto _ : state) {
    krull::ClassRegistry reg;
    reg.seed = 5;
    itfun::Engine e(reg);
    benchmark::DoNotOptimize(e.phi(lx));
  }
}
BENCHMARK(BM_triangular_phi);

void BM_random_context(benchmark::State& state) {
  exactlin::FieldSpec F(101);
  std::uint64_t seed = 1;
  for (auto _ : state) {
    gen::Rng rng(seed++);
    benchmark::DoNotOptimize(gen::random_context(rng, F));
  }
}
BENCHMARK(BM_random_context);

}  // namespace

BENCHMARK_MAIN();
