#include <benchmark/benchmark.h>

#include "rlab/arith.hpp"
#include "rlab/finite_re.hpp"
#include "rlab/random.hpp"
#include "rlab/ramanujan_sum.hpp"
#include "rlab/shift_re.hpp"
#include "rlab/transforms.hpp"

using namespace rlab;

static void BM_CsumClosed(benchmark::State& state) {
  const auto qmax = static_cast<std::uint64_t>(state.range(0));
  for (auto _ : state) {
    std::int64_t s = 0;
    for (std::uint64_t q = 1; q <= qmax; ++q) s += csum(q, 360);
    benchmark::DoNotOptimize(s);
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_CsumClosed)->Arg(512)->Arg(4096);

static void BM_CsumTrig(benchmark::State& state) {
  const auto qmax = static_cast<std::uint64_t>(state.range(0));
  for (auto _ : state) {
    double s = 0;
    for (std::uint64_t q = 1; q <= qmax; ++q) s += csum_trig_form(q, 360);
    benchmark::DoNotOptimize(s);
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_CsumTrig)->Arg(512);

static void BM_Sieve(benchmark::State& state) {
  for (auto _ : state) {
    Sieve s(static_cast<std::uint64_t>(state.range(0)));
    benchmark::DoNotOptimize(s.primes().size());
  }
}
BENCHMARK(BM_Sieve)->Arg(1 << 16)->Arg(1 << 20);

static void BM_WintnerTable(benchmark::State& state) {
  const auto cut = static_cast<std::uint64_t>(state.range(0));
  Table<double> fp(cut);
  for (std::uint64_t d = 1; d <= cut; ++d) fp[d] = 1.0 / (static_cast<double>(d) * static_cast<double>(d));
  for (auto _ : state) benchmark::DoNotOptimize(wintner_table(fp, cut));
}
BENCHMARK(BM_WintnerTable)->Arg(1 << 14)->Arg(1 << 18);

static void BM_TdsToFre(benchmark::State& state) {
  Rng rng(1);
  const TruncatedDivisorSum t(random_rational_table(rng, static_cast<std::uint64_t>(state.range(0))));
  for (auto _ : state) benchmark::DoNotOptimize(tds_to_fre(t));
}
BENCHMARK(BM_TdsToFre)->Arg(64)->Arg(512);

static void BM_Identity12(benchmark::State& state) {
  Rng rng(2);
  const std::uint64_t n = 64, amax = static_cast<std::uint64_t>(state.range(0));
  const auto f = TruncatedDivisorSum(random_sparse_table(rng, 16, 0.5)).tabulate(n);
  const auto g = TruncatedDivisorSum(random_sparse_table(rng, 16, 0.5)).tabulate(n + amax);
  const auto c = cut_correlation(f, g, n, amax);
  for (auto _ : state) {
    bool ok = true;
    for (std::uint64_t a = 1; a <= amax; ++a) ok = ok && identity12_check(c, a).equal;
    benchmark::DoNotOptimize(ok);
  }
}
BENCHMARK(BM_Identity12)->Arg(256);
BENCHMARK_MAIN();
