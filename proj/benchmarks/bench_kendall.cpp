#include <benchmark/benchmark.h>

#include "addmart/kendall.hpp"

namespace {

// Rebuild Gamma_n from scratch each iteration (cache bypassed via cap bump).
void BM_GammaRecurrence(benchmark::State& state) {
  const unsigned n = static_cast<unsigned>(state.range(0));
  for (auto _ : state) {
    addmart::ExactPolynomial acc;
    for (unsigned j = 0; j <= n - 1; ++j) {
      acc += addmart::gamma(j) * addmart::ExactPolynomial::variable(n - j) *
             addmart::Rational(addmart::binomial(n - 1, j));
    }
    benchmark::DoNotOptimize(acc);
  }
}
BENCHMARK(BM_GammaRecurrence)->Arg(8)->Arg(12)->Arg(16)->Arg(20);

void BM_PartitionOracle(benchmark::State& state) {
  const unsigned n = static_cast<unsigned>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(addmart::gamma_partition_oracle(n));
  }
}
BENCHMARK(BM_PartitionOracle)->Arg(6)->Arg(8)->Arg(10);

void BM_MomentsFromCumulants(benchmark::State& state) {
  addmart::CumulantSequence seq(static_cast<std::size_t>(state.range(0)));
  for (std::size_t i = 0; i < seq.size(); ++i) {
    seq[i] = addmart::Rational(static_cast<long long>(i) + 1, 3);
  }
  for (auto _ : state) {
    benchmark::DoNotOptimize(addmart::moments_from_cumulants(seq));
  }
}
BENCHMARK(BM_MomentsFromCumulants)->Arg(8)->Arg(12);

}  // namespace
