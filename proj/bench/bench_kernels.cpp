// Parallel kernels against their serial twins.

#include <benchmark/benchmark.h>

#include <random>

#include "catmap/charsum.hpp"
#include "catmap/conjecture_mc.hpp"
#include "catmap/stats.hpp"

using namespace catmap;

namespace {

const CatMap A0 = validate_cat_map(3, 2, 4, 3);

const HeckeContext& context(i64 N) {
  static std::map<i64, HeckeContext> cache;
  auto it = cache.find(N);
  if (it == cache.end()) it = cache.emplace(N, build_hecke_context(A0, N)).first;
  return it->second;
}

const HeckeEigenbasis& basis(i64 N) {
  static std::map<i64, HeckeEigenbasis> cache;
  auto it = cache.find(N);
  if (it == cache.end()) it = cache.emplace(N, eigenbasis(context(N))).first;
  return it->second;
}

TrigPolynomial f0() {
  TrigPolynomial f;
  f.add({1, 1}, 1.0);
  f.add({-1, -1}, 1.0);
  return f;
}

template <bool Parallel>
void BM_average_D(benchmark::State& st) {
  const auto& ctx = context(st.range(0));
  for (auto _ : st) benchmark::DoNotOptimize(Parallel ? average_D({1, 1}, ctx) : serial::average_D({1, 1}, ctx));
}

template <bool Parallel>
void BM_multiply(benchmark::State& st) {
  const i64 n = st.range(0);
  std::mt19937_64 rng(1);
  std::normal_distribution<double> g;
  LinearOperator x(n), y(n);
  for (auto& z : x.data()) z = {g(rng), g(rng)};
  for (auto& z : y.data()) z = {g(rng), g(rng)};
  for (auto _ : st) benchmark::DoNotOptimize(Parallel ? x * y : serial::multiply(x, y));
}

template <bool Parallel>
void BM_matrix_elements(benchmark::State& st) {
  const auto& b = basis(st.range(0));
  for (auto _ : st) benchmark::DoNotOptimize(Parallel ? matrix_elements({1, 1}, b) : serial::matrix_elements({1, 1}, b));
}

template <bool Parallel>
void BM_normalized_elements(benchmark::State& st) {
  const i64 N = st.range(0);
  const auto q = frequency_form(A0);
  const auto f = f0();
  for (auto _ : st)
    benchmark::DoNotOptimize(Parallel ? normalized_elements(f, basis(N), q, context(N))
                                      : serial::normalized_elements(f, basis(N), q, context(N)));
}

template <bool Parallel>
void BM_sol_count(benchmark::State& st) {
  const auto& ctx = context(st.range(0));
  for (auto _ : st)
    benchmark::DoNotOptimize(Parallel ? sol_count({1, 1}, {1, 1}, {0, 1}, {0, 1}, 0, ctx)
                                      : serial::sol_count({1, 1}, {1, 1}, {0, 1}, {0, 1}, 0, ctx));
}

template <bool Parallel>
void BM_exp_sum_fourth(benchmark::State& st) {
  const auto& ctx = context(st.range(0));
  for (auto _ : st)
    benchmark::DoNotOptimize(Parallel ? exp_sum_fourth({1, 1}, {1, 1}, {0, 1}, {0, 1}, 1, ctx)
                                      : serial::exp_sum_fourth({1, 1}, {1, 1}, {0, 1}, {0, 1}, 1, ctx));
}

template <bool Parallel>
void BM_charsum(benchmark::State& st) {
  const auto sd = diagonalize_mod(A0, st.range(0));
  for (auto _ : st)
    benchmark::DoNotOptimize(Parallel ? charsum_matrix_elements({1, 1}, sd) : serial::charsum_matrix_elements({1, 1}, sd));
}

template <bool Parallel>
void BM_mc(benchmark::State& st) {
  const std::map<i64, double> w{{2, -2.0}};
  const auto n = static_cast<std::size_t>(st.range(0));
  for (auto _ : st)
    benchmark::DoNotOptimize(Parallel ? sample_weighted_traces(w, n, 1) : serial::sample_weighted_traces(w, n, 1));
}

}  // namespace

BENCHMARK(BM_average_D<true>)->Arg(101)->Arg(293);
BENCHMARK(BM_average_D<false>)->Arg(101)->Arg(293);
BENCHMARK(BM_multiply<true>)->Arg(101)->Arg(293);
BENCHMARK(BM_multiply<false>)->Arg(101)->Arg(293);
BENCHMARK(BM_matrix_elements<true>)->Arg(101);
BENCHMARK(BM_matrix_elements<false>)->Arg(101);
BENCHMARK(BM_normalized_elements<true>)->Arg(101);
BENCHMARK(BM_normalized_elements<false>)->Arg(101);
BENCHMARK(BM_sol_count<true>)->Arg(31)->Arg(61);
BENCHMARK(BM_sol_count<false>)->Arg(31)->Arg(61);
BENCHMARK(BM_exp_sum_fourth<true>)->Arg(31)->Arg(61);
BENCHMARK(BM_exp_sum_fourth<false>)->Arg(31)->Arg(61);
BENCHMARK(BM_charsum<true>)->Arg(97);
BENCHMARK(BM_charsum<false>)->Arg(97);
BENCHMARK(BM_mc<true>)->Arg(100000);
BENCHMARK(BM_mc<false>)->Arg(100000);

BENCHMARK_MAIN();
