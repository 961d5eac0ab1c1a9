#include <benchmark/benchmark.h>

#include "kpvote/axioms.hpp"
#include "kpvote/distrat.hpp"
#include "kpvote/random.hpp"
#include "kpvote/scores.hpp"
#include "kpvote/winners.hpp"

namespace {

using namespace kpvote;

profile benchmark_profile(int n, std::uint64_t seed) {
  rng gen(seed);
  return random_profile(n, gen, 50, false);
}

void BM_candidate_scores(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  profile pi = benchmark_profile(n, 7);
  norm_exponent p = norm_exponent::finite(2);
  for (auto _ : state) benchmark::DoNotOptimize(candidate_scores(pi, p));
}
BENCHMARK(BM_candidate_scores)->Arg(6)->Arg(10)->Arg(14);

void BM_winners_tier(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const int k = static_cast<int>(state.range(1));
  profile pi = benchmark_profile(n, 11);
  norm_exponent p = norm_exponent::finite(1.5);
  for (auto _ : state) benchmark::DoNotOptimize(winners(pi, k, p));
}
BENCHMARK(BM_winners_tier)->Args({8, 3})->Args({12, 4})->Args({16, 6});

void BM_winners_bruteforce(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const int k = static_cast<int>(state.range(1));
  profile pi = benchmark_profile(n, 11);
  norm_exponent p = norm_exponent::finite(1.5);
  for (auto _ : state) benchmark::DoNotOptimize(winners_bruteforce(pi, k, p));
}
BENCHMARK(BM_winners_bruteforce)->Args({8, 3})->Args({12, 4});

void BM_layer_sssp(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  norm_exponent p = norm_exponent::finite(2);
  ballot from = ballot::single(0);
  ballot to = ballot::universe(n).minus(ballot::single(0));
  for (auto _ : state) benchmark::DoNotOptimize(layer_distance(from, to, n, p));
}
BENCHMARK(BM_layer_sssp)->Arg(8)->Arg(12)->Arg(14);

void BM_dr_winners(benchmark::State& state) {
  const int n = 5, m = 6;
  rng gen(13);
  std::vector<ballot> votes;
  for (int i = 0; i < m; ++i)
    votes.push_back(ballot::from_mask(
        static_cast<std::uint32_t>(gen.uniform_int(1, static_cast<int>(ballot::universe(n).mask())))));
  election e(n, std::move(votes));
  ballot_metric metric = ballot_metric::layer(n, norm_exponent::finite(2));
  const int k = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(dr_winners(e, k, metric));
}
BENCHMARK(BM_dr_winners)->Arg(1)->Arg(2);

void BM_consistency_audit(benchmark::State& state) {
  voting_rule rule = kp_rule(2, norm_exponent::finite(2));
  for (auto _ : state) {
    audit_report r =
        audit(rule, axiom_id::consistency, {5, 2, norm_exponent::finite(2)}, {50, 99, 10.0});
    benchmark::DoNotOptimize(r);
  }
}
BENCHMARK(BM_consistency_audit);

}  // namespace

BENCHMARK_MAIN();
