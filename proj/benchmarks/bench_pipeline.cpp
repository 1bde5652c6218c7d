#include <benchmark/benchmark.h>

#include <random>
#include <string>
#include <vector>

#include "torrent/numerics.hpp"
#include "torrent/props.hpp"
#include "torrent/search.hpp"
#include "torrent/transform.hpp"

namespace {

using namespace torrent;

// Layers of `width` states; each state links to two states of the next
// layer and, with some probability, back to a state of its own layer. The
// last layer feeds a goal and a trap.
Model layered_chain(std::size_t layers, std::size_t width, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> weight(0.1, 1.0);
  const std::size_t n = layers * width + 2;
  const StateId goal = static_cast<StateId>(n - 2);
  const StateId trap = static_cast<StateId>(n - 1);
  std::vector<std::string> names;
  for (std::size_t i = 0; i < n; ++i) names.push_back("s" + std::to_string(i));

  std::vector<std::vector<Distribution>> actions(n);
  for (std::size_t l = 0; l < layers; ++l)
    for (std::size_t w = 0; w < width; ++w) {
      const std::size_t s = l * width + w;
      std::vector<StateId> succ;
      if (l + 1 == layers) {
        succ = {goal, trap};
      } else {
        succ.push_back(static_cast<StateId>((l + 1) * width + rng() % width));
        succ.push_back(static_cast<StateId>((l + 1) * width + rng() % width));
      }
      if (rng() % 3 == 0) succ.push_back(static_cast<StateId>(l * width + rng() % width));
      std::sort(succ.begin(), succ.end());
      succ.erase(std::unique(succ.begin(), succ.end()), succ.end());
      std::vector<double> w8(succ.size());
      double sum = 0.0;
      for (auto& x : w8) sum += (x = weight(rng));
      std::vector<Transition> row;
      for (std::size_t i = 0; i < succ.size(); ++i) row.push_back({succ[i], w8[i] / sum});
      actions[s].push_back(Distribution(std::move(row)));
    }
  actions[goal].push_back(Distribution::dirac(goal));
  actions[trap].push_back(Distribution::dirac(trap));
  std::vector<std::vector<std::string>> labels(n);
  labels[goal] = {"psi"};
  return Model(std::move(names), 0, std::move(labels), std::move(actions));
}

StateSet goal_of(const Model& m) { return sat_states(m, StateFormula::atom("psi")); }

void BM_MaxReach(benchmark::State& state) {
  const Model m = layered_chain(static_cast<std::size_t>(state.range(0)), 8, 1);
  const StateSet t = goal_of(m);
  for (auto _ : state) benchmark::DoNotOptimize(max_reach(m, t));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_MaxReach)->RangeMultiplier(2)->Range(4, 64)->Complexity();

void BM_AcyclicReduce(benchmark::State& state) {
  const Model m = layered_chain(static_cast<std::size_t>(state.range(0)), 8, 2);
  const Model psi = make_absorbing(m, goal_of(m));
  for (auto _ : state) benchmark::DoNotOptimize(acyclic_reduce(psi));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_AcyclicReduce)->RangeMultiplier(2)->Range(4, 64)->Complexity();

void BM_RankedRails(benchmark::State& state) {
  const Model m = layered_chain(24, 6, 3);
  const StateSet t = goal_of(m);
  const AcyclicReduction red = acyclic_reduce(make_absorbing(m, t));
  const auto k = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) {
    RankedRailStream stream(red, t);
    for (std::size_t i = 0; i < k; ++i) benchmark::DoNotOptimize(stream.next());
  }
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * k));
}
BENCHMARK(BM_RankedRails)->RangeMultiplier(4)->Range(1, 4096);

void BM_MostIndicative(benchmark::State& state) {
  const Model m = layered_chain(12, 4, 4);
  const StateSet t = goal_of(m);
  const AcyclicReduction red = acyclic_reduce(make_absorbing(m, t));
  const double total = max_reach(m, t)[m.initial()];
  const PropertySpec spec{Bound::at_most, total * static_cast<double>(state.range(0)) / 100.0,
                          StateFormula::atom("psi")};
  for (auto _ : state) benchmark::DoNotOptimize(most_indicative(red, spec, t));
}
BENCHMARK(BM_MostIndicative)->Arg(10)->Arg(50)->Arg(90);

}  // namespace

BENCHMARK_MAIN();
