#pragma once

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "torrent/model.hpp"

#ifndef TORRENT_FIXTURE_DIR
#error "TORRENT_FIXTURE_DIR must point at tests/fixtures"
#endif

namespace torrent::testing {

inline std::filesystem::path fixture_path(const std::string& name) {
  return std::filesystem::path(TORRENT_FIXTURE_DIR) / name;
}

inline Model fixture(const std::string& name) { return load_model(fixture_path(name)); }

inline StateSet labelled(const Model& m, const std::string& label) {
  StateSet s(m.num_states());
  for (StateId i = 0; i < m.num_states(); ++i)
    if (m.has_label(i, label)) s.insert(i);
  return s;
}

inline std::vector<std::string> numbered_names(std::size_t n) {
  std::vector<std::string> names;
  for (std::size_t i = 0; i < n; ++i) names.push_back("s" + std::to_string(i));
  return names;
}

/// Random weights in [0.1, 1] normalised over `targets`.
inline Distribution random_distribution(std::mt19937_64& rng, const std::vector<StateId>& targets) {
  std::uniform_real_distribution<double> weight(0.1, 1.0);
  std::vector<double> w(targets.size());
  double sum = 0.0;
  for (auto& x : w) sum += (x = weight(rng));
  std::vector<Transition> entries;
  for (std::size_t i = 0; i < targets.size(); ++i) entries.push_back({targets[i], w[i] / sum});
  return Distribution(std::move(entries));
}

/// Markov chain with at most 12 states: up to three cyclic blocks of one to
/// three consecutive states, forward edges elsewhere, and two absorbing
/// states at the end, a "psi" goal and a trap. State 0 is initial.
inline Model random_chain(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  auto uniform = [&](std::size_t lo, std::size_t hi) {
    return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
  };
  const std::size_t n = uniform(4, 12);
  const std::size_t inner = n - 2;  // transient states 0 .. inner-1
  const StateId goal = static_cast<StateId>(n - 2);
  const StateId trap = static_cast<StateId>(n - 1);

  // Partition the transient states into runs; some runs become cycles.
  std::vector<std::size_t> block(inner), block_end(inner);
  std::vector<bool> cyclic(inner, false);
  std::size_t budget = uniform(1, 3);
  for (std::size_t i = 0, id = 0; i < inner; ++id) {
    std::size_t len = 1;
    bool cycle = false;
    if (budget > 0 && uniform(0, 1) == 0) {
      len = std::min(uniform(1, 3), inner - i);
      cycle = true;
      --budget;
    }
    for (std::size_t k = i; k < i + len; ++k) {
      block[k] = id;
      block_end[k] = i + len;
      cyclic[k] = cycle;
    }
    i += len;
  }

  std::vector<std::vector<Distribution>> actions(n);
  for (std::size_t s = 0; s < inner; ++s) {
    std::vector<StateId> succ;
    if (cyclic[s]) {
      // Next member of the run, wrapping to its first; a self-loop for length one.
      std::size_t next = s + 1;
      if (next == block_end[s]) {
        next = s;
        while (next > 0 && block[next - 1] == block[s]) --next;
      }
      succ.push_back(static_cast<StateId>(next));
    }
    // Every run keeps an exit from its last member; edges mostly go nearby.
    const bool exit = !cyclic[s] || s + 1 == block_end[s];
    const std::size_t forward = uniform(exit ? 2 : 0, 3);
    for (std::size_t k = 0; k < forward; ++k) {
      const std::size_t near = std::min(block_end[s] + 3, n - 1);
      succ.push_back(static_cast<StateId>(
          uniform(0, 3) == 0 ? uniform(block_end[s], n - 1) : uniform(block_end[s], near)));
    }
    std::sort(succ.begin(), succ.end());
    succ.erase(std::unique(succ.begin(), succ.end()), succ.end());
    actions[s].push_back(random_distribution(rng, succ));
  }
  actions[goal].push_back(Distribution::dirac(goal));
  actions[trap].push_back(Distribution::dirac(trap));

  std::vector<std::vector<std::string>> labels(n);
  labels[goal] = {"psi"};
  return Model(numbered_names(n), 0, std::move(labels), std::move(actions));
}

/// MDP with at most 6 states and 3 actions per state over arbitrary
/// successors; one or two states carry the "goal" label.
inline Model random_mdp(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  auto uniform = [&](std::size_t lo, std::size_t hi) {
    return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
  };
  const std::size_t n = uniform(2, 6);
  std::vector<std::vector<Distribution>> actions(n);
  for (std::size_t s = 0; s < n; ++s) {
    const std::size_t k = uniform(1, 3);
    for (std::size_t a = 0; a < k; ++a) {
      std::vector<StateId> succ;
      const std::size_t width = uniform(1, std::min<std::size_t>(3, n));
      for (std::size_t i = 0; i < width; ++i) succ.push_back(static_cast<StateId>(uniform(0, n - 1)));
      std::sort(succ.begin(), succ.end());
      succ.erase(std::unique(succ.begin(), succ.end()), succ.end());
      actions[s].push_back(random_distribution(rng, succ));
    }
  }
  std::vector<std::vector<std::string>> labels(n);
  labels[uniform(1, n - 1)] = {"goal"};
  if (uniform(0, 1) == 1) labels[uniform(0, n - 1)] = {"goal"};
  return Model(numbered_names(n), 0, std::move(labels), std::move(actions));
}

/// Acyclic chain over at most 8 states whose edges only point forward;
/// the last two states are an absorbing "psi" goal and a trap.
inline Model random_dag(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  auto uniform = [&](std::size_t lo, std::size_t hi) {
    return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
  };
  const std::size_t n = uniform(3, 8);
  const std::size_t inner = n - 2;
  std::vector<std::vector<Distribution>> actions(n);
  for (std::size_t s = 0; s < inner; ++s) {
    std::vector<StateId> succ;
    const std::size_t width = uniform(1, 3);
    for (std::size_t i = 0; i < width; ++i) succ.push_back(static_cast<StateId>(uniform(s + 1, n - 1)));
    std::sort(succ.begin(), succ.end());
    succ.erase(std::unique(succ.begin(), succ.end()), succ.end());
    actions[s].push_back(random_distribution(rng, succ));
  }
  actions[n - 2].push_back(Distribution::dirac(static_cast<StateId>(n - 2)));
  actions[n - 1].push_back(Distribution::dirac(static_cast<StateId>(n - 1)));
  std::vector<std::vector<std::string>> labels(n);
  labels[n - 2] = {"psi"};
  return Model(numbered_names(n), 0, std::move(labels), std::move(actions));
}

}  // namespace torrent::testing
