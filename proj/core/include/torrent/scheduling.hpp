#pragma once

#include <cstddef>
#include <vector>

#include "torrent/model.hpp"

namespace torrent {

/// Deterministic memoryless scheduler: one distribution index per state.
struct Scheduler {
  std::vector<std::size_t> choice;

  std::size_t operator[](StateId s) const { return choice.at(s); }
  bool operator==(const Scheduler&) const = default;
};

/// Scheduler attaining the maximal probability of reaching `target` from
/// every state. Ties go to the lowest action index that makes progress
/// towards the target (see optimal_choices).
Scheduler extract_max_scheduler(const Model& m, const StateSet& target);

/// Markov chain with P(s, t) = (choice at s)(t); labels and initial state kept.
Model induced_mc(const Model& m, const Scheduler& scheduler);

}  // namespace torrent
