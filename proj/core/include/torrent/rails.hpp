#pragma once

#include <optional>
#include <span>
#include <vector>

#include "torrent/model.hpp"
#include "torrent/transform.hpp"

namespace torrent {

/// A finite path of the reduced acyclic chain, in source state ids.
using Rail = FinitePath;

/// One torrent of a counterexample: its rail, the rail's mass (equal to the
/// torrent's probability) and the most probable generator of the torrent.
struct Witness {
  Rail rail;
  double mass = 0.0;
  FinitePath representant;
  double representant_prob = 0.0;
};

/// Positions at which `rail` embeds into `path` under the freshness and
/// inertia conditions, or nullopt when no embedding exists.
///
/// Freshness makes every match the first visit of `path` to the component
/// of the matched state, so the embedding is unique when it exists and a
/// single left-to-right scan decides it.
std::optional<std::vector<std::size_t>> match_rail(const AcyclicReduction& red,
                                                   std::span<const StateId> rail,
                                                   std::span<const StateId> path);

/// `path` behaves like `rail` outside strongly connected components.
bool behaves_as(const AcyclicReduction& red, std::span<const StateId> rail,
                std::span<const StateId> path);

/// `path` generates the torrent of `rail`: it behaves like the rail and
/// ends exactly at the rail's last match.
bool generator_member(const AcyclicReduction& red, std::span<const StateId> rail,
                      std::span<const StateId> path);

/// Product of the reduced chain's jump probabilities along the rail.
double rail_mass(const AcyclicReduction& red, std::span<const StateId> rail);

struct Representant {
  FinitePath path;
  double probability = 0.0;
};

/// Highest-probability generator of the rail's torrent. Each jump out of a
/// nontrivial component is expanded into the most probable path through the
/// component; equally probable paths are ordered lexicographically.
Representant representant(const AcyclicReduction& red, std::span<const StateId> rail);

/// Inverse of representant: keeps the first state of every run of states
/// sharing a component.
Rail recover_rail(const AcyclicReduction& red, std::span<const StateId> path);

Witness make_witness(const AcyclicReduction& red, Rail rail);

}  // namespace torrent
