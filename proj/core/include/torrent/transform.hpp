#pragma once

#include <cstddef>
#include <map>
#include <span>
#include <utility>
#include <vector>

#include "torrent/model.hpp"

namespace torrent {

/// One strongly connected component and, once filled in by scc_io and
/// scc_reach, its boundary and input-to-output reachability.
struct SccInfo {
  std::size_t id = 0;
  std::vector<StateId> members;  // sorted
  /// Has at least one internal transition (self-loop singletons included).
  bool nontrivial = false;
  std::vector<StateId> inputs;   // members entered from outside, plus the initial state
  std::vector<StateId> outputs;  // non-members entered from a member
  /// (input, output) -> probability of leaving through that output.
  std::map<std::pair<StateId, StateId>, double> reach;

  bool contains(StateId s) const;
};

/// Makes target states and states that cannot reach them Dirac-absorbing;
/// every other row is copied.
Model make_absorbing(const Model& mc, const StateSet& targets);

/// Tarjan decomposition. Components are numbered by their smallest member.
std::vector<SccInfo> scc_decompose(const Model& mc);
SccInfo scc_io(const Model& mc, SccInfo scc);
/// Solves the component's internal system once per output, reusing one LU.
SccInfo scc_reach(const Model& mc, SccInfo scc);

/// The acyclic chain obtained by replacing every nontrivial component with
/// one-step jumps from its inputs to its outputs. State ids of the source
/// chain are used throughout; chain() re-indexes the kept states densely.
class AcyclicReduction {
 public:
  const Model& chain() const noexcept { return chain_; }
  const Model& origin() const noexcept { return origin_; }
  const StateSet& kept() const noexcept { return kept_; }

  /// All components, trivial ones included, ordered by id.
  const std::vector<SccInfo>& scc_table() const noexcept { return components_; }
  std::size_t component_of(StateId s) const { return component_of_.at(s); }
  const SccInfo& component(StateId s) const { return components_[component_of(s)]; }
  bool in_nontrivial_scc(StateId s) const { return component(s).nontrivial; }

  /// Outgoing jumps of a kept state in source ids; empty for dropped states.
  std::span<const Transition> step_row(StateId s) const { return rows_.at(s); }
  double step_probability(StateId from, StateId to) const;

  StateId chain_state(StateId original) const;
  StateId original_state(StateId chain_id) const { return kept_ids_.at(chain_id); }

 private:
  friend AcyclicReduction acyclic_reduce(const Model& mc_psi);

  AcyclicReduction(Model origin, Model chain) : origin_(std::move(origin)), chain_(std::move(chain)) {}

  Model origin_;
  Model chain_;
  StateSet kept_;
  std::vector<StateId> kept_ids_;
  std::vector<StateId> chain_index_;
  std::vector<SccInfo> components_;
  std::vector<std::size_t> component_of_;
  std::vector<std::vector<Transition>> rows_;
};

/// Builds the reduction of a chain prepared by make_absorbing.
AcyclicReduction acyclic_reduce(const Model& mc_psi);

}  // namespace torrent
