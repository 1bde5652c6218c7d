#include "torrent/scheduling.hpp"

#include "torrent/errors.hpp"
#include "torrent/numerics.hpp"

namespace torrent {

Scheduler extract_max_scheduler(const Model& m, const StateSet& target) {
  if (m.is_markov_chain()) return Scheduler{std::vector<std::size_t>(m.num_states(), 0)};
  const auto values = max_reach(m, target);
  return Scheduler{optimal_choices(m, target, values)};
}

Model induced_mc(const Model& m, const Scheduler& scheduler) {
  if (scheduler.choice.size() != m.num_states())
    throw ValidationError("scheduler does not cover every state");
  std::vector<std::string> names(m.names().begin(), m.names().end());
  std::vector<std::vector<std::string>> labels;
  std::vector<std::vector<Distribution>> actions;
  labels.reserve(m.num_states());
  actions.reserve(m.num_states());
  for (StateId s = 0; s < m.num_states(); ++s) {
    labels.emplace_back(m.labels(s).begin(), m.labels(s).end());
    const std::size_t a = scheduler[s];
    if (a >= m.num_actions(s))
      throw ValidationError("scheduler picks action " + std::to_string(a) + " at state '" +
                            m.name(s) + "', which has " + std::to_string(m.num_actions(s)));
    actions.push_back({m.actions(s)[a]});
  }
  return Model(std::move(names), m.initial(), std::move(labels), std::move(actions));
}

}  // namespace torrent
