#include "torrent/search.hpp"

#include <algorithm>
#include <cmath>
#include <deque>

#include "torrent/errors.hpp"

namespace torrent {
namespace {

constexpr double kWeightTie = 1e-12;

template <typename E>
bool ranks_before(const E& a, const E& b) {
  if (std::abs(a.weight - b.weight) > kWeightTie) return a.weight < b.weight;
  return a.sequence < b.sequence;
}

}  // namespace

RankedRailStream::RankedRailStream(const AcyclicReduction& red, const StateSet& targets)
    : red_(&red), source_(red.origin().initial()) {
  const std::size_t n = red.origin().num_states();
  sink_ = n;
  preds_.resize(n + 1);
  nodes_.resize(n + 1);

  // Jumps that matter: out of non-target kept states, excluding self-loops.
  auto jumps = [&](StateId s) {
    std::vector<Transition> out;
    if (targets.contains(s)) return out;
    for (const auto& t : red.step_row(s))
      if (t.target != s) out.push_back(t);
    return out;
  };

  std::vector<bool> forward(n, false);
  std::deque<StateId> queue{static_cast<StateId>(source_)};
  forward[source_] = true;
  while (!queue.empty()) {
    const StateId s = queue.front();
    queue.pop_front();
    for (const auto& t : jumps(s))
      if (!forward[t.target]) {
        forward[t.target] = true;
        queue.push_back(t.target);
      }
  }

  std::vector<std::vector<StateId>> back(n);
  for (StateId s = 0; s < n; ++s)
    if (forward[s])
      for (const auto& t : jumps(s)) back[t.target].push_back(s);
  std::vector<bool> useful(n, false);
  for (StateId s = 0; s < n; ++s)
    if (forward[s] && targets.contains(s)) {
      useful[s] = true;
      queue.push_back(s);
    }
  while (!queue.empty()) {
    const StateId t = queue.front();
    queue.pop_front();
    for (StateId s : back[t])
      if (!useful[s]) {
        useful[s] = true;
        queue.push_back(s);
      }
  }

  for (StateId s = 0; s < n; ++s) {
    if (!useful[s]) continue;
    if (targets.contains(s)) preds_[sink_].emplace_back(s, 0.0);
    for (const auto& t : jumps(s))
      if (useful[t.target]) preds_[t.target].emplace_back(s, -std::log(t.probability));
  }
}

void RankedRailStream::push_extension(std::size_t node, std::size_t pred, std::size_t rank) {
  const Entry& base = nodes_[pred].found[rank];
  double step = 0.0;
  for (const auto& [p, w] : preds_[node])
    if (p == pred) step = w;
  Entry e{base.weight + step, base.sequence, pred, rank};
  if (node != sink_) e.sequence.push_back(static_cast<StateId>(node));
  auto& heap = nodes_[node].candidates;
  heap.push_back(std::move(e));
  std::push_heap(heap.begin(), heap.end(), [](const Entry& a, const Entry& b) { return ranks_before(b, a); });
}

bool RankedRailStream::ensure(std::size_t node, std::size_t rank) {
  Node& state = nodes_[node];
  if (node == source_) {
    if (!state.initialized) {
      state.initialized = true;
      state.found.push_back({0.0, {static_cast<StateId>(source_)}, 0, 0});
    }
    return rank < state.found.size();
  }
  if (!state.initialized) {
    state.initialized = true;
    for (const auto& [pred, w] : preds_[node])
      if (ensure(pred, 0)) push_extension(node, pred, 0);
  }
  while (state.found.size() <= rank) {
    // The best path found last may have a runner-up through the same predecessor.
    if (state.expanded < state.found.size()) {
      const Entry& last = state.found[state.expanded++];
      const std::size_t pred = last.pred;
      const std::size_t next_rank = last.pred_rank + 1;
      if (ensure(pred, next_rank)) push_extension(node, pred, next_rank);
    }
    if (state.candidates.empty()) return false;
    std::pop_heap(state.candidates.begin(), state.candidates.end(),
                  [](const Entry& a, const Entry& b) { return ranks_before(b, a); });
    state.found.push_back(std::move(state.candidates.back()));
    state.candidates.pop_back();
  }
  return true;
}

std::optional<RankedRail> RankedRailStream::next() {
  if (preds_[sink_].empty() || !ensure(sink_, emitted_)) return std::nullopt;
  const Entry& e = nodes_[sink_].found[emitted_++];
  RankedRail out;
  out.rail = e.sequence;
  out.weight = e.weight;
  out.mass = rail_mass(*red_, out.rail);
  return out;
}

RankedRailStream ranked_rails(const AcyclicReduction& red, const StateSet& targets) {
  return RankedRailStream(red, targets);
}

TorrentCounterexample most_indicative(const AcyclicReduction& red, const PropertySpec& spec,
                                      const StateSet& targets, const SearchOptions& options) {
  TorrentCounterexample result;
  if (spec.violated_by(0.0)) {
    result.verdict = Verdict::violated;
    return result;
  }
  RankedRailStream stream(red, targets);
  std::vector<Rail> rails;
  while (auto next = stream.next()) {
    if (rails.size() >= options.max_witnesses)
      throw SearchError("more than " + std::to_string(options.max_witnesses) +
                        " witnesses needed; raise the witness limit to continue");
    result.total_mass += next->mass;
    rails.push_back(std::move(next->rail));
    if (spec.violated_by(result.total_mass)) {
      result.verdict = Verdict::violated;
      result.witnesses.reserve(rails.size());
      for (auto& r : rails) result.witnesses.push_back(make_witness(red, std::move(r)));
      return result;
    }
  }
  result.verdict = Verdict::holds;
  return result;
}

Witness strongest_torrent_evidence(const AcyclicReduction& red, const StateSet& targets) {
  RankedRailStream stream(red, targets);
  auto first = stream.next();
  if (!first) throw SearchError("no rail reaches the target");
  return make_witness(red, std::move(first->rail));
}

}  // namespace torrent
