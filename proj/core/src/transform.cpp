#include "torrent/transform.hpp"

#include <algorithm>
#include <limits>

#include "torrent/errors.hpp"
#include "torrent/numerics.hpp"

namespace torrent {

bool SccInfo::contains(StateId s) const {
  return std::binary_search(members.begin(), members.end(), s);
}

Model make_absorbing(const Model& mc, const StateSet& targets) {
  if (!mc.is_markov_chain()) throw ValidationError("make_absorbing expects a Markov chain");
  const StateSet dead = prob0_states(mc, targets);
  std::vector<std::string> names(mc.names().begin(), mc.names().end());
  std::vector<std::vector<std::string>> labels;
  std::vector<std::vector<Distribution>> actions;
  for (StateId s = 0; s < mc.num_states(); ++s) {
    labels.emplace_back(mc.labels(s).begin(), mc.labels(s).end());
    if (targets.contains(s) || dead.contains(s))
      actions.push_back({Distribution::dirac(s)});
    else
      actions.push_back({mc.actions(s).front()});
  }
  return Model(std::move(names), mc.initial(), std::move(labels), std::move(actions));
}

std::vector<SccInfo> scc_decompose(const Model& mc) {
  const std::size_t n = mc.num_states();
  constexpr std::size_t unvisited = std::numeric_limits<std::size_t>::max();
  std::vector<std::vector<StateId>> succ(n);
  for (StateId s = 0; s < n; ++s) succ[s] = successors(mc, s);

  std::vector<std::size_t> index(n, unvisited);
  std::vector<std::size_t> low(n, 0);
  std::vector<bool> on_stack(n, false);
  std::vector<StateId> stack;
  std::vector<std::vector<StateId>> found;
  std::size_t counter = 0;

  // Explicit call stack: (vertex, next successor position).
  std::vector<std::pair<StateId, std::size_t>> frames;
  for (StateId root = 0; root < n; ++root) {
    if (index[root] != unvisited) continue;
    frames.emplace_back(root, 0);
    index[root] = low[root] = counter++;
    stack.push_back(root);
    on_stack[root] = true;
    while (!frames.empty()) {
      auto& [v, next] = frames.back();
      if (next < succ[v].size()) {
        const StateId w = succ[v][next++];
        if (index[w] == unvisited) {
          index[w] = low[w] = counter++;
          stack.push_back(w);
          on_stack[w] = true;
          frames.emplace_back(w, 0);
        } else if (on_stack[w]) {
          low[v] = std::min(low[v], index[w]);
        }
        continue;
      }
      const StateId done = v;
      frames.pop_back();
      if (!frames.empty()) {
        const StateId parent = frames.back().first;
        low[parent] = std::min(low[parent], low[done]);
      }
      if (low[done] == index[done]) {
        std::vector<StateId> component;
        StateId w;
        do {
          w = stack.back();
          stack.pop_back();
          on_stack[w] = false;
          component.push_back(w);
        } while (w != done);
        std::sort(component.begin(), component.end());
        found.push_back(std::move(component));
      }
    }
  }

  std::sort(found.begin(), found.end(),
            [](const auto& a, const auto& b) { return a.front() < b.front(); });
  std::vector<SccInfo> out;
  out.reserve(found.size());
  for (auto& members : found) {
    SccInfo info;
    info.id = out.size();
    info.members = std::move(members);
    info.nontrivial = info.members.size() > 1 || std::binary_search(succ[info.members[0]].begin(),
                                                                        succ[info.members[0]].end(),
                                                                        info.members[0]);
    out.push_back(std::move(info));
  }
  return out;
}

SccInfo scc_io(const Model& mc, SccInfo scc) {
  std::vector<StateId> inputs;
  std::vector<StateId> outputs;
  for (StateId s = 0; s < mc.num_states(); ++s) {
    const bool inside = scc.contains(s);
    for (const auto& t : mc.actions(s).front().entries()) {
      const bool target_inside = scc.contains(t.target);
      if (!inside && target_inside) inputs.push_back(t.target);
      if (inside && !target_inside) outputs.push_back(t.target);
    }
  }
  if (scc.contains(mc.initial())) inputs.push_back(mc.initial());
  for (auto* v : {&inputs, &outputs}) {
    std::sort(v->begin(), v->end());
    v->erase(std::unique(v->begin(), v->end()), v->end());
  }
  scc.inputs = std::move(inputs);
  scc.outputs = std::move(outputs);
  return scc;
}

SccInfo scc_reach(const Model& mc, SccInfo scc) {
  scc.reach.clear();
  if (scc.outputs.empty() || scc.inputs.empty()) return scc;
  const std::size_t k = scc.members.size();
  auto local = [&](StateId s) {
    return static_cast<std::size_t>(
        std::lower_bound(scc.members.begin(), scc.members.end(), s) - scc.members.begin());
  };

  // x = P_KK x + P_K,t  =>  (I - P_KK) x = P_K,t
  DenseMatrix a = DenseMatrix::identity(k);
  for (std::size_t i = 0; i < k; ++i)
    for (const auto& t : mc.actions(scc.members[i]).front().entries())
      if (scc.contains(t.target)) a(i, local(t.target)) -= t.probability;
  const LuFactorization lu(std::move(a));

  for (StateId out : scc.outputs) {
    std::vector<double> b(k, 0.0);
    for (std::size_t i = 0; i < k; ++i) b[i] = mc.probability(scc.members[i], out);
    const auto x = lu.solve(b);
    for (StateId in : scc.inputs) scc.reach[{in, out}] = std::clamp(x[local(in)], 0.0, 1.0);
  }
  return scc;
}

double AcyclicReduction::step_probability(StateId from, StateId to) const {
  for (const auto& t : rows_.at(from))
    if (t.target == to) return t.probability;
  return 0.0;
}

StateId AcyclicReduction::chain_state(StateId original) const {
  if (!kept_.contains(original))
    throw ValidationError("state '" + origin_.name(original) + "' is not kept by the reduction");
  return chain_index_[original];
}

AcyclicReduction acyclic_reduce(const Model& mc_psi) {
  if (!mc_psi.is_markov_chain()) throw ValidationError("acyclic_reduce expects a Markov chain");
  const std::size_t n = mc_psi.num_states();

  std::vector<SccInfo> components = scc_decompose(mc_psi);
  std::vector<std::size_t> component_of(n);
  for (auto& c : components) {
    for (StateId s : c.members) component_of[s] = c.id;
    if (c.nontrivial) c = scc_reach(mc_psi, scc_io(mc_psi, std::move(c)));
  }

  StateSet kept(n);
  for (StateId s = 0; s < n; ++s) {
    const SccInfo& c = components[component_of[s]];
    if (!c.nontrivial || std::binary_search(c.inputs.begin(), c.inputs.end(), s)) kept.insert(s);
  }

  std::vector<std::vector<Transition>> rows(n);
  for (StateId s : kept.members()) {
    const SccInfo& c = components[component_of[s]];
    if (!c.nontrivial) {
      const auto entries = mc_psi.actions(s).front().entries();
      rows[s].assign(entries.begin(), entries.end());
    } else if (c.outputs.empty()) {
      rows[s] = {{s, 1.0}};
    } else {
      for (StateId out : c.outputs) {
        const double p = c.reach.at({s, out});
        if (p > 0.0) rows[s].push_back({out, p});
      }
    }
    for (const auto& t : rows[s])
      if (!kept.contains(t.target))
        throw Error("internal: reduction jumps to dropped state '" + mc_psi.name(t.target) + "'");
  }

  const std::vector<StateId> kept_ids = kept.members();
  std::vector<StateId> chain_index(n, 0);
  for (std::size_t i = 0; i < kept_ids.size(); ++i) chain_index[kept_ids[i]] = static_cast<StateId>(i);

  std::vector<std::string> names;
  std::vector<std::vector<std::string>> labels;
  std::vector<std::vector<Distribution>> actions;
  for (StateId s : kept_ids) {
    names.push_back(mc_psi.name(s));
    labels.emplace_back(mc_psi.labels(s).begin(), mc_psi.labels(s).end());
    std::vector<Transition> entries;
    for (const auto& t : rows[s]) entries.push_back({chain_index[t.target], t.probability});
    actions.push_back({Distribution(std::move(entries))});
  }
  // Rows of inputs carry solver round-off; a real deficit means a trap the
  // caller forgot to make absorbing, and is rejected here.
  Model chain(std::move(names), chain_index[mc_psi.initial()], std::move(labels), std::move(actions),
              1e-7);

  AcyclicReduction red(mc_psi, std::move(chain));
  red.kept_ = std::move(kept);
  red.kept_ids_ = kept_ids;
  red.chain_index_ = std::move(chain_index);
  red.components_ = std::move(components);
  red.component_of_ = std::move(component_of);
  red.rows_ = std::move(rows);
  return red;
}

}  // namespace torrent
