#include "torrent/rails.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "torrent/errors.hpp"

namespace torrent {

std::optional<std::vector<std::size_t>> match_rail(const AcyclicReduction& red,
                                                   std::span<const StateId> rail,
                                                   std::span<const StateId> path) {
  constexpr std::size_t none = std::numeric_limits<std::size_t>::max();
  const std::size_t n = red.origin().num_states();
  if (rail.empty() || path.empty()) return std::nullopt;

  std::vector<std::size_t> first_visit(red.scc_table().size(), none);
  for (std::size_t j = 0; j < path.size(); ++j) {
    if (path[j] >= n) return std::nullopt;
    auto& slot = first_visit[red.component_of(path[j])];
    if (slot == none) slot = j;
  }

  std::vector<std::size_t> f(rail.size());
  for (std::size_t i = 0; i < rail.size(); ++i) {
    if (rail[i] >= n) return std::nullopt;
    const std::size_t j = first_visit[red.component_of(rail[i])];
    if (j == none || path[j] != rail[i]) return std::nullopt;  // freshness
    if (i > 0) {
      if (j <= f[i - 1]) return std::nullopt;
      const std::size_t stay = red.component_of(rail[i - 1]);
      for (std::size_t k = f[i - 1] + 1; k < j; ++k)
        if (red.component_of(path[k]) != stay) return std::nullopt;  // inertia
    }
    f[i] = j;
  }
  return f;
}

bool behaves_as(const AcyclicReduction& red, std::span<const StateId> rail,
                std::span<const StateId> path) {
  return match_rail(red, rail, path).has_value();
}

bool generator_member(const AcyclicReduction& red, std::span<const StateId> rail,
                      std::span<const StateId> path) {
  const auto f = match_rail(red, rail, path);
  return f && f->back() == path.size() - 1;
}

double rail_mass(const AcyclicReduction& red, std::span<const StateId> rail) {
  if (rail.empty()) throw PathError("empty rail");
  double mass = 1.0;
  for (std::size_t i = 0; i + 1 < rail.size(); ++i) {
    const double p = red.step_probability(rail[i], rail[i + 1]);
    if (p <= 0.0)
      throw PathError("rail has no jump from '" + red.origin().name(rail[i]) + "' to '" +
                      red.origin().name(rail[i + 1]) + "'");
    mass *= p;
  }
  return mass;
}

namespace {

struct Candidate {
  double weight = std::numeric_limits<double>::infinity();
  FinitePath path;
};

bool better(const Candidate& a, const Candidate& b) {
  if (std::abs(a.weight - b.weight) > 1e-12) return a.weight < b.weight;
  return a.path < b.path;
}

/// Most probable path that starts at `from`, stays inside `scc` and then
/// steps to `exit`.
FinitePath best_crossing(const Model& mc, const SccInfo& scc, StateId from, StateId exit) {
  const std::size_t k = scc.members.size();
  auto local = [&](StateId s) {
    return static_cast<std::size_t>(
        std::lower_bound(scc.members.begin(), scc.members.end(), s) - scc.members.begin());
  };
  std::vector<Candidate> best(k);
  std::vector<bool> settled(k, false);
  best[local(from)] = {0.0, {from}};

  for (std::size_t round = 0; round < k; ++round) {
    std::size_t pick = k;
    for (std::size_t i = 0; i < k; ++i) {
      if (settled[i] || best[i].path.empty()) continue;
      if (pick == k || better(best[i], best[pick])) pick = i;
    }
    if (pick == k) break;
    settled[pick] = true;
    for (const auto& t : mc.actions(scc.members[pick]).front().entries()) {
      if (!scc.contains(t.target)) continue;
      const std::size_t j = local(t.target);
      if (settled[j]) continue;
      Candidate next{best[pick].weight - std::log(t.probability), best[pick].path};
      next.path.push_back(t.target);
      if (best[j].path.empty() || better(next, best[j])) best[j] = std::move(next);
    }
  }

  Candidate answer;
  for (std::size_t i = 0; i < k; ++i) {
    if (best[i].path.empty()) continue;
    const double p = mc.probability(scc.members[i], exit);
    if (p <= 0.0) continue;
    Candidate c{best[i].weight - std::log(p), best[i].path};
    c.path.push_back(exit);
    if (answer.path.empty() || better(c, answer)) answer = std::move(c);
  }
  if (answer.path.empty())
    throw PathError("no path from '" + mc.name(from) + "' leaves its component through '" +
                    mc.name(exit) + "'");
  return answer.path;
}

}  // namespace

Representant representant(const AcyclicReduction& red, std::span<const StateId> rail) {
  const Model& mc = red.origin();
  if (rail.empty()) throw PathError("empty rail");
  FinitePath path{rail.front()};
  for (std::size_t i = 0; i + 1 < rail.size(); ++i) {
    const StateId u = rail[i];
    const StateId t = rail[i + 1];
    const SccInfo& scc = red.component(u);
    if (!scc.nontrivial) {
      if (mc.probability(u, t) <= 0.0)
        throw PathError("no transition from '" + mc.name(u) + "' to '" + mc.name(t) + "'");
      path.push_back(t);
      continue;
    }
    if (scc.contains(t))
      throw PathError("rail stays in the component of '" + mc.name(u) + "'; it has no generator");
    const FinitePath crossing = best_crossing(mc, scc, u, t);
    path.insert(path.end(), crossing.begin() + 1, crossing.end());
  }
  const double p = cylinder_prob(mc, path);
  return {std::move(path), p};
}

Rail recover_rail(const AcyclicReduction& red, std::span<const StateId> path) {
  Rail rail;
  for (std::size_t j = 0; j < path.size(); ++j)
    if (j == 0 || red.component_of(path[j]) != red.component_of(path[j - 1])) rail.push_back(path[j]);
  return rail;
}

Witness make_witness(const AcyclicReduction& red, Rail rail) {
  Witness w;
  w.mass = rail_mass(red, rail);
  auto rep = representant(red, rail);
  w.representant = std::move(rep.path);
  w.representant_prob = rep.probability;
  w.rail = std::move(rail);
  return w;
}

}  // namespace torrent
