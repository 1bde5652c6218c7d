#include "torrent/oracle.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <deque>
#include <random>
#include <unordered_map>

#include "torrent/errors.hpp"

namespace torrent::oracle {
namespace {

using Rows = std::vector<std::span<const Transition>>;

std::vector<bool> can_reach(const Rows& rows, const StateSet& targets) {
  const std::size_t n = rows.size();
  std::vector<std::vector<StateId>> back(n);
  for (StateId s = 0; s < n; ++s)
    for (const auto& t : rows[s]) back[t.target].push_back(s);
  std::vector<bool> seen(n, false);
  std::deque<StateId> queue;
  for (StateId s = 0; s < n; ++s)
    if (targets.contains(s)) {
      seen[s] = true;
      queue.push_back(s);
    }
  while (!queue.empty()) {
    const StateId s = queue.front();
    queue.pop_front();
    for (StateId p : back[s])
      if (!seen[p]) {
        seen[p] = true;
        queue.push_back(p);
      }
  }
  return seen;
}

std::vector<double> dense_reach(const Rows& rows, const StateSet& targets) {
  const std::size_t n = rows.size();
  const auto live = can_reach(rows, targets);
  std::vector<std::size_t> index(n, n);
  std::size_t m = 0;
  for (StateId s = 0; s < n; ++s)
    if (live[s] && !targets.contains(s)) index[s] = m++;

  std::vector<double> x(n, 0.0);
  for (StateId s = 0; s < n; ++s)
    if (targets.contains(s)) x[s] = 1.0;
  if (m == 0) return x;

  Eigen::MatrixXd a = Eigen::MatrixXd::Identity(m, m);
  Eigen::VectorXd b = Eigen::VectorXd::Zero(m);
  for (StateId s = 0; s < n; ++s) {
    if (index[s] == n) continue;
    for (const auto& t : rows[s]) {
      if (targets.contains(t.target))
        b(index[s]) += t.probability;
      else if (index[t.target] != n)
        a(index[s], index[t.target]) -= t.probability;
    }
  }
  const Eigen::VectorXd sol = a.fullPivLu().solve(b);
  for (StateId s = 0; s < n; ++s)
    if (index[s] != n) x[s] = std::clamp(sol(index[s]), 0.0, 1.0);
  return x;
}

Rows chain_rows(const Model& mc) {
  if (!mc.is_markov_chain()) throw ValidationError("expected a Markov chain");
  Rows rows(mc.num_states());
  for (StateId s = 0; s < mc.num_states(); ++s) rows[s] = mc.actions(s).front().entries();
  return rows;
}

bool path_order(const EnumeratedPath& a, const EnumeratedPath& b) {
  if (a.probability != b.probability) return a.probability > b.probability;
  return a.path < b.path;
}

}  // namespace

FreachEnumeration enumerate_freach(const Model& mc, const StateSet& targets, std::size_t max_len) {
  const Rows rows = chain_rows(mc);
  const auto live = can_reach(rows, targets);
  FreachEnumeration out;
  if (max_len == 0 || !live[mc.initial()]) return out;

  FinitePath path{mc.initial()};
  // Explicit stack of (probability, next transition index) per depth.
  std::vector<std::pair<double, std::size_t>> frames{{1.0, 0}};
  auto settle = [&]() -> bool {  // true if the current path is a leaf
    const StateId s = path.back();
    if (targets.contains(s)) {
      out.paths.push_back({path, frames.back().first});
      return true;
    }
    if (path.size() == max_len) {
      out.tail_bound += frames.back().first;
      return true;
    }
    return false;
  };
  if (settle()) {
    std::sort(out.paths.begin(), out.paths.end(), path_order);
    return out;
  }
  while (!frames.empty()) {
    auto& [prob, next] = frames.back();
    const auto row = rows[path.back()];
    if (next == row.size()) {
      frames.pop_back();
      path.pop_back();
      continue;
    }
    const Transition t = row[next++];
    if (!live[t.target]) continue;
    const double p = prob * t.probability;
    path.push_back(t.target);
    frames.emplace_back(p, 0);
    if (settle()) {
      frames.pop_back();
      path.pop_back();
    }
  }
  std::sort(out.paths.begin(), out.paths.end(), path_order);
  return out;
}

std::vector<double> chain_reach(const Model& mc, const StateSet& targets) {
  return dense_reach(chain_rows(mc), targets);
}

double brute_force_max_reach(const Model& m, const StateSet& targets, std::size_t max_schedulers) {
  const std::size_t n = m.num_states();
  std::size_t total = 1;
  for (StateId s = 0; s < n; ++s) {
    const std::size_t k = targets.contains(s) ? 1 : m.num_actions(s);
    if (total > max_schedulers / k) throw Error("too many schedulers to enumerate");
    total *= k;
  }

  std::vector<std::size_t> choice(n, 0);
  double best = 0.0;
  for (std::size_t round = 0; round < total; ++round) {
    Rows rows(n);
    for (StateId s = 0; s < n; ++s) rows[s] = m.actions(s)[choice[s]].entries();
    best = std::max(best, dense_reach(rows, targets)[m.initial()]);
    for (StateId s = 0; s < n; ++s) {
      if (targets.contains(s)) continue;
      if (++choice[s] < m.num_actions(s)) break;
      choice[s] = 0;
    }
  }
  return best;
}

std::vector<std::size_t> closure_components(const Model& mc) {
  const std::size_t n = mc.num_states();
  std::vector<std::vector<bool>> reach(n, std::vector<bool>(n, false));
  for (StateId s = 0; s < n; ++s) {
    reach[s][s] = true;
    for (const auto& dist : mc.actions(s))
      for (const auto& t : dist.entries()) reach[s][t.target] = true;
  }
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i)
      if (reach[i][k])
        for (std::size_t j = 0; j < n; ++j)
          if (reach[k][j]) reach[i][j] = true;

  constexpr std::size_t unset = static_cast<std::size_t>(-1);
  std::vector<std::size_t> comp(n, unset);
  std::size_t next = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (comp[i] != unset) continue;
    for (std::size_t j = i; j < n; ++j)
      if (reach[i][j] && reach[j][i]) comp[j] = next;
    ++next;
  }
  return comp;
}

GeneratorMasses truncated_generator_masses(const Model& mc, const StateSet& targets,
                                           std::size_t max_len) {
  const std::size_t n = mc.num_states();
  const Rows original = chain_rows(mc);
  const auto live = can_reach(original, targets);

  // Own absorbing copy: targets and dead states keep only a self-loop.
  std::vector<std::string> names(mc.names().begin(), mc.names().end());
  std::vector<std::vector<Distribution>> actions(n);
  for (StateId s = 0; s < n; ++s) {
    if (targets.contains(s) || !live[s])
      actions[s].push_back(Distribution::dirac(s));
    else
      actions[s].push_back(mc.actions(s).front());
  }
  const Model absorbed(names, mc.initial(), std::vector<std::vector<std::string>>(n), actions);
  const auto comp = closure_components(absorbed);

  GeneratorMasses out;
  if (max_len == 0) return out;
  const StateId s0 = mc.initial();
  if (!live[s0]) return out;
  if (targets.contains(s0)) {
    out.mass[{s0}] = 1.0;
    return out;
  }

  std::map<std::pair<StateId, Rail>, double> frontier{{{s0, Rail{s0}}, 1.0}};
  for (std::size_t len = 1; len < max_len && !frontier.empty(); ++len) {
    std::map<std::pair<StateId, Rail>, double> next;
    for (const auto& [key, p] : frontier) {
      const auto& [s, rail] = key;
      for (const auto& t : absorbed.actions(s).front().entries()) {
        if (!live[t.target]) continue;
        const double q = p * t.probability;
        Rail extended = rail;
        if (comp[t.target] != comp[s]) extended.push_back(t.target);
        if (targets.contains(t.target))
          out.mass[extended] += q;
        else
          next[{t.target, std::move(extended)}] += q;
      }
    }
    frontier = std::move(next);
  }
  for (const auto& [key, p] : frontier) out.tail_bound += p;
  return out;
}

std::vector<RailMass> exhaustive_rails(const AcyclicReduction& red, const StateSet& targets) {
  std::vector<RailMass> out;
  Rail rail{red.origin().initial()};
  auto visit = [&](auto&& self, double mass) -> void {
    const StateId s = rail.back();
    if (targets.contains(s)) {
      out.push_back({rail, mass});
      return;
    }
    for (const auto& t : red.step_row(s)) {
      if (t.target == s) continue;
      rail.push_back(t.target);
      self(self, mass * t.probability);
      rail.pop_back();
    }
  };
  visit(visit, 1.0);
  return out;
}

SubsetChoice brute_force_counterexample(std::span<const double> masses, const PropertySpec& spec) {
  if (masses.size() > 22) throw Error("too many masses for subset enumeration");
  SubsetChoice best;
  const std::uint64_t subsets = std::uint64_t{1} << masses.size();
  for (std::uint64_t mask = 0; mask < subsets; ++mask) {
    std::vector<double> chosen;
    for (std::size_t i = 0; i < masses.size(); ++i)
      if (mask >> i & 1) chosen.push_back(masses[i]);
    std::sort(chosen.begin(), chosen.end(), std::greater<>());
    double sum = 0.0;
    for (double m : chosen) sum += m;
    if (!spec.violated_by(sum)) continue;
    if (!best.exists || chosen.size() < best.count ||
        (chosen.size() == best.count && sum > best.mass))
      best = {true, chosen.size(), sum};
  }
  return best;
}

SampleRun monte_carlo_classify(const Model& mc_psi, const AcyclicReduction& red,
                               std::span<const Rail> rails, std::size_t count, std::uint64_t seed,
                               std::size_t max_steps) {
  const Rows rows = chain_rows(mc_psi);
  std::unordered_map<StateId, std::vector<std::size_t>> by_last;
  for (std::size_t i = 0; i < rails.size(); ++i) by_last[rails[i].back()].push_back(i);

  SampleRun run;
  run.seed = seed;
  run.count = count;
  std::mt19937_64 rng(seed);
  FinitePath path;
  for (std::size_t k = 0; k < count; ++k) {
    path.assign(1, mc_psi.initial());
    bool finished = false;
    for (std::size_t step = 0; step <= max_steps; ++step) {
      const auto row = rows[path.back()];
      if (row.size() == 1 && row.front().target == path.back()) {
        finished = true;
        break;
      }
      if (step == max_steps) break;
      const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
      double acc = 0.0;
      StateId pick = row.back().target;
      for (const auto& t : row) {
        acc += t.probability;
        if (u < acc) {
          pick = t.target;
          break;
        }
      }
      path.push_back(pick);
    }
    if (!finished) {
      ++run.unclassified;
      continue;
    }
    const std::size_t none = rails.size();
    std::size_t hit = none;
    if (auto it = by_last.find(path.back()); it != by_last.end())
      for (std::size_t i : it->second)
        if (generator_member(red, rails[i], path)) {
          if (hit != none) throw Error("a sampled path generates two rails");
          hit = i;
        }
    if (hit == none)
      ++run.unclassified;
    else
      ++run.classified[rails[hit]];
  }
  return run;
}

}  // namespace torrent::oracle
