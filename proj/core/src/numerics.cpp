#include "torrent/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <deque>

#include "torrent/errors.hpp"

namespace torrent {

DenseMatrix DenseMatrix::identity(std::size_t n) {
  DenseMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

std::vector<double> DenseMatrix::multiply(std::span<const double> x) const {
  std::vector<double> out(rows_, 0.0);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < cols_; ++c) out[r] += (*this)(r, c) * x[c];
  return out;
}

LuFactorization::LuFactorization(DenseMatrix a) : lu_(std::move(a)) {
  if (lu_.rows() != lu_.cols()) throw Error("LU factorization needs a square matrix");
  const std::size_t n = lu_.rows();
  permutation_.resize(n);
  for (std::size_t i = 0; i < n; ++i) permutation_[i] = i;

  double scale = 0.0;
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < n; ++c) scale = std::max(scale, std::abs(lu_(r, c)));
  const double tiny = 1e-13 * scale;

  for (std::size_t k = 0; k < n; ++k) {
    std::size_t pivot = k;
    for (std::size_t r = k + 1; r < n; ++r)
      if (std::abs(lu_(r, k)) > std::abs(lu_(pivot, k))) pivot = r;
    if (!(std::abs(lu_(pivot, k)) > tiny)) throw SingularMatrixError(k);
    if (pivot != k) {
      for (std::size_t c = 0; c < n; ++c) std::swap(lu_(k, c), lu_(pivot, c));
      std::swap(permutation_[k], permutation_[pivot]);
    }
    for (std::size_t r = k + 1; r < n; ++r) {
      const double factor = lu_(r, k) / lu_(k, k);
      lu_(r, k) = factor;
      if (factor == 0.0) continue;
      for (std::size_t c = k + 1; c < n; ++c) lu_(r, c) -= factor * lu_(k, c);
    }
  }
}

std::vector<double> LuFactorization::solve(std::span<const double> b) const {
  const std::size_t n = size();
  if (b.size() != n) throw Error("right-hand side has the wrong dimension");
  std::vector<double> x(n);
  for (std::size_t i = 0; i < n; ++i) {
    double v = b[permutation_[i]];
    for (std::size_t j = 0; j < i; ++j) v -= lu_(i, j) * x[j];
    x[i] = v;
  }
  for (std::size_t i = n; i-- > 0;) {
    double v = x[i];
    for (std::size_t j = i + 1; j < n; ++j) v -= lu_(i, j) * x[j];
    x[i] = v / lu_(i, i);
  }
  return x;
}

std::vector<double> solve_linear(const DenseMatrix& a, std::span<const double> b) {
  return LuFactorization(a).solve(b);
}

// ---------------------------------------------------------------------------

namespace {

std::vector<std::vector<StateId>> predecessors(const Model& m) {
  std::vector<std::vector<StateId>> pred(m.num_states());
  for (StateId s = 0; s < m.num_states(); ++s)
    for (StateId t : successors(m, s)) pred[t].push_back(s);
  return pred;
}

double action_value(const Distribution& d, std::span<const double> x) {
  double v = 0.0;
  for (const auto& t : d.entries()) v += t.probability * x[t.target];
  return v;
}

std::vector<double> clamp_unit(std::vector<double> x) {
  for (double& v : x) v = std::clamp(v, 0.0, 1.0);
  return x;
}

}  // namespace

StateSet prob0_states(const Model& m, const StateSet& target) {
  const auto pred = predecessors(m);
  StateSet reaches(m.num_states());
  std::deque<StateId> queue;
  for (StateId s : target.members()) {
    if (s >= m.num_states()) continue;
    reaches.insert(s);
    queue.push_back(s);
  }
  while (!queue.empty()) {
    const StateId t = queue.front();
    queue.pop_front();
    for (StateId s : pred[t]) {
      if (reaches.contains(s)) continue;
      reaches.insert(s);
      queue.push_back(s);
    }
  }
  return reaches.complement();
}

std::vector<double> evaluate_choice(const Model& m, const StateSet& target,
                                    std::span<const std::size_t> choice) {
  const std::size_t n = m.num_states();
  if (choice.size() != n) throw Error("choice vector has the wrong dimension");

  // Backward search over the chosen distributions only.
  std::vector<std::vector<StateId>> pred(n);
  for (StateId s = 0; s < n; ++s)
    for (const auto& t : m.actions(s)[choice[s]].entries()) pred[t.target].push_back(s);
  std::vector<bool> reaches(n, false);
  std::deque<StateId> queue;
  for (StateId s = 0; s < n; ++s)
    if (target.contains(s)) {
      reaches[s] = true;
      queue.push_back(s);
    }
  while (!queue.empty()) {
    const StateId t = queue.front();
    queue.pop_front();
    for (StateId s : pred[t])
      if (!reaches[s]) {
        reaches[s] = true;
        queue.push_back(s);
      }
  }

  std::vector<double> x(n, 0.0);
  std::vector<std::size_t> column(n, n);
  std::vector<StateId> unknown;
  for (StateId s = 0; s < n; ++s) {
    if (target.contains(s)) {
      x[s] = 1.0;
    } else if (reaches[s]) {
      column[s] = unknown.size();
      unknown.push_back(s);
    }
  }
  if (unknown.empty()) return x;

  DenseMatrix a = DenseMatrix::identity(unknown.size());
  std::vector<double> b(unknown.size(), 0.0);
  for (std::size_t i = 0; i < unknown.size(); ++i) {
    const StateId s = unknown[i];
    for (const auto& t : m.actions(s)[choice[s]].entries()) {
      if (target.contains(t.target))
        b[i] += t.probability;
      else if (column[t.target] < n)
        a(i, column[t.target]) -= t.probability;
    }
  }
  const auto solution = solve_linear(a, b);
  for (std::size_t i = 0; i < unknown.size(); ++i) x[unknown[i]] = solution[i];
  return clamp_unit(std::move(x));
}

std::vector<std::size_t> optimal_choices(const Model& m, const StateSet& target,
                                         std::span<const double> values, double slack) {
  const std::size_t n = m.num_states();
  std::vector<std::size_t> choice(n, 0);
  std::vector<std::vector<std::size_t>> attaining(n);
  for (StateId s = 0; s < n; ++s) {
    const auto acts = m.actions(s);
    double best = -1.0;
    for (const auto& d : acts) best = std::max(best, action_value(d, values));
    for (std::size_t a = 0; a < acts.size(); ++a)
      if (action_value(acts[a], values) >= best - slack) attaining[s].push_back(a);
    choice[s] = attaining[s].front();
  }

  std::vector<bool> resolved(n, false);
  std::vector<bool> pending(n, false);
  for (StateId s = 0; s < n; ++s) {
    if (target.contains(s))
      resolved[s] = true;
    else if (values[s] > 0.0)
      pending[s] = true;
  }
  for (;;) {
    std::vector<StateId> layer;
    for (StateId s = 0; s < n; ++s) {
      if (!pending[s]) continue;
      for (std::size_t a : attaining[s]) {
        const auto entries = m.actions(s)[a].entries();
        if (std::any_of(entries.begin(), entries.end(),
                        [&](const Transition& t) { return resolved[t.target]; })) {
          choice[s] = a;
          layer.push_back(s);
          break;
        }
      }
    }
    if (layer.empty()) break;
    for (StateId s : layer) {
      resolved[s] = true;
      pending[s] = false;
    }
  }
  return choice;
}

std::vector<double> max_reach(const Model& m, const StateSet& target, const ReachOptions& options) {
  const std::size_t n = m.num_states();
  if (target.empty()) return std::vector<double>(n, 0.0);

  if (m.is_markov_chain() && options.direct_mc_solve)
    return evaluate_choice(m, target, std::vector<std::size_t>(n, 0));

  const StateSet zero = prob0_states(m, target);
  std::vector<double> x(n, 0.0);
  std::vector<StateId> unknown;
  for (StateId s = 0; s < n; ++s) {
    if (target.contains(s))
      x[s] = 1.0;
    else if (!zero.contains(s))
      unknown.push_back(s);
  }

  // Gauss-Seidel sweeps from below converge to the least fixed point.
  bool converged = unknown.empty();
  double residual = 0.0;
  std::size_t iteration = 0;
  while (!converged && iteration < options.max_iterations) {
    ++iteration;
    residual = 0.0;
    for (StateId s : unknown) {
      double best = 0.0;
      for (const auto& d : m.actions(s)) best = std::max(best, action_value(d, x));
      residual = std::max(residual, std::abs(best - x[s]));
      x[s] = best;
    }
    converged = residual < options.tolerance;
  }
  if (!converged) throw ConvergenceError(iteration, residual);

  if (!m.is_markov_chain() && options.refine_mdp) {
    auto choice = optimal_choices(m, target, x);
    for (int round = 0; round < 64; ++round) {
      auto exact = evaluate_choice(m, target, choice);
      bool improved = false;
      for (StateId s : unknown)
        for (const auto& d : m.actions(s))
          if (action_value(d, exact) > exact[s] + 1e-12) improved = true;
      // Exact values of a scheduler never exceed the optimum, so accept them
      // only when they are at least as good as the iterate.
      bool better = true;
      for (StateId s : unknown)
        if (exact[s] < x[s] - 1e-9) better = false;
      if (better) x = exact;
      if (!improved) break;
      choice = optimal_choices(m, target, x, 1e-12);
    }
  }
  return clamp_unit(std::move(x));
}

}  // namespace torrent
