#include "torrent/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "torrent/errors.hpp"

namespace torrent {

ParseError::ParseError(const std::string& message, std::size_t line, std::size_t column)
    : Error("line " + std::to_string(line) + ", column " + std::to_string(column) + ": " +
            message),
      line_(line),
      column_(column) {}

PropertyError::PropertyError(const std::string& message, std::size_t position)
    : Error("at position " + std::to_string(position) + ": " + message), position_(position) {}

SingularMatrixError::SingularMatrixError(std::size_t pivot)
    : Error("singular matrix (zero pivot in column " + std::to_string(pivot) + ")"),
      pivot_(pivot) {}

ConvergenceError::ConvergenceError(std::size_t iterations, double residual)
    : Error([&] {
        std::ostringstream out;
        out << "value iteration did not converge after " << iterations
            << " iterations (residual " << residual << ")";
        return out.str();
      }()),
      iterations_(iterations),
      residual_(residual) {}

// ---------------------------------------------------------------------------

Distribution::Distribution(std::vector<Transition> entries) : entries_(std::move(entries)) {
  std::sort(entries_.begin(), entries_.end(),
            [](const Transition& a, const Transition& b) { return a.target < b.target; });
}

Distribution Distribution::dirac(StateId state) { return Distribution({{state, 1.0}}); }

double Distribution::probability(StateId target) const {
  auto it = std::lower_bound(entries_.begin(), entries_.end(), target,
                             [](const Transition& t, StateId s) { return t.target < s; });
  return it != entries_.end() && it->target == target ? it->probability : 0.0;
}

double Distribution::total() const {
  double sum = 0.0;
  for (const auto& t : entries_) sum += t.probability;
  return sum;
}

bool Distribution::is_dirac_on(StateId state) const {
  return entries_.size() == 1 && entries_[0].target == state && entries_[0].probability == 1.0;
}

// ---------------------------------------------------------------------------

StateSet::StateSet(std::size_t universe, std::initializer_list<StateId> members)
    : bits_(universe, false) {
  for (StateId s : members) insert(s);
}

StateSet StateSet::all(std::size_t universe) {
  StateSet set(universe);
  set.bits_.assign(universe, true);
  return set;
}

StateSet StateSet::from(std::size_t universe, std::span<const StateId> members) {
  StateSet set(universe);
  for (StateId s : members) set.insert(s);
  return set;
}

std::size_t StateSet::size() const {
  return static_cast<std::size_t>(std::count(bits_.begin(), bits_.end(), true));
}

std::vector<StateId> StateSet::members() const {
  std::vector<StateId> out;
  for (std::size_t i = 0; i < bits_.size(); ++i)
    if (bits_[i]) out.push_back(static_cast<StateId>(i));
  return out;
}

StateSet StateSet::complement() const {
  StateSet out(universe());
  for (std::size_t i = 0; i < bits_.size(); ++i) out.bits_[i] = !bits_[i];
  return out;
}

StateSet StateSet::operator|(const StateSet& other) const {
  StateSet out(std::max(universe(), other.universe()));
  for (std::size_t i = 0; i < out.bits_.size(); ++i)
    out.bits_[i] = contains(static_cast<StateId>(i)) || other.contains(static_cast<StateId>(i));
  return out;
}

StateSet StateSet::operator&(const StateSet& other) const {
  StateSet out(std::max(universe(), other.universe()));
  for (std::size_t i = 0; i < out.bits_.size(); ++i)
    out.bits_[i] = contains(static_cast<StateId>(i)) && other.contains(static_cast<StateId>(i));
  return out;
}

// ---------------------------------------------------------------------------

Model::Model(std::vector<std::string> names, StateId initial,
             std::vector<std::vector<std::string>> labels,
             std::vector<std::vector<Distribution>> actions, double row_tolerance)
    : names_(std::move(names)),
      initial_(initial),
      labels_(std::move(labels)),
      actions_(std::move(actions)) {
  const std::size_t n = names_.size();
  if (n == 0) throw ValidationError("model has no states");
  if (n > std::numeric_limits<StateId>::max()) throw ValidationError("too many states");
  for (std::size_t i = 0; i < n; ++i) {
    if (names_[i].empty()) throw ValidationError("state " + std::to_string(i) + " has an empty name");
    if (!index_.emplace(names_[i], static_cast<StateId>(i)).second)
      throw ValidationError("duplicate state name '" + names_[i] + "'");
  }
  if (initial_ >= n) throw ValidationError("initial state is not a state of the model");

  labels_.resize(n);
  for (auto& set : labels_) {
    std::sort(set.begin(), set.end());
    set.erase(std::unique(set.begin(), set.end()), set.end());
  }

  if (actions_.size() != n)
    throw ValidationError("transition table has " + std::to_string(actions_.size()) +
                          " rows for " + std::to_string(n) + " states");
  for (std::size_t s = 0; s < n; ++s) {
    const std::string& who = names_[s];
    if (actions_[s].empty()) throw ValidationError("state '" + who + "' has no distribution");
    if (actions_[s].size() != 1) markov_chain_ = false;
    for (std::size_t a = 0; a < actions_[s].size(); ++a) {
      const Distribution& d = actions_[s][a];
      const std::string where = "state '" + who + "', distribution " + std::to_string(a);
      if (d.support_size() == 0) throw ValidationError(where + " is empty");
      StateId previous = 0;
      for (std::size_t k = 0; k < d.entries().size(); ++k) {
        const Transition& t = d.entries()[k];
        if (t.target >= n) throw ValidationError(where + " targets an unknown state");
        if (k > 0 && t.target == previous)
          throw ValidationError(where + " lists target '" + names_[t.target] + "' twice");
        previous = t.target;
        if (!(t.probability > 0.0) || t.probability > 1.0 + row_tolerance || !std::isfinite(t.probability))
          throw ValidationError(where + " has probability " + std::to_string(t.probability) +
                                " for '" + names_[t.target] + "' outside (0, 1]");
      }
      const double sum = d.total();
      if (std::abs(sum - 1.0) > row_tolerance) {
        std::ostringstream msg;
        msg.precision(17);
        msg << where << " sums to " << sum << " instead of 1";
        throw ValidationError(msg.str());
      }
    }
  }
}

std::optional<StateId> Model::find(std::string_view name) const {
  auto it = index_.find(std::string(name));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

StateId Model::id(std::string_view name) const {
  if (auto s = find(name)) return *s;
  throw ValidationError("unknown state '" + std::string(name) + "'");
}

bool Model::has_label(StateId s, std::string_view label) const {
  const auto& set = labels_.at(s);
  return std::binary_search(set.begin(), set.end(), label);
}

bool Model::is_absorbing(StateId s) const {
  const auto& acts = actions_.at(s);
  return std::all_of(acts.begin(), acts.end(), [s](const Distribution& d) { return d.is_dirac_on(s); });
}

double Model::probability(StateId from, StateId to) const {
  if (!markov_chain_) throw PathError("transition probability requested on an MDP");
  return actions_.at(from).front().probability(to);
}

FinitePath Model::path(std::initializer_list<std::string_view> names) const {
  FinitePath out;
  out.reserve(names.size());
  for (auto n : names) out.push_back(id(n));
  return out;
}

FinitePath Model::path(std::span<const std::string> names) const {
  FinitePath out;
  out.reserve(names.size());
  for (const auto& n : names) out.push_back(id(n));
  return out;
}

std::vector<std::string> Model::names_of(std::span<const StateId> path) const {
  std::vector<std::string> out;
  out.reserve(path.size());
  for (StateId s : path) out.push_back(name(s));
  return out;
}

bool Model::operator==(const Model& other) const {
  return names_ == other.names_ && initial_ == other.initial_ && labels_ == other.labels_ &&
         actions_ == other.actions_;
}

bool is_markov_chain(const Model& m) { return m.is_markov_chain(); }

std::vector<StateId> successors(const Model& m, StateId s) {
  std::vector<StateId> out;
  for (const auto& d : m.actions(s))
    for (const auto& t : d.entries()) out.push_back(t.target);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

double cylinder_prob(const Model& mc, std::span<const StateId> path) {
  if (!mc.is_markov_chain()) throw PathError("cylinder probability requires a Markov chain");
  if (path.empty()) throw PathError("empty path");
  double p = 1.0;
  for (std::size_t i = 0; i + 1 < path.size(); ++i) {
    const double step = mc.probability(path[i], path[i + 1]);
    if (step <= 0.0)
      throw PathError("no transition from '" + mc.name(path[i]) + "' to '" +
                      mc.name(path[i + 1]) + "'");
    p *= step;
  }
  return p;
}

}  // namespace torrent
