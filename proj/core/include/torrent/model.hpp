#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <initializer_list>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace torrent {

/// Dense state index. Display names are resolved through the owning Model.
using StateId = std::uint32_t;

/// Sequence of states; consecutive pairs must be in the successor relation
/// of whatever model the path is interpreted in.
using FinitePath = std::vector<StateId>;

inline constexpr double kDefaultRowTolerance = 1e-9;

struct Transition {
  StateId target;
  double probability;

  bool operator==(const Transition&) const = default;
};

/// Discrete distribution with positive entries sorted by target.
class Distribution {
 public:
  Distribution() = default;
  explicit Distribution(std::vector<Transition> entries);

  static Distribution dirac(StateId state);

  std::span<const Transition> entries() const noexcept { return entries_; }
  std::size_t support_size() const noexcept { return entries_.size(); }
  double probability(StateId target) const;
  double total() const;
  bool is_dirac_on(StateId state) const;

  bool operator==(const Distribution&) const = default;

 private:
  std::vector<Transition> entries_;
};

/// Subset of a fixed universe of states.
class StateSet {
 public:
  StateSet() = default;
  explicit StateSet(std::size_t universe) : bits_(universe, false) {}
  StateSet(std::size_t universe, std::initializer_list<StateId> members);

  static StateSet all(std::size_t universe);
  static StateSet from(std::size_t universe, std::span<const StateId> members);

  std::size_t universe() const noexcept { return bits_.size(); }
  bool contains(StateId s) const { return s < bits_.size() && bits_[s]; }
  void insert(StateId s) { bits_.at(s) = true; }
  void erase(StateId s) { bits_.at(s) = false; }

  std::size_t size() const;
  bool empty() const { return size() == 0; }
  std::vector<StateId> members() const;

  StateSet complement() const;
  StateSet operator|(const StateSet& other) const;
  StateSet operator&(const StateSet& other) const;

  bool operator==(const StateSet&) const = default;

 private:
  std::vector<bool> bits_;
};

/// Explicit-state MDP. A Markov chain is the case with one distribution per
/// state. Instances are validated on construction and immutable afterwards.
class Model {
 public:
  Model(std::vector<std::string> names, StateId initial,
        std::vector<std::vector<std::string>> labels,
        std::vector<std::vector<Distribution>> actions,
        double row_tolerance = kDefaultRowTolerance);

  std::size_t num_states() const noexcept { return names_.size(); }
  StateId initial() const noexcept { return initial_; }

  const std::string& name(StateId s) const { return names_.at(s); }
  std::span<const std::string> names() const noexcept { return names_; }
  std::optional<StateId> find(std::string_view name) const;
  /// Like find, but throws ValidationError for an unknown name.
  StateId id(std::string_view name) const;

  std::span<const std::string> labels(StateId s) const { return labels_.at(s); }
  bool has_label(StateId s, std::string_view label) const;

  std::span<const Distribution> actions(StateId s) const { return actions_.at(s); }
  std::size_t num_actions(StateId s) const { return actions_.at(s).size(); }

  bool is_markov_chain() const noexcept { return markov_chain_; }
  bool is_absorbing(StateId s) const;

  /// Transition probability of a Markov chain; throws PathError on an MDP.
  double probability(StateId from, StateId to) const;

  FinitePath path(std::initializer_list<std::string_view> names) const;
  FinitePath path(std::span<const std::string> names) const;
  std::vector<std::string> names_of(std::span<const StateId> path) const;

  bool operator==(const Model& other) const;

 private:
  std::vector<std::string> names_;
  std::unordered_map<std::string, StateId> index_;
  StateId initial_;
  std::vector<std::vector<std::string>> labels_;
  std::vector<std::vector<Distribution>> actions_;
  bool markov_chain_ = true;
};

bool is_markov_chain(const Model& m);

/// States reachable in one step under some distribution, sorted.
std::vector<StateId> successors(const Model& m, StateId s);

/// Probability of the cylinder set of `path` in a Markov chain.
double cylinder_prob(const Model& mc, std::span<const StateId> path);

Model parse_model(std::string_view text, double row_tolerance = kDefaultRowTolerance);
Model load_model(const std::filesystem::path& file,
                 double row_tolerance = kDefaultRowTolerance);

/// JSON document with sorted keys; parse_model(serialize_model(m)) == m.
std::string serialize_model(const Model& m);

}  // namespace torrent
