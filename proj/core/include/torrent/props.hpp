#pragma once

#include <memory>
#include <string>
#include <string_view>

#include "torrent/model.hpp"

namespace torrent {

/// Propositional formula over state labels. Immutable; subtrees are shared.
class StateFormula {
 public:
  enum class Kind { atom, negation, conjunction, disjunction };

  static StateFormula atom(std::string label);
  static StateFormula negation(StateFormula operand);
  static StateFormula conjunction(StateFormula lhs, StateFormula rhs);
  static StateFormula disjunction(StateFormula lhs, StateFormula rhs);

  Kind kind() const noexcept { return kind_; }
  const std::string& label() const noexcept { return label_; }
  const StateFormula& lhs() const { return *lhs_; }
  const StateFormula& rhs() const { return *rhs_; }

  /// Labels not present on the state evaluate to false.
  bool holds(const Model& m, StateId s) const;

  /// Minimal parenthesization under `!` > `&` > `|`, left-associative.
  std::string to_string() const;

  bool operator==(const StateFormula& other) const;

 private:
  StateFormula(Kind kind, std::string label, std::shared_ptr<const StateFormula> lhs,
               std::shared_ptr<const StateFormula> rhs);

  Kind kind_;
  std::string label_;
  std::shared_ptr<const StateFormula> lhs_;
  std::shared_ptr<const StateFormula> rhs_;
};

enum class Bound { at_most, below };  // `<=` and `<`

struct PropertySpec {
  Bound bound;
  double threshold;
  StateFormula target;

  /// True when a probability mass refutes the bound: mass > p for `<=`,
  /// mass >= p for `<`. Comparisons allow kMassSlack of rounding.
  bool violated_by(double mass) const;

  std::string to_string() const;

  bool operator==(const PropertySpec&) const = default;
};

/// Absolute slack used when comparing accumulated masses against a threshold.
inline constexpr double kMassSlack = 1e-12;

/// Grammar: `P (<=|<) <decimal> [ F <formula> ]`.
PropertySpec parse_property(std::string_view text);
StateFormula parse_formula(std::string_view text);

StateSet sat_states(const Model& m, const StateFormula& formula);

}  // namespace torrent
