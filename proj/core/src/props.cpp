#include "torrent/props.hpp"

#include <cctype>
#include <charconv>

#include "torrent/errors.hpp"

namespace torrent {

StateFormula::StateFormula(Kind kind, std::string label, std::shared_ptr<const StateFormula> lhs,
                           std::shared_ptr<const StateFormula> rhs)
    : kind_(kind), label_(std::move(label)), lhs_(std::move(lhs)), rhs_(std::move(rhs)) {}

StateFormula StateFormula::atom(std::string label) {
  return StateFormula(Kind::atom, std::move(label), nullptr, nullptr);
}

StateFormula StateFormula::negation(StateFormula operand) {
  return StateFormula(Kind::negation, {}, std::make_shared<const StateFormula>(std::move(operand)),
                      nullptr);
}

StateFormula StateFormula::conjunction(StateFormula lhs, StateFormula rhs) {
  return StateFormula(Kind::conjunction, {}, std::make_shared<const StateFormula>(std::move(lhs)),
                      std::make_shared<const StateFormula>(std::move(rhs)));
}

StateFormula StateFormula::disjunction(StateFormula lhs, StateFormula rhs) {
  return StateFormula(Kind::disjunction, {}, std::make_shared<const StateFormula>(std::move(lhs)),
                      std::make_shared<const StateFormula>(std::move(rhs)));
}

bool StateFormula::holds(const Model& m, StateId s) const {
  switch (kind_) {
    case Kind::atom:
      return m.has_label(s, label_);
    case Kind::negation:
      return !lhs_->holds(m, s);
    case Kind::conjunction:
      return lhs_->holds(m, s) && rhs_->holds(m, s);
    case Kind::disjunction:
      return lhs_->holds(m, s) || rhs_->holds(m, s);
  }
  return false;
}

namespace {

int precedence(StateFormula::Kind kind) {
  switch (kind) {
    case StateFormula::Kind::disjunction:
      return 1;
    case StateFormula::Kind::conjunction:
      return 2;
    case StateFormula::Kind::negation:
      return 3;
    case StateFormula::Kind::atom:
      return 4;
  }
  return 0;
}

bool is_identifier_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool is_identifier_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

bool is_identifier(const std::string& s) {
  if (s.empty() || !is_identifier_start(s[0])) return false;
  for (char c : s)
    if (!is_identifier_char(c)) return false;
  return true;
}

std::string wrap(const StateFormula& f, bool parens) {
  return parens ? "(" + f.to_string() + ")" : f.to_string();
}

}  // namespace

std::string StateFormula::to_string() const {
  switch (kind_) {
    case Kind::atom:
      return is_identifier(label_) ? label_ : "\"" + label_ + "\"";
    case Kind::negation:
      return "!" + wrap(*lhs_, precedence(lhs_->kind_) < precedence(kind_));
    case Kind::conjunction:
    case Kind::disjunction: {
      const int mine = precedence(kind_);
      const char* op = kind_ == Kind::conjunction ? " & " : " | ";
      // Left-associative: a right operand of equal precedence needs parentheses.
      return wrap(*lhs_, precedence(lhs_->kind_) < mine) + op +
             wrap(*rhs_, precedence(rhs_->kind_) <= mine);
    }
  }
  return {};
}

bool StateFormula::operator==(const StateFormula& other) const {
  if (kind_ != other.kind_) return false;
  switch (kind_) {
    case Kind::atom:
      return label_ == other.label_;
    case Kind::negation:
      return *lhs_ == *other.lhs_;
    default:
      return *lhs_ == *other.lhs_ && *rhs_ == *other.rhs_;
  }
}

bool PropertySpec::violated_by(double mass) const {
  return bound == Bound::at_most ? mass > threshold + kMassSlack : mass >= threshold - kMassSlack;
}

std::string PropertySpec::to_string() const {
  char buffer[64];
  auto [end, ec] = std::to_chars(buffer, buffer + sizeof buffer, threshold);
  (void)ec;
  return std::string("P") + (bound == Bound::at_most ? "<=" : "<") + std::string(buffer, end) +
         " [ F " + target.to_string() + " ]";
}

// ---------------------------------------------------------------------------

namespace {

class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) {}

  PropertySpec property() {
    skip_space();
    expect('P', "expected 'P'");
    skip_space();
    if (peek() == '>')
      fail("lower-bounded properties are not supported; check the dual upper-bounded property "
           "P<=1-p [ F !phi ] or P<1-p [ F !phi ] instead");
    Bound bound;
    if (consume("<=")) {
      bound = Bound::at_most;
    } else if (consume("<")) {
      bound = Bound::below;
    } else {
      fail("expected '<=' or '<'");
    }
    skip_space();
    const std::size_t number_at = pos_;
    const double threshold = decimal();
    if (threshold < 0.0 || threshold > 1.0)
      throw PropertyError("threshold must lie in [0, 1]", number_at);
    skip_space();
    expect('[', "expected '['");
    skip_space();
    if (peek() != 'F' || (pos_ + 1 < text_.size() && is_identifier_char(text_[pos_ + 1])))
      fail("expected 'F'; only eventually-properties are supported");
    ++pos_;
    StateFormula target = formula();
    skip_space();
    expect(']', "expected ']'");
    skip_space();
    if (pos_ != text_.size()) fail("unexpected trailing input");
    return PropertySpec{bound, threshold, std::move(target)};
  }

  StateFormula standalone_formula() {
    StateFormula f = formula();
    skip_space();
    if (pos_ != text_.size()) fail("unexpected trailing input");
    return f;
  }

 private:
  StateFormula formula() {
    StateFormula lhs = conjunction();
    for (;;) {
      skip_space();
      if (!consume("|")) return lhs;
      lhs = StateFormula::disjunction(std::move(lhs), conjunction());
    }
  }

  StateFormula conjunction() {
    StateFormula lhs = unary();
    for (;;) {
      skip_space();
      if (!consume("&")) return lhs;
      lhs = StateFormula::conjunction(std::move(lhs), unary());
    }
  }

  StateFormula unary() {
    skip_space();
    if (consume("!")) return StateFormula::negation(unary());
    if (consume("(")) {
      StateFormula inner = formula();
      skip_space();
      expect(')', "expected ')'");
      return inner;
    }
    if (peek() == '"') {
      const std::size_t start = ++pos_;
      while (pos_ < text_.size() && text_[pos_] != '"') ++pos_;
      if (pos_ == text_.size()) throw PropertyError("unterminated quoted label", start - 1);
      std::string label(text_.substr(start, pos_ - start));
      ++pos_;
      return StateFormula::atom(std::move(label));
    }
    if (!is_identifier_start(peek())) fail("expected a label, '!' or '('");
    const std::size_t start = pos_;
    while (pos_ < text_.size() && is_identifier_char(text_[pos_])) ++pos_;
    return StateFormula::atom(std::string(text_.substr(start, pos_ - start)));
  }

  double decimal() {
    const std::size_t start = pos_;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    if (pos_ < text_.size() && text_[pos_] == '.') {
      ++pos_;
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }
    if (pos_ == start || (pos_ == start + 1 && text_[start] == '.'))
      throw PropertyError("expected a decimal threshold", start);
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(text_.data() + start, text_.data() + pos_, value);
    if (ec != std::errc() || ptr != text_.data() + pos_)
      throw PropertyError("malformed decimal threshold", start);
    return value;
  }

  char peek() const { return pos_ < text_.size() ? text_[pos_] : '\0'; }

  bool consume(std::string_view token) {
    if (text_.substr(pos_, token.size()) != token) return false;
    pos_ += token.size();
    return true;
  }

  void expect(char c, const char* message) {
    if (peek() != c) fail(message);
    ++pos_;
  }

  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  [[noreturn]] void fail(const std::string& message) const { throw PropertyError(message, pos_); }

  std::string_view text_;
  std::size_t pos_ = 0;
};

}  // namespace

PropertySpec parse_property(std::string_view text) { return Parser(text).property(); }

StateFormula parse_formula(std::string_view text) { return Parser(text).standalone_formula(); }

StateSet sat_states(const Model& m, const StateFormula& formula) {
  StateSet out(m.num_states());
  for (StateId s = 0; s < m.num_states(); ++s)
    if (formula.holds(m, s)) out.insert(s);
  return out;
}

}  // namespace torrent
