#include "doctest.h"
#include "support.hpp"
#include "torrent/errors.hpp"
#include "torrent/props.hpp"

using namespace torrent;
using torrent::testing::fixture;

TEST_SUITE("props") {

TEST_CASE("basic properties") {
  const PropertySpec a = parse_property("P<=0.5 [ F psi ]");
  CHECK(a.bound == Bound::at_most);
  CHECK(a.threshold == 0.5);
  CHECK(a.target == StateFormula::atom("psi"));

  const PropertySpec b = parse_property("P<1 [ F goal & !err ]");
  CHECK(b.bound == Bound::below);
  CHECK(b.threshold == 1.0);
  CHECK(b.target.kind() == StateFormula::Kind::conjunction);
  CHECK(b.target.rhs().kind() == StateFormula::Kind::negation);
}

TEST_CASE("threshold outside the unit interval") {
  CHECK_THROWS_AS(parse_property("P<=1.2 [ F psi ]"), PropertyError);
}

TEST_CASE("syntax errors report a position") {
  try {
    parse_property("P<=0.5 [ G psi ]");
    FAIL("expected an error");
  } catch (const PropertyError& e) {
    CHECK(e.position() == 9);
  }
  CHECK_THROWS_AS(parse_property("P>=0.5 [ F psi ]"), PropertyError);
  CHECK_THROWS_AS(parse_property("P<=0.5 [ F psi"), PropertyError);
  CHECK_THROWS_AS(parse_property("P<=0.5 [ F (a | b ]"), PropertyError);
  CHECK_THROWS_AS(parse_property("P<=0.5 [ F a ] extra"), PropertyError);
}

TEST_CASE("precedence") {
  const StateFormula f = parse_formula("a | b & !c");
  CHECK(f.kind() == StateFormula::Kind::disjunction);
  CHECK(f.rhs().kind() == StateFormula::Kind::conjunction);
  CHECK(parse_formula("(a | b) & c").kind() == StateFormula::Kind::conjunction);
  CHECK(parse_formula("(a | b) & c").to_string() == "(a | b) & c");
  CHECK(parse_formula("a & (b & c)").to_string() == "a & (b & c)");
  CHECK(parse_formula("!(a & b)").to_string() == "!(a & b)");
}

TEST_CASE("printing then parsing is the identity") {
  for (const char* text : {"P<=0.5 [ F psi ]", "P<1 [ F goal & !err ]", "P<=0 [ F !(a | b) & c ]",
                           "P<0.125 [ F a | b | c & d ]", "P<=1 [ F \"with space\" ]"}) {
    const PropertySpec p = parse_property(text);
    CHECK(parse_property(p.to_string()) == p);
  }
}

TEST_CASE("sat_states on the self-loop chain") {
  const Model m = fixture("self_loops.json");
  CHECK(sat_states(m, parse_formula("psi")).members() == std::vector<StateId>{3, 4});
  CHECK(sat_states(m, parse_formula("!psi")).members() == std::vector<StateId>{0, 1, 2});
  CHECK(sat_states(m, parse_formula("psi & !psi")).empty());
}

TEST_CASE("complement and union laws") {
  const char* formulas[] = {"goal", "!goal", "goal | other", "goal & !goal", "other"};
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    const Model m = torrent::testing::random_mdp(seed);
    for (const char* a : formulas)
      for (const char* b : formulas) {
        const auto fa = parse_formula(a);
        const auto fb = parse_formula(b);
        CHECK(sat_states(m, StateFormula::negation(fa)) == sat_states(m, fa).complement());
        CHECK(sat_states(m, StateFormula::disjunction(fa, fb)) ==
              (sat_states(m, fa) | sat_states(m, fb)));
      }
  }
}

TEST_CASE("bound semantics") {
  const PropertySpec at_most = parse_property("P<=0.5 [ F psi ]");
  CHECK_FALSE(at_most.violated_by(0.5));
  CHECK(at_most.violated_by(0.6));
  const PropertySpec below = parse_property("P<0.5 [ F psi ]");
  CHECK(below.violated_by(0.5));
  CHECK_FALSE(below.violated_by(0.4));
  CHECK(parse_property("P<0 [ F psi ]").violated_by(0.0));
}

}
