#include "doctest.h"
#include "support.hpp"
#include "torrent/errors.hpp"
#include "torrent/model.hpp"

using namespace torrent;
using torrent::testing::fixture;

TEST_SUITE("model") {

TEST_CASE("self-loop chain parses with five states") {
  const Model m = fixture("self_loops.json");
  CHECK(m.num_states() == 5);
  CHECK(m.name(m.initial()) == "s0");
  CHECK(is_markov_chain(m));
  CHECK(m.has_label(m.id("s3"), "psi"));
  CHECK_FALSE(m.has_label(m.id("s0"), "psi"));
}

TEST_CASE("two-action MDP keeps both distributions at s0") {
  const Model m = fixture("two_actions.json");
  CHECK(m.num_actions(m.id("s0")) == 2);
  CHECK_FALSE(is_markov_chain(m));
}

TEST_CASE("single absorbing state is a chain") {
  const Model m = parse_model(R"({"states":["x"],"initial":"x","transitions":{"x":[{"x":1}]}})");
  CHECK(is_markov_chain(m));
  CHECK(m.is_absorbing(0));
}

TEST_CASE("row sum off by 0.1 names the state") {
  const char* doc = R"({"states":["s0","s1"],"initial":"s0",
    "transitions":{"s0":[{"s1":1}],"s1":[{"s1":0.9}]}})";
  try {
    parse_model(doc);
    FAIL("expected a validation error");
  } catch (const ValidationError& e) {
    CHECK(std::string(e.what()).find("'s1'") != std::string::npos);
  }
}

TEST_CASE("tolerance is configurable") {
  const char* doc = R"({"states":["a"],"initial":"a","transitions":{"a":[{"a":0.9999}]}})";
  CHECK_THROWS_AS(parse_model(doc), ValidationError);
  CHECK_NOTHROW(parse_model(doc, 1e-3));
}

TEST_CASE("syntax errors carry line and column") {
  try {
    parse_model("{\n  \"states\": [\"a\",\n}");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.line() == 3);
    CHECK(e.column() >= 1);
  }
}

TEST_CASE("schema errors") {
  CHECK_THROWS_AS(parse_model(R"({"states":["a"],"transitions":{"a":[{"a":1}]}})"), ValidationError);
  CHECK_THROWS_AS(parse_model(R"({"states":["a"],"initial":"b","transitions":{"a":[{"a":1}]}})"),
                  ValidationError);
  CHECK_THROWS_AS(parse_model(R"({"states":["a"],"initial":"a","transitions":{"a":[{"z":1}]}})"),
                  ValidationError);
  CHECK_THROWS_AS(parse_model(R"({"states":["a","b"],"initial":"a","transitions":{"a":[{"b":1}]}})"),
                  ValidationError);
}

TEST_CASE("successors") {
  const Model m0 = fixture("self_loops.json");
  CHECK(successors(m0, m0.id("s0")) == std::vector<StateId>{m0.id("s1"), m0.id("s2")});
  CHECK(successors(m0, m0.id("s3")) == std::vector<StateId>{m0.id("s3")});
  const Model mdp = fixture("two_actions.json");
  CHECK(successors(mdp, mdp.id("s0")) == std::vector<StateId>{mdp.id("s1"), mdp.id("s2")});
}

TEST_CASE("cylinder probabilities") {
  const Model m = fixture("self_loops.json");
  CHECK(cylinder_prob(m, m.path({"s0", "s1", "s3"})) == doctest::Approx(0.2).epsilon(1e-12));
  CHECK(cylinder_prob(m, m.path({"s0"})) == 1.0);
  CHECK(cylinder_prob(m, m.path({"s0", "s2", "s4"})) == doctest::Approx(0.006).epsilon(1e-12));
  CHECK_THROWS_AS(cylinder_prob(m, m.path({"s0", "s3"})), PathError);
  CHECK_THROWS_AS(cylinder_prob(m, FinitePath{}), PathError);
  CHECK_THROWS_AS(cylinder_prob(fixture("two_actions.json"), FinitePath{0}), PathError);
}

TEST_CASE("serialization round trip") {
  for (const char* name : {"self_loops.json", "two_components.json", "single_loop.json", "two_actions.json"}) {
    const Model m = fixture(name);
    const std::string text = serialize_model(m);
    const Model back = parse_model(text);
    CHECK(back == m);
    CHECK(serialize_model(back) == text);
  }
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const Model m = torrent::testing::random_mdp(seed);
    CHECK(parse_model(serialize_model(m)) == m);
  }
}

TEST_CASE("cylinder probability is multiplicative") {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const Model m = torrent::testing::random_chain(seed);
    FinitePath path{m.initial()};
    std::mt19937_64 rng(seed);
    for (int step = 0; step < 8; ++step) {
      const auto row = m.actions(path.back()).front().entries();
      const auto& t = row[rng() % row.size()];
      const double before = cylinder_prob(m, path);
      path.push_back(t.target);
      CHECK(cylinder_prob(m, path) == doctest::Approx(before * t.probability).epsilon(1e-12));
    }
  }
}

TEST_CASE("every parsed row sums to one") {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const Model m = parse_model(serialize_model(torrent::testing::random_mdp(seed)));
    for (StateId s = 0; s < m.num_states(); ++s)
      for (const auto& d : m.actions(s)) CHECK(std::abs(d.total() - 1.0) <= 1e-9);
  }
}

}
