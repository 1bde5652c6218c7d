#include <cmath>
#include <functional>

#include "doctest.h"
#include "support.hpp"
#include "torrent/numerics.hpp"
#include "torrent/oracle.hpp"
#include "torrent/transform.hpp"

using namespace torrent;
using torrent::testing::fixture;
using torrent::testing::labelled;

namespace {

std::vector<std::string> names(const Model& m, const std::vector<StateId>& ids) {
  return m.names_of(ids);
}

const SccInfo& scc_with(const std::vector<SccInfo>& table, StateId s) {
  for (const auto& scc : table)
    if (scc.contains(s)) return scc;
  throw std::logic_error("state without component");
}

}  // namespace

TEST_SUITE("transform") {

TEST_CASE("make_absorbing") {
  const Model m0 = fixture("self_loops.json");
  CHECK(make_absorbing(m0, labelled(m0, "psi")) == m0);

  const Model back = parse_model(R"({"states":["s0","s3"],"initial":"s0","labels":{"s3":["psi"]},
    "transitions":{"s0":[{"s3":1}],"s3":[{"s0":1}]}})");
  const Model cut = make_absorbing(back, labelled(back, "psi"));
  CHECK(cut.is_absorbing(1));
  CHECK(cut.probability(0, 1) == 1.0);

  const Model trap = parse_model(R"({"states":["s0","t","g"],"initial":"s0","labels":{"g":["psi"]},
    "transitions":{"s0":[{"g":0.5,"t":0.5}],"t":[{"s0":0.5,"t":0.5}],"g":[{"g":1}]}})");
  // t can still reach g through s0, so only a true dead end is redirected.
  CHECK_FALSE(make_absorbing(trap, labelled(trap, "psi")).is_absorbing(1));
  const Model dead = parse_model(R"({"states":["s0","t","g"],"initial":"s0","labels":{"g":["psi"]},
    "transitions":{"s0":[{"g":0.5,"t":0.5}],"t":[{"t":1}],"g":[{"g":1}]}})");
  CHECK(make_absorbing(dead, labelled(dead, "psi")).is_absorbing(1));
}

TEST_CASE("absorbing copy keeps first-hit paths and their probabilities") {
  for (std::uint64_t seed = 0; seed < 60; ++seed) {
    const Model m = torrent::testing::random_chain(seed);
    const StateSet t = labelled(m, "psi");
    const auto before = oracle::enumerate_freach(m, t, 8);
    const auto after = oracle::enumerate_freach(make_absorbing(m, t), t, 8);
    REQUIRE(before.paths.size() == after.paths.size());
    for (std::size_t i = 0; i < before.paths.size(); ++i) {
      CHECK(before.paths[i].path == after.paths[i].path);
      CHECK(before.paths[i].probability == after.paths[i].probability);
    }
  }
}

TEST_CASE("components and boundaries of the two-component chain") {
  const Model m = fixture("two_components.json");
  const auto table = scc_decompose(m);
  const SccInfo k1 = scc_io(m, scc_with(table, m.id("s1")));
  const SccInfo k2 = scc_io(m, scc_with(table, m.id("s5")));
  CHECK(k1.nontrivial);
  CHECK(k2.nontrivial);
  CHECK(names(m, k1.members) == std::vector<std::string>{"s1", "s3", "s4", "s7"});
  CHECK(names(m, k2.members) == std::vector<std::string>{"s5", "s6", "s8"});
  CHECK(names(m, k1.inputs) == std::vector<std::string>{"s1"});
  CHECK(names(m, k1.outputs) == std::vector<std::string>{"s9", "s10"});
  CHECK(names(m, k2.inputs) == std::vector<std::string>{"s5", "s6"});
  CHECK(names(m, k2.outputs) == std::vector<std::string>{"s11", "s14"});
  CHECK_FALSE(scc_with(table, m.id("s0")).nontrivial);
}

TEST_CASE("self-loop chain components") {
  const Model m = fixture("self_loops.json");
  const auto table = scc_decompose(m);
  CHECK(table.size() == 5);
  for (const auto& scc : table) CHECK(scc.nontrivial == (scc.members.front() != 0));
  const SccInfo s3 = scc_io(m, scc_with(table, 3));
  CHECK(s3.inputs == std::vector<StateId>{3});
  CHECK(s3.outputs.empty());
}

TEST_CASE("acyclic chain has only absorbing nontrivial components") {
  const Model m = torrent::testing::random_dag(3);
  for (const auto& scc : scc_decompose(m)) {
    CHECK(scc.members.size() == 1);
    CHECK(scc.nontrivial == m.is_absorbing(scc.members.front()));
  }
}

TEST_CASE("reach probabilities") {
  const Model big = fixture("single_loop.json");
  const auto t = big.id("t");
  const SccInfo k = scc_reach(big, scc_io(big, scc_with(scc_decompose(big), t)));
  CHECK(k.reach.at({t, big.id("u")}) == doctest::Approx(1.0).epsilon(1e-12));

  const Model m0 = fixture("self_loops.json");
  const auto table = scc_decompose(m0);
  CHECK(scc_reach(m0, scc_io(m0, scc_with(table, 1))).reach.at({1, 3}) == doctest::Approx(1.0));
  CHECK(scc_reach(m0, scc_io(m0, scc_with(table, 2))).reach.at({2, 4}) == doctest::Approx(1.0));

  const Model f5 = fixture("two_components.json");
  const auto k1 = scc_reach(f5, scc_io(f5, scc_with(scc_decompose(f5), f5.id("s1"))));
  // x1 = 0.5 x3 + 0.5 x4, x3 = x7, x4 = 0.6 x7 + 0.4, x7 = 0.7 x1.
  CHECK(k1.reach.at({f5.id("s1"), f5.id("s9")}) == doctest::Approx(0.2 / 0.44).epsilon(1e-12));
  CHECK(k1.reach.at({f5.id("s1"), f5.id("s10")}) == doctest::Approx(0.24 / 0.44).epsilon(1e-12));
}

TEST_CASE("reduced self-loop and single-loop chains") {
  const Model m0 = fixture("self_loops.json");
  const AcyclicReduction red = acyclic_reduce(make_absorbing(m0, labelled(m0, "psi")));
  CHECK(red.kept() == StateSet::all(5));
  CHECK(red.step_probability(0, 1) == doctest::Approx(0.4));
  CHECK(red.step_probability(0, 2) == doctest::Approx(0.6));
  CHECK(red.step_probability(1, 3) == doctest::Approx(1.0));
  CHECK(red.step_probability(2, 4) == doctest::Approx(1.0));
  CHECK(red.step_probability(1, 1) == 0.0);
  CHECK(red.step_probability(3, 3) == 1.0);

  const Model big = fixture("single_loop.json");
  const AcyclicReduction rb = acyclic_reduce(make_absorbing(big, labelled(big, "psi")));
  CHECK_FALSE(rb.kept().contains(big.id("a")));
  CHECK(rb.chain().num_states() == 3);
  CHECK(rb.step_probability(big.id("s"), big.id("t")) == 1.0);
  CHECK(rb.step_probability(big.id("t"), big.id("u")) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(rb.chain().name(rb.chain().initial()) == "s");
}

TEST_CASE("acyclic input is unchanged") {
  // Only absorbing states nothing enters are dropped.
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const Model m = torrent::testing::random_dag(seed);
    const Model psi = make_absorbing(m, labelled(m, "psi"));
    const AcyclicReduction red = acyclic_reduce(psi);
    for (StateId s = 0; s < psi.num_states(); ++s) {
      if (red.kept().contains(s)) {
        const auto row = psi.actions(s).front().entries();
        CHECK(std::equal(row.begin(), row.end(), red.step_row(s).begin(), red.step_row(s).end()));
        continue;
      }
      CHECK(psi.is_absorbing(s));
      for (StateId r = 0; r < psi.num_states(); ++r)
        if (r != s) CHECK(psi.probability(r, s) == 0.0);
    }
  }
}

TEST_CASE("reduction is acyclic, stochastic and keeps the reachability probability") {
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const Model m = torrent::testing::random_chain(seed);
    const StateSet t = labelled(m, "psi");
    const AcyclicReduction red = acyclic_reduce(make_absorbing(m, t));
    const Model& chain = red.chain();
    const std::size_t n = chain.num_states();

    // Depth-first search for a cycle through non-absorbing states.
    std::vector<int> colour(n, 0);
    bool cycle = false;
    std::function<void(StateId)> dfs = [&](StateId s) {
      colour[s] = 1;
      for (const auto& e : chain.actions(s).front().entries()) {
        if (e.target == s && chain.is_absorbing(s)) continue;
        if (colour[e.target] == 1) cycle = true;
        else if (colour[e.target] == 0) dfs(e.target);
      }
      colour[s] = 2;
    };
    for (StateId s = 0; s < n; ++s)
      if (colour[s] == 0) dfs(s);
    CHECK_FALSE(cycle);

    for (StateId s = 0; s < n; ++s)
      CHECK(std::abs(chain.actions(s).front().total() - 1.0) <= 1e-7);

    StateSet ct(n);
    for (StateId s : t.members())
      if (red.kept().contains(s)) ct.insert(red.chain_state(s));
    CHECK(std::abs(max_reach(chain, ct)[chain.initial()] - max_reach(m, t)[m.initial()]) <= 1e-7);
  }
}

}
