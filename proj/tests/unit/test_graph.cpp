#include <algorithm>
#include <set>

#include "doctest.h"
#include "srn/fixtures.hpp"
#include "srn/graph.hpp"
#include "srn/parser.hpp"

using namespace srn;

TEST_CASE("linkage classes partition the complexes") {
  NetPtr net = fixtures::phosphorylation({2, 1, 1.5, 1, 2, 3});
  ComponentIndex ci(*net);
  REQUIRE(ci.num_components() == 2);
  int seen = 0;
  for (int k = 0; k < ci.num_components(); ++k) {
    CHECK(ci.strong(k));
    for (int c : ci.members(k)) {
      CHECK(ci.component_of(c) == k);
      ++seen;
    }
  }
  CHECK(seen == net->num_complexes());
}

TEST_CASE("component ids are stable under complex reordering") {
  // Same digraph over the same species list, complexes inserted in opposite
  // orders.
  auto build = [](bool reversed) {
    NetworkBuilder b({"A", "B", "C", "D"});
    std::vector<State> stoichs{{1, 0, 0, 0}, {0, 1, 0, 0}, {0, 0, 1, 0}, {0, 0, 0, 1}};
    if (reversed) std::reverse(stoichs.begin(), stoichs.end());
    std::vector<int> id;
    for (const State& s : stoichs) id.push_back(b.add_complex(s));
    if (reversed) std::reverse(id.begin(), id.end());
    b.add_reaction(id[0], id[1], RateSpec::ma(1));
    b.add_reaction(id[1], id[0], RateSpec::ma(1));
    b.add_reaction(id[2], id[3], RateSpec::ma(1));
    b.add_reaction(id[3], id[2], RateSpec::ma(1));
    return b.build();
  };
  NetPtr one = build(false);
  NetPtr two = build(true);
  ComponentIndex ci1(*one);
  ComponentIndex ci2(*two);
  REQUIRE(ci1.num_components() == 2);
  REQUIRE(ci2.num_components() == 2);
  // Component 0 holds the canonically smallest complex in both.
  auto smallest_label = [](const NetPtr& net, const ComponentIndex& ci) {
    int best = ci.members(0).front();
    for (int c : ci.members(0)) {
      if (net->canonical_rank(c) < net->canonical_rank(best)) best = c;
    }
    return net->complex(best).label;
  };
  CHECK(smallest_label(one, ci1) == smallest_label(two, ci2));
}

TEST_CASE("reversibility flags tell strong cycles from exact reverses") {
  CHECK(is_weakly_reversible(*fixtures::triangle()));
  CHECK(is_reversible(*fixtures::triangle()));
  CHECK(is_weakly_reversible(*fixtures::network1()));
  CHECK_FALSE(is_reversible(*fixtures::network1()));
  CHECK_FALSE(is_weakly_reversible(*fixtures::birth_death(1, 1, 1)));
  CHECK(is_weakly_reversible(*fixtures::michaelis_menten({1, 1, 1, 1}, {1, 1, 1, 1})));
}

TEST_CASE("elementary cycles are found once each in canonical rotation") {
  CycleInventory inv = enumerate_cycles(*fixtures::triangle());
  CHECK_FALSE(inv.cap_exceeded);
  REQUIRE(inv.cycles.size() == 5);
  std::multiset<std::size_t> lengths;
  std::set<std::vector<int>> distinct;
  for (const auto& c : inv.cycles) {
    lengths.insert(c.reactions.size());
    distinct.insert(c.reactions);
  }
  CHECK(distinct.size() == 5);
  CHECK(lengths == std::multiset<std::size_t>{2, 2, 2, 3, 3});

  CHECK(enumerate_cycles(*fixtures::network1()).cycles.size() == 2);
  // The chain with a dangling pair birth has a single cycle.
  CHECK(enumerate_cycles(*fixtures::birth_death(1, 1, 1)).cycles.size() == 1);
}

TEST_CASE("cycle enumeration respects its cap") {
  CycleInventory inv = enumerate_cycles(*fixtures::triangle(), 2);
  CHECK(inv.cap_exceeded);
  CHECK(inv.cycles.size() == 2);
}

TEST_CASE("a plain cycle of four complexes has exactly one cycle") {
  NetPtr net = parse_network("A -> B : ma(1)\nB -> C : ma(1)\nC -> D : ma(1)\nD -> A : ma(1)\n");
  CycleInventory inv = enumerate_cycles(*net);
  REQUIRE(inv.cycles.size() == 1);
  CHECK(inv.cycles[0].reactions.size() == 4);
}

TEST_CASE("deficiency counts complexes, classes and the jump span") {
  CHECK(deficiency(*fixtures::triangle()) == 0);
  CHECK(deficiency_raw(*fixtures::triangle()) == 0);
  // 3 complexes, 1 class, jump span of dimension 1.
  CHECK(deficiency_raw(*fixtures::birth_death(1, 1, 1)) == 1);
  CHECK(deficiency(*fixtures::birth_death(1, 1, 1)) == 1);
  CHECK(deficiency_raw(*fixtures::network1()) == 0);
  // Copies count as complexes in the raw graph and collapse in the essential
  // one.
  NetPtr ph = fixtures::phosphorylation({2, 1, 1.5, 1, 2, 3});
  CHECK(deficiency_raw(*ph) == 1);
  CHECK(deficiency(*ph) == 0);
  NetPtr mm = fixtures::michaelis_menten({1, 1, 1, 1}, {1, 1, 1, 1});
  CHECK(deficiency_raw(*mm) == 0);
  CHECK(deficiency(*mm) == 0);
}
