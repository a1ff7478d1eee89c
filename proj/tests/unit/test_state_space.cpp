#include <algorithm>

#include "doctest.h"
#include "srn/fixtures.hpp"
#include "srn/graph.hpp"
#include "srn/parser.hpp"
#include "srn/state_space.hpp"

using namespace srn;

TEST_CASE("leads_to distinguishes reachable, unreachable and clipped") {
  NetPtr tri = fixtures::triangle();
  Truncation box;
  box.cap = 5;
  CHECK(leads_to(*tri, {3, 0, 0}, {0, 0, 3}, box) == Reach::Yes);
  // Conversions preserve the total count, so a sum-2 target is a definite no:
  // the whole sum-3 shell fits in the box and is exhausted.
  CHECK(leads_to(*tri, {3, 0, 0}, {2, 0, 0}, box) == Reach::No);

  NetPtr birth = parse_network("0 -> A : ma(1)\n");
  Truncation small;
  small.cap = 3;
  CHECK(leads_to(*birth, {0}, {5}, small) == Reach::BoundExhausted);

  NetPtr death = parse_network("A -> 0 : ma(1)\n");
  CHECK(leads_to(*death, {2}, {3}, Truncation{}) == Reach::No);
  CHECK(leads_to(*death, {2}, {0}, Truncation{}) == Reach::Yes);
}

TEST_CASE("a conserved shell forms an unclipped all-interior component") {
  Truncation box;
  box.cap = 3;
  IrreducibleComponent comp(*fixtures::triangle(), {1, 1, 1}, box);
  REQUIRE(comp.states().size() == 10);
  CHECK_FALSE(comp.clipped());
  CHECK(comp.num_interior() == 10);
  CHECK(std::is_sorted(comp.states().begin(), comp.states().end(),
                       [](const State& a, const State& b) { return lex_less(a, b); }));
  for (const State& x : comp.states()) {
    CHECK(x[0] + x[1] + x[2] == 3);
  }
  CHECK(comp.contains({3, 0, 0}));
  CHECK_FALSE(comp.contains({0, 0, 4}));
  CHECK(comp.index_of({0, 0, 4}) == -1);
  int i = comp.index_of({1, 1, 1});
  REQUIRE(i >= 0);
  CHECK(comp.states()[i] == State{1, 1, 1});
  CHECK(comp.origin() == State{1, 1, 1});
}

TEST_CASE("an open birth-death chain is clipped with a boundary layer") {
  NetPtr net = fixtures::birth_death(2, 3, 1.5);
  Truncation box;
  box.cap = 30;
  IrreducibleComponent comp(*net, {0}, box);
  CHECK(comp.states().size() == 31);
  CHECK(comp.clipped());
  REQUIRE(comp.states().size() > 0);
  CHECK(comp.clipped_species() == std::vector<char>{1});
  // The pair birth reaches two above, so the top two counts see terms that
  // fall outside the box.
  CHECK(comp.num_interior() == 29);
  for (std::size_t k = 0; k < comp.states().size(); ++k) {
    CHECK(comp.interior(static_cast<int>(k)) == (comp.states()[k][0] <= 28));
  }
}

TEST_CASE("per-species caps clip only the unbounded coordinate") {
  NetPtr net = fixtures::michaelis_menten({1.3, 0.9, 2.0, 1.4}, {0.8, 1.7, 2.5, 2.5});
  Truncation box;
  box.per_species = State{10, 40, 10, 30};
  IrreducibleComponent comp(*net, {10, 40, 0, 0}, box);
  CHECK(comp.states().size() == 341);
  CHECK(comp.clipped());
  // Species order (S, E*, P, E): conservation bounds everything except E.
  CHECK(comp.clipped_species() == std::vector<char>{0, 0, 0, 1});
  CHECK(comp.num_interior() == 330);
}

TEST_CASE("a transient singleton is its own component") {
  // Nothing returns to the start of a pure decay, and in-box states outside
  // the class count as zero-probability, so the singleton is interior.
  NetPtr death = parse_network("A -> 0 : ma(1)\n");
  IrreducibleComponent comp(*death, {3}, Truncation{});
  CHECK(comp.states().size() == 1);
  CHECK(comp.num_interior() == 1);
}

TEST_CASE("a box too small to hold any balance equation is rejected") {
  NetPtr net = fixtures::birth_death(2, 3, 1.5);
  Truncation box;
  box.cap = 0;
  CHECK_THROWS_AS(IrreducibleComponent(*net, {0}, box), Error);
}

TEST_CASE("shifted sets agree across complexes of a class") {
  NetPtr tri = fixtures::triangle();
  Truncation box;
  box.cap = 5;
  IrreducibleComponent comp(*tri, {1, 1, 1}, box);
  ComponentIndex ci(*tri);
  auto sets = shifted_sets(*tri, ci, comp);
  REQUIRE(sets.size() == 1);
  CHECK(sets[0].component == 0);
  CHECK(sets[0].states.size() == 6);
  for (const State& v : sets[0].states) {
    CHECK(v[0] + v[1] + v[2] == 2);
  }
}

TEST_CASE("shifted sets of both modification-chain classes coincide") {
  NetPtr net = fixtures::phosphorylation({2, 1, 1.5, 1, 2, 3});
  Truncation box;
  box.cap = 5;
  IrreducibleComponent comp(*net, {1, 4, 0}, box);
  REQUIRE(comp.states().size() == 15);
  ComponentIndex ci(*net);
  auto sets = shifted_sets(*net, ci, comp);
  REQUIRE(sets.size() == 2);
  CHECK(sets[0].states.size() == 10);
  CHECK(sets[0].states == sets[1].states);
}

TEST_CASE("shifted sets reject a clipped unbounded component") {
  NetPtr net = fixtures::birth_death_target(2, 3, 1.5, 60);
  Truncation box;
  box.cap = 30;
  IrreducibleComponent comp(*net, {0}, box);
  ComponentIndex ci(*net);
  CHECK_THROWS_AS(shifted_sets(*net, ci, comp), Error);
}

TEST_CASE("shifted sets require weak reversibility") {
  NetPtr net = fixtures::birth_death(2, 3, 1.5);
  Truncation box;
  box.cap = 30;
  IrreducibleComponent comp(*net, {0}, box);
  ComponentIndex ci(*net);
  CHECK_THROWS_AS(shifted_sets(*net, ci, comp), Error);
}

TEST_CASE("conservation laws span the lattice annihilator of the jumps") {
  auto tri = conservation_laws(*fixtures::triangle());
  REQUIRE(tri.size() == 1);
  CHECK(tri[0] == State{1, 1, 1});

  auto n1 = conservation_laws(*fixtures::network1());
  REQUIRE(n1.size() == 1);
  CHECK(n1[0] == State{1, 1, 0, 1});

  NetPtr mm = fixtures::michaelis_menten({1, 1, 1, 1}, {1, 1, 1, 1});
  auto laws = conservation_laws(*mm);
  REQUIRE(laws.size() == 2);
  for (const State& w : laws) {
    CHECK(w[3] == 0);  // the free-enzyme jump rules the last coordinate out
    for (int r = 0; r < mm->num_reactions(); ++r) {
      long dot = 0;
      auto j = mm->jump(r);
      for (std::size_t i = 0; i < w.size(); ++i) dot += w[i] * j[i];
      CHECK(dot == 0);
    }
  }

  CHECK(conservation_laws(*fixtures::birth_death(1, 1, 1)).empty());
}

TEST_CASE("a parity-preserving pair birth leaves odd counts unreached") {
  // x_C moves by two, so the component through an even count stays even.
  Truncation box;
  box.cap = 6;
  IrreducibleComponent comp(*fixtures::network1(), {1, 1, 0, 1}, box);
  CHECK(comp.states().size() > 1);
  for (const State& x : comp.states()) {
    CHECK(x[2] % 2 == 0);
  }
}
