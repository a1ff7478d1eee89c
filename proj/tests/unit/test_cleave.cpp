#include <set>
#include <vector>

#include "doctest.h"
#include "srn/cleave.hpp"
#include "srn/fixtures.hpp"
#include "srn/graph.hpp"
#include "srn/state_space.hpp"

using namespace srn;

namespace {

// Sum of derived rates per base reaction equals the base rate: the chains
// are indistinguishable state by state.
void check_rate_preservation(const ReactionNetwork& base, const CleavingResult& res,
                             const std::vector<State>& probes, double tol = 1e-9) {
  for (const State& x : probes) {
    std::vector<double> summed(static_cast<std::size_t>(base.num_reactions()), 0.0);
    for (int r = 0; r < res.network->num_reactions(); ++r) {
      summed[static_cast<std::size_t>(res.projection.reaction_map[r])] += res.network->rate(r, x);
    }
    for (int r = 0; r < base.num_reactions(); ++r) {
      CHECK(summed[static_cast<std::size_t>(r)] == doctest::Approx(base.rate(r, x)).epsilon(tol));
    }
  }
}

bool is_disjoint_cycle_union(const ReactionNetwork& net) {
  for (int c = 0; c < net.num_complexes(); ++c) {
    if (net.incoming(c).size() != 1 || net.outgoing(c).size() != 1) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("identity projection maps everything to itself") {
  NetPtr net = fixtures::triangle();
  Projection id = Projection::identity(*net);
  REQUIRE(id.complex_map.size() == 3);
  REQUIRE(id.reaction_map.size() == 6);
  for (int c = 0; c < 3; ++c) CHECK(id.complex_map[static_cast<std::size_t>(c)] == c);
  Projection twice = compose(id, id);
  CHECK(twice.complex_map == id.complex_map);
  CHECK(twice.reaction_map == id.reaction_map);
}

TEST_CASE("walk-redistribution probability and its zero conventions") {
  NetPtr net = fixtures::triangle();
  int a = net->find_complex({1, 0, 0}, 0);
  int c = net->find_complex({0, 0, 1}, 0);
  REQUIRE(a >= 0);
  REQUIRE(c >= 0);
  int a_to_b = -1;
  for (int r : net->outgoing(a)) {
    if (net->reaction(r).target == net->find_complex({0, 1, 0}, 0)) a_to_b = r;
  }
  REQUIRE(a_to_b >= 0);
  // Out of A the constants are 1 (to B) and 2 (to C), so the split is 1/3.
  CHECK(rho(*net, c, a_to_b, {1, 1, 1}) == doctest::Approx(1.0 / 3.0));
  // All rates out of the shifted state vanish: 0/0 counts as 0.
  CHECK(rho(*net, a, a_to_b, {0, 1, 1}) == 0.0);
  // Shift leaves the lattice.
  CHECK(rho(*net, c, a_to_b, {1, 1, 0}) == 0.0);
}

TEST_CASE("embedded jump chain is stochastic where defined") {
  NetPtr net = fixtures::triangle();
  int a = net->find_complex({1, 0, 0}, 0);
  EmbeddedDtmc dtmc = embedded_dtmc(*net, a, {3, 2, 2});
  REQUIRE(dtmc.complexes.size() == 3);
  for (const auto& row : dtmc.p) {
    double sum = 0.0;
    for (double v : row) {
      CHECK(v >= 0.0);
      sum += v;
    }
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
  }
  // Row of the reference complex is evaluated at the state itself.
  std::size_t ia = 0, ib = 0;
  for (std::size_t k = 0; k < dtmc.complexes.size(); ++k) {
    if (dtmc.complexes[k] == a) ia = k;
    if (dtmc.complexes[k] == net->find_complex({0, 1, 0}, 0)) ib = k;
  }
  CHECK(dtmc.p[ia][ib] == doctest::Approx(1.0 / 3.0));
}

TEST_CASE("one-node cleaving splits a complex and preserves the chain") {
  NetPtr net = fixtures::triangle();
  int a = net->find_complex({1, 0, 0}, 0);
  CleavingResult res = one_node_cleave(net, a);
  CHECK(res.network->num_complexes() == 4);
  CHECK(is_weakly_reversible(*res.network));
  REQUIRE(res.projection.complex_map.size() == 4);
  int copies = 0;
  for (int m : res.projection.complex_map) {
    if (m == a) ++copies;
  }
  CHECK(copies == 2);
  check_rate_preservation(*net, res, {{3, 2, 1}, {1, 0, 2}, {0, 1, 1}, {2, 2, 2}});
}

TEST_CASE("one-node cleaving rejects unusable inputs") {
  CHECK_THROWS_AS(one_node_cleave(fixtures::triangle(), 99), Error);
  CHECK_THROWS_AS(one_node_cleave(fixtures::birth_death(1, 1, 1), 0), Error);
  // Both complexes already have a single incoming reaction.
  CHECK_THROWS_AS(one_node_cleave(fixtures::split_pair(), 0), Error);
}

TEST_CASE("iterated cleaving reaches a disjoint-cycle union") {
  std::vector<CleaveStepInfo> steps;
  CleaveOptions opts;
  opts.observer = [&](const CleaveStepInfo& info) { steps.push_back(info); };
  CleavingResult res = cleave_iterate(fixtures::triangle(), opts);
  CHECK(is_disjoint_cycle_union(*res.network));
  CHECK_FALSE(res.cycles.cycles.empty());
  REQUIRE_FALSE(steps.empty());
  for (const auto& info : steps) {
    REQUIRE(info.before);
    REQUIRE(info.after);
    CHECK(info.copies >= 2);
    CHECK(info.after->num_complexes() == info.before->num_complexes() + info.copies - 1);
    CHECK(static_cast<int>(info.before->incoming(info.cleaved_complex).size()) == info.copies);
  }
  check_rate_preservation(*fixtures::triangle(), res, {{3, 2, 1}, {1, 1, 1}, {0, 2, 1}});
}

TEST_CASE("iterated cleaving honours its step limit") {
  CleaveOptions opts;
  opts.max_steps = 1;
  CHECK_THROWS_AS(cleave_iterate(fixtures::triangle(), opts), Error);
}

TEST_CASE("full cleaving of the triangle yields the five elementary cycles") {
  NetPtr net = fixtures::triangle();
  CleavingResult res = cleave_full(net);
  CHECK(is_disjoint_cycle_union(*res.network));
  REQUIRE(res.cycles.cycles.size() == 5);
  std::multiset<std::size_t> lengths;
  for (const auto& cy : res.cycles.cycles) lengths.insert(cy.reactions.size());
  CHECK(lengths == std::multiset<std::size_t>{2, 2, 2, 3, 3});
  // Disjoint: every complex of the cleaved network is on exactly one cycle.
  std::vector<int> hits(static_cast<std::size_t>(res.network->num_complexes()), 0);
  for (const auto& cy : res.cycles.cycles) {
    for (int r : cy.reactions) ++hits[static_cast<std::size_t>(res.network->reaction(r).source)];
  }
  for (int h : hits) CHECK(h == 1);
  check_rate_preservation(*net, res, {{3, 2, 2}, {1, 1, 1}, {2, 0, 1}, {0, 0, 3}});
}

TEST_CASE("collapsing the cleaved triangle recovers the original network") {
  NetPtr net = fixtures::triangle();
  CleavingResult res = cleave_full(net);
  NetPtr back = essential(res.network);
  REQUIRE(back->num_complexes() == 3);
  REQUIRE(back->num_reactions() == 6);
  for (const State& x : std::vector<State>{{3, 2, 2}, {1, 0, 1}, {2, 2, 0}}) {
    for (int r = 0; r < back->num_reactions(); ++r) {
      const Reaction& rb = back->reaction(r);
      int src = net->find_complex(back->complex(rb.source).stoich, 0);
      int dst = net->find_complex(back->complex(rb.target).stoich, 0);
      REQUIRE(src >= 0);
      REQUIRE(dst >= 0);
      int orig = net->find_reaction(src, dst);
      REQUIRE(orig >= 0);
      CHECK(back->rate(r, x) == doctest::Approx(net->rate(orig, x)).epsilon(1e-12));
    }
  }
}

TEST_CASE("full cleaving matches elementary cycle counts on other fixtures") {
  CleavingResult n1 = cleave_full(fixtures::network1());
  std::multiset<std::size_t> l1;
  for (const auto& cy : n1.cycles.cycles) l1.insert(cy.reactions.size());
  CHECK(l1 == std::multiset<std::size_t>{3, 3});

  CleavingResult bd = cleave_full(fixtures::birth_death_target(2, 3, 1.5, 40));
  std::multiset<std::size_t> l2;
  for (const auto& cy : bd.cycles.cycles) l2.insert(cy.reactions.size());
  CHECK(l2 == std::multiset<std::size_t>{2, 3});
  check_rate_preservation(*fixtures::birth_death_target(2, 3, 1.5, 40), bd, {{0}, {1}, {5}, {17}});
}

TEST_CASE("cleaving a disjoint-cycle union is a fixed point") {
  NetPtr net = fixtures::split_pair_copies();
  REQUIRE(is_disjoint_cycle_union(*net));
  CleavingResult res = cleave_full(net);
  CHECK(res.network->num_complexes() == net->num_complexes());
  CHECK(res.network->num_reactions() == net->num_reactions());
  CHECK(res.cycles.cycles.size() == 2);
  check_rate_preservation(*net, res, {{4, 1}, {0, 3}});
}
