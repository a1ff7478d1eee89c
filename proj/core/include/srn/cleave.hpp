#pragma once

#include <functional>

#include "srn/graph.hpp"
#include "srn/model.hpp"

namespace srn {

// Maps entities of a derived network onto the network it was built from.
// Stoichiometry is preserved exactly: phi_derived = phi_base on images.
struct Projection {
  std::vector<int> complex_map;   // derived complex id -> base complex id
  std::vector<int> reaction_map;  // derived reaction id -> base reaction id

  static Projection identity(const ReactionNetwork& net);
};

struct CleavingResult {
  NetPtr network;
  Projection projection;  // onto the input network of the producing call
  // Filled when the network is a union of disjoint cycles; empty otherwise.
  CycleInventory cycles;
};

// Compose: outer maps network2 -> network1, inner maps network1 -> network0.
Projection compose(const Projection& inner, const Projection& outer);

// Walk-redistribution probability: the chance that, at lattice state
// x - phi(z3) + phi(source(r)), the next reaction out of source(r) is r.
// Returns 0 when the denominator vanishes (the 0/0 convention) or the
// shifted state leaves the non-negative lattice.
double rho(const ReactionNetwork& net, int z3, int r, const State& x);

// Jump chain over the complexes of one connected component, evaluated at a
// fixed lattice state with reference complex z. Rows sum to 1 whenever
// x >= phi(z); entries are rho values.
struct EmbeddedDtmc {
  std::vector<int> complexes;          // members of z's component, canonical order
  std::vector<std::vector<double>> p;  // p[i][j]: complexes[i] -> complexes[j]
};
EmbeddedDtmc embedded_dtmc(const ReactionNetwork& net, int z, const State& x);

struct CleaveStepInfo {
  int step = 0;
  NetPtr before;
  NetPtr after;
  int cleaved_complex = -1;  // id in `before`
  int copies = 0;
};
using CleaveObserver = std::function<void(const CleaveStepInfo&)>;

struct CleaveOptions {
  int max_steps = 10000;
  int cycle_cap = 10000;
  CleaveObserver observer;
};

// Split complex z (p incoming reactions, p >= 2) into p copies, one per
// incoming reaction. Copy i keeps the incoming reaction i; it gets an edge
// to y' iff some cycle uses both the incoming reaction and z -> y'. Outgoing
// rates distribute the original rate of z -> y' over the copies in
// proportion to the probability that the walk that just entered z came in
// through copy i's reaction; the infinite walk sum is evaluated as an
// absorbing-chain linear solve on the embedded jump chain, never by
// truncating the series.
CleavingResult one_node_cleave(const NetPtr& net, int z, const std::string& label_prefix = "cl");

// Repeat one-node cleaving (most incoming reactions first, ties by canonical
// complex order) until every complex has exactly one incoming reaction; the
// result is a union of disjoint cycles.
CleavingResult cleave_iterate(const NetPtr& net, const CleaveOptions& opts = {});

// Split every cycle that visits two complexes with the same projection into
// shorter cycles, re-targeting the closing reactions; kinetics follow the
// displaced reactions. Requires disjoint cycles.
CleavingResult cut_adhere(const CleavingResult& result);

// Merge cycles with identical projections (as cyclic reaction sequences)
// into one representative with reaction-wise summed kinetics. Requires all
// cycles simple under projection.
CleavingResult combine_similar(const CleavingResult& result);

// cleave_iterate, then cut_adhere, then combine_similar; asserts that the
// final cycles are in bijection with the elementary cycles of the input.
CleavingResult cleave_full(const NetPtr& net, const CleaveOptions& opts = {});

}  // namespace srn
