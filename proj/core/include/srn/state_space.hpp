#pragma once

#include <optional>

#include "srn/model.hpp"
#include "srn/types.hpp"

namespace srn {

// Rectangular per-species cap on explored states. A state is inside when
// every count is between 0 and the cap for its species.
struct Truncation {
  Count cap = 30;
  std::optional<State> per_species;

  bool inside(std::span<const Count> x) const {
    for (std::size_t i = 0; i < x.size(); ++i) {
      Count c = per_species ? (*per_species)[i] : cap;
      if (x[i] < 0 || x[i] > c) return false;
    }
    return true;
  }
};

enum class Reach { Yes, No, BoundExhausted };

// True iff some firing sequence inside the truncation box turns x into
// target. BoundExhausted is reported when the search hit the box boundary
// without finding the target, so "no" would not be trustworthy.
Reach leads_to(const ReactionNetwork& net, const State& x, const State& target,
               const Truncation& trunc);

// Mutually-reachable class of an origin state inside a truncation box, with
// interior marking: a state is interior when every balance-equation term at
// it references only in-set states (shifted states are either in the set,
// off the non-negative lattice, or carry zero rate).
class IrreducibleComponent {
 public:
  IrreducibleComponent(const ReactionNetwork& net, State origin, Truncation trunc);

  const std::vector<State>& states() const { return states_; }
  bool interior(int i) const { return interior_[i] != 0; }
  int num_interior() const { return num_interior_; }
  int index_of(const State& x) const;  // -1 when absent
  bool contains(const State& x) const { return index_of(x) >= 0; }
  const State& origin() const { return origin_; }
  const Truncation& truncation() const { return trunc_; }
  // True when some enabled transition out of the class was suppressed by the
  // box, i.e. the class may be a truncation of a larger one.
  bool clipped() const { return clipped_; }
  // Per species: true when the box suppressed growth in that coordinate.
  const std::vector<char>& clipped_species() const { return clipped_species_; }

 private:
  std::vector<State> states_;  // sorted lexicographically
  StateMap<int> index_;
  std::vector<char> interior_;
  int num_interior_ = 0;
  State origin_;
  Truncation trunc_;
  bool clipped_ = false;
  std::vector<char> clipped_species_;
};

struct ShiftedSet {
  int component = -1;
  std::vector<State> states;  // sorted lexicographically
};

class ComponentIndex;

// Gamma_k = {x - phi(y) : x in Gamma, y in component k} clipped to the
// non-negative lattice; asserted identical for every choice of y in the
// component. A mismatch signals non-weak-reversibility or a truncation
// artifact and is reported as an error.
std::vector<ShiftedSet> shifted_sets(const ReactionNetwork& net,
                                     const ComponentIndex& comps,
                                     const IrreducibleComponent& comp);

// Integer basis of {w : w . jump(r) = 0 for every reaction}; conserved
// linear quantities of the dynamics.
std::vector<State> conservation_laws(const ReactionNetwork& net);

}  // namespace srn
