#pragma once

#include "srn/model.hpp"

namespace srn {

// Partition of complexes into connected components of the reaction digraph
// (link = edge in either direction), with per-component strong-connectivity
// flags. Component ids are canonical: sorted by the smallest contained
// complex in canonical complex order, so they are stable under permutation
// of the complex list.
class ComponentIndex {
 public:
  explicit ComponentIndex(const ReactionNetwork& net);

  int num_components() const { return static_cast<int>(members_.size()); }
  int component_of(int complex_id) const { return comp_of_[complex_id]; }
  const std::vector<int>& members(int k) const { return members_[k]; }
  bool strong(int k) const { return strong_[k] != 0; }

 private:
  std::vector<int> comp_of_;
  std::vector<std::vector<int>> members_;
  std::vector<char> strong_;
};

ComponentIndex components(const ReactionNetwork& net);

// Every connected component strongly connected; equivalently every reaction
// lies on a cycle.
bool is_weakly_reversible(const ReactionNetwork& net);

// Every reaction has its exact reverse present.
bool is_reversible(const ReactionNetwork& net);

struct Cycle {
  std::vector<int> reactions;  // consecutive; target of last = source of first
};

struct CycleInventory {
  std::vector<Cycle> cycles;
  bool cap_exceeded = false;
};

// All elementary cycles of the digraph (distinct complexes, closing), each
// reported once in canonical rotation (starting at its canonically smallest
// complex); enumeration stops with cap_exceeded once cap cycles are found.
CycleInventory enumerate_cycles(const ReactionNetwork& net, int cap = 10000);

// |C| - l - s with s the exact rational rank of the jump-vector span,
// computed on the essential network (copies collapsed).
int deficiency(const ReactionNetwork& net);
// Same formula on the raw graph, copies kept as distinct complexes.
int deficiency_raw(const ReactionNetwork& net);

}  // namespace srn
