#include "srn/graph.hpp"

#include <algorithm>
#include <functional>

#include "srn/exact.hpp"

namespace srn {

ComponentIndex::ComponentIndex(const ReactionNetwork& net) {
  int nc = net.num_complexes();
  comp_of_.assign(nc, -1);

  // Connected components by union over undirected edges.
  std::vector<int> parent(nc);
  for (int i = 0; i < nc; ++i) parent[i] = i;
  std::function<int(int)> find = [&](int a) {
    while (parent[a] != a) a = parent[a] = parent[parent[a]];
    return a;
  };
  for (int r = 0; r < net.num_reactions(); ++r) {
    int a = find(net.reaction(r).source);
    int b = find(net.reaction(r).target);
    if (a != b) parent[a] = b;
  }

  // Tarjan strongly connected components over the whole digraph.
  std::vector<int> low(nc, 0), disc(nc, -1), scc_of(nc, -1), stack;
  std::vector<char> on_stack(nc, 0);
  int timer = 0, scc_count = 0;
  std::function<void(int)> dfs = [&](int v) {
    disc[v] = low[v] = timer++;
    stack.push_back(v);
    on_stack[v] = 1;
    for (int r : net.outgoing(v)) {
      int w = net.reaction(r).target;
      if (disc[w] < 0) {
        dfs(w);
        low[v] = std::min(low[v], low[w]);
      } else if (on_stack[w]) {
        low[v] = std::min(low[v], disc[w]);
      }
    }
    if (low[v] == disc[v]) {
      while (true) {
        int w = stack.back();
        stack.pop_back();
        on_stack[w] = 0;
        scc_of[w] = scc_count;
        if (w == v) break;
      }
      ++scc_count;
    }
  };
  for (int v = 0; v < nc; ++v) {
    if (disc[v] < 0) dfs(v);
  }

  // Canonical component ids: order by smallest member in canonical order.
  std::vector<int> roots;
  for (int v = 0; v < nc; ++v) {
    if (find(v) == v) roots.push_back(v);
  }
  std::vector<int> best(nc, -1);  // root -> canonically smallest member
  for (int v = 0; v < nc; ++v) {
    int r = find(v);
    if (best[r] < 0 || net.canonical_rank(v) < net.canonical_rank(best[r])) best[r] = v;
  }
  std::sort(roots.begin(), roots.end(), [&](int a, int b) {
    return net.canonical_rank(best[a]) < net.canonical_rank(best[b]);
  });
  members_.resize(roots.size());
  strong_.assign(roots.size(), 1);
  std::vector<int> comp_of_root(nc, -1);
  for (std::size_t k = 0; k < roots.size(); ++k) comp_of_root[roots[k]] = static_cast<int>(k);
  for (int v = 0; v < nc; ++v) {
    int k = comp_of_root[find(v)];
    comp_of_[v] = k;
    members_[k].push_back(v);
  }
  for (auto& m : members_) {
    std::sort(m.begin(), m.end(),
              [&](int a, int b) { return net.canonical_rank(a) < net.canonical_rank(b); });
  }
  // A component is strongly connected iff all members share one SCC.
  for (std::size_t k = 0; k < members_.size(); ++k) {
    for (int v : members_[k]) {
      if (scc_of[v] != scc_of[members_[k][0]]) {
        strong_[k] = 0;
        break;
      }
    }
  }
}

ComponentIndex components(const ReactionNetwork& net) { return ComponentIndex(net); }

bool is_weakly_reversible(const ReactionNetwork& net) {
  ComponentIndex ci(net);
  for (int k = 0; k < ci.num_components(); ++k) {
    if (!ci.strong(k)) return false;
  }
  return true;
}

bool is_reversible(const ReactionNetwork& net) {
  for (int r = 0; r < net.num_reactions(); ++r) {
    const auto& rx = net.reaction(r);
    if (net.find_reaction(rx.target, rx.source) < 0) return false;
  }
  return true;
}

namespace {

// Johnson-style elementary circuit enumeration. Vertices are visited in
// canonical order; each circuit is emitted rooted at its canonically
// smallest complex, which makes the rotation canonical by construction.
class CircuitFinder {
 public:
  CircuitFinder(const ReactionNetwork& net, int cap) : net_(net), cap_(cap) {
    n_ = net.num_complexes();
  }

  CycleInventory run() {
    CycleInventory inv;
    std::vector<int> order = net_.canonical_order();
    for (int root : order) {
      if (full_) break;
      root_ = root;
      blocked_.assign(n_, 0);
      blocked_by_.assign(n_, {});
      path_.clear();
      circuit(root_, inv);
    }
    inv.cap_exceeded = full_;
    return inv;
  }

 private:
  bool allowed(int v) const {
    // Restrict each pass to vertices canonically >= the root.
    return net_.canonical_rank(v) >= net_.canonical_rank(root_);
  }

  void unblock(int v) {
    blocked_[v] = 0;
    for (int w : blocked_by_[v]) {
      if (blocked_[w]) unblock(w);
    }
    blocked_by_[v].clear();
  }

  bool circuit(int v, CycleInventory& inv) {
    bool found = false;
    blocked_[v] = 1;
    path_.push_back(v);
    for (int r : net_.outgoing(v)) {
      int w = net_.reaction(r).target;
      if (!allowed(w)) continue;
      if (w == root_) {
        emit(inv);
        found = true;
        if (full_) break;
      } else if (!blocked_[w]) {
        if (circuit(w, inv)) found = true;
        if (full_) break;
      }
    }
    if (found) {
      unblock(v);
    } else {
      for (int r : net_.outgoing(v)) {
        int w = net_.reaction(r).target;
        if (!allowed(w) || w == root_) continue;
        blocked_by_[w].push_back(v);
      }
    }
    path_.pop_back();
    return found;
  }

  void emit(CycleInventory& inv) {
    if (static_cast<int>(inv.cycles.size()) >= cap_) {
      full_ = true;
      return;
    }
    Cycle c;
    for (std::size_t i = 0; i < path_.size(); ++i) {
      int from = path_[i];
      int to = i + 1 < path_.size() ? path_[i + 1] : root_;
      c.reactions.push_back(net_.find_reaction(from, to));
    }
    inv.cycles.push_back(std::move(c));
  }

  const ReactionNetwork& net_;
  int cap_;
  int n_;
  int root_ = 0;
  bool full_ = false;
  std::vector<char> blocked_;
  std::vector<std::vector<int>> blocked_by_;
  std::vector<int> path_;
};

int jump_rank(const ReactionNetwork& net) {
  std::vector<std::vector<Count>> rows;
  rows.reserve(net.num_reactions());
  for (int r = 0; r < net.num_reactions(); ++r) rows.push_back(net.jump(r));
  return integer_rank(rows);
}

int deficiency_of(const ReactionNetwork& net) {
  ComponentIndex ci(net);
  int d = net.num_complexes() - ci.num_components() - jump_rank(net);
  if (d < 0) throw Error("negative deficiency: rank bound violated");
  return d;
}

}  // namespace

CycleInventory enumerate_cycles(const ReactionNetwork& net, int cap) {
  return CircuitFinder(net, cap).run();
}

int deficiency(const ReactionNetwork& net) {
  bool has_copies = false;
  for (int c = 0; c < net.num_complexes() && !has_copies; ++c) {
    has_copies = net.complex(c).copy_tag != 0;
  }
  if (!has_copies) return deficiency_of(net);
  return deficiency_of(*essential(std::make_shared<ReactionNetwork>(net)));
}

int deficiency_raw(const ReactionNetwork& net) { return deficiency_of(net); }

}  // namespace srn
