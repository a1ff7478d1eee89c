#include "srn/cleave.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <deque>
#include <limits>
#include <map>
#include <mutex>
#include <numeric>

namespace srn {

Projection Projection::identity(const ReactionNetwork& net) {
  Projection p;
  p.complex_map.resize(net.num_complexes());
  std::iota(p.complex_map.begin(), p.complex_map.end(), 0);
  p.reaction_map.resize(net.num_reactions());
  std::iota(p.reaction_map.begin(), p.reaction_map.end(), 0);
  return p;
}

Projection compose(const Projection& inner, const Projection& outer) {
  Projection p;
  p.complex_map.reserve(outer.complex_map.size());
  for (int c : outer.complex_map) p.complex_map.push_back(inner.complex_map[c]);
  p.reaction_map.reserve(outer.reaction_map.size());
  for (int r : outer.reaction_map) p.reaction_map.push_back(inner.reaction_map[r]);
  return p;
}

double rho(const ReactionNetwork& net, int z3, int r, const State& x) {
  if (r < 0 || r >= net.num_reactions()) return 0.0;
  int src = net.reaction(r).source;
  State w = add(sub(x, net.complex(z3).stoich), net.complex(src).stoich);
  double denom = 0.0;
  for (int rr : net.outgoing(src)) denom += net.rate(rr, w);
  if (denom <= 0.0) return 0.0;
  return net.rate(r, w) / denom;
}

EmbeddedDtmc embedded_dtmc(const ReactionNetwork& net, int z, const State& x) {
  ComponentIndex ci(net);
  EmbeddedDtmc d;
  d.complexes = ci.members(ci.component_of(z));
  std::size_t m = d.complexes.size();
  std::unordered_map<int, int> row;
  for (std::size_t i = 0; i < m; ++i) row[d.complexes[i]] = static_cast<int>(i);
  d.p.assign(m, std::vector<double>(m, 0.0));
  for (std::size_t i = 0; i < m; ++i) {
    for (int r : net.outgoing(d.complexes[i])) {
      d.p[i][row.at(net.reaction(r).target)] = rho(net, z, r, x);
    }
  }
  return d;
}

namespace {

// Weights for the outgoing rates of one copy of a cleaved complex z: the
// probability that the walk currently at z entered through this copy's
// incoming reaction and will exit along a given reaction, accumulated over
// all z-avoiding return walks via (I - Q)^-1 on the embedded jump chain.
class HittingSolver {
 public:
  HittingSolver(NetPtr net, int z, int in_reaction, std::vector<int> members)
      : net_(std::move(net)), z_(z), in_reaction_(in_reaction), members_(std::move(members)) {
    members_.erase(std::remove(members_.begin(), members_.end(), z_), members_.end());
    for (std::size_t i = 0; i < members_.size(); ++i) {
      row_[members_[i]] = static_cast<int>(i);
    }
    y_in_ = net_->reaction(in_reaction_).source;
  }

  // rho_{z, y_in -> z}(x) * sum over z-avoiding walks y' -> y_in.
  double weight(int y_prime, const State& x) {
    State key = x;
    {
      std::lock_guard<std::mutex> lock(mu_);
      auto it = cache_.find(key);
      if (it != cache_.end()) return value(it->second, y_prime);
    }
    Entry e = compute(x);
    std::lock_guard<std::mutex> lock(mu_);
    auto [it, fresh] = cache_.emplace(std::move(key), std::move(e));
    (void)fresh;
    return value(it->second, y_prime);
  }

 private:
  struct Entry {
    double rho_in = 0.0;
    std::vector<double> u;
  };

  double value(const Entry& e, int y_prime) const {
    if (e.rho_in == 0.0) return 0.0;
    return e.rho_in * e.u[row_.at(y_prime)];
  }

  Entry compute(const State& x) const {
    Entry e;
    if (!dominates(x, net_->complex(z_).stoich)) return e;
    std::size_t m = members_.size();
    std::vector<State> shifted;
    shifted.reserve(m);
    std::vector<double> denom(m, 0.0);
    const State& phi_z = net_->complex(z_).stoich;
    for (std::size_t i = 0; i < m; ++i) {
      State w = add(sub(x, phi_z), net_->complex(members_[i]).stoich);
      for (int r : net_->outgoing(members_[i])) denom[i] += net_->rate(r, w);
      shifted.push_back(std::move(w));
    }
    Eigen::MatrixXd a = Eigen::MatrixXd::Identity(m, m);
    for (std::size_t i = 0; i < m; ++i) {
      if (denom[i] <= 0.0) continue;
      for (int r : net_->outgoing(members_[i])) {
        int tgt = net_->reaction(r).target;
        if (tgt == z_) continue;
        a(i, row_.at(tgt)) -= net_->rate(r, shifted[i]) / denom[i];
      }
    }
    int yi = row_.at(y_in_);
    if (denom[yi] <= 0.0) return e;
    e.rho_in = net_->rate(in_reaction_, shifted[yi]) / denom[yi];
    if (e.rho_in == 0.0) return e;
    Eigen::VectorXd b = Eigen::VectorXd::Zero(m);
    b(yi) = 1.0;
    Eigen::VectorXd u = a.partialPivLu().solve(b);
    double resid = (a * u - b).cwiseAbs().maxCoeff();
    if (!std::isfinite(resid) || resid > 1e-8) {
      throw Error("walk-sum linear solve failed at state " + to_string(x));
    }
    e.u.assign(u.data(), u.data() + m);
    for (double& v : e.u) {
      if (v < 0.0) v = 0.0;
    }
    return e;
  }

  NetPtr net_;
  int z_;
  int in_reaction_;
  int y_in_ = -1;
  std::vector<int> members_;
  std::unordered_map<int, int> row_;
  mutable std::mutex mu_;
  StateMap<Entry> cache_;
};

struct Edge {
  int source = -1;
  int target = -1;
  Kinetics kinetics;
  int base_reaction = -1;
};

// Rebuild a network from an explicit edge list over a fixed complex list,
// returning the aligned base-reaction map (builder orders reactions by
// endpoint pair, not insertion).
std::pair<NetPtr, std::vector<int>> build_from_edges(const ReactionNetwork& like,
                                                     const std::vector<Complex>& complexes,
                                                     const std::vector<Edge>& edges) {
  NetworkBuilder b;
  for (const auto& s : like.species()) b.add_species(s.id);
  for (const auto& [k, v] : like.params()) b.set_param(k, v);
  for (const auto& c : complexes) b.add_complex(c.stoich, c.copy_tag, c.label);
  for (const auto& e : edges) {
    b.add_reaction(e.source, e.target, RateSpec::bound_kinetics(e.kinetics));
  }
  NetPtr net = b.build();
  std::map<std::pair<int, int>, int> base;
  for (const auto& e : edges) base[{e.source, e.target}] = e.base_reaction;
  std::vector<int> rmap(net->num_reactions());
  for (int r = 0; r < net->num_reactions(); ++r) {
    rmap[r] = base.at({net->reaction(r).source, net->reaction(r).target});
  }
  return {net, rmap};
}

// Reachability over the complex digraph with one node removed.
std::vector<char> reachable_avoiding(const ReactionNetwork& net, int from, int avoid) {
  std::vector<char> seen(net.num_complexes(), 0);
  if (from == avoid) return seen;
  std::deque<int> queue{from};
  seen[from] = 1;
  while (!queue.empty()) {
    int v = queue.front();
    queue.pop_front();
    for (int r : net.outgoing(v)) {
      int w = net.reaction(r).target;
      if (w == avoid || seen[w]) continue;
      seen[w] = 1;
      queue.push_back(w);
    }
  }
  return seen;
}

bool is_disjoint_cycles(const ReactionNetwork& net) {
  for (int c = 0; c < net.num_complexes(); ++c) {
    if (net.incoming(c).size() != 1 || net.outgoing(c).size() != 1) return false;
  }
  return true;
}

CycleInventory list_disjoint_cycles(const ReactionNetwork& net) {
  CycleInventory inv;
  std::vector<char> visited(net.num_complexes(), 0);
  for (int start : net.canonical_order()) {
    if (visited[start]) continue;
    Cycle cyc;
    int v = start;
    do {
      visited[v] = 1;
      int r = net.outgoing(v)[0];
      cyc.reactions.push_back(r);
      v = net.reaction(r).target;
    } while (v != start);
    inv.cycles.push_back(std::move(cyc));
  }
  return inv;
}

}  // namespace

CleavingResult one_node_cleave(const NetPtr& net, int z, const std::string& label_prefix) {
  if (z < 0 || z >= net->num_complexes()) throw Error("unknown complex id");
  if (!is_weakly_reversible(*net)) {
    throw Error("one-node cleaving needs a weakly reversible network");
  }
  const std::vector<int>& incoming = net->incoming(z);
  if (incoming.size() < 2) throw Error("complex has fewer than two incoming reactions");

  ComponentIndex ci(*net);
  std::vector<int> members = ci.members(ci.component_of(z));

  // Fixed complex list: untouched complexes in original order, then copies.
  std::vector<Complex> complexes;
  std::vector<int> cmap;
  std::vector<int> old_to_new(net->num_complexes(), -1);
  for (int c = 0; c < net->num_complexes(); ++c) {
    if (c == z) continue;
    old_to_new[c] = static_cast<int>(complexes.size());
    complexes.push_back(net->complex(c));
    cmap.push_back(c);
  }
  int fresh_tag = 0;
  for (int c = 0; c < net->num_complexes(); ++c) {
    if (net->complex(c).stoich == net->complex(z).stoich) {
      fresh_tag = std::max(fresh_tag, net->complex(c).copy_tag + 1);
    }
  }
  std::vector<int> copy_id(incoming.size());
  for (std::size_t i = 0; i < incoming.size(); ++i) {
    Complex c;
    c.stoich = net->complex(z).stoich;
    c.copy_tag = fresh_tag + static_cast<int>(i);
    c.label = net->complex(z).label;
    copy_id[i] = static_cast<int>(complexes.size());
    complexes.push_back(std::move(c));
    cmap.push_back(z);
  }

  std::vector<Edge> edges;
  for (int r = 0; r < net->num_reactions(); ++r) {
    const auto& rx = net->reaction(r);
    if (rx.source == z || rx.target == z) continue;
    edges.push_back({old_to_new[rx.source], old_to_new[rx.target], rx.kinetics, r});
  }
  for (std::size_t i = 0; i < incoming.size(); ++i) {
    const auto& rx = net->reaction(incoming[i]);
    edges.push_back({old_to_new[rx.source], copy_id[i], rx.kinetics, incoming[i]});
  }

  // Copy i may exit to y' only if some cycle contains both its incoming
  // reaction and z -> y', i.e. y' reaches the copy's source avoiding z.
  std::map<int, std::vector<char>> reach;
  for (int r : net->outgoing(z)) {
    int yp = net->reaction(r).target;
    if (reach.find(yp) == reach.end()) reach[yp] = reachable_avoiding(*net, yp, z);
  }
  for (std::size_t i = 0; i < incoming.size(); ++i) {
    int y_i = net->reaction(incoming[i]).source;
    auto solver = std::make_shared<HittingSolver>(net, z, incoming[i], members);
    for (int r : net->outgoing(z)) {
      int yp = net->reaction(r).target;
      if (!(yp == y_i || reach.at(yp)[y_i])) continue;
      std::string label = label_prefix + ":" + net->complex(z).label + "#" +
                          std::to_string(i + 1) + "->" + net->complex(yp).label;
      Kinetics k = Kinetics::derived(
          label, [solver, yp, net, r](std::span<const Count> x) {
            State s(x.begin(), x.end());
            return solver->weight(yp, s) * net->rate(r, s);
          });
      edges.push_back({copy_id[i], old_to_new[yp], std::move(k), r});
    }
  }

  auto [result, rmap] = build_from_edges(*net, complexes, edges);
  CleavingResult out;
  out.network = result;
  out.projection.complex_map = std::move(cmap);
  out.projection.reaction_map = std::move(rmap);
  if (is_disjoint_cycles(*result)) out.cycles = list_disjoint_cycles(*result);
  return out;
}

namespace {

// Deterministic pick among the multi-incoming complexes, optionally limited
// to an allowed subset: most incoming reactions first, ties by canonical
// complex order.
int pick_multi_incoming(const ReactionNetwork& net, const std::vector<char>* allowed) {
  int pick = -1;
  std::size_t best = 1;
  for (int c = 0; c < net.num_complexes(); ++c) {
    if (allowed && !(*allowed)[static_cast<std::size_t>(c)]) continue;
    std::size_t d = net.incoming(c).size();
    if (d < 2) continue;
    if (d > best || (d == best && net.canonical_rank(c) < net.canonical_rank(pick))) {
      best = d;
      pick = c;
    }
  }
  return pick;
}

}  // namespace

CleavingResult cleave_iterate(const NetPtr& net, const CleaveOptions& opts) {
  if (!is_weakly_reversible(*net)) throw Error("cleaving needs a weakly reversible network");
  NetPtr cur = net;
  Projection total = Projection::identity(*net);
  int step = 0;

  auto run_step = [&](int pick, std::vector<char>& allowed) {
    if (++step > opts.max_steps) throw Error("cleaving exceeded the step limit");
    auto res = one_node_cleave(cur, pick, "cl" + std::to_string(step));
    if (opts.observer) {
      CleaveStepInfo info;
      info.step = step;
      info.before = cur;
      info.after = res.network;
      info.cleaved_complex = pick;
      info.copies = static_cast<int>(cur->incoming(pick).size());
      opts.observer(info);
    }
    // Carry the allowed set over to the new id space; copies of the complex
    // just split drop out of it.
    std::vector<char> next(static_cast<std::size_t>(res.network->num_complexes()), 0);
    for (std::size_t i = 0; i < next.size(); ++i) {
      int orig = res.projection.complex_map[i];
      next[i] = orig == pick ? 0 : allowed[static_cast<std::size_t>(orig)];
    }
    allowed = std::move(next);
    total = compose(total, res.projection);
    cur = res.network;
  };

  // Phase schedule: split one multi-incoming hub, then let the extra
  // multiplicity propagate only through complexes that were single-incoming
  // when the phase began, each split at most once, until the wave dies out.
  // Greedier orders (splitting copies, or a second hub mid-phase) can feed
  // new multiplicity indefinitely on dense graphs; this order cannot, and
  // every copy it creates ends the phase with a single incoming reaction.
  while (true) {
    int z = pick_multi_incoming(*cur, nullptr);
    if (z < 0) break;
    std::vector<char> allowed(static_cast<std::size_t>(cur->num_complexes()), 0);
    for (int c = 0; c < cur->num_complexes(); ++c) {
      allowed[static_cast<std::size_t>(c)] = cur->incoming(c).size() == 1 ? 1 : 0;
    }
    run_step(z, allowed);
    while (true) {
      int y = pick_multi_incoming(*cur, &allowed);
      if (y < 0) break;
      run_step(y, allowed);
    }
  }
  if (!is_disjoint_cycles(*cur)) {
    throw Error("cleaving finished on a network that is not disjoint cycles");
  }
  CleavingResult out;
  out.network = cur;
  out.projection = std::move(total);
  out.cycles = list_disjoint_cycles(*cur);
  return out;
}

namespace {

std::vector<int> min_rotation(std::vector<int> v) {
  std::vector<int> best = v;
  for (std::size_t i = 1; i < v.size(); ++i) {
    std::rotate(v.begin(), v.begin() + 1, v.end());
    if (v < best) best = v;
  }
  return best;
}

}  // namespace

CleavingResult cut_adhere(const CleavingResult& result) {
  NetPtr net = result.network;
  if (!is_disjoint_cycles(*net)) throw Error("cut-adhere needs disjoint cycles");

  std::vector<Complex> complexes;
  for (int c = 0; c < net->num_complexes(); ++c) complexes.push_back(net->complex(c));
  std::vector<Edge> edges;
  for (int r = 0; r < net->num_reactions(); ++r) {
    const auto& rx = net->reaction(r);
    edges.push_back({rx.source, rx.target, rx.kinetics, result.projection.reaction_map[r]});
  }
  const auto& proj = result.projection.complex_map;

  bool changed = true;
  while (changed) {
    changed = false;
    // Successor edge index per complex under the current edge list.
    std::vector<int> succ(complexes.size(), -1);
    for (std::size_t e = 0; e < edges.size(); ++e) succ[edges[e].source] = static_cast<int>(e);
    std::vector<char> visited(complexes.size(), 0);
    for (std::size_t c0 = 0; c0 < complexes.size() && !changed; ++c0) {
      if (visited[c0]) continue;
      std::vector<int> nodes;
      int v = static_cast<int>(c0);
      do {
        visited[v] = 1;
        nodes.push_back(v);
        v = edges[succ[v]].target;
      } while (v != static_cast<int>(c0));
      // First repeated projected complex along the cycle.
      for (std::size_t i = 0; i < nodes.size() && !changed; ++i) {
        for (std::size_t j = i + 1; j < nodes.size() && !changed; ++j) {
          if (proj[nodes[i]] != proj[nodes[j]]) continue;
          std::size_t m = nodes.size();
          int before_j = nodes[j - 1];
          int before_i = nodes[(i + m - 1) % m];
          edges[succ[before_j]].target = nodes[i];
          edges[succ[before_i]].target = nodes[j];
          changed = true;
        }
      }
    }
  }

  auto [rebuilt, rmap] = build_from_edges(*net, complexes, edges);
  CleavingResult out;
  out.network = rebuilt;
  out.projection.complex_map = proj;
  out.projection.reaction_map = std::move(rmap);
  out.cycles = list_disjoint_cycles(*rebuilt);
  return out;
}

CleavingResult combine_similar(const CleavingResult& result) {
  NetPtr net = result.network;
  if (!is_disjoint_cycles(*net)) throw Error("combine needs disjoint cycles");
  CycleInventory cycles = list_disjoint_cycles(*net);

  // Group cycles by their projected reaction sequence up to rotation.
  std::map<std::vector<int>, std::vector<int>> groups;
  for (std::size_t i = 0; i < cycles.cycles.size(); ++i) {
    std::vector<int> projected;
    for (int r : cycles.cycles[i].reactions) {
      projected.push_back(result.projection.reaction_map[r]);
    }
    std::vector<int> key = min_rotation(projected);
    std::vector<int> sorted_key = key;
    std::sort(sorted_key.begin(), sorted_key.end());
    if (std::adjacent_find(sorted_key.begin(), sorted_key.end()) != sorted_key.end()) {
      throw Error("combine needs simple cycles (repeated projected reaction found)");
    }
    groups[key].push_back(static_cast<int>(i));
  }

  std::vector<char> drop_complex(net->num_complexes(), 0);
  // Representative edge kinetics per kept reaction id.
  std::vector<std::vector<Kinetics>> extra(net->num_reactions());
  std::vector<char> drop_reaction(net->num_reactions(), 0);
  for (const auto& [key, idxs] : groups) {
    if (idxs.size() < 2) continue;
    // Representative: the cycle holding the canonically smallest complex.
    int rep = idxs[0];
    auto smallest_rank = [&](int ci) {
      int best = std::numeric_limits<int>::max();
      for (int r : cycles.cycles[ci].reactions) {
        best = std::min(best, net->canonical_rank(net->reaction(r).source));
      }
      return best;
    };
    for (int ci : idxs) {
      if (smallest_rank(ci) < smallest_rank(rep)) rep = ci;
    }
    // Align duplicate edges to representative edges via the projection.
    std::map<int, int> rep_edge_of_base;
    for (int r : cycles.cycles[rep].reactions) {
      rep_edge_of_base[result.projection.reaction_map[r]] = r;
    }
    for (int ci : idxs) {
      if (ci == rep) continue;
      for (int r : cycles.cycles[ci].reactions) {
        int base = result.projection.reaction_map[r];
        extra[rep_edge_of_base.at(base)].push_back(net->reaction(r).kinetics);
        drop_reaction[r] = 1;
        drop_complex[net->reaction(r).source] = 1;
      }
    }
  }

  std::vector<Complex> complexes;
  std::vector<int> new_id(net->num_complexes(), -1);
  std::vector<int> cmap;
  for (int c = 0; c < net->num_complexes(); ++c) {
    if (drop_complex[c]) continue;
    new_id[c] = static_cast<int>(complexes.size());
    complexes.push_back(net->complex(c));
    cmap.push_back(result.projection.complex_map[c]);
  }
  std::vector<Edge> edges;
  for (int r = 0; r < net->num_reactions(); ++r) {
    if (drop_reaction[r]) continue;
    const auto& rx = net->reaction(r);
    Kinetics k = rx.kinetics;
    if (!extra[r].empty()) {
      std::vector<Kinetics> parts{k};
      for (auto& e : extra[r]) parts.push_back(e);
      k = Kinetics::sum(std::move(parts));
    }
    edges.push_back({new_id[rx.source], new_id[rx.target], std::move(k),
                     result.projection.reaction_map[r]});
  }

  auto [rebuilt, rmap] = build_from_edges(*net, complexes, edges);
  CleavingResult out;
  out.network = rebuilt;
  out.projection.complex_map = std::move(cmap);
  out.projection.reaction_map = std::move(rmap);
  out.cycles = list_disjoint_cycles(*rebuilt);
  return out;
}

CleavingResult cleave_full(const NetPtr& net, const CleaveOptions& opts) {
  CleavingResult staged = cleave_iterate(net, opts);
  staged = cut_adhere(staged);
  staged = combine_similar(staged);

  // Stoichiometry must project exactly.
  for (int c = 0; c < staged.network->num_complexes(); ++c) {
    if (staged.network->complex(c).stoich !=
        net->complex(staged.projection.complex_map[c]).stoich) {
      throw Error("projection violates stoichiometry compatibility");
    }
  }
  // Final cycles must biject with the elementary cycles of the input.
  CycleInventory original = enumerate_cycles(*net, opts.cycle_cap);
  if (!original.cap_exceeded) {
    std::map<std::vector<int>, int> original_keys;
    for (const auto& cyc : original.cycles) original_keys[min_rotation(cyc.reactions)] += 1;
    std::map<std::vector<int>, int> final_keys;
    for (const auto& cyc : staged.cycles.cycles) {
      std::vector<int> projected;
      for (int r : cyc.reactions) projected.push_back(staged.projection.reaction_map[r]);
      final_keys[min_rotation(projected)] += 1;
    }
    if (original_keys != final_keys) {
      throw Error("cleaved cycles are not in bijection with the input's elementary cycles");
    }
    for (const auto& [key, count] : final_keys) {
      if (count != 1) throw Error("similar cycles remain after combining");
    }
  }
  return staged;
}

}  // namespace srn
