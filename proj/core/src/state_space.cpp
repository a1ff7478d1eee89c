#include "srn/state_space.hpp"

#include <algorithm>
#include <deque>

#include "srn/exact.hpp"
#include "srn/graph.hpp"

namespace srn {

namespace {

bool rate_positive(const ReactionNetwork& net, int r, const State& x) {
  return net.rate(r, x) > 0.0;
}

}  // namespace

Reach leads_to(const ReactionNetwork& net, const State& x, const State& target,
               const Truncation& trunc) {
  if (x.size() != static_cast<std::size_t>(net.num_species()) || x.size() != target.size()) {
    throw Error("state length does not match species count");
  }
  if (!trunc.inside(x)) return Reach::BoundExhausted;
  if (x == target) return Reach::Yes;
  StateMap<char> seen;
  std::deque<State> queue;
  seen.emplace(x, 1);
  queue.push_back(x);
  bool clipped = false;
  while (!queue.empty()) {
    State cur = std::move(queue.front());
    queue.pop_front();
    for (int r = 0; r < net.num_reactions(); ++r) {
      if (!rate_positive(net, r, cur)) continue;
      State next = add(cur, net.jump(r));
      if (!trunc.inside(next)) {
        clipped = true;
        continue;
      }
      if (next == target) return Reach::Yes;
      if (seen.emplace(next, 1).second) queue.push_back(std::move(next));
    }
  }
  return clipped ? Reach::BoundExhausted : Reach::No;
}

IrreducibleComponent::IrreducibleComponent(const ReactionNetwork& net, State origin,
                                           Truncation trunc)
    : origin_(std::move(origin)), trunc_(std::move(trunc)) {
  std::size_t n = static_cast<std::size_t>(net.num_species());
  if (origin_.size() != n) throw Error("origin state length does not match species count");
  if (!nonnegative(origin_)) throw Error("origin state has a negative entry");
  if (!trunc_.inside(origin_)) throw Error("origin state outside the truncation box");

  // Forward closure inside the box.
  StateMap<char> fwd;
  std::deque<State> queue;
  fwd.emplace(origin_, 1);
  queue.push_back(origin_);
  clipped_species_.assign(n, 0);
  while (!queue.empty()) {
    State cur = std::move(queue.front());
    queue.pop_front();
    for (int r = 0; r < net.num_reactions(); ++r) {
      if (!rate_positive(net, r, cur)) continue;
      State next = add(cur, net.jump(r));
      if (!trunc_.inside(next)) {
        clipped_ = true;
        for (std::size_t i = 0; i < n; ++i) {
          Count cap = trunc_.per_species ? (*trunc_.per_species)[i] : trunc_.cap;
          if (next[i] > cap) clipped_species_[i] = 1;
        }
        continue;
      }
      if (fwd.emplace(next, 1).second) queue.push_back(std::move(next));
    }
  }

  // Backward closure to the origin, restricted to the forward set; states
  // reaching the origin necessarily do so through forward-reachable states.
  StateMap<char> back;
  back.emplace(origin_, 1);
  queue.push_back(origin_);
  while (!queue.empty()) {
    State cur = std::move(queue.front());
    queue.pop_front();
    for (int r = 0; r < net.num_reactions(); ++r) {
      State prev = sub(cur, net.jump(r));
      if (!nonnegative(prev) || !trunc_.inside(prev)) continue;
      if (fwd.find(prev) == fwd.end()) continue;
      if (back.find(prev) != back.end()) continue;
      if (!rate_positive(net, r, prev)) continue;
      back.emplace(prev, 1);
      queue.push_back(prev);
    }
  }

  for (const auto& [s, tag] : fwd) {
    (void)tag;
    if (back.find(s) != back.end()) states_.push_back(s);
  }
  std::sort(states_.begin(), states_.end(),
            [](const State& a, const State& b) { return lex_less(a, b); });
  for (std::size_t i = 0; i < states_.size(); ++i) index_.emplace(states_[i], static_cast<int>(i));

  // Interior: no balance term at the state reaches past the box. In-box
  // states missing from the class carry zero probability by convention and
  // do not disqualify.
  interior_.assign(states_.size(), 1);
  for (std::size_t i = 0; i < states_.size(); ++i) {
    const State& x = states_[i];
    for (int r = 0; r < net.num_reactions() && interior_[i]; ++r) {
      bool bad = false;
      try {
        if (rate_positive(net, r, x) && !trunc_.inside(add(x, net.jump(r)))) bad = true;
        if (!bad) {
          State z = sub(x, net.jump(r));
          if (nonnegative(z) && !trunc_.inside(z) && rate_positive(net, r, z)) bad = true;
        }
      } catch (const EvalError&) {
        bad = true;  // cannot certify the neighborhood
      }
      if (bad) interior_[i] = 0;
    }
    if (interior_[i]) ++num_interior_;
  }
  if (states_.empty() || num_interior_ == 0) {
    throw Error("truncation produces empty interior");
  }
}

int IrreducibleComponent::index_of(const State& x) const {
  auto it = index_.find(x);
  return it == index_.end() ? -1 : it->second;
}

std::vector<ShiftedSet> shifted_sets(const ReactionNetwork& net, const ComponentIndex& comps,
                                     const IrreducibleComponent& comp) {
  if (!is_weakly_reversible(net)) throw Error("shifted sets need a weakly reversible network");
  std::vector<ShiftedSet> out;
  for (int k = 0; k < comps.num_components(); ++k) {
    ShiftedSet ss;
    ss.component = k;
    bool first = true;
    std::vector<State> reference;
    for (int c : comps.members(k)) {
      const State& phi = net.complex(c).stoich;
      std::vector<State> shifted;
      for (const State& x : comp.states()) {
        State z = sub(x, phi);
        if (nonnegative(z)) shifted.push_back(std::move(z));
      }
      std::sort(shifted.begin(), shifted.end(),
                [](const State& a, const State& b) { return lex_less(a, b); });
      shifted.erase(std::unique(shifted.begin(), shifted.end()), shifted.end());
      if (first) {
        reference = std::move(shifted);
        first = false;
      } else if (shifted != reference) {
        throw Error(
            "shifted set differs across complex choices in component " + std::to_string(k) +
            " (non-weakly-reversible structure or truncation artifact)");
      }
    }
    ss.states = std::move(reference);
    out.push_back(std::move(ss));
  }
  return out;
}

std::vector<State> conservation_laws(const ReactionNetwork& net) {
  std::vector<std::vector<Count>> rows;
  rows.reserve(net.num_reactions());
  for (int r = 0; r < net.num_reactions(); ++r) rows.push_back(net.jump(r));
  return integer_null_space(rows, static_cast<std::size_t>(net.num_species()));
}

}  // namespace srn
