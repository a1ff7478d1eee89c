#include "srn/simulate.hpp"

#include <algorithm>
#include <cmath>

namespace srn {

namespace {

std::uint64_t scramble(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace

CounterRng::CounterRng(std::uint64_t seed, std::uint64_t stream) {
  base_ = scramble(seed + 0x9e3779b97f4a7c15ULL);
  gamma_ = scramble(stream ^ 0xd1b54a32d192ed03ULL) | 1ULL;
}

std::uint64_t CounterRng::next_u64() {
  ++counter_;
  return scramble(base_ + counter_ * gamma_);
}

double CounterRng::next_unit() {
  return 1.0 - static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double CounterRng::next_exponential(double rate) {
  return -std::log(next_unit()) / rate;
}

EmpiricalDistribution simulate(const ReactionNetwork& net, const SimConfig& cfg) {
  if (cfg.initial.size() != static_cast<std::size_t>(net.num_species())) {
    throw Error("initial state length does not match species count");
  }
  if (!nonnegative(cfg.initial)) throw Error("initial state has a negative entry");
  if (!(cfg.burn_in >= 0.0) || !(cfg.t_end > cfg.burn_in)) {
    throw Error("simulation needs t_end > burn_in >= 0");
  }
  if (cfg.replicas < 1) throw Error("simulation needs at least one replica");

  EmpiricalDistribution out;
  std::vector<double> rates(net.num_reactions());
  for (int replica = 0; replica < cfg.replicas; ++replica) {
    CounterRng rng(cfg.seed, static_cast<std::uint64_t>(replica));
    State x = cfg.initial;
    double t = 0.0;
    std::uint64_t events = 0;
    auto credit = [&](const State& s, double from, double to) {
      double lo = std::max(from, cfg.burn_in);
      double hi = std::min(to, cfg.t_end);
      if (hi > lo) out.fraction[s] += hi - lo;
    };
    while (t < cfg.t_end) {
      double total = 0.0;
      for (int r = 0; r < net.num_reactions(); ++r) {
        rates[r] = net.rate(r, x);
        total += rates[r];
      }
      if (!(total > 0.0)) {
        credit(x, t, cfg.t_end);
        break;
      }
      if (!std::isfinite(total)) throw Error("total rate diverged at " + to_string(x));
      double dt = rng.next_exponential(total);
      credit(x, t, t + dt);
      t += dt;
      if (t >= cfg.t_end) break;
      double u = rng.next_unit() * total;
      int pick = net.num_reactions() - 1;
      double acc = 0.0;
      for (int r = 0; r < net.num_reactions(); ++r) {
        acc += rates[r];
        if (u <= acc) {
          pick = r;
          break;
        }
      }
      x = add(x, net.jump(pick));
      ++events;
      if (events > cfg.max_events) {
        throw BudgetExceeded("event budget exceeded after " + std::to_string(events - 1) +
                             " firings (possible explosion)");
      }
    }
    out.events += events;
  }

  double total_time = 0.0;
  for (const auto& [s, w] : out.fraction) {
    (void)s;
    total_time += w;
  }
  if (!(total_time > 0.0)) throw Error("no observation time accumulated");
  for (auto& [s, w] : out.fraction) {
    (void)s;
    w /= total_time;
  }
  out.total_time = total_time;
  return out;
}

double tv_distance(const StateMap<double>& a, const StateMap<double>& b) {
  double sum = 0.0;
  for (const auto& [s, pa] : a) {
    auto it = b.find(s);
    sum += std::abs(pa - (it == b.end() ? 0.0 : it->second));
  }
  for (const auto& [s, pb] : b) {
    if (a.find(s) == a.end()) sum += pb;
  }
  return 0.5 * sum;
}

namespace {

StateMap<double> to_map(const Distribution& d) {
  StateMap<double> m;
  for (std::size_t i = 0; i < d.size(); ++i) m.emplace(d.component().states()[i], d[i]);
  return m;
}

}  // namespace

double tv_distance(const Distribution& a, const StateMap<double>& b) {
  return tv_distance(to_map(a), b);
}

double tv_distance(const Distribution& a, const Distribution& b) {
  return tv_distance(to_map(a), to_map(b));
}

}  // namespace srn
