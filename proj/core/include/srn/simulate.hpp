#pragma once

#include <cstdint>

#include "srn/balance.hpp"
#include "srn/model.hpp"
#include "srn/types.hpp"

namespace srn {

// Counter-based splittable generator: the draw sequence is a pure function of
// (seed, stream, counter), so replicas are independent and runs reproduce
// across platforms.
class CounterRng {
 public:
  CounterRng(std::uint64_t seed, std::uint64_t stream);

  std::uint64_t next_u64();
  // Uniform in (0, 1]; never 0, so logarithms are safe.
  double next_unit();
  // Exponential holding time with the given total rate.
  double next_exponential(double rate);

 private:
  std::uint64_t base_ = 0;
  std::uint64_t gamma_ = 0;
  std::uint64_t counter_ = 0;
};

struct SimConfig {
  State initial;
  double t_end = 0.0;
  double burn_in = 0.0;
  std::uint64_t seed = 1;
  int replicas = 1;
  std::uint64_t max_events = 50'000'000;
};

struct EmpiricalDistribution {
  StateMap<double> fraction;  // time-weighted occupancy, sums to 1
  double total_time = 0.0;    // pooled observation time over replicas
  std::uint64_t events = 0;   // pooled reaction firings
};

// Thrown when a run exceeds the event budget, which may indicate an
// explosive trajectory.
struct BudgetExceeded : Error {
  using Error::Error;
};

// Direct-method exact simulation. Occupancy is holding-time weighted over
// [burn_in, t_end] and pooled over replicas; a state with zero total rate
// absorbs the remaining time.
EmpiricalDistribution simulate(const ReactionNetwork& net, const SimConfig& cfg);

// Half the L1 distance over the union support.
double tv_distance(const StateMap<double>& a, const StateMap<double>& b);
double tv_distance(const Distribution& a, const StateMap<double>& b);
double tv_distance(const Distribution& a, const Distribution& b);
inline double tv_distance(const EmpiricalDistribution& a, const Distribution& b) {
  return tv_distance(b, a.fraction);
}
inline double tv_distance(const Distribution& a, const EmpiricalDistribution& b) {
  return tv_distance(a, b.fraction);
}
inline double tv_distance(const EmpiricalDistribution& a, const EmpiricalDistribution& b) {
  return tv_distance(a.fraction, b.fraction);
}

}  // namespace srn
