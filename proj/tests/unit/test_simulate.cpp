#include <cmath>

#include "doctest.h"
#include "srn/fixtures.hpp"
#include "srn/parser.hpp"
#include "srn/simulate.hpp"

using namespace srn;

TEST_CASE("the counter generator is a pure function of its inputs") {
  CounterRng a(42, 7);
  CounterRng b(42, 7);
  for (int i = 0; i < 1000; ++i) {
    CHECK(a.next_u64() == b.next_u64());
  }
  CounterRng c(42, 8);
  CounterRng d(43, 7);
  int same_stream = 0;
  int same_seed = 0;
  CounterRng a2(42, 7);
  for (int i = 0; i < 64; ++i) {
    std::uint64_t v = a2.next_u64();
    if (v == c.next_u64()) ++same_stream;
    if (v == d.next_u64()) ++same_seed;
  }
  CHECK(same_stream == 0);
  CHECK(same_seed == 0);
}

TEST_CASE("unit draws stay inside the half-open interval") {
  CounterRng rng(1, 0);
  for (int i = 0; i < 100000; ++i) {
    double u = rng.next_unit();
    CHECK(u > 0.0);
    CHECK(u <= 1.0);
  }
}

TEST_CASE("exponential holding times scale with the rate") {
  CounterRng rng(9, 1);
  double sum = 0.0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) sum += rng.next_exponential(4.0);
  CHECK(sum / n == doctest::Approx(0.25).epsilon(0.02));
}

TEST_CASE("same-seed runs produce identical occupancy maps") {
  SimConfig cfg;
  cfg.initial = {1, 1, 1};
  cfg.t_end = 100.0;
  cfg.seed = 7;
  NetPtr net = fixtures::triangle();
  EmpiricalDistribution e1 = simulate(*net, cfg);
  EmpiricalDistribution e2 = simulate(*net, cfg);
  CHECK(e1.events == e2.events);
  CHECK(e1.total_time == e2.total_time);
  REQUIRE(e1.fraction.size() == e2.fraction.size());
  for (const auto& [x, f] : e1.fraction) {
    auto it = e2.fraction.find(x);
    REQUIRE(it != e2.fraction.end());
    CHECK(f == it->second);
  }
  SimConfig other = cfg;
  other.seed = 8;
  EmpiricalDistribution e3 = simulate(*net, other);
  CHECK(tv_distance(e1, e3) > 0.0);
}

TEST_CASE("occupancy fractions form a distribution") {
  SimConfig cfg;
  cfg.initial = {2, 0, 0};
  cfg.t_end = 500.0;
  cfg.burn_in = 10.0;
  cfg.replicas = 3;
  EmpiricalDistribution e = simulate(*fixtures::triangle(), cfg);
  double sum = 0.0;
  for (const auto& [x, f] : e.fraction) {
    CHECK(f >= 0.0);
    sum += f;
  }
  CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(e.total_time == doctest::Approx(3 * 490.0).epsilon(1e-12));
}

TEST_CASE("an absorbing state soaks up the remaining time") {
  NetPtr net = parse_network("A -> 0 : ma(1)\n");
  SimConfig cfg;
  cfg.initial = {3};
  cfg.t_end = 1000.0;
  cfg.seed = 5;
  EmpiricalDistribution e = simulate(*net, cfg);
  CHECK(e.events == 3);
  auto it = e.fraction.find(State{0});
  REQUIRE(it != e.fraction.end());
  CHECK(it->second > 0.99);
}

TEST_CASE("long runs track the solved stationary distribution") {
  NetPtr net = fixtures::triangle();
  Truncation box;
  box.cap = 3;
  CompPtr comp = std::make_shared<IrreducibleComponent>(*net, State{1, 1, 1}, box);
  CbSolution sol = complex_balanced_solve(net, comp);
  SimConfig cfg;
  cfg.initial = {1, 1, 1};
  cfg.t_end = 5000.0;
  cfg.burn_in = 10.0;
  cfg.replicas = 2;
  cfg.seed = 11;
  EmpiricalDistribution e = simulate(*net, cfg);
  CHECK(tv_distance(sol.pi, e) < 0.02);
}

TEST_CASE("simulation configs are validated up front") {
  NetPtr net = fixtures::triangle();
  SimConfig cfg;
  cfg.initial = {1, 1};  // wrong length
  cfg.t_end = 1.0;
  CHECK_THROWS_AS(simulate(*net, cfg), Error);
  cfg.initial = {1, 1, 1};
  cfg.t_end = 0.0;
  CHECK_THROWS_AS(simulate(*net, cfg), Error);
  cfg.t_end = 1.0;
  cfg.burn_in = 2.0;
  CHECK_THROWS_AS(simulate(*net, cfg), Error);
  cfg.burn_in = 0.0;
  cfg.replicas = 0;
  CHECK_THROWS_AS(simulate(*net, cfg), Error);
}

TEST_CASE("the event budget cuts off runaway trajectories") {
  SimConfig cfg;
  cfg.initial = {1, 1, 1};
  cfg.t_end = 1e9;
  cfg.max_events = 1000;
  CHECK_THROWS_AS(simulate(*fixtures::triangle(), cfg), BudgetExceeded);
}

TEST_CASE("total variation arithmetic on known maps") {
  StateMap<double> a;
  StateMap<double> b;
  a.emplace(State{0}, 0.5);
  a.emplace(State{1}, 0.5);
  b.emplace(State{0}, 0.25);
  b.emplace(State{1}, 0.75);
  CHECK(tv_distance(a, a) == 0.0);
  CHECK(tv_distance(a, b) == doctest::Approx(0.25));

  StateMap<double> c;
  c.emplace(State{2}, 1.0);
  CHECK(tv_distance(a, c) == doctest::Approx(1.0));
}

TEST_CASE("distribution overloads agree with the raw-map distance") {
  NetPtr net = fixtures::split_pair();
  Truncation box;
  box.cap = 5;
  CompPtr comp = std::make_shared<IrreducibleComponent>(*net, State{1, 1}, box);
  Distribution pi = Distribution::from_weights(comp, {1.0, 2.0, 1.0});
  StateMap<double> raw;
  for (std::size_t i = 0; i < pi.size(); ++i) raw.emplace(comp->states()[i], pi[i]);
  CHECK(tv_distance(pi, raw) == doctest::Approx(0.0));
  Distribution other = Distribution::from_weights(comp, {1.0, 1.0, 2.0});
  CHECK(tv_distance(pi, other) == doctest::Approx(tv_distance(other, pi)));
  CHECK(tv_distance(pi, other) > 0.0);
}
