#pragma once

#include <array>

#include "srn/balance.hpp"
#include "srn/model.hpp"

// Built-in networks used by tests, benchmarks and the reproduce subcommand.
namespace srn::fixtures {

// Three single-molecule complexes, fully connected:
//   A -> B (1), B -> A (2), B -> C (1), C -> B (2), C -> A (1), A -> C (2).
NetPtr triangle();

// A <-> B with symmetric mass action (3, 3).
NetPtr split_pair();

// Two 2-cycles on copies of A and B with constants (1,2) and (2,1); the
// totals per projected reaction match split_pair, so the chains coincide.
NetPtr split_pair_copies();

// A <-> 0 -> 2A with mass action (a1, a2, a3); 2A is a sink complex, so the
// digraph is not weakly reversible.
NetPtr birth_death(double a1, double a2, double a3);

// Weakly reversible network with the same chain as birth_death: the death
// reaction is split into A -> 0 and 2A -> A with table rates from
// bd_split_rates, defined for counts 0..x_max.
NetPtr birth_death_target(double a1, double a2, double a3, Count x_max);

// Two-site modification chain with mass action:
//   B -> A (a1), B <-> C (a2, a3), 2A -> A+B (a4), A+B <-> A+C (a5, a6).
NetPtr phosphorylation_base(const std::array<double, 6>& a);

// Weakly reversible equivalent of phosphorylation_base on components with
// x_A >= 1: 2A <-> A+B@1 <-> A+C@1 plus A+B@2 <-> A+C@2, where the first
// three rates follow the untranslated reactions (a1*x_B, a2*x_B, a3*x_C).
NetPtr phosphorylation(const std::array<double, 6>& a);

// Closed-form stationary weight of phosphorylation on {x_A >= 1}, up to
// normalization; 0 when x_A == 0.
double phosphorylation_weight(const std::array<double, 6>& a, const State& x);

// Enzyme-substrate conversion with density-regulated rates over species
// (S, E*, P, E):
//   S+E* <-> P+E   a1*S*E*/(b1+S),  a2*P*E/(b2+P)
//   0 <-> E        a3/(b3+E),       a4*E/(b4+E-1)
// Detailed balanced exactly when b3 == b4.
NetPtr michaelis_menten(const std::array<double, 4>& a, const std::array<double, 4>& b);

// The closed-form factorization tables (g, per-class m, per-reaction kappa)
// for michaelis_menten over a component; valid (and verified elsewhere)
// when b3 == b4.
Factorization michaelis_menten_factorization(const std::array<double, 4>& a,
                                             const std::array<double, 4>& b,
                                             const IrreducibleComponent& comp);

// Four-complex network with two overlapping 3-cycles:
//   A -> 2C+D (a1), A -> D (a2), 2C+D -> B (a3), D -> B (a4), B -> A (a5).
NetPtr network1(const std::array<double, 5>& a);
NetPtr network1();  // all constants 1

// network1 with B -> A split onto two copies of A, weighted by the chance
// that the next reaction out of A is A -> 2C+D resp. A -> D. The component,
// when given, is used to validate that the parts sum to the original rate.
NetPtr network1_split(const std::array<double, 5>& a,
                      const IrreducibleComponent* comp = nullptr);

}  // namespace srn::fixtures
