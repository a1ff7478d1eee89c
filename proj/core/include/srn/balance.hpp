#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "srn/cleave.hpp"
#include "srn/model.hpp"
#include "srn/state_space.hpp"
#include "srn/types.hpp"

namespace srn {

using CompPtr = std::shared_ptr<const IrreducibleComponent>;

// Probability distribution supported on the states of one truncated
// irreducible component. Probabilities sum to 1 within 1e-12; states outside
// the support have probability zero by convention.
class Distribution {
 public:
  Distribution(CompPtr component, std::vector<double> probs);

  // Normalizes nonnegative weights aligned with component->states().
  static Distribution from_weights(CompPtr component, const std::vector<double>& weights);
  // Evaluates g on every state of the component and normalizes.
  static Distribution from_function(CompPtr component,
                                    const std::function<double(const State&)>& g);

  const IrreducibleComponent& component() const { return *component_; }
  const CompPtr& component_ptr() const { return component_; }
  std::size_t size() const { return probs_.size(); }
  double operator[](std::size_t i) const { return probs_[i]; }
  const std::vector<double>& probs() const { return probs_; }

  // 0 for states outside the support.
  double prob(const State& x) const;

 private:
  CompPtr component_;
  std::vector<double> probs_;
};

// Multiplicative factorization of the kinetics: for every reaction y -> y'
// in linkage component k and every supported x >= phi(y),
//   rate(x) = kappa_r / (m_k(x - phi(y)) * g(x)).
// kappa must balance per complex: sum of kappa over outgoing reactions equals
// the sum over incoming ones.
struct Factorization {
  StateMap<double> g;
  std::vector<StateMap<double>> m;  // indexed by linkage component
  std::vector<double> kappa;        // indexed by reaction
};

struct BalanceReport {
  std::string property;
  bool verdict = false;
  double tolerance = 0.0;
  double max_residual = 0.0;
  int worst_complex = -1;  // -1 when not applicable
  State worst_state;
  long states_checked = 0;
  std::string reason;
};

// Solver-stage failure; `stage` identifies where a pipeline stopped.
struct BalanceError : Error {
  BalanceError(std::string stage_name, const std::string& message)
      : Error(stage_name + ": " + message), stage(std::move(stage_name)) {}
  std::string stage;
};

// Master-equation balance at every interior state of the support.
BalanceReport check_stationary(const ReactionNetwork& net, const Distribution& pi,
                               double tol = 1e-9);

// Per-complex flux balance at every interior state of the support.
BalanceReport check_complex_balanced(const ReactionNetwork& net, const Distribution& pi,
                                     double tol = 1e-9);

// Per-reaction-pair flux balance; verdict false with a reason when the
// network is not reversible.
BalanceReport check_detailed_balanced(const ReactionNetwork& net, const Distribution& pi,
                                      double tol = 1e-9);

// Checks the factorization identity on every supported state, the per-complex
// kappa balance, and (for box-clipped components) that the tail mass of g
// decays; returns pi = g normalized. Throws Error with the offending state or
// complex on violation; the returned pi also passes check_complex_balanced.
Distribution verify_factorization(const ReactionNetwork& net, const CompPtr& comp,
                                  const Factorization& fact, double tol = 1e-9);

struct MaSolveOptions {
  double tol = 1e-9;
  std::uint64_t seed = 1234567;
  int restarts = 8;
  int max_iterations = 200;
};

// Finds c > 0 with per-complex balance of kappa = alpha * c^phi(y) by damped
// Gauss-Newton on log c, multi-started. nullopt means the solver did not
// converge; it never certifies nonexistence.
std::optional<std::vector<double>> ma_equilibrium_solve(const ReactionNetwork& net,
                                                        const std::vector<double>& alpha,
                                                        const MaSolveOptions& opts = {});
// Convenience overload reading mass-action constants off the network.
std::optional<std::vector<double>> ma_equilibrium_solve(const ReactionNetwork& net,
                                                        const MaSolveOptions& opts = {});

struct RatioDetection {
  bool ok = false;
  // Per-reaction proportionality constant against the shared per-source base
  // rate. For each source the lowest-numbered reaction is the anchor; its
  // value is the mass-action constant when the anchor is mass-action, else 1.
  std::vector<double> alpha;
  std::string message;
};

// Verifies that all rates out of a common source are proportional across the
// component's states and returns the constants.
RatioDetection detect_constant_ratio(const ReactionNetwork& net, const IrreducibleComponent& comp,
                                     double tol = 1e-9);

struct CyclicSolution {
  Distribution pi;
  // Per linkage component (one cycle each): m_k on the shifted state set,
  // satisfying pi(x) * rate(x) * m_k(x - phi(source)) = 1.
  std::vector<StateMap<double>> m;
};

// Solves for the unique candidate complex balanced distribution of a
// disjoint-cycle network by propagating probability ratios along transitions
// and checking every balance relation for consistency. Throws BalanceError on
// closure inconsistency, cross-cycle mismatch, or uncertified normalization.
CyclicSolution cyclic_balance_solve(const NetPtr& net, const CompPtr& comp, double tol = 1e-9);

struct CbOptions {
  double tol = 1e-6;         // final verification tolerance
  double cyclic_tol = 1e-9;  // consistency tolerance inside the cyclic solve
  CleaveOptions cleave;
};

struct CbSolution {
  Distribution pi;
  Factorization factorization;
  CleavingResult cleaving;
};

// Full pipeline: cleave to disjoint cycles, solve there, pull the
// distribution back, fit the factorization, and re-verify per-complex balance
// on the original network. Throws BalanceError naming the failing stage.
CbSolution complex_balanced_solve(const NetPtr& net, const CompPtr& comp,
                                  const CbOptions& opts = {});

struct BdSplit {
  std::vector<double> lambda1;  // index x = 0..x_max
  std::vector<double> lambda4;
};

// Splits the death rate a1*x into two tables by the unique recursion
//   lambda1(0) = 0,
//   lambda1(x) = a1*(a2+a3)^2*x / ((a2+a3)^2 + a3*lambda1(x-1)),
//   lambda4(x) = a1*x - lambda1(x),
// asserting 0 < lambda1(x) < a1*x for x >= 2 and lambda4(0) = lambda4(1) = 0.
BdSplit bd_split_rates(double a1, double a2, double a3, int x_max);

struct DetailedFactorization {
  // Per reaction id: m on the shifted set, with m[r] == m[reverse of r].
  std::vector<StateMap<double>> m;
};

// Builds per-reaction-pair m tables from a detailed balanced distribution and
// asserts their symmetry. Throws when pi is not detailed balanced or the
// symmetry fails.
DetailedFactorization verify_detailed_factorization(const ReactionNetwork& net,
                                                    const Distribution& pi, double tol = 1e-9);

// Brute-force oracle: solves the global balance equations of the truncated
// chain (transitions leaving the support dropped) by sparse LU and
// normalizes. Throws on singular or ill-conditioned systems.
Distribution stationary_solve(const ReactionNetwork& net, const CompPtr& comp,
                              double tol = 1e-9);

}  // namespace srn
