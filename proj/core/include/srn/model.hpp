#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "srn/kinetics.hpp"
#include "srn/types.hpp"

namespace srn {

struct Species {
  std::string id;
};

// A node of the reaction digraph. Identity is (stoich, copy_tag); the label
// is display only. copy_tag 0 marks an original complex, positive tags mark
// copies sharing the same stoichiometry.
struct Complex {
  std::string label;
  int copy_tag = 0;
  State stoich;
};

struct Reaction {
  int source = -1;
  int target = -1;
  Kinetics kinetics;
};

class ReactionNetwork;
using NetPtr = std::shared_ptr<const ReactionNetwork>;

// Pending rate declaration, bound to an evaluator when the network is built.
struct RateSpec {
  enum class Kind {
    MassAuto,      // order filled from the source complex at build time
    MassBound,     // explicit order vector
    Expr,
    Table,
    TableRef,      // opaque, non-evaluable
    DerivedRef,    // opaque, non-evaluable
    Bound,         // ready evaluator, reused as is
    SumOf,         // pointwise sum of parts
  };
  Kind kind = Kind::MassAuto;
  double alpha = 0.0;
  State order;
  ExprPtr ast;
  StateMap<double> values;
  std::string label;
  Kinetics bound;
  std::vector<RateSpec> parts;

  static RateSpec ma(double alpha);
  static RateSpec ma_with_order(double alpha, State order);
  static RateSpec expr(ExprPtr ast);
  static RateSpec table(StateMap<double> values, std::string label);
  static RateSpec table_ref(std::string label);
  static RateSpec derived_ref(std::string label);
  static RateSpec bound_kinetics(Kinetics k);
  static RateSpec sum_of(std::vector<RateSpec> parts);
};

enum class MergePolicy { Error, Sum };

class NetworkBuilder {
 public:
  NetworkBuilder() = default;
  explicit NetworkBuilder(std::vector<std::string> species_ids);

  NetworkBuilder& add_species(const std::string& id);
  NetworkBuilder& set_param(const std::string& name, double value);
  NetworkBuilder& merge_policy(MergePolicy p);

  // Returns the id of the (possibly existing) complex with this identity.
  int add_complex(State stoich, int copy_tag = 0, const std::string& label = "");
  NetworkBuilder& add_reaction(int source, int target, RateSpec rate);

  NetPtr build();

 private:
  std::vector<std::string> species_;
  std::unordered_map<std::string, double> params_;
  std::vector<Complex> complexes_;
  struct PendingReaction {
    int source;
    int target;
    RateSpec rate;
  };
  std::vector<PendingReaction> reactions_;
  MergePolicy policy_ = MergePolicy::Error;
};

// Immutable after construction; safe to share across threads.
class ReactionNetwork {
 public:
  int num_species() const { return static_cast<int>(species_.size()); }
  int num_complexes() const { return static_cast<int>(complexes_.size()); }
  int num_reactions() const { return static_cast<int>(reactions_.size()); }
  const std::vector<Species>& species() const { return species_; }
  const Complex& complex(int c) const { return complexes_[c]; }
  const Reaction& reaction(int r) const { return reactions_[r]; }
  const std::unordered_map<std::string, double>& params() const { return params_; }
  std::shared_ptr<const SymbolTable> symbols() const { return symbols_; }

  double rate(int r, std::span<const Count> x) const {
    return reactions_[r].kinetics.rate(x);
  }
  const State& jump(int r) const { return jumps_[r]; }
  const std::vector<int>& outgoing(int c) const { return out_[c]; }
  const std::vector<int>& incoming(int c) const { return in_[c]; }
  int find_reaction(int source, int target) const;  // -1 when absent
  int find_complex(const State& stoich, int copy_tag) const;

  // Position of complex c in canonical order (stoich lexicographic, then
  // copy_tag); stable across complex-list permutations.
  int canonical_rank(int c) const { return canonical_rank_[c]; }
  const std::vector<int>& canonical_order() const { return canonical_order_; }

 private:
  friend class NetworkBuilder;
  std::vector<Species> species_;
  std::vector<Complex> complexes_;
  std::vector<Reaction> reactions_;
  std::unordered_map<std::string, double> params_;
  std::shared_ptr<const SymbolTable> symbols_;
  std::vector<State> jumps_;
  std::vector<std::vector<int>> out_;
  std::vector<std::vector<int>> in_;
  std::vector<int> canonical_order_;
  std::vector<int> canonical_rank_;
};

// True when a comes before b in canonical order.
bool canonical_complex_less(const Complex& a, const Complex& b);

// Display label for a stoichiometric vector, e.g. "2C+D", "0" when empty.
std::string stoich_label(const State& stoich, const std::vector<Species>& species);

// Merge all complexes with equal stoichiometry into one copy-tag-0 complex;
// reactions falling together have their kinetics summed pointwise.
// Idempotent. Errors on reactions between complexes of equal stoichiometry
// (they would become self loops).
NetPtr essential(const NetPtr& net);

// Add delta to both sides of each listed reaction; kinetics (as functions of
// the state) are unchanged, so jump vectors are preserved.
NetPtr translate_add_species(const NetPtr& net, const std::vector<int>& reaction_ids,
                             const State& delta);

struct SplitPart {
  State target_stoich;
  int copy_tag = 0;  // lets parts land on distinct copies instead of merging
  RateSpec rate;
};

class IrreducibleComponent;

// Replace one reaction by several with the same jump vector; each part's
// source is inferred from its target and the preserved jump. When a component
// is given, part rates are validated to sum to the original rate on all its
// states within reltol.
NetPtr split_reaction(const NetPtr& net, int reaction_id,
                      const std::vector<SplitPart>& parts,
                      const IrreducibleComponent* comp = nullptr,
                      double reltol = 1e-9);

// Rate constants when every reaction is plain mass action of its source.
std::optional<std::vector<double>> mass_action_constants(const ReactionNetwork& net);

}  // namespace srn
