#pragma once

#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "srn/types.hpp"

namespace srn {

enum class KineticsKind { MassAction, Expression, Table, Derived, Sum };

// Arithmetic expression over species counts and named parameters.
struct ExprNode;
using ExprPtr = std::shared_ptr<const ExprNode>;

struct ExprNode {
  enum class Op { Num, Var, Add, Sub, Mul, Div, Neg };
  Op op = Op::Num;
  double value = 0.0;
  std::string name;
  ExprPtr lhs;
  ExprPtr rhs;

  static ExprPtr num(double v);
  static ExprPtr var(std::string n);
  static ExprPtr binary(Op o, ExprPtr l, ExprPtr r);
  static ExprPtr neg(ExprPtr e);
};

// Canonical text form; stable under parse/print cycles.
std::string expr_to_string(const ExprPtr& e);

// Deterministic formatting for rate constants and expression literals.
std::string format_number(double v);

// Name resolution context captured by expression kinetics. Species whose id
// ends in '*' are also visible under the alias id with '*' replaced by
// "star", so they can appear in expressions.
struct SymbolTable {
  std::vector<std::string> species;
  std::unordered_map<std::string, int> species_index;
  std::unordered_map<std::string, double> params;

  static std::shared_ptr<const SymbolTable> make(
      std::vector<std::string> species,
      std::unordered_map<std::string, double> params);
};

// Immutable rate function attached to a reaction. Instances are self
// contained: they carry the source stoichiometry guard, symbol bindings and
// any lookup tables or upstream solver closures they need, so they stay
// valid when a reaction is copied into another network with the same species
// ordering. Expression and table kinetics are multiplied by the indicator
// {x >= guard}; mass action vanishes below its order natively. Derived
// kinetics cache evaluations per state behind a mutex.
class Kinetics {
 public:
  Kinetics() = default;

  bool valid() const { return impl_ != nullptr; }
  KineticsKind kind() const;
  // False for opaque placeholders read back from serialized form.
  bool evaluable() const;

  // Throws EvalError for placeholders, unbound symbols, states outside a
  // table's domain, division by zero, or negative values.
  double rate(std::span<const Count> x) const;

  double mass_action_rate() const;
  const State& mass_action_order() const;
  std::string expression_text() const;
  const State& guard() const;
  std::string opaque_label() const;
  const StateMap<double>* table_values() const;
  const std::vector<Kinetics>& summands() const;

  // Descriptor-level structural equality: kind plus payload. Tables and
  // derived kinetics compare by label, so a placeholder matches its source.
  bool same_descriptor(const Kinetics& other) const;

  static Kinetics mass_action(double alpha, State order);
  static Kinetics expression(ExprPtr ast, std::shared_ptr<const SymbolTable> symbols,
                             State guard);
  static Kinetics table(StateMap<double> values, std::string label, State guard);
  static Kinetics table_placeholder(std::string label);
  static Kinetics derived(std::string label,
                          std::function<double(std::span<const Count>)> fn);
  static Kinetics derived_placeholder(std::string label);
  static Kinetics sum(std::vector<Kinetics> parts);

 private:
  struct Impl;
  explicit Kinetics(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}
  std::shared_ptr<const Impl> impl_;
};

}  // namespace srn
