#include "srn/kinetics.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <mutex>

namespace srn {

std::string to_string(std::span<const Count> x) {
  std::string s = "(";
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (i) s += ",";
    s += std::to_string(x[i]);
  }
  s += ")";
  return s;
}

std::string format_number(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  // Trim digits while the value still reads back exactly.
  for (int prec = 1; prec < 17; ++prec) {
    char probe[64];
    std::snprintf(probe, sizeof(probe), "%.*g", prec, v);
    if (std::strtod(probe, nullptr) == v) return probe;
  }
  return buf;
}

ExprPtr ExprNode::num(double v) {
  auto n = std::make_shared<ExprNode>();
  n->op = Op::Num;
  n->value = v;
  return n;
}

ExprPtr ExprNode::var(std::string name) {
  auto n = std::make_shared<ExprNode>();
  n->op = Op::Var;
  n->name = std::move(name);
  return n;
}

ExprPtr ExprNode::binary(Op o, ExprPtr l, ExprPtr r) {
  auto n = std::make_shared<ExprNode>();
  n->op = o;
  n->lhs = std::move(l);
  n->rhs = std::move(r);
  return n;
}

ExprPtr ExprNode::neg(ExprPtr e) {
  auto n = std::make_shared<ExprNode>();
  n->op = Op::Neg;
  n->lhs = std::move(e);
  return n;
}

namespace {

int precedence(ExprNode::Op op) {
  switch (op) {
    case ExprNode::Op::Add:
    case ExprNode::Op::Sub:
      return 1;
    case ExprNode::Op::Mul:
    case ExprNode::Op::Div:
      return 2;
    case ExprNode::Op::Neg:
      return 3;
    default:
      return 4;
  }
}

void render(const ExprPtr& e, std::string& out) {
  switch (e->op) {
    case ExprNode::Op::Num:
      out += format_number(e->value);
      return;
    case ExprNode::Op::Var:
      out += e->name;
      return;
    case ExprNode::Op::Neg: {
      out += "-";
      bool paren = precedence(e->lhs->op) < precedence(ExprNode::Op::Neg);
      if (paren) out += "(";
      render(e->lhs, out);
      if (paren) out += ")";
      return;
    }
    default: {
      int p = precedence(e->op);
      bool lparen = precedence(e->lhs->op) < p;
      if (lparen) out += "(";
      render(e->lhs, out);
      if (lparen) out += ")";
      switch (e->op) {
        case ExprNode::Op::Add: out += "+"; break;
        case ExprNode::Op::Sub: out += "-"; break;
        case ExprNode::Op::Mul: out += "*"; break;
        default: out += "/"; break;
      }
      int rp = precedence(e->rhs->op);
      bool rparen = rp < p ||
                    (rp == p && (e->op == ExprNode::Op::Sub || e->op == ExprNode::Op::Div));
      if (rparen) out += "(";
      render(e->rhs, out);
      if (rparen) out += ")";
      return;
    }
  }
}

double eval_expr(const ExprNode& e, const SymbolTable& sym, std::span<const Count> x) {
  switch (e.op) {
    case ExprNode::Op::Num:
      return e.value;
    case ExprNode::Op::Var: {
      auto it = sym.species_index.find(e.name);
      if (it != sym.species_index.end()) return static_cast<double>(x[it->second]);
      auto p = sym.params.find(e.name);
      if (p != sym.params.end()) return p->second;
      throw EvalError("unbound identifier '" + e.name + "' in rate expression");
    }
    case ExprNode::Op::Neg:
      return -eval_expr(*e.lhs, sym, x);
    case ExprNode::Op::Add:
      return eval_expr(*e.lhs, sym, x) + eval_expr(*e.rhs, sym, x);
    case ExprNode::Op::Sub:
      return eval_expr(*e.lhs, sym, x) - eval_expr(*e.rhs, sym, x);
    case ExprNode::Op::Mul:
      return eval_expr(*e.lhs, sym, x) * eval_expr(*e.rhs, sym, x);
    case ExprNode::Op::Div: {
      double d = eval_expr(*e.rhs, sym, x);
      if (d == 0.0) throw EvalError("division by zero in rate expression");
      return eval_expr(*e.lhs, sym, x) / d;
    }
  }
  throw EvalError("malformed expression node");
}

}  // namespace

std::string expr_to_string(const ExprPtr& e) {
  std::string out;
  render(e, out);
  return out;
}

std::shared_ptr<const SymbolTable> SymbolTable::make(
    std::vector<std::string> species, std::unordered_map<std::string, double> params) {
  auto t = std::make_shared<SymbolTable>();
  t->species = std::move(species);
  t->params = std::move(params);
  for (std::size_t i = 0; i < t->species.size(); ++i) {
    const std::string& id = t->species[i];
    t->species_index[id] = static_cast<int>(i);
    if (!id.empty() && id.back() == '*') {
      t->species_index[id.substr(0, id.size() - 1) + "star"] = static_cast<int>(i);
    }
  }
  return t;
}

struct Kinetics::Impl {
  KineticsKind kind = KineticsKind::MassAction;
  bool evaluable = true;

  double alpha = 0.0;
  State order;  // mass action; also reused as guard for expression/table

  ExprPtr ast;
  std::string expr_text;
  std::shared_ptr<const SymbolTable> symbols;

  StateMap<double> table;
  std::string label;

  std::function<double(std::span<const Count>)> fn;
  mutable std::mutex memo_mutex;
  mutable StateMap<double> memo;

  std::vector<Kinetics> parts;
};

KineticsKind Kinetics::kind() const { return impl_->kind; }

bool Kinetics::evaluable() const {
  if (impl_->kind == KineticsKind::Sum) {
    for (const auto& p : impl_->parts) {
      if (!p.evaluable()) return false;
    }
    return true;
  }
  return impl_->evaluable;
}

double Kinetics::rate(std::span<const Count> x) const {
  const Impl& im = *impl_;
  switch (im.kind) {
    case KineticsKind::MassAction:
      return im.alpha * falling_factorial(x, im.order);
    case KineticsKind::Expression: {
      if (!dominates(x, im.order)) return 0.0;
      double v = eval_expr(*im.ast, *im.symbols, x);
      if (std::isnan(v) || std::isinf(v)) throw EvalError("rate expression is not finite");
      if (v < 0.0) throw EvalError("rate expression is negative at state " + to_string(x));
      return v;
    }
    case KineticsKind::Table: {
      if (!im.evaluable) throw EvalError("table '" + im.label + "' has no values attached");
      if (!dominates(x, im.order)) return 0.0;
      auto it = im.table.find(State(x.begin(), x.end()));
      if (it == im.table.end()) {
        throw EvalError("state " + to_string(x) + " outside domain of table '" + im.label + "'");
      }
      return it->second;
    }
    case KineticsKind::Derived: {
      if (!im.evaluable) throw EvalError("derived rate '" + im.label + "' has no evaluator");
      State key(x.begin(), x.end());
      {
        std::lock_guard<std::mutex> lock(im.memo_mutex);
        auto it = im.memo.find(key);
        if (it != im.memo.end()) return it->second;
      }
      double v = im.fn(x);
      if (std::isnan(v) || std::isinf(v)) throw EvalError("derived rate is not finite");
      if (v < 0.0) v = 0.0;  // clip purely numerical negatives
      std::lock_guard<std::mutex> lock(im.memo_mutex);
      im.memo.emplace(std::move(key), v);
      return v;
    }
    case KineticsKind::Sum: {
      double s = 0.0;
      for (const auto& p : im.parts) s += p.rate(x);
      return s;
    }
  }
  throw EvalError("malformed kinetics");
}

double Kinetics::mass_action_rate() const {
  if (impl_->kind != KineticsKind::MassAction) throw Error("kinetics is not mass action");
  return impl_->alpha;
}

const State& Kinetics::mass_action_order() const {
  if (impl_->kind != KineticsKind::MassAction) throw Error("kinetics is not mass action");
  return impl_->order;
}

std::string Kinetics::expression_text() const {
  if (impl_->kind != KineticsKind::Expression) throw Error("kinetics is not an expression");
  return impl_->expr_text;
}

const State& Kinetics::guard() const { return impl_->order; }

std::string Kinetics::opaque_label() const { return impl_->label; }

const StateMap<double>* Kinetics::table_values() const {
  if (impl_->kind != KineticsKind::Table || !impl_->evaluable) return nullptr;
  return &impl_->table;
}

const std::vector<Kinetics>& Kinetics::summands() const { return impl_->parts; }

bool Kinetics::same_descriptor(const Kinetics& other) const {
  if (impl_->kind != other.impl_->kind) return false;
  const Impl& a = *impl_;
  const Impl& b = *other.impl_;
  switch (a.kind) {
    case KineticsKind::MassAction:
      return a.alpha == b.alpha && a.order == b.order;
    case KineticsKind::Expression:
      return a.expr_text == b.expr_text;
    case KineticsKind::Table:
    case KineticsKind::Derived:
      return a.label == b.label;
    case KineticsKind::Sum: {
      if (a.parts.size() != b.parts.size()) return false;
      for (std::size_t i = 0; i < a.parts.size(); ++i) {
        if (!a.parts[i].same_descriptor(b.parts[i])) return false;
      }
      return true;
    }
  }
  return false;
}

Kinetics Kinetics::mass_action(double alpha, State order) {
  auto im = std::make_shared<Impl>();
  im->kind = KineticsKind::MassAction;
  im->alpha = alpha;
  im->order = std::move(order);
  return Kinetics(std::move(im));
}

Kinetics Kinetics::expression(ExprPtr ast, std::shared_ptr<const SymbolTable> symbols,
                              State guard) {
  auto im = std::make_shared<Impl>();
  im->kind = KineticsKind::Expression;
  im->ast = std::move(ast);
  im->expr_text = expr_to_string(im->ast);
  im->symbols = std::move(symbols);
  im->order = std::move(guard);
  return Kinetics(std::move(im));
}

Kinetics Kinetics::table(StateMap<double> values, std::string label, State guard) {
  auto im = std::make_shared<Impl>();
  im->kind = KineticsKind::Table;
  im->table = std::move(values);
  im->label = std::move(label);
  im->order = std::move(guard);
  return Kinetics(std::move(im));
}

Kinetics Kinetics::table_placeholder(std::string label) {
  auto im = std::make_shared<Impl>();
  im->kind = KineticsKind::Table;
  im->label = std::move(label);
  im->evaluable = false;
  return Kinetics(std::move(im));
}

Kinetics Kinetics::derived(std::string label,
                           std::function<double(std::span<const Count>)> fn) {
  auto im = std::make_shared<Impl>();
  im->kind = KineticsKind::Derived;
  im->label = std::move(label);
  im->fn = std::move(fn);
  return Kinetics(std::move(im));
}

Kinetics Kinetics::derived_placeholder(std::string label) {
  auto im = std::make_shared<Impl>();
  im->kind = KineticsKind::Derived;
  im->label = std::move(label);
  im->evaluable = false;
  return Kinetics(std::move(im));
}

Kinetics Kinetics::sum(std::vector<Kinetics> parts) {
  if (parts.size() == 1) return parts[0];
  auto im = std::make_shared<Impl>();
  im->kind = KineticsKind::Sum;
  im->parts = std::move(parts);
  return Kinetics(std::move(im));
}

}  // namespace srn
