#include "srn/model.hpp"

#include <algorithm>
#include <map>
#include <numeric>

#include "srn/state_space.hpp"

namespace srn {

RateSpec RateSpec::ma(double alpha) {
  RateSpec s;
  s.kind = Kind::MassAuto;
  s.alpha = alpha;
  return s;
}

RateSpec RateSpec::ma_with_order(double alpha, State order) {
  RateSpec s;
  s.kind = Kind::MassBound;
  s.alpha = alpha;
  s.order = std::move(order);
  return s;
}

RateSpec RateSpec::expr(ExprPtr ast) {
  RateSpec s;
  s.kind = Kind::Expr;
  s.ast = std::move(ast);
  return s;
}

RateSpec RateSpec::table(StateMap<double> values, std::string label) {
  RateSpec s;
  s.kind = Kind::Table;
  s.values = std::move(values);
  s.label = std::move(label);
  return s;
}

RateSpec RateSpec::table_ref(std::string label) {
  RateSpec s;
  s.kind = Kind::TableRef;
  s.label = std::move(label);
  return s;
}

RateSpec RateSpec::derived_ref(std::string label) {
  RateSpec s;
  s.kind = Kind::DerivedRef;
  s.label = std::move(label);
  return s;
}

RateSpec RateSpec::bound_kinetics(Kinetics k) {
  RateSpec s;
  s.kind = Kind::Bound;
  s.bound = std::move(k);
  return s;
}

RateSpec RateSpec::sum_of(std::vector<RateSpec> parts) {
  RateSpec s;
  s.kind = Kind::SumOf;
  s.parts = std::move(parts);
  return s;
}

bool canonical_complex_less(const Complex& a, const Complex& b) {
  if (a.stoich != b.stoich) return lex_less(a.stoich, b.stoich);
  return a.copy_tag < b.copy_tag;
}

std::string stoich_label(const State& stoich, const std::vector<Species>& species) {
  std::string out;
  for (std::size_t i = 0; i < stoich.size(); ++i) {
    if (stoich[i] == 0) continue;
    if (!out.empty()) out += "+";
    if (stoich[i] != 1) out += std::to_string(stoich[i]);
    out += species[i].id;
  }
  return out.empty() ? "0" : out;
}

NetworkBuilder::NetworkBuilder(std::vector<std::string> species_ids)
    : species_(std::move(species_ids)) {}

NetworkBuilder& NetworkBuilder::add_species(const std::string& id) {
  species_.push_back(id);
  return *this;
}

NetworkBuilder& NetworkBuilder::set_param(const std::string& name, double value) {
  params_[name] = value;
  return *this;
}

NetworkBuilder& NetworkBuilder::merge_policy(MergePolicy p) {
  policy_ = p;
  return *this;
}

int NetworkBuilder::add_complex(State stoich, int copy_tag, const std::string& label) {
  for (std::size_t i = 0; i < complexes_.size(); ++i) {
    if (complexes_[i].stoich == stoich && complexes_[i].copy_tag == copy_tag) {
      return static_cast<int>(i);
    }
  }
  Complex c;
  c.stoich = std::move(stoich);
  c.copy_tag = copy_tag;
  c.label = label;
  complexes_.push_back(std::move(c));
  return static_cast<int>(complexes_.size()) - 1;
}

NetworkBuilder& NetworkBuilder::add_reaction(int source, int target, RateSpec rate) {
  reactions_.push_back({source, target, std::move(rate)});
  return *this;
}

NetPtr NetworkBuilder::build() {
  auto net = std::make_shared<ReactionNetwork>();
  std::size_t n = species_.size();

  for (std::size_t i = 0; i < n; ++i) {
    if (species_[i].empty()) throw Error("empty species id");
    for (std::size_t j = i + 1; j < n; ++j) {
      if (species_[i] == species_[j]) throw Error("duplicate species id '" + species_[i] + "'");
    }
    net->species_.push_back({species_[i]});
  }

  std::map<std::string, State> label_stoich;
  for (auto& c : complexes_) {
    if (c.stoich.size() != n) throw Error("complex stoichiometry has wrong length");
    if (!nonnegative(c.stoich)) throw Error("complex stoichiometry has a negative entry");
    if (c.copy_tag < 0) throw Error("negative copy tag");
    if (c.label.empty()) c.label = stoich_label(c.stoich, net->species_);
    auto [it, fresh] = label_stoich.try_emplace(c.label, c.stoich);
    if (!fresh && it->second != c.stoich) {
      throw Error("complexes labelled '" + c.label + "' disagree on stoichiometry");
    }
  }
  for (std::size_t i = 0; i < complexes_.size(); ++i) {
    for (std::size_t j = i + 1; j < complexes_.size(); ++j) {
      if (complexes_[i].stoich == complexes_[j].stoich &&
          complexes_[i].copy_tag == complexes_[j].copy_tag) {
        throw Error("duplicate complex (stoichiometry, copy tag): '" + complexes_[i].label + "'");
      }
      if (complexes_[i].label == complexes_[j].label &&
          complexes_[i].copy_tag == complexes_[j].copy_tag) {
        throw Error("duplicate complex label '" + complexes_[i].label + "'");
      }
    }
  }
  net->complexes_ = complexes_;
  net->params_ = params_;
  std::vector<std::string> ids;
  ids.reserve(n);
  for (const auto& s : net->species_) ids.push_back(s.id);
  net->symbols_ = SymbolTable::make(std::move(ids), params_);

  // Group pending reactions by endpoint pair; merge or reject duplicates.
  std::map<std::pair<int, int>, std::vector<const PendingReaction*>> groups;
  for (const auto& pr : reactions_) {
    if (pr.source < 0 || pr.source >= static_cast<int>(complexes_.size()) ||
        pr.target < 0 || pr.target >= static_cast<int>(complexes_.size())) {
      throw Error("reaction endpoint out of range");
    }
    if (pr.source == pr.target) throw Error("reaction source equals target");
    groups[{pr.source, pr.target}].push_back(&pr);
  }

  std::function<Kinetics(const RateSpec&, const State&)> bind_one =
      [&](const RateSpec& spec, const State& source_stoich) -> Kinetics {
    switch (spec.kind) {
      case RateSpec::Kind::MassAuto:
        if (spec.alpha <= 0) throw Error("mass-action rate constant must be positive");
        return Kinetics::mass_action(spec.alpha, source_stoich);
      case RateSpec::Kind::MassBound:
        if (spec.alpha <= 0) throw Error("mass-action rate constant must be positive");
        if (spec.order.size() != source_stoich.size()) {
          throw Error("mass-action order vector has wrong length");
        }
        return Kinetics::mass_action(spec.alpha, spec.order);
      case RateSpec::Kind::Expr:
        return Kinetics::expression(spec.ast, net->symbols_, source_stoich);
      case RateSpec::Kind::Table:
        return Kinetics::table(spec.values, spec.label, source_stoich);
      case RateSpec::Kind::TableRef:
        return Kinetics::table_placeholder(spec.label);
      case RateSpec::Kind::DerivedRef:
        return Kinetics::derived_placeholder(spec.label);
      case RateSpec::Kind::Bound:
        if (!spec.bound.valid()) throw Error("empty bound kinetics");
        return spec.bound;
      case RateSpec::Kind::SumOf: {
        if (spec.parts.empty()) throw Error("empty rate sum");
        std::vector<Kinetics> bound;
        bound.reserve(spec.parts.size());
        for (const auto& p : spec.parts) bound.push_back(bind_one(p, source_stoich));
        return Kinetics::sum(std::move(bound));
      }
    }
    throw Error("malformed rate spec");
  };

  for (const auto& [edge, list] : groups) {
    if (list.size() > 1 && policy_ == MergePolicy::Error) {
      throw Error("parallel reaction between '" + complexes_[edge.first].label + "' and '" +
                  complexes_[edge.second].label + "'");
    }
    const State& src = complexes_[edge.first].stoich;
    std::vector<Kinetics> parts;
    parts.reserve(list.size());
    for (const auto* pr : list) parts.push_back(bind_one(pr->rate, src));
    Reaction r;
    r.source = edge.first;
    r.target = edge.second;
    r.kinetics = Kinetics::sum(std::move(parts));
    net->reactions_.push_back(std::move(r));
  }

  std::size_t nc = complexes_.size();
  std::vector<bool> touched(nc, false);
  net->out_.assign(nc, {});
  net->in_.assign(nc, {});
  for (std::size_t r = 0; r < net->reactions_.size(); ++r) {
    const auto& rx = net->reactions_[r];
    net->out_[rx.source].push_back(static_cast<int>(r));
    net->in_[rx.target].push_back(static_cast<int>(r));
    touched[rx.source] = touched[rx.target] = true;
    net->jumps_.push_back(sub(net->complexes_[rx.target].stoich, net->complexes_[rx.source].stoich));
  }
  for (std::size_t c = 0; c < nc; ++c) {
    if (!touched[c]) {
      throw Error("complex '" + net->complexes_[c].label + "' participates in no reaction");
    }
  }

  net->canonical_order_.resize(nc);
  std::iota(net->canonical_order_.begin(), net->canonical_order_.end(), 0);
  std::sort(net->canonical_order_.begin(), net->canonical_order_.end(), [&](int a, int b) {
    return canonical_complex_less(net->complexes_[a], net->complexes_[b]);
  });
  net->canonical_rank_.resize(nc);
  for (std::size_t i = 0; i < nc; ++i) net->canonical_rank_[net->canonical_order_[i]] = static_cast<int>(i);

  // Keep incoming/outgoing reaction lists in canonical order of the far
  // endpoint, so iteration order never depends on insertion order.
  for (std::size_t c = 0; c < nc; ++c) {
    auto& out = net->out_[c];
    std::sort(out.begin(), out.end(), [&](int a, int b) {
      return net->canonical_rank_[net->reactions_[a].target] <
             net->canonical_rank_[net->reactions_[b].target];
    });
    auto& in = net->in_[c];
    std::sort(in.begin(), in.end(), [&](int a, int b) {
      return net->canonical_rank_[net->reactions_[a].source] <
             net->canonical_rank_[net->reactions_[b].source];
    });
  }
  return net;
}

int ReactionNetwork::find_reaction(int source, int target) const {
  for (int r : out_[source]) {
    if (reactions_[r].target == target) return r;
  }
  return -1;
}

int ReactionNetwork::find_complex(const State& stoich, int copy_tag) const {
  for (std::size_t c = 0; c < complexes_.size(); ++c) {
    if (complexes_[c].copy_tag == copy_tag && complexes_[c].stoich == stoich) {
      return static_cast<int>(c);
    }
  }
  return -1;
}

NetPtr essential(const NetPtr& net) {
  for (int r = 0; r < net->num_reactions(); ++r) {
    const auto& rx = net->reaction(r);
    if (net->complex(rx.source).stoich == net->complex(rx.target).stoich) {
      throw Error("cannot merge: reaction between complexes of equal stoichiometry");
    }
  }
  NetworkBuilder b;
  for (const auto& s : net->species()) b.add_species(s.id);
  for (const auto& [k, v] : net->params()) b.set_param(k, v);
  b.merge_policy(MergePolicy::Sum);
  std::vector<int> remap(net->num_complexes());
  for (int c = 0; c < net->num_complexes(); ++c) {
    remap[c] = b.add_complex(net->complex(c).stoich, 0);
  }
  for (int r = 0; r < net->num_reactions(); ++r) {
    const auto& rx = net->reaction(r);
    b.add_reaction(remap[rx.source], remap[rx.target], RateSpec::bound_kinetics(rx.kinetics));
  }
  return b.build();
}

NetPtr translate_add_species(const NetPtr& net, const std::vector<int>& reaction_ids,
                             const State& delta) {
  if (delta.size() != static_cast<std::size_t>(net->num_species())) {
    throw Error("delta vector has wrong length");
  }
  if (!nonnegative(delta)) throw Error("delta must be non-negative");
  std::vector<bool> listed(net->num_reactions(), false);
  for (int r : reaction_ids) {
    if (r < 0 || r >= net->num_reactions()) throw Error("unknown reaction id");
    listed[r] = true;
  }
  NetworkBuilder b;
  for (const auto& s : net->species()) b.add_species(s.id);
  for (const auto& [k, v] : net->params()) b.set_param(k, v);
  b.merge_policy(MergePolicy::Sum);
  // Untouched endpoints keep their identity; shifted endpoints materialize
  // as tag-0 complexes with the shifted stoichiometry.
  std::vector<int> keep(net->num_complexes(), -1);
  auto keep_complex = [&](int c) {
    if (keep[c] < 0) {
      keep[c] = b.add_complex(net->complex(c).stoich, net->complex(c).copy_tag,
                              net->complex(c).label);
    }
    return keep[c];
  };
  bool zero_delta = true;
  for (Count v : delta) zero_delta = zero_delta && v == 0;
  for (int r = 0; r < net->num_reactions(); ++r) {
    const auto& rx = net->reaction(r);
    int s, t;
    if (listed[r] && !zero_delta) {
      s = b.add_complex(add(net->complex(rx.source).stoich, delta), 0);
      t = b.add_complex(add(net->complex(rx.target).stoich, delta), 0);
    } else {
      s = keep_complex(rx.source);
      t = keep_complex(rx.target);
    }
    b.add_reaction(s, t, RateSpec::bound_kinetics(rx.kinetics));
  }
  return b.build();
}

NetPtr split_reaction(const NetPtr& net, int reaction_id,
                      const std::vector<SplitPart>& parts,
                      const IrreducibleComponent* comp, double reltol) {
  if (reaction_id < 0 || reaction_id >= net->num_reactions()) throw Error("unknown reaction id");
  if (parts.empty()) throw Error("split requires at least one part");
  const State& jump = net->jump(reaction_id);

  NetworkBuilder b;
  for (const auto& s : net->species()) b.add_species(s.id);
  for (const auto& [k, v] : net->params()) b.set_param(k, v);
  b.merge_policy(MergePolicy::Sum);
  std::vector<int> remap(net->num_complexes());
  for (int c = 0; c < net->num_complexes(); ++c) {
    remap[c] = b.add_complex(net->complex(c).stoich, net->complex(c).copy_tag,
                             net->complex(c).label);
  }
  for (int r = 0; r < net->num_reactions(); ++r) {
    if (r == reaction_id) continue;
    const auto& rx = net->reaction(r);
    b.add_reaction(remap[rx.source], remap[rx.target], RateSpec::bound_kinetics(rx.kinetics));
  }
  for (const auto& part : parts) {
    State src = sub(part.target_stoich, jump);
    if (!nonnegative(src)) {
      throw Error("split part target is incompatible with the preserved jump vector");
    }
    int s = b.add_complex(src, 0);
    int t = b.add_complex(part.target_stoich, part.copy_tag);
    b.add_reaction(s, t, part.rate);
  }
  NetPtr result = b.build();

  if (comp != nullptr) {
    // The replaced rate must reappear as the pointwise sum of the parts;
    // compared via the total rate per jump vector, which is insensitive to
    // parts merging into pre-existing reactions.
    for (const State& x : comp->states()) {
      double before = 0.0;
      for (int r = 0; r < net->num_reactions(); ++r) {
        if (net->jump(r) == jump) before += net->rate(r, x);
      }
      double after = 0.0;
      for (int r = 0; r < result->num_reactions(); ++r) {
        if (result->jump(r) == jump) after += result->rate(r, x);
      }
      double scale = std::max({std::abs(before), std::abs(after), 1e-300});
      if (std::abs(before - after) / scale > reltol) {
        throw Error("split parts do not sum to the original rate at state " + to_string(x));
      }
    }
  }
  return result;
}

std::optional<std::vector<double>> mass_action_constants(const ReactionNetwork& net) {
  std::vector<double> alphas;
  alphas.reserve(net.num_reactions());
  for (int r = 0; r < net.num_reactions(); ++r) {
    const Kinetics& k = net.reaction(r).kinetics;
    if (k.kind() != KineticsKind::MassAction) return std::nullopt;
    if (k.mass_action_order() != net.complex(net.reaction(r).source).stoich) return std::nullopt;
    alphas.push_back(k.mass_action_rate());
  }
  return alphas;
}

}  // namespace srn
