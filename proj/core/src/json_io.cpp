#include "srn/json_io.hpp"

#include <algorithm>
#include <cstdio>

#include "srn/parser.hpp"

namespace srn {

namespace {

Json state_to_json(const State& s) { return Json(s); }

State state_from_json(const Json& j) {
  if (!j.is_array()) throw Error("state must be a JSON array");
  State s;
  for (const auto& v : j) s.push_back(v.get<Count>());
  return s;
}

Json table_to_json(const StateMap<double>& values) {
  std::vector<State> keys;
  keys.reserve(values.size());
  for (const auto& [s, v] : values) {
    (void)v;
    keys.push_back(s);
  }
  std::sort(keys.begin(), keys.end(), lex_less);
  Json arr = Json::array();
  for (const auto& s : keys) {
    arr.push_back({{"state", state_to_json(s)}, {"value", values.at(s)}});
  }
  return arr;
}

StateMap<double> table_from_json(const Json& j) {
  StateMap<double> values;
  for (const auto& entry : j) {
    values[state_from_json(entry.at("state"))] = entry.at("value").get<double>();
  }
  return values;
}

}  // namespace

Json kinetics_to_json(const Kinetics& k) {
  Json j;
  switch (k.kind()) {
    case KineticsKind::MassAction:
      j["type"] = "ma";
      j["alpha"] = k.mass_action_rate();
      j["order"] = state_to_json(k.mass_action_order());
      break;
    case KineticsKind::Expression:
      j["type"] = "expr";
      j["text"] = k.expression_text();
      break;
    case KineticsKind::Table:
      j["type"] = "table";
      j["label"] = k.opaque_label();
      if (const StateMap<double>* values = k.table_values()) {
        j["values"] = table_to_json(*values);
      }
      break;
    case KineticsKind::Derived:
      j["type"] = "derived";
      j["label"] = k.opaque_label();
      break;
    case KineticsKind::Sum: {
      j["type"] = "sum";
      Json parts = Json::array();
      for (const auto& p : k.summands()) parts.push_back(kinetics_to_json(p));
      j["parts"] = std::move(parts);
      break;
    }
  }
  return j;
}

RateSpec rate_spec_from_json(const Json& doc) {
  const std::string type = doc.at("type").get<std::string>();
  if (type == "ma") {
    double alpha = doc.at("alpha").get<double>();
    if (doc.contains("order")) {
      return RateSpec::ma_with_order(alpha, state_from_json(doc.at("order")));
    }
    return RateSpec::ma(alpha);
  }
  if (type == "expr") {
    return RateSpec::expr(parse_expression(doc.at("text").get<std::string>()));
  }
  if (type == "table") {
    std::string label = doc.value("label", std::string{});
    if (doc.contains("values")) {
      return RateSpec::table(table_from_json(doc.at("values")), std::move(label));
    }
    return RateSpec::table_ref(std::move(label));
  }
  if (type == "derived") {
    return RateSpec::derived_ref(doc.value("label", std::string{}));
  }
  if (type == "sum") {
    std::vector<RateSpec> parts;
    for (const auto& p : doc.at("parts")) parts.push_back(rate_spec_from_json(p));
    return RateSpec::sum_of(std::move(parts));
  }
  throw Error("unknown kinetics type '" + type + "'");
}

Json network_to_json(const ReactionNetwork& net) {
  Json j;
  Json species = Json::array();
  for (const auto& s : net.species()) species.push_back(s.id);
  j["species"] = std::move(species);
  if (!net.params().empty()) {
    Json params;
    for (const auto& [name, v] : net.params()) params[name] = v;
    j["params"] = std::move(params);
  }
  Json complexes = Json::array();
  for (int c = 0; c < net.num_complexes(); ++c) {
    const Complex& cx = net.complex(c);
    complexes.push_back({{"base_label", cx.label},
                         {"copy_tag", cx.copy_tag},
                         {"stoich", state_to_json(cx.stoich)}});
  }
  j["complexes"] = std::move(complexes);
  Json reactions = Json::array();
  for (int r = 0; r < net.num_reactions(); ++r) {
    const Reaction& rx = net.reaction(r);
    reactions.push_back({{"source", rx.source},
                         {"target", rx.target},
                         {"kinetics", kinetics_to_json(rx.kinetics)}});
  }
  j["reactions"] = std::move(reactions);
  return j;
}

NetPtr network_from_json(const Json& doc) {
  NetworkBuilder b;
  for (const auto& s : doc.at("species")) b.add_species(s.get<std::string>());
  if (doc.contains("params")) {
    for (const auto& [name, v] : doc.at("params").items()) b.set_param(name, v.get<double>());
  }
  std::vector<int> ids;
  for (const auto& c : doc.at("complexes")) {
    ids.push_back(b.add_complex(state_from_json(c.at("stoich")), c.value("copy_tag", 0),
                                c.value("base_label", std::string{})));
  }
  for (const auto& r : doc.at("reactions")) {
    int src = r.at("source").get<int>();
    int tgt = r.at("target").get<int>();
    if (src < 0 || tgt < 0 || src >= static_cast<int>(ids.size()) ||
        tgt >= static_cast<int>(ids.size())) {
      throw Error("reaction endpoint index out of range");
    }
    b.add_reaction(ids[src], ids[tgt], rate_spec_from_json(r.at("kinetics")));
  }
  return b.build();
}

Json distribution_to_json(const Distribution& d) {
  Json states = Json::array();
  Json probs = Json::array();
  for (std::size_t i = 0; i < d.size(); ++i) {
    states.push_back(state_to_json(d.component().states()[i]));
    probs.push_back(d[i]);
  }
  return Json{{"states", std::move(states)}, {"probs", std::move(probs)}};
}

Json report_to_json(const BalanceReport& r) {
  Json j;
  j["property"] = r.property;
  j["verdict"] = r.verdict;
  j["tolerance"] = r.tolerance;
  j["max_residual"] = r.max_residual;
  j["states_checked"] = r.states_checked;
  if (r.worst_complex >= 0) j["worst_complex"] = r.worst_complex;
  if (!r.worst_state.empty()) j["worst_state"] = state_to_json(r.worst_state);
  if (!r.reason.empty()) j["reason"] = r.reason;
  return j;
}

Json component_to_json(const IrreducibleComponent& comp) {
  Json j;
  j["origin"] = state_to_json(comp.origin());
  if (comp.truncation().per_species) {
    j["per_species_cap"] = state_to_json(*comp.truncation().per_species);
  } else {
    j["cap"] = comp.truncation().cap;
  }
  Json states = Json::array();
  Json interior = Json::array();
  for (std::size_t i = 0; i < comp.states().size(); ++i) {
    states.push_back(state_to_json(comp.states()[i]));
    interior.push_back(comp.interior(static_cast<int>(i)));
  }
  j["states"] = std::move(states);
  j["interior"] = std::move(interior);
  j["clipped"] = comp.clipped();
  return j;
}

Json factorization_to_json(const Factorization& f) {
  Json j;
  j["g"] = table_to_json(f.g);
  Json m = Json::array();
  for (const auto& table : f.m) m.push_back(table_to_json(table));
  j["m"] = std::move(m);
  j["kappa"] = f.kappa;
  return j;
}

Json cycles_to_json(const CycleInventory& inv) {
  Json cycles = Json::array();
  for (const auto& c : inv.cycles) cycles.push_back(c.reactions);
  return Json{{"cycles", std::move(cycles)}, {"cap_exceeded", inv.cap_exceeded}};
}

Json cleaving_to_json(const CleavingResult& res) {
  Json j;
  j["network"] = network_to_json(*res.network);
  j["complex_map"] = res.projection.complex_map;
  j["reaction_map"] = res.projection.reaction_map;
  j["cycles"] = cycles_to_json(res.cycles);
  return j;
}

Json histogram_to_json(const EmpiricalDistribution& h) {
  std::vector<State> keys;
  keys.reserve(h.fraction.size());
  for (const auto& [s, v] : h.fraction) {
    (void)v;
    keys.push_back(s);
  }
  std::sort(keys.begin(), keys.end(), lex_less);
  Json states = Json::array();
  Json fractions = Json::array();
  for (const auto& s : keys) {
    states.push_back(state_to_json(s));
    fractions.push_back(h.fraction.at(s));
  }
  Json j;
  j["states"] = std::move(states);
  j["fractions"] = std::move(fractions);
  j["total_time"] = h.total_time;
  j["events"] = h.events;
  return j;
}

Json manifest_to_json(const RunManifest& m) {
  Json j;
  j["subcommand"] = m.subcommand;
  j["input_hash"] = m.input_hash;
  j["version"] = m.version;
  j["config"] = m.config.is_null() ? Json::object() : m.config;
  j["elapsed_seconds"] = m.elapsed_seconds;
  return j;
}

std::string content_hash(const std::string& content) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : content) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string dump_json(const Json& j) { return j.dump(2) + "\n"; }

}  // namespace srn
