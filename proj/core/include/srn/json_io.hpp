#pragma once

#include <string>

#include "json.hpp"
#include "srn/balance.hpp"
#include "srn/cleave.hpp"
#include "srn/graph.hpp"
#include "srn/model.hpp"
#include "srn/simulate.hpp"
#include "srn/state_space.hpp"

namespace srn {

// Keys serialize sorted, so every dump is deterministic.
using Json = nlohmann::json;

// Network documents round trip: from_json(to_json(net)) rebuilds an equal
// network, including evaluable table kinetics. Expression kinetics carry
// their text; derived kinetics reload as opaque references.
Json network_to_json(const ReactionNetwork& net);
NetPtr network_from_json(const Json& doc);

Json kinetics_to_json(const Kinetics& k);
RateSpec rate_spec_from_json(const Json& doc);

Json distribution_to_json(const Distribution& d);
Json report_to_json(const BalanceReport& r);
Json component_to_json(const IrreducibleComponent& comp);
Json factorization_to_json(const Factorization& f);
Json cycles_to_json(const CycleInventory& inv);
Json cleaving_to_json(const CleavingResult& res);
Json histogram_to_json(const EmpiricalDistribution& h);

// Identification block attached to every CLI JSON document.
struct RunManifest {
  std::string subcommand;
  std::string input_hash;
  std::string version;
  Json config;
  double elapsed_seconds = 0.0;
};

Json manifest_to_json(const RunManifest& m);

// FNV-1a 64-bit, hex encoded; used to fingerprint input files.
std::string content_hash(const std::string& content);

// 2-space indentation plus trailing newline.
std::string dump_json(const Json& j);

}  // namespace srn
