#include <string>

#include "doctest.h"
#include "srn/fixtures.hpp"
#include "srn/json_io.hpp"
#include "srn/parser.hpp"
#include "srn/simulate.hpp"

using namespace srn;

namespace {

CompPtr make_comp(const NetPtr& net, State origin, Count cap) {
  Truncation box;
  box.cap = cap;
  return std::make_shared<IrreducibleComponent>(*net, std::move(origin), box);
}

void check_network_round_trip(const NetPtr& net, const std::vector<State>& probes) {
  Json doc = network_to_json(*net);
  NetPtr back = network_from_json(doc);
  CHECK(network_to_json(*back) == doc);
  REQUIRE(back->num_reactions() == net->num_reactions());
  REQUIRE(back->num_complexes() == net->num_complexes());
  for (const State& x : probes) {
    for (int r = 0; r < net->num_reactions(); ++r) {
      CHECK(back->rate(r, x) == doctest::Approx(net->rate(r, x)).epsilon(1e-12));
    }
  }
}

}  // namespace

TEST_CASE("networks round trip through their documents") {
  check_network_round_trip(fixtures::triangle(), {{3, 2, 1}, {0, 1, 2}});
  check_network_round_trip(fixtures::split_pair_copies(), {{2, 1}, {0, 3}});
  check_network_round_trip(fixtures::phosphorylation({2, 1, 1.5, 1, 2, 3}), {{2, 2, 1}, {1, 0, 4}});
  check_network_round_trip(fixtures::michaelis_menten({1.3, 0.9, 2, 1.4}, {0.8, 1.7, 2.5, 2.5}),
                           {{5, 20, 5, 3}, {10, 40, 0, 0}});
  // Table kinetics serialize their values and reload evaluable.
  check_network_round_trip(fixtures::birth_death_target(2, 3, 1.5, 25), {{0}, {1}, {13}});
}

TEST_CASE("kinetics documents carry their type tag") {
  NetPtr mm = fixtures::michaelis_menten({1, 1, 1, 1}, {1, 1, 1, 1});
  Json k0 = kinetics_to_json(mm->reaction(0).kinetics);
  CHECK(k0.at("type") == "expr");
  NetPtr tri = fixtures::triangle();
  Json k1 = kinetics_to_json(tri->reaction(0).kinetics);
  CHECK(k1.at("type") == "ma");
  CHECK(k1.at("alpha") == 1.0);
  NetPtr bd = fixtures::birth_death_target(2, 3, 1.5, 10);
  bool saw_table = false;
  for (int r = 0; r < bd->num_reactions(); ++r) {
    Json k = kinetics_to_json(bd->reaction(r).kinetics);
    if (k.at("type") == "table") saw_table = true;
  }
  CHECK(saw_table);
}

TEST_CASE("component and distribution documents expose their shape") {
  NetPtr net = fixtures::triangle();
  CompPtr comp = make_comp(net, {1, 1, 1}, 3);
  Json c = component_to_json(*comp);
  CHECK(c.at("origin") == Json::array({1, 1, 1}));
  CHECK(c.at("cap") == 3);
  REQUIRE(c.at("states").size() == 10);
  REQUIRE(c.at("interior").size() == 10);
  for (const auto& flag : c.at("interior")) CHECK(flag == true);
  CHECK(c.at("clipped") == false);

  Distribution pi = Distribution::from_weights(comp, std::vector<double>(10, 1.0));
  Json d = distribution_to_json(pi);
  REQUIRE(d.at("states").size() == 10);
  REQUIRE(d.at("probs").size() == 10);
  double sum = 0.0;
  for (const auto& p : d.at("probs")) sum += p.get<double>();
  CHECK(sum == doctest::Approx(1.0));
}

TEST_CASE("balance reports serialize verdict and location") {
  NetPtr net = fixtures::split_pair();
  CompPtr comp = make_comp(net, {1, 1}, 5);
  Distribution uniform = Distribution::from_weights(comp, {1.0, 1.0, 1.0});
  BalanceReport rep = check_stationary(*net, uniform);
  Json doc = report_to_json(rep);
  CHECK(doc.at("property") == "stationary");
  CHECK(doc.at("verdict") == false);
  CHECK(doc.at("max_residual").get<double>() > 0.0);
  CHECK(doc.at("states_checked") == 3);
}

TEST_CASE("factorization documents list g and m as state-value pairs") {
  NetPtr net = fixtures::triangle();
  CompPtr comp = make_comp(net, {1, 1, 1}, 3);
  CbSolution sol = complex_balanced_solve(net, comp);
  Json doc = factorization_to_json(sol.factorization);
  REQUIRE(doc.at("g").is_array());
  CHECK(doc.at("g").size() == 10);
  for (const auto& entry : doc.at("g")) {
    CHECK(entry.contains("state"));
    CHECK(entry.contains("value"));
  }
  REQUIRE(doc.at("m").is_array());
  CHECK(doc.at("m").size() == 1);
  CHECK(doc.at("kappa").size() == 6);
}

TEST_CASE("cleaving documents map the derived network onto its base") {
  CleavingResult res = cleave_full(fixtures::triangle());
  Json doc = cleaving_to_json(res);
  CHECK(doc.contains("network"));
  CHECK(doc.at("complex_map").size() == static_cast<std::size_t>(res.network->num_complexes()));
  CHECK(doc.at("reaction_map").size() == static_cast<std::size_t>(res.network->num_reactions()));
  CHECK(doc.at("cycles").at("cycles").size() == 5);
  NetPtr back = network_from_json(doc.at("network"));
  CHECK(back->num_complexes() == res.network->num_complexes());
}

TEST_CASE("histograms keep states and fractions aligned") {
  SimConfig cfg;
  cfg.initial = {1, 1, 1};
  cfg.t_end = 50.0;
  EmpiricalDistribution e = simulate(*fixtures::triangle(), cfg);
  Json doc = histogram_to_json(e);
  REQUIRE(doc.at("states").size() == doc.at("fractions").size());
  CHECK(doc.at("events").get<std::uint64_t>() == e.events);
  CHECK(doc.at("total_time").get<double>() == doctest::Approx(e.total_time));
  // States are listed sorted, so the document is deterministic.
  auto states = doc.at("states");
  for (std::size_t i = 1; i < states.size(); ++i) {
    CHECK(states[i - 1].get<std::vector<Count>>() < states[i].get<std::vector<Count>>());
  }
}

TEST_CASE("manifests carry the run identity") {
  RunManifest m;
  m.subcommand = "analyze";
  m.input_hash = content_hash("body");
  m.version = "0.1.0";
  m.config = Json{{"tol", 1e-9}};
  m.elapsed_seconds = 0.125;
  Json doc = manifest_to_json(m);
  CHECK(doc.at("subcommand") == "analyze");
  CHECK(doc.at("version") == "0.1.0");
  CHECK(doc.at("config").at("tol") == 1e-9);
  CHECK(doc.at("elapsed_seconds") == 0.125);
}

TEST_CASE("the content fingerprint is the reference 64-bit FNV-1a") {
  CHECK(content_hash("") == "cbf29ce484222325");
  CHECK(content_hash("a") == "af63dc4c8601ec8c");
  CHECK(content_hash("hello") == "a430d84680aabd0b");
  CHECK(content_hash("hello") == content_hash("hello"));
  CHECK(content_hash("hello!") != content_hash("hello"));
}

TEST_CASE("dumped documents are deterministic and newline-terminated") {
  Json doc = network_to_json(*fixtures::triangle());
  std::string s1 = dump_json(doc);
  std::string s2 = dump_json(network_to_json(*fixtures::triangle()));
  CHECK(s1 == s2);
  REQUIRE_FALSE(s1.empty());
  CHECK(s1.back() == '\n');
  CHECK(s1.find("  \"") != std::string::npos);
}

TEST_CASE("malformed network documents are rejected") {
  CHECK_THROWS(network_from_json(Json::object()));
  Json doc = network_to_json(*fixtures::triangle());
  doc.erase("reactions");
  CHECK_THROWS(network_from_json(doc));
}
