#include <fstream>
#include <sstream>

#include "doctest.h"
#include "srn/fixtures.hpp"
#include "srn/parser.hpp"

using namespace srn;

namespace {

std::string fixture_text(const char* name) {
  std::ifstream in(std::string(SRN_FIXTURE_DIR) + "/" + name);
  REQUIRE(in);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("a reaction line parses into complexes and mass action kinetics") {
  NetPtr net = parse_network("A + 2B -> C : ma(1.5)\n");
  CHECK(net->num_species() == 3);
  CHECK(net->species()[0].id == "A");
  CHECK(net->species()[1].id == "B");
  CHECK(net->species()[2].id == "C");
  CHECK(net->num_complexes() == 2);
  CHECK(net->num_reactions() == 1);
  CHECK(net->rate(0, State{2, 3, 0}) == doctest::Approx(1.5 * 2 * 3 * 2));
}

TEST_CASE("reversible arrows expand into both directions") {
  NetPtr net = parse_network("A <-> B : ma(3), ma(4)\n");
  CHECK(net->num_reactions() == 2);
  int a = net->find_complex({1, 0}, 0);
  int b = net->find_complex({0, 1}, 0);
  CHECK(net->rate(net->find_reaction(a, b), State{1, 0}) == 3.0);
  CHECK(net->rate(net->find_reaction(b, a), State{0, 1}) == 4.0);
}

TEST_CASE("comments, blank lines and the empty complex are accepted") {
  NetPtr net = parse_network("# birth and death\n\n0 -> A : ma(2)  # birth\nA -> 0 : ma(1)\n");
  CHECK(net->num_reactions() == 2);
  CHECK(net->find_complex({0}, 0) >= 0);
}

TEST_CASE("copy tags distinguish complexes with one stoichiometry") {
  NetPtr net = parse_network("A @1 -> B @1 : ma(1)\nA @2 -> B @2 : ma(2)\n");
  CHECK(net->num_complexes() == 4);
  CHECK(net->find_complex({1, 0}, 1) >= 0);
  CHECK(net->find_complex({1, 0}, 2) >= 0);
}

TEST_CASE("params feed expressions and print first") {
  NetPtr net = parse_network("param k = 2\nA -> 0 : expr(k*A/(1+A))\n");
  CHECK(net->params().at("k") == 2.0);
  CHECK(net->rate(0, State{3}) == doctest::Approx(1.5));
  std::string text = print_network(*net);
  CHECK(text.substr(0, 5) == "param");
}

TEST_CASE("table and derived rates parse as opaque references") {
  NetPtr net = parse_network("A -> 0 : table(lambda1)\n0 -> A : derived(walk)\n");
  CHECK_FALSE(net->reaction(0).kinetics.evaluable());
  CHECK_FALSE(net->reaction(1).kinetics.evaluable());
  std::string text = print_network(*net);
  CHECK(text.find("table(lambda1)") != std::string::npos);
  CHECK(text.find("derived(walk)") != std::string::npos);
}

TEST_CASE("sum rates parse and evaluate part by part") {
  // Both parts are mass action over the source complex A, so they add as
  // (1 + 0.5) * x.
  NetPtr net = parse_network("A -> 0 : sum(ma(1); ma(0.5))\n");
  CHECK(net->rate(0, State{4}) == doctest::Approx(6.0));
}

TEST_CASE("printing is canonical and parse-stable") {
  for (const NetPtr& net :
       {fixtures::triangle(), fixtures::split_pair_copies(), fixtures::network1(),
        fixtures::phosphorylation({2, 1, 1.5, 1, 2, 3})}) {
    std::string once = print_network(*net);
    std::string twice = print_network(*parse_network(once));
    CHECK(once == twice);
  }
}

TEST_CASE("parsing a printed network preserves rates") {
  NetPtr net = fixtures::triangle();
  NetPtr back = parse_network(print_network(*net));
  REQUIRE(back->num_reactions() == net->num_reactions());
  State probe{3, 1, 2};
  for (int r = 0; r < net->num_reactions(); ++r) {
    const auto& rx = net->reaction(r);
    int mapped = back->find_reaction(
        back->find_complex(net->complex(rx.source).stoich, net->complex(rx.source).copy_tag),
        back->find_complex(net->complex(rx.target).stoich, net->complex(rx.target).copy_tag));
    REQUIRE(mapped >= 0);
    CHECK(back->rate(mapped, probe) == doctest::Approx(net->rate(r, probe)));
  }
}

TEST_CASE("shipped fixture files parse and round trip") {
  for (const char* name : {"triangle.srn", "split_pair.srn", "split_pair_copies.srn",
                           "birth_death.srn", "phosphorylation.srn", "michaelis_menten.srn",
                           "network1.srn"}) {
    CAPTURE(name);
    std::string text = fixture_text(name);
    NetPtr net = parse_network(text);
    CHECK(net->num_reactions() > 0);
    std::string once = print_network(*net);
    CHECK(print_network(*parse_network(once)) == once);
  }
}

TEST_CASE("parse errors carry line and column spans") {
  try {
    parse_network("A -> B : ma(1)\nB -> : ma(2)\n");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.span.line == 2);
    CHECK(e.span.col_start >= 6);
  }
  CHECK_THROWS_AS(parse_network("A -> B\n"), ParseError);          // missing kinetics
  CHECK_THROWS_AS(parse_network("A -> B : ma()\n"), ParseError);   // missing constant
  CHECK_THROWS_AS(parse_network("A -> B : drift(1)\n"), ParseError);
  CHECK_THROWS_AS(parse_network("A <-> B : ma(1)\n"), ParseError);  // needs both rates
  CHECK_THROWS_AS(parse_network("param = 2\n"), ParseError);
  CHECK_THROWS_AS(parse_network("A -> B : expr(1+)\n"), ParseError);
  CHECK_THROWS_AS(parse_network("A -> B : expr((1+A)\n"), ParseError);
}

TEST_CASE("standalone expressions follow the usual precedence") {
  auto sym = SymbolTable::make({"A"}, {});
  Kinetics k = Kinetics::expression(parse_expression("1+2*3-4/2"), sym, {0});
  CHECK(k.rate(State{0}) == doctest::Approx(5.0));
  Kinetics k2 = Kinetics::expression(parse_expression("(1+2)*(A-1)"), sym, {2});
  CHECK(k2.rate(State{3}) == doctest::Approx(6.0));
  Kinetics k3 = Kinetics::expression(parse_expression("-(A-4)"), sym, {0});
  CHECK(k3.rate(State{1}) == doctest::Approx(3.0));
}

TEST_CASE("expression text round trips through the printer") {
  for (const char* text : {"2*A", "a1*S*Estar/(b1+S)", "k*(A+1)/(B+2)", "A*B-1", "-(A-4)",
                           "1/(2*(A+1))"}) {
    ExprPtr e = parse_expression(text);
    std::string printed = expr_to_string(e);
    CHECK(expr_to_string(parse_expression(printed)) == printed);
  }
}
