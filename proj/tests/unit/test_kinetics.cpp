#include <atomic>

#include "doctest.h"
#include "srn/kinetics.hpp"
#include "srn/parser.hpp"

using namespace srn;

namespace {

std::shared_ptr<const SymbolTable> ab_symbols() {
  return SymbolTable::make({"A", "B"}, {{"k", 2.5}});
}

}  // namespace

TEST_CASE("mass action uses falling factorials of the source counts") {
  Kinetics k = Kinetics::mass_action(2.0, {2, 1});
  CHECK(k.rate(State{4, 3}) == doctest::Approx(2.0 * 4 * 3 * 3));
  CHECK(k.rate(State{1, 5}) == 0.0);  // below order, no throw
  CHECK(k.rate(State{2, 1}) == doctest::Approx(2.0 * 2 * 1 * 1));
  CHECK(k.rate(State{0, 0}) == 0.0);
  CHECK(k.kind() == KineticsKind::MassAction);
  CHECK(k.mass_action_rate() == 2.0);
  CHECK(k.mass_action_order() == State{2, 1});
}

TEST_CASE("zero-order mass action is a constant birth rate") {
  Kinetics k = Kinetics::mass_action(3.5, {0, 0});
  CHECK(k.rate(State{0, 0}) == 3.5);
  CHECK(k.rate(State{7, 2}) == 3.5);
}

TEST_CASE("expressions resolve species, params and aliases") {
  auto sym = SymbolTable::make({"E*", "P"}, {{"b", 1.5}});
  ExprPtr e = parse_expression("2*Estar/(b+P)");
  Kinetics k = Kinetics::expression(e, sym, {1, 0});
  CHECK(k.rate(State{3, 1}) == doctest::Approx(6.0 / 2.5));
  CHECK(k.expression_text() == "2*Estar/(b+P)");
}

TEST_CASE("expression guard short-circuits evaluation") {
  // Below the guard the denominator would be zero; the guard must win.
  Kinetics k = Kinetics::expression(parse_expression("k*A/(A-1)"), ab_symbols(), {2, 0});
  CHECK(k.rate(State{1, 0}) == 0.0);
  CHECK(k.rate(State{0, 0}) == 0.0);
  CHECK(k.rate(State{3, 0}) == doctest::Approx(2.5 * 3.0 / 2.0));
}

TEST_CASE("expression failures throw instead of returning garbage") {
  Kinetics div0 = Kinetics::expression(parse_expression("1/(A-2)"), ab_symbols(), {0, 0});
  CHECK_THROWS_AS(div0.rate(State{2, 0}), EvalError);
  Kinetics negative = Kinetics::expression(parse_expression("A-5"), ab_symbols(), {0, 0});
  CHECK_THROWS_AS(negative.rate(State{1, 0}), EvalError);
  Kinetics unbound = Kinetics::expression(parse_expression("missing+1"), ab_symbols(), {0, 0});
  CHECK_THROWS_AS(unbound.rate(State{0, 0}), EvalError);
}

TEST_CASE("table kinetics look up states and reject the outside") {
  StateMap<double> values;
  values[{0}] = 0.0;
  values[{1}] = 2.0;
  values[{2}] = 3.5;
  Kinetics k = Kinetics::table(values, "deaths", {1});
  CHECK(k.rate(State{1}) == 2.0);
  CHECK(k.rate(State{2}) == 3.5);
  CHECK(k.rate(State{0}) == 0.0);  // guard applies before lookup
  CHECK_THROWS_AS(k.rate(State{3}), EvalError);
  CHECK(k.opaque_label() == "deaths");
  REQUIRE(k.table_values() != nullptr);
  CHECK(k.table_values()->size() == 3);
}

TEST_CASE("derived kinetics memoize per state") {
  auto calls = std::make_shared<std::atomic<int>>(0);
  Kinetics k = Kinetics::derived("counter", [calls](std::span<const Count> x) {
    ++*calls;
    return static_cast<double>(x[0]) + 1.0;
  });
  CHECK(k.rate(State{4}) == 5.0);
  CHECK(k.rate(State{4}) == 5.0);
  CHECK(calls->load() == 1);
  CHECK(k.rate(State{5}) == 6.0);
  CHECK(calls->load() == 2);
}

TEST_CASE("derived kinetics clip tiny negatives to zero") {
  Kinetics k = Kinetics::derived("noise", [](std::span<const Count>) { return -1e-13; });
  CHECK(k.rate(State{0}) == 0.0);
}

TEST_CASE("sum kinetics add their parts pointwise") {
  Kinetics k = Kinetics::sum({Kinetics::mass_action(1.0, {1}), Kinetics::mass_action(0.5, {0})});
  CHECK(k.rate(State{4}) == doctest::Approx(4.5));
  CHECK(k.kind() == KineticsKind::Sum);
  CHECK(k.summands().size() == 2);
}

TEST_CASE("placeholders are visible but not evaluable") {
  Kinetics t = Kinetics::table_placeholder("lambda1");
  CHECK_FALSE(t.evaluable());
  CHECK_THROWS_AS(t.rate(State{1}), EvalError);
  Kinetics d = Kinetics::derived_placeholder("walk");
  CHECK_FALSE(d.evaluable());
  CHECK_THROWS_AS(d.rate(State{1}), EvalError);
}

TEST_CASE("descriptor equality matches placeholders with their sources") {
  StateMap<double> values;
  values[{1}] = 2.0;
  Kinetics full = Kinetics::table(values, "lambda1", {1});
  CHECK(full.same_descriptor(Kinetics::table_placeholder("lambda1")));
  CHECK_FALSE(full.same_descriptor(Kinetics::table_placeholder("lambda2")));
  CHECK(Kinetics::mass_action(2.0, {1}).same_descriptor(Kinetics::mass_action(2.0, {1})));
  CHECK_FALSE(Kinetics::mass_action(2.0, {1}).same_descriptor(Kinetics::mass_action(2.1, {1})));
}

TEST_CASE("number formatting round trips and avoids noise digits") {
  CHECK(format_number(2.0) == "2");
  CHECK(format_number(0.5) == "0.5");
  for (double v : {1.0 / 3.0, 1e-9, 123456.789, 2.0 / 15.0, 1.0000000000000002}) {
    CHECK(std::stod(format_number(v)) == v);
  }
}
