#include "srn/fixtures.hpp"

#include <cmath>
#include <string>
#include <vector>

#include "srn/graph.hpp"
#include "srn/kinetics.hpp"
#include "srn/state_space.hpp"

namespace srn::fixtures {

namespace {

ExprPtr num(double v) { return ExprNode::num(v); }
ExprPtr var(std::string n) { return ExprNode::var(std::move(n)); }
ExprPtr mul(ExprPtr a, ExprPtr b) {
  return ExprNode::binary(ExprNode::Op::Mul, std::move(a), std::move(b));
}
ExprPtr divide(ExprPtr a, ExprPtr b) {
  return ExprNode::binary(ExprNode::Op::Div, std::move(a), std::move(b));
}
ExprPtr plus(ExprPtr a, ExprPtr b) {
  return ExprNode::binary(ExprNode::Op::Add, std::move(a), std::move(b));
}
ExprPtr minus(ExprPtr a, ExprPtr b) {
  return ExprNode::binary(ExprNode::Op::Sub, std::move(a), std::move(b));
}

}  // namespace

NetPtr triangle() {
  NetworkBuilder b({"A", "B", "C"});
  int a = b.add_complex({1, 0, 0});
  int bb = b.add_complex({0, 1, 0});
  int c = b.add_complex({0, 0, 1});
  b.add_reaction(a, bb, RateSpec::ma(1.0));
  b.add_reaction(bb, a, RateSpec::ma(2.0));
  b.add_reaction(bb, c, RateSpec::ma(1.0));
  b.add_reaction(c, bb, RateSpec::ma(2.0));
  b.add_reaction(c, a, RateSpec::ma(1.0));
  b.add_reaction(a, c, RateSpec::ma(2.0));
  return b.build();
}

NetPtr split_pair() {
  NetworkBuilder b({"A", "B"});
  int a = b.add_complex({1, 0});
  int bb = b.add_complex({0, 1});
  b.add_reaction(a, bb, RateSpec::ma(3.0));
  b.add_reaction(bb, a, RateSpec::ma(3.0));
  return b.build();
}

NetPtr split_pair_copies() {
  NetworkBuilder b({"A", "B"});
  int a1 = b.add_complex({1, 0}, 1);
  int b1 = b.add_complex({0, 1}, 1);
  int a2 = b.add_complex({1, 0}, 2);
  int b2 = b.add_complex({0, 1}, 2);
  b.add_reaction(a1, b1, RateSpec::ma(1.0));
  b.add_reaction(b1, a1, RateSpec::ma(2.0));
  b.add_reaction(a2, b2, RateSpec::ma(2.0));
  b.add_reaction(b2, a2, RateSpec::ma(1.0));
  return b.build();
}

NetPtr birth_death(double a1, double a2, double a3) {
  NetworkBuilder b({"A"});
  int a = b.add_complex({1});
  int zero = b.add_complex({0});
  int two = b.add_complex({2});
  b.add_reaction(a, zero, RateSpec::ma(a1));
  b.add_reaction(zero, a, RateSpec::ma(a2));
  b.add_reaction(zero, two, RateSpec::ma(a3));
  return b.build();
}

NetPtr birth_death_target(double a1, double a2, double a3, Count x_max) {
  NetPtr base = birth_death(a1, a2, a3);
  BdSplit split = bd_split_rates(a1, a2, a3, static_cast<int>(x_max));
  StateMap<double> t1, t4;
  for (Count x = 0; x <= x_max; ++x) {
    t1[State{x}] = split.lambda1[static_cast<std::size_t>(x)];
    t4[State{x}] = split.lambda4[static_cast<std::size_t>(x)];
  }
  int death = base->find_reaction(base->find_complex({1}, 0), base->find_complex({0}, 0));
  std::vector<SplitPart> parts;
  parts.push_back({State{0}, 0, RateSpec::table(std::move(t1), "lambda1")});
  parts.push_back({State{1}, 0, RateSpec::table(std::move(t4), "lambda4")});
  return split_reaction(base, death, parts);
}

NetPtr phosphorylation_base(const std::array<double, 6>& a) {
  NetworkBuilder b({"A", "B", "C"});
  int ca = b.add_complex({1, 0, 0});
  int cb = b.add_complex({0, 1, 0});
  int cc = b.add_complex({0, 0, 1});
  int c2a = b.add_complex({2, 0, 0});
  int cab = b.add_complex({1, 1, 0});
  int cac = b.add_complex({1, 0, 1});
  b.add_reaction(cb, ca, RateSpec::ma(a[0]));
  b.add_reaction(cb, cc, RateSpec::ma(a[1]));
  b.add_reaction(cc, cb, RateSpec::ma(a[2]));
  b.add_reaction(c2a, cab, RateSpec::ma(a[3]));
  b.add_reaction(cab, cac, RateSpec::ma(a[4]));
  b.add_reaction(cac, cab, RateSpec::ma(a[5]));
  return b.build();
}

NetPtr phosphorylation(const std::array<double, 6>& a) {
  NetworkBuilder b({"A", "B", "C"});
  int c2a = b.add_complex({2, 0, 0});
  int ab1 = b.add_complex({1, 1, 0}, 1);
  int ac1 = b.add_complex({1, 0, 1}, 1);
  int ab2 = b.add_complex({1, 1, 0}, 2);
  int ac2 = b.add_complex({1, 0, 1}, 2);
  b.add_reaction(ab1, c2a, RateSpec::expr(mul(num(a[0]), var("B"))));
  b.add_reaction(ab1, ac1, RateSpec::expr(mul(num(a[1]), var("B"))));
  b.add_reaction(ac1, ab1, RateSpec::expr(mul(num(a[2]), var("C"))));
  b.add_reaction(c2a, ab1, RateSpec::ma(a[3]));
  b.add_reaction(ab2, ac2, RateSpec::ma(a[4]));
  b.add_reaction(ac2, ab2, RateSpec::ma(a[5]));
  return b.build();
}

double phosphorylation_weight(const std::array<double, 6>& a, const State& x) {
  if (x.size() != 3 || x[0] < 1 || x[1] < 0 || x[2] < 0) return 0.0;
  double w = 1.0;
  for (Count i = 0; i < x[0]; ++i) w *= a[0] * a[2];
  for (Count i = 0; i < x[1]; ++i) w *= a[2] * a[3];
  for (Count i = 0; i < x[2]; ++i) w *= a[1] * a[3];
  for (Count i = 2; i <= x[0]; ++i) w /= static_cast<double>(i);
  for (Count i = 2; i < x[0]; ++i) w /= static_cast<double>(i);
  for (Count i = 2; i <= x[1]; ++i) w /= static_cast<double>(i);
  for (Count i = 2; i <= x[2]; ++i) w /= static_cast<double>(i);
  return w;
}

NetPtr michaelis_menten(const std::array<double, 4>& a, const std::array<double, 4>& b) {
  NetworkBuilder nb({"S", "E*", "P", "E"});
  int se = nb.add_complex({1, 1, 0, 0});
  int pe = nb.add_complex({0, 0, 1, 1});
  int zero = nb.add_complex({0, 0, 0, 0});
  int e = nb.add_complex({0, 0, 0, 1});
  // The starred species goes by its alias so the printed text reparses.
  nb.add_reaction(se, pe,
                  RateSpec::expr(divide(mul(mul(num(a[0]), var("S")), var("Estar")),
                                        plus(num(b[0]), var("S")))));
  nb.add_reaction(pe, se,
                  RateSpec::expr(divide(mul(mul(num(a[1]), var("P")), var("E")),
                                        plus(num(b[1]), var("P")))));
  nb.add_reaction(zero, e, RateSpec::expr(divide(num(a[2]), plus(num(b[2]), var("E")))));
  nb.add_reaction(e, zero,
                  RateSpec::expr(divide(mul(num(a[3]), var("E")),
                                        minus(plus(num(b[3]), var("E")), num(1.0)))));
  return nb.build();
}

Factorization michaelis_menten_factorization(const std::array<double, 4>& a,
                                             const std::array<double, 4>& b,
                                             const IrreducibleComponent& comp) {
  // Rates factor as kappa / (m_k(x - phi(y)) g(x)) with
  //   g(x) = c^x A(x_S) B(x_P) / x!,   A(u) = prod_{i=0..u} (b1+i),
  //   m(v) = v! / (c^v A(v_S) B(v_P)), B(u) = prod_{i=0..u} (b2+i),
  // the class of 0 <-> E carrying an extra (b3 + v_E) factor in m, and
  // c chosen so the kappa of a reaction equals that of its reverse.
  std::array<double, 4> c{1.0, a[1] * a[2] / (a[0] * a[3]), 1.0, a[2] / a[3]};
  auto prod_a = [&](Count u) {
    double p = 1.0;
    for (Count i = 0; i <= u; ++i) p *= b[0] + static_cast<double>(i);
    return p;
  };
  auto prod_b = [&](Count u) {
    double p = 1.0;
    for (Count i = 0; i <= u; ++i) p *= b[1] + static_cast<double>(i);
    return p;
  };
  auto cpow = [&](const State& v) {
    double p = 1.0;
    for (std::size_t i = 0; i < v.size(); ++i) p *= std::pow(c[i], static_cast<double>(v[i]));
    return p;
  };
  auto fact = [](const State& v) {
    double p = 1.0;
    for (Count u : v) {
      for (Count i = 2; i <= u; ++i) p *= static_cast<double>(i);
    }
    return p;
  };
  auto base_m = [&](const State& v) { return fact(v) / (cpow(v) * prod_a(v[0]) * prod_b(v[2])); };

  NetPtr net = michaelis_menten(a, b);
  ComponentIndex classes(*net);
  int class_of_zero = classes.component_of(net->find_complex({0, 0, 0, 0}, 0));

  Factorization f;
  f.m.resize(classes.num_components());
  for (const State& x : comp.states()) {
    f.g[x] = cpow(x) * prod_a(x[0]) * prod_b(x[2]) / fact(x);
    for (int cx = 0; cx < net->num_complexes(); ++cx) {
      if (!dominates(x, net->complex(cx).stoich)) continue;
      State v = sub(x, net->complex(cx).stoich);
      int k = classes.component_of(cx);
      double extra = k == class_of_zero ? b[2] + static_cast<double>(v[3]) : 1.0;
      f.m[k][v] = extra * base_m(v);
    }
  }
  f.kappa.assign(static_cast<std::size_t>(net->num_reactions()), 0.0);
  int se = net->find_complex({1, 1, 0, 0}, 0);
  int pe = net->find_complex({0, 0, 1, 1}, 0);
  int zero = net->find_complex({0, 0, 0, 0}, 0);
  int e = net->find_complex({0, 0, 0, 1}, 0);
  double kap1 = a[0] * c[0] * c[1];
  f.kappa[static_cast<std::size_t>(net->find_reaction(se, pe))] = kap1;
  f.kappa[static_cast<std::size_t>(net->find_reaction(pe, se))] = kap1;
  f.kappa[static_cast<std::size_t>(net->find_reaction(zero, e))] = a[2];
  f.kappa[static_cast<std::size_t>(net->find_reaction(e, zero))] = a[2];
  return f;
}

NetPtr network1(const std::array<double, 5>& a) {
  NetworkBuilder b({"A", "B", "C", "D"});
  int ca = b.add_complex({1, 0, 0, 0});
  int ccd = b.add_complex({0, 0, 2, 1});
  int cd = b.add_complex({0, 0, 0, 1});
  int cb = b.add_complex({0, 1, 0, 0});
  b.add_reaction(ca, ccd, RateSpec::ma(a[0]));
  b.add_reaction(ca, cd, RateSpec::ma(a[1]));
  b.add_reaction(ccd, cb, RateSpec::ma(a[2]));
  b.add_reaction(cd, cb, RateSpec::ma(a[3]));
  b.add_reaction(cb, ca, RateSpec::ma(a[4]));
  return b.build();
}

NetPtr network1() { return network1({1.0, 1.0, 1.0, 1.0, 1.0}); }

NetPtr network1_split(const std::array<double, 5>& a, const IrreducibleComponent* comp) {
  NetPtr net = network1(a);
  int cb = net->find_complex({0, 1, 0, 0}, 0);
  int ca = net->find_complex({1, 0, 0, 0}, 0);
  int r = net->find_reaction(cb, ca);
  // Weight of each copy: the probability that the next reaction out of A is
  // the one opening that copy's cycle, evaluated one A up and one B down;
  // with mass action the state dependence cancels.
  std::vector<SplitPart> parts;
  parts.push_back({{1, 0, 0, 0}, 1, RateSpec::ma(a[4] * a[0] / (a[0] + a[1]))});
  parts.push_back({{1, 0, 0, 0}, 2, RateSpec::ma(a[4] * a[1] / (a[0] + a[1]))});
  return split_reaction(net, r, parts, comp);
}

}  // namespace srn::fixtures
