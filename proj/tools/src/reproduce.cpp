#include <algorithm>
#include <cmath>
#include <cstdio>
#include <random>
#include <sstream>

#include "commands.hpp"
#include "srn/balance.hpp"
#include "srn/cleave.hpp"
#include "srn/fixtures.hpp"
#include "srn/graph.hpp"
#include "srn/parser.hpp"
#include "srn/simulate.hpp"
#include "srn/state_space.hpp"

namespace srncli {

using namespace srn;

namespace {

struct Check {
  std::string name;
  bool pass = false;
  std::string detail;
};

void add(std::vector<Check>& checks, std::string name, bool pass, std::string detail) {
  checks.push_back({std::move(name), pass, std::move(detail)});
}

std::string num(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

double fact(const State& x) {
  double f = 1.0;
  for (Count c : x) {
    for (Count i = 2; i <= c; ++i) f *= static_cast<double>(i);
  }
  return f;
}

double max_abs_diff(const Distribution& a, const Distribution& b) {
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) worst = std::max(worst, std::abs(a[i] - b[i]));
  return worst;
}

std::vector<int> canonical_rotation(std::vector<int> cycle) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < cycle.size(); ++i) {
    std::vector<int> cand(cycle.begin() + i, cycle.end());
    cand.insert(cand.end(), cycle.begin(), cycle.begin() + i);
    std::vector<int> cur(cycle.begin() + best, cycle.end());
    cur.insert(cur.end(), cycle.begin(), cycle.begin() + best);
    if (cand < cur) best = i;
  }
  std::rotate(cycle.begin(), cycle.begin() + best, cycle.end());
  return cycle;
}

// True when the cleaved cycles, projected reaction by reaction, reproduce the
// elementary cycles of the base network exactly once each.
bool cycles_biject(const CleavingResult& res, const ReactionNetwork& base) {
  CycleInventory orig = enumerate_cycles(base);
  std::vector<std::vector<int>> expected;
  for (const auto& c : orig.cycles) expected.push_back(canonical_rotation(c.reactions));
  std::sort(expected.begin(), expected.end());
  std::vector<std::vector<int>> projected;
  for (const auto& c : res.cycles.cycles) {
    std::vector<int> mapped;
    for (int r : c.reactions) mapped.push_back(res.projection.reaction_map[r]);
    projected.push_back(canonical_rotation(mapped));
  }
  std::sort(projected.begin(), projected.end());
  return expected == projected;
}

void run_triangle(std::vector<Check>& checks, double tol) {
  NetPtr net = fixtures::triangle();
  CleavingResult res = cleave_full(net);

  add(checks, "cycle count", res.cycles.cycles.size() == 5,
      std::to_string(res.cycles.cycles.size()) + " of 5");
  add(checks, "cycle bijection", cycles_biject(res, *net), "projected cycles vs elementary");

  // Every reaction here converts one molecule, so the rate constant is
  // rate / (count of the source species). All reactions of one cycle share
  // it: 14/15 on the three pair cycles, 1/15 and 16/15 on the triangles.
  State probe{3, 2, 2};
  auto rate_constant = [&](int r) {
    const State& phi = res.network->complex(res.network->reaction(r).source).stoich;
    double denom = 0.0;
    for (std::size_t i = 0; i < phi.size(); ++i) {
      if (phi[i] == 1) denom = static_cast<double>(probe[i]);
    }
    return res.network->rate(r, probe) / denom;
  };
  std::vector<double> two_consts;
  std::vector<double> three_consts;
  double spread = 0.0;
  for (const auto& cyc : res.cycles.cycles) {
    double first = rate_constant(cyc.reactions.front());
    for (int r : cyc.reactions) spread = std::max(spread, std::abs(rate_constant(r) - first));
    (cyc.reactions.size() == 2 ? two_consts : three_consts).push_back(first);
  }
  std::sort(three_consts.begin(), three_consts.end());
  bool sizes = two_consts.size() == 3 && three_consts.size() == 2;
  add(checks, "cycle lengths", sizes, "three 2-cycles and two 3-cycles");
  add(checks, "uniform constant per cycle", spread <= tol, "max spread " + num(spread));
  if (sizes) {
    double beta = three_consts[0];
    add(checks, "beta", std::abs(beta - 1.0 / 15.0) <= tol, "beta = " + num(beta));
    add(checks, "reverse cycle constant", std::abs(three_consts[1] - 16.0 / 15.0) <= tol,
        num(three_consts[1]) + " of 16/15");
    double worst = 0.0;
    for (double c2 : two_consts) worst = std::max(worst, std::abs(c2 - 14.0 / 15.0));
    add(checks, "pair cycle constant", worst <= tol, "max deviation " + num(worst));
  }

  Truncation trunc;
  trunc.cap = 3;
  auto comp = std::make_shared<IrreducibleComponent>(*net, State{1, 1, 1}, trunc);
  CbSolution sol = complex_balanced_solve(net, comp);
  Distribution target =
      Distribution::from_function(comp, [](const State& x) { return 1.0 / fact(x); });
  add(checks, "pi vs 1/x!", max_abs_diff(sol.pi, target) <= tol,
      "max deviation " + num(max_abs_diff(sol.pi, target)));
  Distribution direct = stationary_solve(*net, comp);
  add(checks, "pi vs stationary solve", max_abs_diff(sol.pi, direct) <= tol,
      "max deviation " + num(max_abs_diff(sol.pi, direct)));
}

void run_split_pair(std::vector<Check>& checks, double tol) {
  NetPtr one = fixtures::split_pair();
  NetPtr two = fixtures::split_pair_copies();
  Truncation trunc;
  trunc.cap = 1;
  auto comp = std::make_shared<IrreducibleComponent>(*one, State{1, 0}, trunc);
  Distribution pi = Distribution::from_function(comp, [](const State& x) { return 1.0 / fact(x); });

  BalanceReport st1 = check_stationary(*one, pi, tol);
  BalanceReport cb1 = check_complex_balanced(*one, pi, tol);
  BalanceReport st2 = check_stationary(*two, pi, tol);
  BalanceReport cb2 = check_complex_balanced(*two, pi, tol);
  add(checks, "plain net stationary", st1.verdict, "max residual " + num(st1.max_residual));
  add(checks, "plain net complex balance", cb1.verdict, "max residual " + num(cb1.max_residual));
  add(checks, "copied net stationary", st2.verdict, "max residual " + num(st2.max_residual));
  add(checks, "copied net complex balance rejected", !cb2.verdict,
      "max residual " + num(cb2.max_residual));
}

void run_birth_death(std::vector<Check>& checks, double tol, std::uint64_t seed) {
  const double a1 = 2.0, a2 = 3.0, a3 = 1.5;
  const int x_max = 120;
  BdSplit split = bd_split_rates(a1, a2, a3, x_max);

  add(checks, "first death rate", split.lambda1[1] == a1, num(split.lambda1[1]));
  double s2 = (a2 + a3) * (a2 + a3);
  double rec_worst = 0.0;
  for (int x = 2; x <= x_max; ++x) {
    double want = a1 * s2 * x / (s2 + a3 * split.lambda1[x - 1]);
    rec_worst = std::max(rec_worst, std::abs(split.lambda1[x] - want));
  }
  add(checks, "death rate recursion", rec_worst == 0.0, "max deviation " + num(rec_worst));

  NetPtr target = fixtures::birth_death_target(a1, a2, a3, x_max);
  CleavingResult res = cleave_full(target);
  Truncation trunc;
  // Derived rates probe up to two units above the cap when redistributing
  // flow near the boundary, so leave headroom below the table domain.
  trunc.cap = x_max - 20;
  auto comp = std::make_shared<IrreducibleComponent>(*res.network, State{0}, trunc);
  CyclicSolution sol = cyclic_balance_solve(res.network, comp, tol);

  // pi(x+1)/pi(x) must follow the one-step ratio (a2+a3)/lambda1(x+1).
  double ratio_worst = 0.0;
  for (int x = 0; x < 50; ++x) {
    int i = comp->index_of(State{x});
    int j = comp->index_of(State{x + 1});
    double want = (a2 + a3) / split.lambda1[x + 1];
    ratio_worst = std::max(ratio_worst, std::abs(sol.pi[j] / sol.pi[i] - want) / want);
  }
  add(checks, "mass recursion to x=50", ratio_worst <= tol, "max relative " + num(ratio_worst));
  add(checks, "normalization certified", true, "tail ratio test inside the solve");

  SimConfig cfg;
  cfg.initial = State{3};
  cfg.t_end = 30000.0;
  cfg.burn_in = 100.0;
  cfg.seed = seed;
  cfg.replicas = 4;
  EmpiricalDistribution hist = simulate(*fixtures::birth_death(a1, a2, a3), cfg);
  double tv = tv_distance(sol.pi, hist.fraction);
  add(checks, "simulation events", hist.events >= 1000000,
      std::to_string(hist.events) + " events");
  add(checks, "simulation tv distance", tv <= 0.03, "tv = " + num(tv));
}

void run_phosphorylation(std::vector<Check>& checks, double tol, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(0.5, 2.0);

  NetPtr probe = fixtures::phosphorylation({2.0, 1.0, 1.5, 1.0, 2.0, 3.0});
  add(checks, "deficiency", deficiency_raw(*probe) == 1,
      std::to_string(deficiency_raw(*probe)));

  Truncation trunc;
  trunc.cap = 5;
  int solved = 0;
  double pi_worst = 0.0;
  for (int trial = 0; trial < 10; ++trial) {
    std::array<double, 6> a;
    for (double& v : a) v = unif(rng);
    a[4] = a[1] * a[5] / a[2];  // balance the two copies of the cycle
    NetPtr net = fixtures::phosphorylation(a);
    auto comp = std::make_shared<IrreducibleComponent>(*net, State{1, 4, 0}, trunc);
    try {
      CbSolution sol = complex_balanced_solve(net, comp);
      Distribution target = Distribution::from_function(
          comp, [&](const State& x) { return fixtures::phosphorylation_weight(a, x); });
      pi_worst = std::max(pi_worst, max_abs_diff(sol.pi, target));
      ++solved;
    } catch (const BalanceError&) {
    }
  }
  add(checks, "balanced draws solve", solved == 10, std::to_string(solved) + " of 10");
  add(checks, "pi vs closed form", pi_worst <= tol, "max deviation " + num(pi_worst));

  int rejected = 0;
  for (int trial = 0; trial < 10; ++trial) {
    std::array<double, 6> a;
    do {
      for (double& v : a) v = unif(rng);
    } while (std::abs(a[2] * a[4] - a[1] * a[5]) < 0.05 * a[2] * a[4]);
    NetPtr net = fixtures::phosphorylation(a);
    auto comp = std::make_shared<IrreducibleComponent>(*net, State{1, 4, 0}, trunc);
    try {
      complex_balanced_solve(net, comp);
    } catch (const BalanceError&) {
      ++rejected;
    }
  }
  add(checks, "unbalanced draws rejected", rejected == 10, std::to_string(rejected) + " of 10");
}

void run_michaelis_menten(std::vector<Check>& checks, double tol) {
  const std::array<double, 4> a{1.3, 0.9, 2.0, 1.4};
  const std::array<double, 4> b{0.8, 1.7, 2.5, 2.5};
  NetPtr net = fixtures::michaelis_menten(a, b);

  add(checks, "deficiency", deficiency_raw(*net) == 0, std::to_string(deficiency_raw(*net)));

  Truncation trunc;
  trunc.per_species = State{10, 40, 10, 30};
  auto comp = std::make_shared<IrreducibleComponent>(*net, State{10, 40, 0, 0}, trunc);
  Factorization fact = fixtures::michaelis_menten_factorization(a, b, *comp);
  Distribution pi = verify_factorization(*net, comp, fact, tol);
  add(checks, "factorization verified", true, std::to_string(comp->states().size()) + " states");

  BalanceReport db = check_detailed_balanced(*net, pi, tol);
  add(checks, "detailed balance", db.verdict, "max residual " + num(db.max_residual));
  BalanceReport st = check_stationary(*net, pi, tol);
  add(checks, "stationary", st.verdict, "max residual " + num(st.max_residual));

  std::array<double, 4> b_off = b;
  b_off[3] = 1.0;
  NetPtr off = fixtures::michaelis_menten(a, b_off);
  Factorization fact_off = fixtures::michaelis_menten_factorization(a, b_off, *comp);
  bool located = false;
  std::string where = "no violation reported";
  try {
    verify_factorization(*off, comp, fact_off, tol);
  } catch (const BalanceError& e) {
    located = std::string(e.what()).find("at state") != std::string::npos;
    where = e.what();
  }
  add(checks, "mismatched saturation rejected", located, where);
}

void run_network1(std::vector<Check>& checks, double tol) {
  NetPtr net = fixtures::network1();
  CleavingResult res = cleave_full(net);
  bool two_threes = res.cycles.cycles.size() == 2 &&
                    res.cycles.cycles[0].reactions.size() == 3 &&
                    res.cycles.cycles[1].reactions.size() == 3;
  add(checks, "two 3-cycles", two_threes, std::to_string(res.cycles.cycles.size()) + " cycles");
  add(checks, "cycle bijection", cycles_biject(res, *net), "projected cycles vs elementary");

  // The recycling step splits in half: each copy fires at x_B/2.
  int base_recycle = net->find_reaction(net->find_complex(State{0, 1, 0, 0}, 0),
                                        net->find_complex(State{1, 0, 0, 0}, 0));
  double worst = 0.0;
  int copies = 0;
  for (int r = 0; r < res.network->num_reactions(); ++r) {
    if (res.projection.reaction_map[r] != base_recycle) continue;
    ++copies;
    for (Count xb = 1; xb <= 6; ++xb) {
      State x{0, xb, 2, 1};
      worst = std::max(worst, std::abs(res.network->rate(r, x) - 0.5 * static_cast<double>(xb)));
    }
  }
  add(checks, "recycling split in half", copies == 2 && worst <= tol,
      std::to_string(copies) + " copies, max deviation " + num(worst));
}

}  // namespace

int cmd_reproduce(const ReproduceArgs& args, const CommonFlags& flags) {
  Stopwatch watch;
  std::vector<Check> checks;

  if (args.name == "triangle") {
    run_triangle(checks, flags.tol);
  } else if (args.name == "split-pair") {
    run_split_pair(checks, flags.tol);
  } else if (args.name == "birth-death") {
    run_birth_death(checks, flags.tol, flags.seed);
  } else if (args.name == "phosphorylation") {
    run_phosphorylation(checks, flags.tol, flags.seed);
  } else if (args.name == "michaelis-menten") {
    run_michaelis_menten(checks, flags.tol);
  } else if (args.name == "network-1") {
    run_network1(checks, flags.tol);
  } else {
    throw Error("unknown example '" + args.name +
                "', expected one of: triangle, split-pair, birth-death, phosphorylation, "
                "michaelis-menten, network-1");
  }

  bool pass = true;
  for (const auto& c : checks) pass = pass && c.pass;

  RunManifest manifest = make_manifest(
      "reproduce", args.name,
      Json{{"name", args.name}, {"tol", flags.tol}, {"seed", flags.seed}});
  manifest.elapsed_seconds = watch.seconds();

  if (flags.json) {
    Json rows = Json::array();
    for (const auto& c : checks) {
      rows.push_back(Json{{"name", c.name}, {"pass", c.pass}, {"detail", c.detail}});
    }
    Json doc;
    doc["manifest"] = manifest_to_json(manifest);
    doc["name"] = args.name;
    doc["checks"] = std::move(rows);
    doc["pass"] = pass;
    emit_doc(doc, "", true);
  } else {
    for (const auto& c : checks) {
      std::printf("%-34s %s  %s\n", c.name.c_str(), c.pass ? "ok  " : "FAIL", c.detail.c_str());
    }
    std::printf("%s: %s\n", args.name.c_str(), pass ? "reproduced" : "MISMATCH");
  }
  return pass ? exit_ok : exit_verdict;
}

}  // namespace srncli
