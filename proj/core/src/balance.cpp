#include "srn/balance.hpp"

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <algorithm>
#include <cmath>
#include <deque>
#include <random>
#include <sstream>

#include "srn/graph.hpp"

namespace srn {

namespace {

double rel_residual(double lhs, double rhs) {
  double denom = std::max(std::abs(lhs), std::abs(rhs));
  if (denom == 0.0) return 0.0;
  return std::abs(lhs - rhs) / denom;
}

// pi(z) * rate(r, z) with the off-lattice and off-support conventions: zero
// without evaluating the kinetics when z is outside the support.
double influx_term(const ReactionNetwork& net, const Distribution& pi, int r, const State& x) {
  State z = sub(x, net.jump(r));
  if (!nonnegative(z)) return 0.0;
  double p = pi.prob(z);
  if (p == 0.0) return 0.0;
  return p * net.rate(r, z);
}

}  // namespace

Distribution::Distribution(CompPtr component, std::vector<double> probs)
    : component_(std::move(component)), probs_(std::move(probs)) {
  if (!component_) throw Error("distribution needs a component");
  if (probs_.size() != component_->states().size()) {
    throw Error("probability vector length does not match the component");
  }
  double sum = 0.0;
  for (double p : probs_) {
    if (!(p >= 0.0) || !std::isfinite(p)) throw Error("probabilities must be finite and >= 0");
    sum += p;
  }
  if (std::abs(sum - 1.0) > 1e-12) {
    throw Error("probabilities sum to " + std::to_string(sum) + ", not 1");
  }
}

Distribution Distribution::from_weights(CompPtr component, const std::vector<double>& weights) {
  double sum = 0.0;
  for (double w : weights) {
    if (!(w >= 0.0) || !std::isfinite(w)) throw Error("weights must be finite and >= 0");
    sum += w;
  }
  if (!(sum > 0.0) || !std::isfinite(sum)) throw Error("weights do not normalize");
  std::vector<double> probs(weights.size());
  for (std::size_t i = 0; i < weights.size(); ++i) probs[i] = weights[i] / sum;
  return Distribution(std::move(component), std::move(probs));
}

Distribution Distribution::from_function(CompPtr component,
                                         const std::function<double(const State&)>& g) {
  std::vector<double> weights;
  weights.reserve(component->states().size());
  for (const auto& x : component->states()) weights.push_back(g(x));
  return from_weights(std::move(component), weights);
}

double Distribution::prob(const State& x) const {
  int i = component_->index_of(x);
  return i < 0 ? 0.0 : probs_[i];
}

BalanceReport check_stationary(const ReactionNetwork& net, const Distribution& pi, double tol) {
  BalanceReport rep;
  rep.property = "stationary";
  rep.tolerance = tol;
  const auto& comp = pi.component();
  for (std::size_t i = 0; i < comp.states().size(); ++i) {
    if (!comp.interior(static_cast<int>(i))) continue;
    const State& x = comp.states()[i];
    double outflux = 0.0;
    double influx = 0.0;
    for (int r = 0; r < net.num_reactions(); ++r) {
      outflux += pi[i] * net.rate(r, x);
      influx += influx_term(net, pi, r, x);
    }
    double res = rel_residual(influx, outflux);
    if (res > rep.max_residual) {
      rep.max_residual = res;
      rep.worst_state = x;
    }
    rep.states_checked += 1;
  }
  rep.verdict = rep.max_residual <= tol;
  return rep;
}

BalanceReport check_complex_balanced(const ReactionNetwork& net, const Distribution& pi,
                                     double tol) {
  BalanceReport rep;
  rep.property = "complex_balanced";
  rep.tolerance = tol;
  const auto& comp = pi.component();
  for (std::size_t i = 0; i < comp.states().size(); ++i) {
    if (!comp.interior(static_cast<int>(i))) continue;
    const State& x = comp.states()[i];
    for (int y = 0; y < net.num_complexes(); ++y) {
      double outflux = 0.0;
      for (int r : net.outgoing(y)) outflux += pi[i] * net.rate(r, x);
      double influx = 0.0;
      for (int r : net.incoming(y)) influx += influx_term(net, pi, r, x);
      double res = rel_residual(influx, outflux);
      if (res > rep.max_residual) {
        rep.max_residual = res;
        rep.worst_state = x;
        rep.worst_complex = y;
      }
    }
    rep.states_checked += 1;
  }
  rep.verdict = rep.max_residual <= tol;
  return rep;
}

BalanceReport check_detailed_balanced(const ReactionNetwork& net, const Distribution& pi,
                                      double tol) {
  BalanceReport rep;
  rep.property = "detailed_balanced";
  rep.tolerance = tol;
  if (!is_reversible(net)) {
    rep.verdict = false;
    rep.reason = "not reversible";
    return rep;
  }
  const auto& comp = pi.component();
  for (std::size_t i = 0; i < comp.states().size(); ++i) {
    if (!comp.interior(static_cast<int>(i))) continue;
    const State& x = comp.states()[i];
    for (int r = 0; r < net.num_reactions(); ++r) {
      const auto& rx = net.reaction(r);
      int rev = net.find_reaction(rx.target, rx.source);
      if (rev < r) continue;  // each unordered pair once
      double forward = pi[i] * net.rate(r, x);
      State xp = add(x, net.jump(r));
      double p = nonnegative(xp) ? pi.prob(xp) : 0.0;
      double backward = p == 0.0 ? 0.0 : p * net.rate(rev, xp);
      double res = rel_residual(forward, backward);
      if (res > rep.max_residual) {
        rep.max_residual = res;
        rep.worst_state = x;
        rep.worst_complex = rx.source;
      }
    }
    rep.states_checked += 1;
  }
  rep.verdict = rep.max_residual <= tol;
  return rep;
}

namespace {

// Numerical stand-in for certifying a finite normalizing constant: on a
// box-clipped component the mass of g must decay toward the clipped walls.
void certify_tail(const IrreducibleComponent& comp, const std::vector<double>& g,
                  const std::string& stage) {
  if (!comp.clipped()) return;
  const auto& cs = comp.clipped_species();
  Count tmax = 0;
  auto level = [&](const State& x) {
    Count t = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      if (cs[i]) t += x[i];
    }
    return t;
  };
  for (const auto& x : comp.states()) tmax = std::max(tmax, level(x));
  if (tmax <= 1) return;
  Count half = tmax / 2;
  double head = 0.0;
  double tail = 0.0;
  for (std::size_t i = 0; i < comp.states().size(); ++i) {
    (level(comp.states()[i]) <= half ? head : tail) += g[i];
  }
  if (!(head > 0.0) || tail > 0.5 * head) {
    std::ostringstream msg;
    msg << "normalization not certified: mass " << tail << " beyond level " << half
        << " against " << head << " below";
    throw BalanceError(stage, msg.str());
  }
}

}  // namespace

Distribution verify_factorization(const ReactionNetwork& net, const CompPtr& comp,
                                  const Factorization& fact, double tol) {
  ComponentIndex ci(net);
  if (fact.kappa.size() != static_cast<std::size_t>(net.num_reactions())) {
    throw Error("kappa length does not match the reaction count");
  }
  if (fact.m.size() != static_cast<std::size_t>(ci.num_components())) {
    throw Error("m table count does not match the linkage component count");
  }
  for (double k : fact.kappa) {
    if (!(k > 0.0) || !std::isfinite(k)) throw Error("kappa entries must be positive");
  }

  std::vector<double> g(comp->states().size());
  for (std::size_t i = 0; i < g.size(); ++i) {
    auto it = fact.g.find(comp->states()[i]);
    if (it == fact.g.end()) {
      throw Error("factorization g missing state " + to_string(comp->states()[i]));
    }
    if (!(it->second > 0.0) || !std::isfinite(it->second)) {
      throw Error("factorization g must be positive at " + to_string(comp->states()[i]));
    }
    g[i] = it->second;
  }

  for (int r = 0; r < net.num_reactions(); ++r) {
    int y = net.reaction(r).source;
    int k = ci.component_of(y);
    const State& phi = net.complex(y).stoich;
    for (std::size_t i = 0; i < comp->states().size(); ++i) {
      const State& x = comp->states()[i];
      if (!dominates(x, phi)) continue;
      State v = sub(x, phi);
      auto it = fact.m[k].find(v);
      if (it == fact.m[k].end()) {
        throw Error("factorization m missing shifted state " + to_string(v) +
                    " for component " + std::to_string(k));
      }
      if (!(it->second > 0.0) || !std::isfinite(it->second)) {
        throw Error("factorization m must be positive at " + to_string(v));
      }
      double predicted = fact.kappa[r] / (it->second * g[i]);
      double actual = net.rate(r, x);
      if (rel_residual(predicted, actual) > tol) {
        std::ostringstream msg;
        msg << "factorization identity violated for reaction " << r << " ("
            << net.complex(y).label << " -> " << net.complex(net.reaction(r).target).label
            << ") at state " << to_string(x) << ": rate " << actual << " vs predicted "
            << predicted;
        throw BalanceError("verification", msg.str());
      }
    }
  }

  for (int y = 0; y < net.num_complexes(); ++y) {
    double out = 0.0;
    double in = 0.0;
    for (int r : net.outgoing(y)) out += fact.kappa[r];
    for (int r : net.incoming(y)) in += fact.kappa[r];
    if (rel_residual(out, in) > tol) {
      std::ostringstream msg;
      msg << "kappa imbalance at complex " << net.complex(y).label << ": outgoing " << out
          << " vs incoming " << in;
      throw BalanceError("verification", msg.str());
    }
  }

  certify_tail(*comp, g, "normalization");
  Distribution pi = Distribution::from_weights(comp, g);
  BalanceReport rep = check_complex_balanced(net, pi, tol);
  if (!rep.verdict) {
    std::ostringstream msg;
    msg << "factorization identities hold but per-complex balance fails at state "
        << to_string(rep.worst_state) << " (residual " << rep.max_residual << ")";
    throw BalanceError("verification", msg.str());
  }
  return pi;
}

namespace {

struct MaResidual {
  Eigen::VectorXd f;       // signed per-complex imbalance
  double max_relative = 0.0;
};

MaResidual ma_residual(const ReactionNetwork& net, const std::vector<double>& alpha,
                       const Eigen::VectorXd& u) {
  int nc = net.num_complexes();
  Eigen::VectorXd pow(nc);
  for (int y = 0; y < nc; ++y) {
    double e = 0.0;
    const State& phi = net.complex(y).stoich;
    for (std::size_t i = 0; i < phi.size(); ++i) e += static_cast<double>(phi[i]) * u(i);
    pow(y) = std::exp(e);
  }
  MaResidual res;
  res.f.resize(nc);
  for (int y = 0; y < nc; ++y) {
    double out = 0.0;
    double in = 0.0;
    for (int r : net.outgoing(y)) out += alpha[r] * pow(y);
    for (int r : net.incoming(y)) in += alpha[r] * pow(net.reaction(r).source);
    res.f(y) = out - in;
    double scale = out + in;
    if (scale > 0.0) res.max_relative = std::max(res.max_relative, std::abs(res.f(y)) / scale);
  }
  return res;
}

}  // namespace

std::optional<std::vector<double>> ma_equilibrium_solve(const ReactionNetwork& net,
                                                        const std::vector<double>& alpha,
                                                        const MaSolveOptions& opts) {
  if (alpha.size() != static_cast<std::size_t>(net.num_reactions())) {
    throw Error("alpha length does not match the reaction count");
  }
  for (double a : alpha) {
    if (!(a > 0.0) || !std::isfinite(a)) throw Error("alpha entries must be positive");
  }
  if (!is_weakly_reversible(net)) {
    throw Error("equilibrium solve needs a weakly reversible network");
  }
  int n = net.num_species();
  int nc = net.num_complexes();

  auto jacobian = [&](const Eigen::VectorXd& u) {
    Eigen::MatrixXd j = Eigen::MatrixXd::Zero(nc, n);
    Eigen::VectorXd pow(nc);
    for (int y = 0; y < nc; ++y) {
      double e = 0.0;
      const State& phi = net.complex(y).stoich;
      for (int i = 0; i < n; ++i) e += static_cast<double>(phi[i]) * u(i);
      pow(y) = std::exp(e);
    }
    for (int y = 0; y < nc; ++y) {
      for (int r : net.outgoing(y)) {
        const State& phi = net.complex(y).stoich;
        for (int i = 0; i < n; ++i) j(y, i) += alpha[r] * phi[i] * pow(y);
      }
      for (int r : net.incoming(y)) {
        int src = net.reaction(r).source;
        const State& phi = net.complex(src).stoich;
        for (int i = 0; i < n; ++i) j(y, i) -= alpha[r] * phi[i] * pow(src);
      }
    }
    return j;
  };

  std::mt19937_64 rng(opts.seed);
  std::uniform_real_distribution<double> unif(-2.0, 2.0);
  for (int start = 0; start <= opts.restarts; ++start) {
    Eigen::VectorXd u = Eigen::VectorXd::Zero(n);
    if (start > 0) {
      for (int i = 0; i < n; ++i) u(i) = unif(rng);
    }
    MaResidual cur = ma_residual(net, alpha, u);
    for (int iter = 0; iter < opts.max_iterations; ++iter) {
      if (cur.max_relative <= opts.tol) break;
      Eigen::MatrixXd j = jacobian(u);
      Eigen::MatrixXd jtj = j.transpose() * j;
      double mu = 1e-12 * (jtj.trace() + 1.0);
      Eigen::VectorXd d =
          (jtj + mu * Eigen::MatrixXd::Identity(n, n)).ldlt().solve(-j.transpose() * cur.f);
      if (!d.allFinite()) break;
      double base = cur.f.squaredNorm();
      double t = 1.0;
      bool stepped = false;
      while (t > 1e-12) {
        MaResidual trial = ma_residual(net, alpha, u + t * d);
        if (trial.f.squaredNorm() < base * (1.0 - 1e-4 * t) || trial.max_relative <= opts.tol) {
          u += t * d;
          cur = trial;
          stepped = true;
          break;
        }
        t /= 2.0;
      }
      if (!stepped) break;
    }
    if (cur.max_relative <= opts.tol) {
      std::vector<double> c(n);
      for (int i = 0; i < n; ++i) c[i] = std::exp(u(i));
      return c;
    }
  }
  return std::nullopt;
}

std::optional<std::vector<double>> ma_equilibrium_solve(const ReactionNetwork& net,
                                                        const MaSolveOptions& opts) {
  auto alpha = mass_action_constants(net);
  if (!alpha) throw Error("network kinetics are not plain mass-action");
  return ma_equilibrium_solve(net, *alpha, opts);
}

RatioDetection detect_constant_ratio(const ReactionNetwork& net,
                                     const IrreducibleComponent& comp, double tol) {
  RatioDetection out;
  out.alpha.assign(net.num_reactions(), 1.0);
  for (int y = 0; y < net.num_complexes(); ++y) {
    std::vector<int> outs = net.outgoing(y);
    if (outs.empty()) continue;
    std::sort(outs.begin(), outs.end());
    int anchor = outs[0];
    double anchor_alpha = 1.0;
    const Kinetics& anchor_kin = net.reaction(anchor).kinetics;
    if (anchor_kin.kind() == KineticsKind::MassAction &&
        anchor_kin.mass_action_order() == net.complex(y).stoich) {
      anchor_alpha = anchor_kin.mass_action_rate();
    }
    out.alpha[anchor] = anchor_alpha;
    for (std::size_t k = 1; k < outs.size(); ++k) {
      int r = outs[k];
      bool have = false;
      double ratio = 0.0;
      State first_state;
      for (const auto& x : comp.states()) {
        double a;
        double b;
        try {
          a = net.rate(anchor, x);
          b = net.rate(r, x);
        } catch (const EvalError&) {
          continue;
        }
        if (a <= 0.0) {
          if (b > 0.0) {
            out.message = "rates out of " + net.complex(y).label +
                          " disagree on their zero set at state " + to_string(x);
            return out;
          }
          continue;
        }
        double q = b / a;
        if (!have) {
          have = true;
          ratio = q;
          first_state = x;
        } else if (rel_residual(q, ratio) > tol) {
          std::ostringstream msg;
          msg << "rate ratio for reactions " << r << " and " << anchor << " varies between "
              << to_string(first_state) << " (" << ratio << ") and " << to_string(x) << " ("
              << q << ")";
          out.message = msg.str();
          return out;
        }
      }
      out.alpha[r] = have ? ratio * anchor_alpha : anchor_alpha;
    }
  }
  out.ok = true;
  return out;
}

CyclicSolution cyclic_balance_solve(const NetPtr& net, const CompPtr& comp, double tol) {
  const std::string stage = "cyclic solve";
  for (int c = 0; c < net->num_complexes(); ++c) {
    if (net->incoming(c).size() != 1 || net->outgoing(c).size() != 1) {
      throw BalanceError(stage, "needs a disjoint-cycle network");
    }
  }
  ComponentIndex ci(*net);
  const auto& states = comp->states();
  std::size_t n = states.size();

  struct Relation {
    int from = -1;  // state index of z
    int to = -1;    // state index of z + jump
    double delta = 0.0;
    int r1 = -1;
    int r2 = -1;
  };
  std::vector<Relation> relations;
  for (int r1 = 0; r1 < net->num_reactions(); ++r1) {
    int mid = net->reaction(r1).target;
    int r2 = net->outgoing(mid)[0];
    for (std::size_t iz = 0; iz < n; ++iz) {
      const State& z = states[iz];
      double rate1 = net->rate(r1, z);
      if (rate1 <= 0.0) continue;
      State x = add(z, net->jump(r1));
      int ix = comp->index_of(x);
      if (ix < 0) continue;
      double rate2 = net->rate(r2, x);
      if (rate2 <= 0.0) {
        std::ostringstream msg;
        msg << "reaction " << r2 << " is disabled at " << to_string(x)
            << " although its predecessor fires into it";
        throw BalanceError(stage, msg.str());
      }
      relations.push_back({static_cast<int>(iz), ix, std::log(rate1) - std::log(rate2), r1, r2});
    }
  }

  // Spanning-tree propagation of log pi, then full consistency verification.
  std::vector<std::vector<int>> touching(n);
  for (std::size_t e = 0; e < relations.size(); ++e) {
    touching[relations[e].from].push_back(static_cast<int>(e));
    touching[relations[e].to].push_back(static_cast<int>(e));
  }
  std::vector<double> logpi(n, 0.0);
  std::vector<char> known(n, 0);
  std::deque<int> queue{0};
  known[0] = 1;
  while (!queue.empty()) {
    int i = queue.front();
    queue.pop_front();
    for (int e : touching[i]) {
      const Relation& rel = relations[e];
      int other = rel.from == i ? rel.to : rel.from;
      if (known[other]) continue;
      logpi[other] = rel.from == i ? logpi[i] + rel.delta : logpi[i] - rel.delta;
      known[other] = 1;
      queue.push_back(other);
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (!known[i]) {
      throw BalanceError(stage, "balance relations do not connect the truncated state space");
    }
  }
  for (const Relation& rel : relations) {
    double err = logpi[rel.to] - logpi[rel.from] - rel.delta;
    if (std::abs(err) > tol) {
      std::ostringstream msg;
      msg << "cycle closure inconsistency (Kolmogorov-type) at state "
          << to_string(states[rel.from]) << " via reactions " << rel.r1 << " then " << rel.r2
          << ": relative mismatch " << std::abs(err);
      throw BalanceError(stage, msg.str());
    }
  }

  double peak = *std::max_element(logpi.begin(), logpi.end());
  std::vector<double> g(n);
  for (std::size_t i = 0; i < n; ++i) g[i] = std::exp(logpi[i] - peak);
  certify_tail(*comp, g, stage);
  Distribution pi = Distribution::from_weights(comp, g);

  CyclicSolution sol{std::move(pi), {}};
  sol.m.resize(ci.num_components());
  for (int r = 0; r < net->num_reactions(); ++r) {
    int y = net->reaction(r).source;
    int k = ci.component_of(y);
    const State& phi = net->complex(y).stoich;
    for (std::size_t i = 0; i < n; ++i) {
      const State& x = states[i];
      if (!dominates(x, phi)) continue;
      double rate = net->rate(r, x);
      if (rate <= 0.0) continue;
      double val = 1.0 / (sol.pi[i] * rate);
      State v = sub(x, phi);
      auto [it, fresh] = sol.m[k].emplace(std::move(v), val);
      if (!fresh && rel_residual(it->second, val) > 10 * tol) {
        std::ostringstream msg;
        msg << "cross-cycle m mismatch at shifted state " << to_string(sub(x, phi))
            << " in component " << k << ": " << it->second << " vs " << val;
        throw BalanceError(stage, msg.str());
      }
    }
  }
  return sol;
}

namespace {

// Least-squares reconstruction of kappa and m from a candidate complex
// balanced distribution, working in log space on interior states.
Factorization fit_factorization(const ReactionNetwork& net, const CompPtr& comp,
                                const Distribution& pi, double tol) {
  const std::string stage = "factorization fit";
  ComponentIndex ci(net);
  int nr = net.num_reactions();

  struct Obs {
    int r;
    int k;
    State v;
    double logrg;
  };
  std::vector<Obs> observations;
  std::vector<StateMap<int>> column(ci.num_components());
  std::vector<State> pinned(ci.num_components());
  std::vector<char> has_pin(ci.num_components(), 0);
  int next_col = 0;
  for (int r = 0; r < nr; ++r) {
    int y = net.reaction(r).source;
    int k = ci.component_of(y);
    const State& phi = net.complex(y).stoich;
    for (std::size_t i = 0; i < comp->states().size(); ++i) {
      if (!comp->interior(static_cast<int>(i))) continue;
      const State& x = comp->states()[i];
      if (!dominates(x, phi)) continue;
      double rate = net.rate(r, x);
      if (rate <= 0.0 || pi[i] <= 0.0) continue;
      State v = sub(x, phi);
      if (!has_pin[k] || lex_less(v, pinned[k])) {
        pinned[k] = v;
        has_pin[k] = 1;
      }
      observations.push_back({r, k, std::move(v), std::log(rate * pi[i])});
    }
  }
  if (observations.empty()) throw BalanceError(stage, "no usable interior observations");
  for (const auto& o : observations) {
    if (o.v == pinned[o.k]) continue;
    if (column[o.k].find(o.v) == column[o.k].end()) {
      column[o.k].emplace(o.v, nr + next_col);
      ++next_col;
    }
  }

  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(observations.size(), nr + next_col);
  Eigen::VectorXd b(observations.size());
  for (std::size_t row = 0; row < observations.size(); ++row) {
    const Obs& o = observations[row];
    a(row, o.r) = 1.0;  // log kappa_r
    if (o.v != pinned[o.k]) a(row, column[o.k].at(o.v)) = -1.0;
    b(row) = o.logrg;
  }
  Eigen::VectorXd sol = a.colPivHouseholderQr().solve(b);
  double fit_residual = (a * sol - b).cwiseAbs().maxCoeff();
  if (!std::isfinite(fit_residual) || fit_residual > std::max(tol, 1e-7)) {
    std::ostringstream msg;
    msg << "kinetics do not factorize over the support: log-identity residual " << fit_residual;
    throw BalanceError(stage, msg.str());
  }

  Factorization fact;
  fact.kappa.resize(nr);
  for (int r = 0; r < nr; ++r) fact.kappa[r] = std::exp(sol(r));
  fact.m.resize(ci.num_components());
  for (int k = 0; k < ci.num_components(); ++k) {
    if (has_pin[k]) fact.m[k].emplace(pinned[k], 1.0);
    for (const auto& [v, col] : column[k]) fact.m[k].emplace(v, std::exp(sol(col)));
  }
  for (std::size_t i = 0; i < comp->states().size(); ++i) {
    fact.g.emplace(comp->states()[i], pi[i]);
  }
  // Extend m to shifted states that only boundary states generate, using the
  // fitted kappa directly.
  for (int r = 0; r < nr; ++r) {
    int y = net.reaction(r).source;
    int k = ci.component_of(y);
    const State& phi = net.complex(y).stoich;
    for (std::size_t i = 0; i < comp->states().size(); ++i) {
      const State& x = comp->states()[i];
      if (!dominates(x, phi)) continue;
      State v = sub(x, phi);
      if (fact.m[k].find(v) != fact.m[k].end()) continue;
      double rate = net.rate(r, x);
      if (rate <= 0.0 || pi[i] <= 0.0) continue;
      fact.m[k].emplace(std::move(v), fact.kappa[r] / (rate * pi[i]));
    }
  }

  for (int y = 0; y < net.num_complexes(); ++y) {
    double out = 0.0;
    double in = 0.0;
    for (int r : net.outgoing(y)) out += fact.kappa[r];
    for (int r : net.incoming(y)) in += fact.kappa[r];
    if (rel_residual(out, in) > std::max(tol, 1e-7)) {
      std::ostringstream msg;
      msg << "fitted kappa imbalance at complex " << net.complex(y).label << ": outgoing "
          << out << " vs incoming " << in;
      throw BalanceError(stage, msg.str());
    }
  }
  return fact;
}

}  // namespace

CbSolution complex_balanced_solve(const NetPtr& net, const CompPtr& comp,
                                  const CbOptions& opts) {
  if (!is_weakly_reversible(*net)) {
    throw BalanceError("cleave", "needs a weakly reversible network");
  }
  CleavingResult cleaving;
  try {
    cleaving = cleave_full(net, opts.cleave);
  } catch (const BalanceError&) {
    throw;
  } catch (const Error& e) {
    throw BalanceError("cleave", e.what());
  }
  CyclicSolution cyc = cyclic_balance_solve(cleaving.network, comp, opts.cyclic_tol);

  // The cleaved network shares the state dynamics, so its distribution is the
  // candidate for the original network unchanged.
  Factorization fact = fit_factorization(*net, comp, cyc.pi, opts.tol);
  BalanceReport rep = check_complex_balanced(*net, cyc.pi, opts.tol);
  if (!rep.verdict) {
    std::ostringstream msg;
    msg << "per-complex balance fails on the original network at state "
        << to_string(rep.worst_state) << " (residual " << rep.max_residual << ")";
    throw BalanceError("verification", msg.str());
  }
  return {std::move(cyc.pi), std::move(fact), std::move(cleaving)};
}

BdSplit bd_split_rates(double a1, double a2, double a3, int x_max) {
  if (!(a1 > 0.0) || !(a2 > 0.0) || !(a3 > 0.0)) throw Error("rates must be positive");
  if (x_max < 1) throw Error("x_max must be at least 1");
  BdSplit out;
  out.lambda1.resize(x_max + 1, 0.0);
  out.lambda4.resize(x_max + 1, 0.0);
  double s2 = (a2 + a3) * (a2 + a3);
  for (int x = 1; x <= x_max; ++x) {
    out.lambda1[x] = a1 * s2 * x / (s2 + a3 * out.lambda1[x - 1]);
    out.lambda4[x] = a1 * x - out.lambda1[x];
  }
  if (std::abs(out.lambda4[1]) > 1e-12 * a1) {
    throw Error("splitting violates lambda4(1) = 0");
  }
  out.lambda4[1] = 0.0;
  out.lambda1[1] = a1;
  for (int x = 2; x <= x_max; ++x) {
    if (!(out.lambda1[x] > 0.0) || !(out.lambda1[x] < a1 * x)) {
      throw Error("split rates leave (0, a1*x) at x = " + std::to_string(x));
    }
  }
  return out;
}

DetailedFactorization verify_detailed_factorization(const ReactionNetwork& net,
                                                    const Distribution& pi, double tol) {
  const std::string stage = "detailed factorization";
  BalanceReport rep = check_detailed_balanced(net, pi, tol);
  if (!rep.verdict) {
    throw BalanceError(stage, rep.reason.empty()
                                  ? "distribution is not detailed balanced (max residual " +
                                        std::to_string(rep.max_residual) + ")"
                                  : rep.reason);
  }
  const auto& comp = pi.component();
  DetailedFactorization df;
  df.m.resize(net.num_reactions());
  for (int r = 0; r < net.num_reactions(); ++r) {
    const State& phi = net.complex(net.reaction(r).source).stoich;
    for (std::size_t i = 0; i < comp.states().size(); ++i) {
      const State& x = comp.states()[i];
      if (!dominates(x, phi)) continue;
      double rate = net.rate(r, x);
      if (rate <= 0.0 || pi[i] <= 0.0) continue;
      df.m[r].emplace(sub(x, phi), 1.0 / (rate * pi[i]));
    }
  }
  for (int r = 0; r < net.num_reactions(); ++r) {
    const auto& rx = net.reaction(r);
    int rev = net.find_reaction(rx.target, rx.source);
    if (rev < r) continue;
    for (const auto& [v, val] : df.m[r]) {
      auto it = df.m[rev].find(v);
      if (it == df.m[rev].end()) continue;
      if (rel_residual(val, it->second) > tol) {
        std::ostringstream msg;
        msg << "m symmetry violated between reactions " << r << " and " << rev
            << " at shifted state " << to_string(v) << ": " << val << " vs " << it->second;
        throw BalanceError(stage, msg.str());
      }
    }
  }
  return df;
}

Distribution stationary_solve(const ReactionNetwork& net, const CompPtr& comp, double tol) {
  const auto& states = comp->states();
  std::size_t n = states.size();
  if (n == 1) return Distribution(comp, {1.0});

  std::vector<Eigen::Triplet<double>> triplets;
  std::vector<double> diag(n, 0.0);
  for (std::size_t j = 0; j < n; ++j) {
    for (int r = 0; r < net.num_reactions(); ++r) {
      double rate = net.rate(r, states[j]);
      if (rate <= 0.0) continue;
      State next = add(states[j], net.jump(r));
      int i = comp->index_of(next);
      if (i < 0) continue;  // transitions leaving the truncation are dropped
      triplets.emplace_back(i, static_cast<int>(j), rate);
      diag[j] -= rate;
    }
  }
  for (std::size_t j = 0; j < n; ++j) {
    triplets.emplace_back(static_cast<int>(j), static_cast<int>(j), diag[j]);
  }

  // Balance rows with the last replaced by normalization.
  Eigen::SparseMatrix<double> m(n, n);
  m.setFromTriplets(triplets.begin(), triplets.end(), [](double acc, double v) { return acc + v; });
  std::vector<Eigen::Triplet<double>> final_triplets;
  for (int col = 0; col < m.outerSize(); ++col) {
    for (Eigen::SparseMatrix<double>::InnerIterator it(m, col); it; ++it) {
      if (static_cast<std::size_t>(it.row()) + 1 == n) continue;
      final_triplets.emplace_back(it.row(), it.col(), it.value());
    }
  }
  for (std::size_t j = 0; j < n; ++j) {
    final_triplets.emplace_back(static_cast<int>(n) - 1, static_cast<int>(j), 1.0);
  }
  Eigen::SparseMatrix<double> sys(n, n);
  sys.setFromTriplets(final_triplets.begin(), final_triplets.end());
  sys.makeCompressed();

  Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
  lu.analyzePattern(sys);
  lu.factorize(sys);
  if (lu.info() != Eigen::Success) {
    throw Error("stationary solve: factorization failed (singular truncated system)");
  }
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n);
  rhs(n - 1) = 1.0;
  Eigen::VectorXd p = lu.solve(rhs);
  if (lu.info() != Eigen::Success || !p.allFinite()) {
    throw Error("stationary solve: back substitution failed");
  }
  double largest = p.cwiseAbs().maxCoeff();
  for (std::size_t i = 0; i < n; ++i) {
    if (p(i) < 0.0) {
      if (p(i) < -1e-9 * largest) {
        std::ostringstream msg;
        msg << "stationary solve: negative mass " << p(i)
            << " indicates an ill-conditioned truncated system";
        throw Error(msg.str());
      }
      p(i) = 0.0;
    }
  }

  // Residual of the full balance system as a condition check.
  Eigen::VectorXd balance = m * p;
  double flux_scale = 0.0;
  for (std::size_t j = 0; j < n; ++j) flux_scale = std::max(flux_scale, -diag[j] * p(j));
  double resid = balance.cwiseAbs().maxCoeff();
  if (flux_scale > 0.0 && resid > std::max(tol, 1e-7) * flux_scale) {
    std::ostringstream msg;
    msg << "stationary solve: balance residual " << resid << " against flux scale "
        << flux_scale << " (condition suspect)";
    throw Error(msg.str());
  }

  std::vector<double> weights(p.data(), p.data() + n);
  return Distribution::from_weights(comp, weights);
}

}  // namespace srn
