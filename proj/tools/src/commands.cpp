#include "commands.hpp"

#include <chrono>
#include <cstdio>
#include <fstream>
#include <memory>
#include <sstream>

#include "srn/balance.hpp"
#include "srn/cleave.hpp"
#include "srn/graph.hpp"
#include "srn/parser.hpp"
#include "srn/simulate.hpp"
#include "srn/state_space.hpp"

namespace srncli {

using namespace srn;

Stopwatch::Stopwatch()
    : start_ns_(std::chrono::duration_cast<std::chrono::nanoseconds>(
                    std::chrono::steady_clock::now().time_since_epoch())
                    .count()) {}

double Stopwatch::seconds() const {
  auto now = std::chrono::duration_cast<std::chrono::nanoseconds>(
                 std::chrono::steady_clock::now().time_since_epoch())
                 .count();
  return static_cast<double>(now - start_ns_) * 1e-9;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

State parse_init(const std::string& text, const ReactionNetwork& net) {
  State x(net.num_species(), 0);
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t comma = text.find(',', pos);
    if (comma == std::string::npos) comma = text.size();
    std::string item = text.substr(pos, comma - pos);
    std::size_t eq = item.find('=');
    if (eq == std::string::npos) throw Error("bad --init item '" + item + "', want NAME=COUNT");
    std::string name = item.substr(0, eq);
    while (!name.empty() && name.back() == ' ') name.pop_back();
    while (!name.empty() && name.front() == ' ') name.erase(name.begin());
    int s = -1;
    for (int i = 0; i < net.num_species(); ++i) {
      if (net.species()[i].id == name) s = i;
    }
    if (s < 0) throw Error("unknown species '" + name + "' in --init");
    try {
      x[s] = std::stoll(item.substr(eq + 1));
    } catch (const std::exception&) {
      throw Error("bad count in --init item '" + item + "'");
    }
    if (x[s] < 0) throw Error("negative count in --init");
    pos = comma + 1;
  }
  return x;
}

State default_init(const ReactionNetwork& net) {
  State x(net.num_species(), 0);
  for (int c = 0; c < net.num_complexes(); ++c) {
    const State& phi = net.complex(c).stoich;
    for (std::size_t i = 0; i < x.size(); ++i) x[i] = std::max(x[i], phi[i]);
  }
  return x;
}

std::string display_label(const ReactionNetwork& net, int complex_id) {
  const Complex& c = net.complex(complex_id);
  if (c.copy_tag == 0) return c.label;
  return c.label + " @" + std::to_string(c.copy_tag);
}

RunManifest make_manifest(const std::string& subcommand, const std::string& input, Json config) {
  RunManifest m;
  m.subcommand = subcommand;
  m.input_hash = content_hash(input);
  m.version = SRN_TOOL_VERSION;
  m.config = std::move(config);
  return m;
}

void emit_doc(const Json& doc, const std::string& out_path, bool to_stdout) {
  std::string text = dump_json(doc);
  if (!out_path.empty()) {
    std::ofstream out(out_path, std::ios::binary);
    if (!out) throw Error("cannot write " + out_path);
    out << text;
  }
  if (to_stdout || out_path.empty()) std::fputs(text.c_str(), stdout);
}

namespace {

std::string state_text(const State& x) {
  std::string s = "(";
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (i) s += ",";
    s += std::to_string(x[i]);
  }
  return s + ")";
}

void print_report_line(const BalanceReport& r) {
  std::printf("check %-18s %s  (max residual %.3g over %ld states)\n", r.property.c_str(),
              r.verdict ? "ok  " : "FAIL", r.max_residual,
              static_cast<long>(r.states_checked));
  if (!r.verdict && !r.worst_state.empty()) {
    std::printf("  worst at state %s%s%s\n", state_text(r.worst_state).c_str(),
                r.worst_complex >= 0 ? " complex " : "",
                r.worst_complex >= 0 ? std::to_string(r.worst_complex).c_str() : "");
  }
  if (!r.reason.empty()) std::printf("  %s\n", r.reason.c_str());
}

Json component_summary(const IrreducibleComponent& comp) {
  Json j;
  j["origin"] = comp.origin();
  j["size"] = comp.states().size();
  j["interior"] = comp.num_interior();
  j["clipped"] = comp.clipped();
  return j;
}

}  // namespace

int cmd_analyze(const AnalyzeArgs& args, const CommonFlags& flags) {
  Stopwatch watch;
  std::string text = read_file(args.file);
  NetPtr net = parse_network(text);

  ComponentIndex ci(*net);
  bool weak = is_weakly_reversible(*net);
  bool rev = is_reversible(*net);
  CycleInventory inv = enumerate_cycles(*net);
  int def_raw = deficiency_raw(*net);
  int def_essential = deficiency(*net);

  RunManifest manifest = make_manifest("analyze", text, Json{{"file", args.file}});
  manifest.elapsed_seconds = watch.seconds();

  if (flags.json) {
    Json j;
    j["manifest"] = manifest_to_json(manifest);
    j["species"] = Json::array();
    for (const auto& s : net->species()) j["species"].push_back(s.id);
    j["num_complexes"] = net->num_complexes();
    j["num_reactions"] = net->num_reactions();
    Json classes = Json::array();
    for (int k = 0; k < ci.num_components(); ++k) {
      Json members = Json::array();
      for (int c : ci.members(k)) members.push_back(display_label(*net, c));
      classes.push_back(Json{{"members", std::move(members)}, {"strongly_connected", ci.strong(k)}});
    }
    j["linkage_classes"] = std::move(classes);
    j["weakly_reversible"] = weak;
    j["reversible"] = rev;
    j["cycle_count"] = inv.cycles.size();
    j["cycles_capped"] = inv.cap_exceeded;
    j["deficiency"] = def_raw;
    j["deficiency_essential"] = def_essential;
    emit_doc(j, "", true);
    return exit_ok;
  }

  std::printf("species:");
  for (const auto& s : net->species()) std::printf(" %s", s.id.c_str());
  std::printf("\ncomplexes: %d   reactions: %d   linkage classes: %d\n", net->num_complexes(),
              net->num_reactions(), ci.num_components());
  std::printf("weakly reversible: %s   reversible: %s\n", weak ? "yes" : "no",
              rev ? "yes" : "no");
  std::printf("elementary cycles: %zu%s\n", inv.cycles.size(),
              inv.cap_exceeded ? " (capped)" : "");
  if (def_raw == def_essential) {
    std::printf("deficiency: %d\n", def_raw);
  } else {
    std::printf("deficiency: %d (%d after merging complexes with equal stoichiometry)\n", def_raw,
                def_essential);
  }
  for (int k = 0; k < ci.num_components(); ++k) {
    std::printf("  class %d (%s):", k, ci.strong(k) ? "strong" : "not strong");
    for (int c : ci.members(k)) std::printf(" %s", display_label(*net, c).c_str());
    std::printf("\n");
  }
  return exit_ok;
}

int cmd_cleave(const CleaveArgs& args, const CommonFlags& flags) {
  Stopwatch watch;
  std::string text = read_file(args.file);
  NetPtr net = parse_network(text);

  CleaveOptions opts;
  if (args.trace) {
    opts.observer = [&](const CleaveStepInfo& info) {
      std::printf("step %d: split %s into %d copies, %d -> %d complexes\n", info.step,
                  display_label(*info.before, info.cleaved_complex).c_str(), info.copies,
                  info.before->num_complexes(), info.after->num_complexes());
    };
  }
  CleavingResult res = cleave_full(net, opts);

  RunManifest manifest =
      make_manifest("cleave", text, Json{{"file", args.file}, {"trace", args.trace}});
  manifest.elapsed_seconds = watch.seconds();

  Json doc;
  doc["manifest"] = manifest_to_json(manifest);
  doc["cleaving"] = cleaving_to_json(res);

  if (flags.json || !args.out.empty()) {
    emit_doc(doc, args.out, flags.json);
  }
  if (!flags.json) {
    std::printf("cycles: %zu\n", res.cycles.cycles.size());
    for (std::size_t i = 0; i < res.cycles.cycles.size(); ++i) {
      const auto& cyc = res.cycles.cycles[i];
      std::printf("  cycle %zu (length %zu):", i, cyc.reactions.size());
      for (int r : cyc.reactions) {
        std::printf(" %s ->", display_label(*res.network, res.network->reaction(r).source).c_str());
      }
      std::printf(" %s\n",
                  display_label(*res.network,
                                res.network->reaction(cyc.reactions.front()).source)
                      .c_str());
    }
    if (!args.out.empty()) std::printf("wrote %s\n", args.out.c_str());
  }
  return exit_ok;
}

namespace {

// Accepts either exact probabilities or simulated fractions; missing states
// count as zero mass.
Distribution load_pi(const Json& doc, const CompPtr& comp) {
  const Json& body = doc.contains("pi") ? doc.at("pi") : doc;
  const Json& states = body.contains("states") ? body.at("states")
                                               : body.at("histogram").at("states");
  const Json& mass = body.contains("probs")       ? body.at("probs")
                     : body.contains("fractions") ? body.at("fractions")
                                                  : body.at("histogram").at("fractions");
  StateMap<double> table;
  for (std::size_t i = 0; i < states.size(); ++i) {
    table[states[i].get<State>()] = mass[i].get<double>();
  }
  std::vector<double> w(comp->states().size(), 0.0);
  for (std::size_t i = 0; i < w.size(); ++i) {
    auto it = table.find(comp->states()[i]);
    if (it != table.end()) w[i] = it->second;
  }
  return Distribution::from_weights(comp, w);
}

}  // namespace

int cmd_balance(const BalanceArgs& args, const CommonFlags& flags) {
  Stopwatch watch;
  std::string text = read_file(args.file);
  NetPtr net = parse_network(text);

  State init = args.init.empty() ? default_init(*net) : parse_init(args.init, *net);
  Truncation trunc;
  trunc.cap = args.truncate;
  auto comp = std::make_shared<IrreducibleComponent>(*net, init, trunc);

  Json config{{"file", args.file},
              {"init", init},
              {"truncate", args.truncate},
              {"tol", flags.tol},
              {"pi", args.pi_file.empty() ? Json() : Json(args.pi_file)}};

  Json doc;
  doc["component"] = component_summary(*comp);

  Distribution pi(comp, std::vector<double>(comp->states().size(),
                                            1.0 / static_cast<double>(comp->states().size())));
  bool solved = false;
  if (args.pi_file.empty()) {
    CbOptions opts;
    opts.cyclic_tol = flags.tol;
    opts.tol = std::max(flags.tol, 1e-6);
    CbSolution sol = complex_balanced_solve(net, comp, opts);
    pi = sol.pi;
    solved = true;
    doc["factorization"] = factorization_to_json(sol.factorization);
  } else {
    Json pi_doc = Json::parse(read_file(args.pi_file));
    pi = load_pi(pi_doc, comp);
  }

  BalanceReport st = check_stationary(*net, pi, flags.tol);
  BalanceReport cb = check_complex_balanced(*net, pi, flags.tol);
  BalanceReport db = check_detailed_balanced(*net, pi, flags.tol);
  bool verdict = cb.verdict;

  doc["reports"] = Json::array({report_to_json(st), report_to_json(cb), report_to_json(db)});
  doc["pi"] = distribution_to_json(pi);
  doc["verdict"] = verdict;

  RunManifest manifest = make_manifest("balance", text, std::move(config));
  manifest.elapsed_seconds = watch.seconds();
  doc["manifest"] = manifest_to_json(manifest);

  if (flags.json) {
    emit_doc(doc, "", true);
  } else {
    std::printf("component: %zu states (%d interior) from origin %s, cap %ld%s\n",
                comp->states().size(), comp->num_interior(), state_text(comp->origin()).c_str(),
                static_cast<long>(args.truncate), comp->clipped() ? ", clipped" : "");
    if (solved) std::printf("solve: complex balanced distribution found\n");
    print_report_line(st);
    print_report_line(cb);
    print_report_line(db);
    std::printf("verdict: %s\n", verdict ? "complex balanced" : "not complex balanced");
  }
  return verdict ? exit_ok : exit_verdict;
}

int cmd_simulate(const SimulateArgs& args, const CommonFlags& flags) {
  Stopwatch watch;
  std::string text = read_file(args.file);
  NetPtr net = parse_network(text);

  SimConfig cfg;
  cfg.initial = args.init.empty() ? default_init(*net) : parse_init(args.init, *net);
  cfg.t_end = args.time;
  cfg.burn_in = args.burn;
  cfg.seed = flags.seed;
  cfg.replicas = args.replicas;

  EmpiricalDistribution hist = simulate(*net, cfg);

  Json config{{"file", args.file}, {"init", cfg.initial},     {"time", cfg.t_end},
              {"burn", cfg.burn_in}, {"seed", cfg.seed},        {"replicas", cfg.replicas}};
  RunManifest manifest = make_manifest("simulate", text, std::move(config));
  manifest.elapsed_seconds = watch.seconds();

  Json doc;
  doc["manifest"] = manifest_to_json(manifest);
  doc["histogram"] = histogram_to_json(hist);

  if (flags.json || !args.out.empty()) {
    emit_doc(doc, args.out, flags.json);
  }
  if (!flags.json) {
    std::printf("events: %llu   observed time: %.6g   support: %zu states\n",
                static_cast<unsigned long long>(hist.events), hist.total_time,
                hist.fraction.size());
    if (!args.out.empty()) std::printf("wrote %s\n", args.out.c_str());
  }
  return exit_ok;
}

}  // namespace srncli
