#include <cstdio>

#include "CLI11.hpp"
#include "commands.hpp"
#include "srn/balance.hpp"
#include "srn/parser.hpp"
#include "srn/simulate.hpp"

namespace {

void add_common(CLI::App* sub, srncli::CommonFlags& flags) {
  sub->add_flag("--json", flags.json, "emit a JSON document on stdout");
  sub->add_option("--tol", flags.tol, "numeric tolerance for checks and solves")
      ->capture_default_str();
  sub->add_option("--seed", flags.seed, "random seed")->capture_default_str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"decompose stochastic reaction networks into disjoint cycles and "
               "compute balanced stationary distributions"};
  app.require_subcommand(1);

  srncli::CommonFlags flags;
  srncli::AnalyzeArgs analyze_args;
  srncli::CleaveArgs cleave_args;
  srncli::BalanceArgs balance_args;
  srncli::SimulateArgs simulate_args;
  srncli::ReproduceArgs reproduce_args;

  CLI::App* analyze = app.add_subcommand("analyze", "report graph structure of a network file");
  analyze->add_option("file", analyze_args.file, "network file")->required();
  add_common(analyze, flags);

  CLI::App* cleave =
      app.add_subcommand("cleave", "decompose a network into disjoint cycles");
  cleave->add_option("file", cleave_args.file, "network file")->required();
  cleave->add_option("--out", cleave_args.out, "write the JSON document here");
  cleave->add_flag("--trace", cleave_args.trace, "print one line per splitting step");
  add_common(cleave, flags);

  CLI::App* balance = app.add_subcommand(
      "balance", "solve for a complex balanced distribution, or check a provided one");
  balance->add_option("file", balance_args.file, "network file")->required();
  balance->add_option("--init", balance_args.init,
                      "initial state as NAME=COUNT pairs, e.g. \"A=3,B=0\"");
  balance->add_option("--truncate", balance_args.truncate, "per-species state cap")
      ->capture_default_str();
  balance->add_option("--pi", balance_args.pi_file,
                      "check this distribution (JSON) instead of solving");
  add_common(balance, flags);

  CLI::App* simulate =
      app.add_subcommand("simulate", "exact stochastic simulation of a network file");
  simulate->add_option("file", simulate_args.file, "network file")->required();
  simulate->add_option("--init", simulate_args.init, "initial state as NAME=COUNT pairs");
  simulate->add_option("--time", simulate_args.time, "observation end time")
      ->capture_default_str();
  simulate->add_option("--burn", simulate_args.burn, "discard occupancy before this time")
      ->capture_default_str();
  simulate->add_option("--replicas", simulate_args.replicas, "independent replicas to pool")
      ->capture_default_str();
  simulate->add_option("--out", simulate_args.out, "write the histogram JSON here");
  add_common(simulate, flags);

  CLI::App* reproduce = app.add_subcommand(
      "reproduce", "rerun a bundled example and compare against stored expectations");
  reproduce->add_option("name", reproduce_args.name,
                        "triangle, split-pair, birth-death, phosphorylation, "
                        "michaelis-menten, or network-1")
      ->required();
  add_common(reproduce, flags);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (analyze->parsed()) return srncli::cmd_analyze(analyze_args, flags);
    if (cleave->parsed()) return srncli::cmd_cleave(cleave_args, flags);
    if (balance->parsed()) return srncli::cmd_balance(balance_args, flags);
    if (simulate->parsed()) return srncli::cmd_simulate(simulate_args, flags);
    if (reproduce->parsed()) return srncli::cmd_reproduce(reproduce_args, flags);
  } catch (const srn::ParseError& e) {
    std::fprintf(stderr, "parse error at %d:%d-%d: %s\n", e.span.line, e.span.col_start,
                 e.span.col_end, e.what());
    return srncli::exit_parse;
  } catch (const srn::BudgetExceeded& e) {
    std::fprintf(stderr, "simulation stopped: %s\n", e.what());
    return srncli::exit_solver;
  } catch (const srn::BalanceError& e) {
    std::fprintf(stderr, "%s\n", e.what());
    // An uncertified normalization may mean the truncation is too small, and
    // a failed cleave precondition is structural; both are distinct from a
    // definite negative verdict.
    if (e.stage == "normalization") return srncli::exit_solver;
    if (e.stage == "cleave") return srncli::exit_analysis;
    return srncli::exit_verdict;
  } catch (const nlohmann::json::exception& e) {
    std::fprintf(stderr, "json error: %s\n", e.what());
    return srncli::exit_parse;
  } catch (const srn::Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return srncli::exit_analysis;
  }
  return srncli::exit_ok;
}
