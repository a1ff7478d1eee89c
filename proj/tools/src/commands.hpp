#pragma once

#include <cstdint>
#include <string>

#include "srn/json_io.hpp"

namespace srncli {

// Exit codes shared by every subcommand, coarse enough for scripting.
enum ExitCode : int {
  exit_ok = 0,
  exit_parse = 2,     // input text or JSON did not parse
  exit_analysis = 3,  // a structural precondition failed
  exit_verdict = 4,   // a balance verdict or stored expectation came back false
  exit_solver = 5,    // a solver gave up before reaching a verdict
};

struct CommonFlags {
  bool json = false;
  double tol = 1e-9;
  std::uint64_t seed = 1;
};

struct AnalyzeArgs {
  std::string file;
};

struct CleaveArgs {
  std::string file;
  std::string out;
  bool trace = false;
};

struct BalanceArgs {
  std::string file;
  std::string init;
  std::string pi_file;
  long truncate = 30;
};

struct SimulateArgs {
  std::string file;
  std::string init;
  std::string out;
  double time = 1000.0;
  double burn = 0.0;
  int replicas = 1;
};

struct ReproduceArgs {
  std::string name;
};

int cmd_analyze(const AnalyzeArgs& args, const CommonFlags& flags);
int cmd_cleave(const CleaveArgs& args, const CommonFlags& flags);
int cmd_balance(const BalanceArgs& args, const CommonFlags& flags);
int cmd_simulate(const SimulateArgs& args, const CommonFlags& flags);
int cmd_reproduce(const ReproduceArgs& args, const CommonFlags& flags);

// Helpers shared across commands.
std::string read_file(const std::string& path);
srn::State parse_init(const std::string& text, const srn::ReactionNetwork& net);
// Componentwise max of the complex stoichiometries: the smallest state from
// which every reaction is eventually enabled. Used when --init is absent.
srn::State default_init(const srn::ReactionNetwork& net);
std::string display_label(const srn::ReactionNetwork& net, int complex_id);
srn::RunManifest make_manifest(const std::string& subcommand, const std::string& input,
                               srn::Json config);
void emit_doc(const srn::Json& doc, const std::string& out_path, bool to_stdout);

class Stopwatch {
 public:
  Stopwatch();
  double seconds() const;

 private:
  std::uint64_t start_ns_;
};

}  // namespace srncli
