#ifndef REDLAB_CLI_HPP
#define REDLAB_CLI_HPP

#include <cstdint>
#include <string>
#include <vector>

namespace redlab {

/// Everything a CLI invocation needs. parse_args fills it from argv; run
/// executes it. Keeping both in the library lets tests drive the exact CLI
/// surface without spawning processes.
struct RunConfig {
  std::string command;
  std::string calculus = "stlc";    // builtin name
  std::string calculus_file;        // overrides `calculus` when set
  std::string term;
  std::string term_file;
  std::string type;                 // typecheck goal
  std::string context;              // typecheck context, "x: T, y: U"
  std::string rule;                 // classify / sr-instances target
  int branch = 0;
  int max_steps = 10000;
  int max_nodes = 50000;
  int max_depth = 64;
  int trials = 200;
  uint64_t seed = 42;
  std::string format = "text";      // text | json | dot
};

struct RunResult {
  int exit_code = 0;   // 0 ok, 1 domain error, 2 usage/parse error
  std::string out;
  std::string err;
};

/// Parse command-line words (without argv[0]). Usage problems raise
/// ParseError. REDLAB_SEED in the environment overrides the default seed;
/// an explicit --seed flag overrides both.
RunConfig parse_args(const std::vector<std::string>& args);

RunResult run(const RunConfig& cfg);

}  // namespace redlab

#endif
