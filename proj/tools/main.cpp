#include <iostream>
#include <vector>

#include "redlab/cli.hpp"
#include "redlab/error.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  redlab::RunConfig cfg;
  try {
    cfg = redlab::parse_args(args);
  } catch (const redlab::ParseError& e) {
    std::cerr << e.what() << "\n";
    return 2;
  }
  redlab::RunResult res = redlab::run(cfg);
  if (!res.out.empty()) std::cout << res.out;
  if (!res.err.empty()) std::cerr << res.err;
  return res.exit_code;
}
