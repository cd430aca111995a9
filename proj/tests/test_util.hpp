#ifndef REDLAB_TEST_UTIL_HPP
#define REDLAB_TEST_UTIL_HPP

#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "redlab/term.hpp"

namespace redlab::testutil {

// Arbitrary (not necessarily typable) terms over the lam/app fragment, for
// property tests of the purely syntactic layer and the rewrite engine.
// Bound names deliberately collide with free names and with numeric-suffix
// fresh names, so shadowing and renaming paths get exercised.
inline TermRef random_term(std::mt19937_64& rng, int depth,
                           std::vector<std::string> scope = {"x", "y", "z"}) {
  static const char* bound_pool[] = {"x", "y", "y1", "b1"};
  auto pick = [&](int n) { return static_cast<int>(rng() % n); };
  if (depth <= 0 || pick(4) == 0)
    return tvar(scope[pick(static_cast<int>(scope.size()))]);
  if (pick(2) == 0) {
    std::string v = bound_pool[pick(4)];
    scope.push_back(v);
    return tbinder("lam", v, random_term(rng, depth - 1, scope));
  }
  return tnode("app", {random_term(rng, depth - 1, scope),
                       random_term(rng, depth - 1, scope)});
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

inline std::string golden_path(const std::string& name) {
  return std::string(REDLAB_TEST_DIR) + "/golden/" + name;
}

inline std::string fixture_path(const std::string& name) {
  return std::string(REDLAB_TEST_DIR) + "/fixtures/" + name;
}

}  // namespace redlab::testutil

#endif
