#ifndef REDLAB_REWRITE_HPP
#define REDLAB_REWRITE_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "redlab/calculus.hpp"
#include "redlab/term.hpp"

namespace redlab {

/// Position of a subterm: child indices from the root (binder body = 0).
using Path = std::vector<int>;

std::string path_to_string(const Path& p);  // "root" or "0.1.0"

struct Bounds {
  int max_steps = 10000;
  int max_nodes = 50000;
  int max_depth = 64;
};

struct StepResult {
  enum class Kind { Reduced, NoRedex };
  Kind kind = Kind::NoRedex;
  TermRef next;
  std::string rule;
  Path position;
};

/// Leftmost-outermost single step: contracts the first redex in pre-order,
/// trying reduction rules in declaration order at each position.
StepResult step(const Calculus& c, const TermRef& t);

/// Single step at an exact position; DomainError("InvalidPosition") if no
/// rule matches there.
StepResult step_at(const Calculus& c, const TermRef& t, const Path& pos);

/// Apply one specific rule at a position, if it matches.
std::optional<TermRef> apply_rule_at(const Calculus& c, const ReductionRule& r,
                                     const TermRef& t, const Path& pos);

/// Every single step available anywhere in the term, in pre-order position
/// order and rule declaration order.
struct Redex {
  Path position;
  std::string rule;
  TermRef result;
};
std::vector<Redex> all_steps(const Calculus& c, const TermRef& t);

struct NormalizeResult {
  enum class Kind { NormalForm, Cycle, StepLimit };
  Kind kind = Kind::NormalForm;
  TermRef term;  // the normal form, or the last term at the step limit
  int steps = 0;
  std::vector<CanonicalTerm> cycle;  // first and last entries identical
};

/// Iterates leftmost-outermost steps. Returns Cycle as soon as the canonical
/// form of the current term repeats within the current reduction path.
NormalizeResult normalize(const Calculus& c, const TermRef& t, int max_steps);

struct GraphEdge {
  int from = 0;
  int to = 0;
  std::string rule;
  Path position;
};

/// Breadth-first closure of a root under all single steps at all positions.
struct ReductionGraph {
  std::vector<CanonicalTerm> nodes;  // index 0 is the root
  std::vector<GraphEdge> edges;      // sorted (from, position, rule, to)
  bool truncated = false;

  std::vector<int> normal_form_nodes() const;  // nodes with no outgoing edge
};

ReductionGraph reduction_graph(const Calculus& c, const TermRef& t,
                               int max_nodes, int max_depth);

struct JoinResult {
  bool joined = false;
  CanonicalTerm witness;  // when joined
};

/// Searches both reduction graphs (within bounds) for a common canonical
/// node; the witness is the lexicographically least common node.
JoinResult joinable(const Calculus& c, const TermRef& a, const TermRef& b,
                    const Bounds& bounds);

/// Deterministic-per-seed generator of closed well-typed terms for calculi
/// containing the arrow fragment (lam/app with -> rules). `size` bounds the
/// number of rule applications (lam/app nodes); variables are free.
/// Throws DomainError("GenerationFailed") when the budget cannot be closed.
TermRef generate_well_typed(const Calculus& c, int size, uint64_t seed);

std::string to_dot(const ReductionGraph& g);

}  // namespace redlab

#endif
