#ifndef REDLAB_INFER_HPP
#define REDLAB_INFER_HPP

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "redlab/calculus.hpp"
#include "redlab/term.hpp"
#include "redlab/type.hpp"

namespace redlab {

/// One node of an annotated derivation tree. `rule` is a type-assignment
/// rule name, or one of the leaf markers "hyp" (discharged hypothesis),
/// "assume" (free-variable assumption), "schema" (opaque term metavariable
/// in a redex-schema reconstruction). A node standing under a discharging
/// premise records the hypothesis it may use as (variable, hat).
struct DerivNode {
  std::string rule;
  TermRef subject;
  Hat hat;
  std::optional<std::pair<std::string, Hat>> hyp;
  std::vector<DerivNode> children;
};

/// Name-sorted association lists; contexts map free variables to demanded
/// hats, schema maps record the hat assigned to each `$m` leaf.
using ContextMap = std::vector<std::pair<std::string, Hat>>;

/// A reconstruction branch: one consistent choice of rules. Hats are fully
/// resolved and renamed canonically (?0, ?1, ... in first-occurrence order
/// over conclusion, context, schema metas, then the derivation pre-order),
/// so branches compare structurally.
struct InferBranch {
  DerivNode deriv;
  Hat conclusion;
  ContextMap context;
  ContextMap schema_metas;
  Substitution subst;  // the branch's most general solution, pre-renaming
};

struct InferOptions {
  int max_branches = 64;
};

struct Reconstruction {
  std::vector<InferBranch> branches;  // rule-declaration order
  bool branch_limit_hit = false;

  bool typable() const { return !branches.empty(); }
};

/// Principal-hat reconstruction of a plain term: one branch per consistent
/// rule choice, each conclusion principal for that choice, free variables
/// becoming context demands. Empty branch set means untypable.
Reconstruction reconstruct(const Calculus& c, const TermRef& t,
                           const InferOptions& opts = {});

/// As reconstruct, over a reduction-rule redex schema: each term
/// metavariable is an opaque leaf given a fresh hat metavariable constrained
/// only by the rigid structure above it.
Reconstruction reconstruct_schema(const Calculus& c, const TermRef& redex,
                                  const InferOptions& opts = {});

/// Does some reconstruction branch instantiate (via unification) to
/// conclusion `h` with context demands consistent with `ctx`? Every demanded
/// variable must be bound in `ctx`; extra bindings are ignored.
bool typecheck(const Calculus& c, const ContextMap& ctx, const TermRef& t,
               const Hat& h);

/// Independent rule-by-rule check of a finished branch: every node must be a
/// correct instance of its named rule with the recorded hats. Used by tests
/// and for witness validation; does not share state with reconstruction.
bool replay(const Calculus& c, const InferBranch& b);

/// Replace every metavariable by a distinct fresh atom (rigidifies a
/// principal typing so instance checks cannot specialize it).
struct Skolemizer {
  std::map<int, TypeRef> table;
  Hat operator()(const Hat& h);
  ContextMap operator()(const ContextMap& ctx);
};

/// Text rendering: "subject : hat" lines, derivations as indented trees.
std::string render_branch(const InferBranch& b, const TypeStyle& style);
std::string render_deriv(const DerivNode& n, const TypeStyle& style,
                         int indent = 0);

}  // namespace redlab

#endif
