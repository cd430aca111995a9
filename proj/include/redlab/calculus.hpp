#ifndef REDLAB_CALCULUS_HPP
#define REDLAB_CALCULUS_HPP

#include <optional>
#include <string>
#include <vector>

#include "redlab/term.hpp"
#include "redlab/type.hpp"

namespace redlab {

/// Declaration of a type connective, e.g. `typecon -> 2 infix`.
struct TypeConDecl {
  std::string name;
  int arity = 0;
  bool infix = false;
};

/// Declaration of a term head. Binder heads carry the index of the argument
/// that is in the scope of a bound variable; the term AST restricts binders
/// to arity 1, binds 0.
struct HeadDecl {
  std::string name;
  bool constructor = true;
  int arity = 0;
  std::optional<int> binds;

  bool is_binder() const { return binds.has_value(); }
};

/// One premise of a type-assignment rule: an optional discharged hypothesis
/// `[x: S] |-` followed by a judgment whose subject is a term metavariable
/// of the conclusion. Type schemas use SVar (?A) for schema variables.
struct Premise {
  std::optional<std::string> hyp_var;
  TypeRef hyp_type;  // set iff hyp_var; a type schema, never FROWN
  std::string subject_meta;
  Hat hat;
};

/// A syntax-directed type-assignment rule: the conclusion subject is exactly
/// one head applied to distinct term metavariables (binder allowed).
struct TypeRule {
  std::string name;
  std::vector<Premise> premises;
  TermRef conclusion_subject;
  Hat conclusion_hat;
};

/// Contractum of a reduction rule: a redex metavariable `$m`, optionally
/// under the substitution form `$m[$arg/x]` where `$m` is the body of a
/// binder in the redex binding x.
struct Contractum {
  std::string meta;
  bool is_subst = false;
  std::string subst_meta;  // the $arg
  std::string subst_var;   // the x
};

struct ReductionRule {
  std::string name;
  TermRef redex;  // rigid schema: heads with term metavariables at leaves
  Contractum contractum;
};

struct Diagnostic {
  std::string code;  // ArityMismatch, UnknownHead, NotSyntaxDirected, ...
  std::string message;
};

struct Calculus {
  std::string name;
  std::vector<TypeConDecl> typecons;
  std::vector<HeadDecl> heads;
  std::vector<TypeRule> rules;
  std::vector<ReductionRule> reductions;

  const HeadDecl* find_head(const std::string& n) const;
  const TypeConDecl* find_typecon(const std::string& n) const;
  const ReductionRule* find_reduction(const std::string& n) const;
  std::vector<const TypeRule*> rules_for(const std::string& head) const;

  /// Rendering style carrying the declared infix connectives.
  TypeStyle type_style(bool alias = false) const;
};

bool calculus_eq(const Calculus& a, const Calculus& b);

/// Structural well-formedness, one diagnostic per violation. Empty result
/// means the calculus satisfies every invariant the engine relies on.
std::vector<Diagnostic> validate(const Calculus& c);

/// The built-in calculi: stlc, tonk, liar, stlc+ekman, core.
/// Throws DomainError("UnknownCalculus") for anything else.
Calculus builtin(const std::string& name);
const std::vector<std::string>& builtin_names();

/// Round-trippable .rcalc text.
std::string pretty_print(const Calculus& c);

/// Check a plain term against the calculus: known heads, declared arities,
/// binder heads used as binders, no metavariables, no head name used as a
/// variable. Throws DomainError on the first violation.
void check_term(const Calculus& c, const TermRef& t);

/// Like check_term but allows metavariable leaves (reduction-rule schemas).
void check_schema(const Calculus& c, const TermRef& t);

}  // namespace redlab

#endif
