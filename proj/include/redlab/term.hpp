#ifndef REDLAB_TERM_HPP
#define REDLAB_TERM_HPP

#include <memory>
#include <set>
#include <string>
#include <vector>

namespace redlab {

struct Term;
using TermRef = std::shared_ptr<const Term>;

/// Untyped term AST. Nodes are immutable and shared; all operations below
/// are pure, so values can be passed between threads freely.
///
/// A term is one of:
///   Var    - a term variable (free or bound, by position);
///   Binder - a unary-binding constructor application, e.g. `lam x. body`;
///   Node   - a non-binding head applied to arguments, e.g. `app(f, a)`;
///   Meta   - a term metavariable `$t`, legal only inside rule schemas.
struct Term {
  enum class Tag { Var, Binder, Node, Meta };

  Tag tag;
  std::string name;           // Var name, Binder/Node head, or Meta name
  std::string bound;          // Binder: the bound variable
  TermRef body;               // Binder body
  std::vector<TermRef> args;  // Node arguments
};

TermRef tvar(std::string name);
TermRef tbinder(std::string head, std::string bound, TermRef body);
TermRef tnode(std::string head, std::vector<TermRef> args);
TermRef tmeta(std::string name);

/// Structural identity (raw names, no alpha). Mostly an internal helper;
/// semantic comparison is alpha_eq.
bool term_eq(const TermRef& a, const TermRef& b);

/// Variables with a free occurrence in t.
std::set<std::string> free_vars(const TermRef& t);

/// True iff the terms differ at most in bound-variable names.
bool alpha_eq(const TermRef& a, const TermRef& b);

/// Capture-avoiding substitution t[s/x]. Binders whose bound name would
/// capture a free variable of s are renamed with the smallest numeric
/// suffix that is fresh in scope, so the result is deterministic.
TermRef substitute(const TermRef& t, const std::string& var, const TermRef& s);

/// All subterm occurrences in pre-order, including t itself.
std::vector<TermRef> subterms(const TermRef& t);

/// Number of AST nodes.
int term_size(const TermRef& t);

/// Concrete syntax: `x`, `lam x. body`, `app(f, a)`, `$t`.
std::string to_string(const TermRef& t);

/// True if the term contains a Meta node (i.e. is a schema, not a term).
bool has_meta(const TermRef& t);

/// A term under the deterministic bound-variable naming #0, #1, ... assigned
/// to binders left-to-right in pre-order. Two terms are alpha-equivalent iff
/// their canonical forms are structurally identical; the rendered text is
/// usable as a hash/set key.
struct CanonicalTerm {
  TermRef term;
  std::string text;

  bool operator==(const CanonicalTerm& o) const { return text == o.text; }
  bool operator!=(const CanonicalTerm& o) const { return text != o.text; }
  bool operator<(const CanonicalTerm& o) const { return text < o.text; }
};

CanonicalTerm canonicalize(const TermRef& t);

}  // namespace redlab

#endif
