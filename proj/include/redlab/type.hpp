#ifndef REDLAB_TYPE_HPP
#define REDLAB_TYPE_HPP

#include <map>
#include <memory>
#include <set>
#include <string>
#include <vector>

namespace redlab {

struct Type;
using TypeRef = std::shared_ptr<const Type>;

/// Type expressions. Immutable and shared.
///
///   Atom - an atomic type constant (rho, sigma, L, bot, ...);
///   Con  - a type connective applied to arguments (A -> B, A tonk B);
///   Meta - a unification metavariable ?n;
///   SVar - a named schema variable ?A, legal only inside rule schemas
///          (instantiated to fresh Metas on every rule application).
struct Type {
  enum class Tag { Atom, Con, Meta, SVar };

  Tag tag;
  std::string name;           // Atom/Con/SVar name
  std::vector<TypeRef> args;  // Con arguments
  int meta = -1;              // Meta id
};

TypeRef atom(std::string name);
TypeRef tcon(std::string name, std::vector<TypeRef> args);
TypeRef arrow(TypeRef from, TypeRef to);
TypeRef tymeta(int id);
TypeRef tysvar(std::string name);

bool type_eq(const TypeRef& a, const TypeRef& b);

/// A hat: either a type, the non-type marker FROWN, or a hat metavariable.
/// FROWN is not a type and never occurs inside a Con; a hat metavariable can
/// resolve to either a type or FROWN.
struct Hat {
  enum class Tag { Ty, Frown, Meta };

  Tag tag = Tag::Frown;
  TypeRef type;   // Ty
  int meta = -1;  // Meta id

  static Hat ty(TypeRef t);
  static Hat frown();
  static Hat hatmeta(int id);

  bool is_type() const { return tag == Tag::Ty; }
  bool is_frown() const { return tag == Tag::Frown; }
};

bool hat_eq(const Hat& a, const Hat& b);

/// Supplies globally-unique-per-reconstruction metavariable ids. Type and
/// hat metavariables draw from the same sequence so rendered names never
/// collide.
struct MetaSupply {
  int next = 0;
  int fresh() { return next++; }
};

/// An idempotent metavariable binding store. Bindings are resolved on
/// application (a bound metavariable is chased to its spine), so applying
/// twice equals applying once by construction. Occurs-check is always on.
class Substitution {
 public:
  bool has_type(int id) const { return types_.count(id) != 0; }
  bool has_hat(int id) const { return hats_.count(id) != 0; }

  /// Chase top-level Meta bindings without descending into arguments.
  TypeRef walk(TypeRef t) const;
  Hat walk(Hat h) const;

  /// Deep application: every bound metavariable replaced by its value.
  TypeRef apply(const TypeRef& t) const;
  Hat apply(const Hat& h) const;

  /// Unchecked inserts; unify() is the safe entry point.
  void bind_type(int id, TypeRef t) { types_[id] = std::move(t); }
  void bind_hat(int id, Hat h) { hats_.emplace(id, std::move(h)); }

  size_t size() const { return types_.size() + hats_.size(); }

 private:
  std::map<int, TypeRef> types_;
  std::map<int, Hat> hats_;
};

enum class UnifyFail { None, Mismatch, Occurs };

struct UnifyResult {
  Substitution sub;
  UnifyFail fail = UnifyFail::None;
  explicit operator bool() const { return fail == UnifyFail::None; }
};

/// Most general extension of `s` making a and b equal. FROWN unifies only
/// with FROWN or a hat metavariable; a type metavariable never takes FROWN.
UnifyResult unify(const Hat& a, const Hat& b, Substitution s);
UnifyResult unify_types(const TypeRef& a, const TypeRef& b, Substitution s);

/// All metavariable ids occurring in the (unapplied) value.
std::set<int> meta_vars(const TypeRef& t);
std::set<int> meta_vars(const Hat& h);

/// Renumbers metavariables in first-occurrence order (pre-order,
/// left-to-right). Shared state allows joint renaming across several values.
struct MetaRenamer {
  std::map<int, int> map;
  int next = 0;
  int rename(int id);
};

TypeRef rename_canonical(const TypeRef& t, MetaRenamer& r);
Hat rename_canonical(const Hat& h, MetaRenamer& r);
Hat rename_canonical(const Hat& h);

/// Concrete syntax. Infix connectives (-> plus any names in `infix`) print
/// infix; -> is right-associative and binds loosest. Metavariables print as
/// ?0, ?1, ... or, with alias=true, as display letters A, B, C, ...
struct TypeStyle {
  std::set<std::string> infix;  // besides "->"
  bool alias = false;
};

std::string to_string(const TypeRef& t, const TypeStyle& style = {});
std::string to_string(const Hat& h, const TypeStyle& style = {});

/// Display letter for metavariable id i: A..Z, then A1, B1, ...
std::string meta_alias(int i);

}  // namespace redlab

#endif
