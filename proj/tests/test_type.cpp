#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "redlab/type.hpp"

using namespace redlab;

namespace {

TypeRef A() { return atom("A"); }
TypeRef B() { return atom("B"); }
TypeRef rho() { return atom("rho"); }

Hat ht(TypeRef t) { return Hat::ty(std::move(t)); }

// All ground types over {p, q} with at most one arrow nesting.
std::vector<TypeRef> small_ground_types() {
  std::vector<TypeRef> atoms = {atom("p"), atom("q")};
  std::vector<TypeRef> out = atoms;
  for (const auto& l : atoms)
    for (const auto& r : atoms) out.push_back(arrow(l, r));
  return out;
}

// Types over metas {0, 1}, atoms {p, q}, depth <= 2.
std::vector<TypeRef> small_meta_types() {
  std::vector<TypeRef> leaves = {atom("p"), atom("q"), tymeta(0), tymeta(1)};
  std::vector<TypeRef> out = leaves;
  for (const auto& l : leaves)
    for (const auto& r : leaves) out.push_back(arrow(l, r));
  return out;
}

// One-way matching: bind pattern metas to target pieces, consistently.
bool match_onto(const TypeRef& pattern, const TypeRef& target,
                std::map<int, TypeRef>& binding) {
  switch (pattern->tag) {
    case Type::Tag::Meta: {
      auto it = binding.find(pattern->meta);
      if (it != binding.end()) return type_eq(it->second, target);
      binding.emplace(pattern->meta, target);
      return true;
    }
    case Type::Tag::Atom:
      return target->tag == Type::Tag::Atom && pattern->name == target->name;
    case Type::Tag::Con: {
      if (target->tag != Type::Tag::Con || pattern->name != target->name ||
          pattern->args.size() != target->args.size())
        return false;
      for (size_t i = 0; i < pattern->args.size(); ++i)
        if (!match_onto(pattern->args[i], target->args[i], binding))
          return false;
      return true;
    }
    default:
      return false;
  }
}

TypeRef ground_apply(const TypeRef& t, const TypeRef& for0,
                     const TypeRef& for1) {
  switch (t->tag) {
    case Type::Tag::Meta:
      return t->meta == 0 ? for0 : for1;
    case Type::Tag::Con: {
      std::vector<TypeRef> args;
      for (const auto& a : t->args) args.push_back(ground_apply(a, for0, for1));
      return tcon(t->name, std::move(args));
    }
    default:
      return t;
  }
}

std::mt19937_64 g_rng(23);

TypeRef random_type(int depth) {
  switch (g_rng() % (depth <= 0 ? 3 : 4)) {
    case 0: return atom("p");
    case 1: return atom("q");
    case 2: return tymeta(static_cast<int>(g_rng() % 3));
    default: return arrow(random_type(depth - 1), random_type(depth - 1));
  }
}

}  // namespace

TEST_CASE("unify structural match") {
  UnifyResult r = unify(ht(arrow(tymeta(0), B())), ht(arrow(A(), tymeta(1))),
                        Substitution{});
  REQUIRE(static_cast<bool>(r));
  CHECK(type_eq(r.sub.apply(tymeta(0)), A()));
  CHECK(type_eq(r.sub.apply(tymeta(1)), B()));
}

TEST_CASE("atom never unifies with an arrow") {
  UnifyResult r =
      unify(ht(rho()), ht(arrow(tymeta(0), tymeta(0))), Substitution{});
  CHECK(r.fail == UnifyFail::Mismatch);
}

TEST_CASE("occurs check") {
  UnifyResult r =
      unify(ht(tymeta(0)), ht(arrow(tymeta(0), B())), Substitution{});
  CHECK(r.fail == UnifyFail::Occurs);
}

TEST_CASE("FROWN unifies only with FROWN or a hat metavariable") {
  CHECK(static_cast<bool>(unify(Hat::frown(), Hat::frown(), Substitution{})));
  CHECK(unify(Hat::frown(), ht(A()), Substitution{}).fail ==
        UnifyFail::Mismatch);
  UnifyResult r = unify(Hat::hatmeta(5), Hat::frown(), Substitution{});
  REQUIRE(static_cast<bool>(r));
  CHECK(r.sub.apply(Hat::hatmeta(5)).is_frown());
}

TEST_CASE("apply") {
  Substitution s;
  s.bind_type(0, A());
  CHECK(type_eq(s.apply(arrow(tymeta(0), tymeta(0))), arrow(A(), A())));
  CHECK(type_eq(Substitution{}.apply(B()), B()));
  Substitution hs;
  hs.bind_hat(7, Hat::frown());
  CHECK(hs.apply(Hat::hatmeta(7)).is_frown());
}

TEST_CASE("meta_vars") {
  CHECK(meta_vars(ht(arrow(tymeta(2), tymeta(2)))) == std::set<int>{2});
  CHECK(meta_vars(Hat::frown()).empty());
  CHECK(meta_vars(ht(arrow(tymeta(0), tymeta(1)))) == std::set<int>{0, 1});
}

TEST_CASE("rename_canonical") {
  CHECK(to_string(rename_canonical(ht(arrow(tymeta(9), tymeta(9))))) ==
        "?0 -> ?0");
  CHECK(to_string(rename_canonical(ht(arrow(tymeta(5), tymeta(3))))) ==
        "?0 -> ?1");
  CHECK(to_string(rename_canonical(ht(rho()))) == "rho");
}

TEST_CASE("rendering") {
  TypeStyle tonk_style;
  tonk_style.infix.insert("tonk");
  CHECK(to_string(arrow(arrow(A(), B()), A())) == "(A -> B) -> A");
  CHECK(to_string(arrow(A(), arrow(B(), A()))) == "A -> B -> A");
  CHECK(to_string(tcon("tonk", {A(), B()}), tonk_style) == "A tonk B");
  CHECK(to_string(arrow(tcon("tonk", {A(), B()}), A()), tonk_style) ==
        "A tonk B -> A");
  CHECK(meta_alias(0) == "A");
  CHECK(meta_alias(25) == "Z");
  CHECK(meta_alias(26) == "A1");
}

TEST_CASE("substitution application is idempotent") {
  for (int i = 0; i < 400; ++i) {
    TypeRef a = random_type(2), b = random_type(2);
    UnifyResult r = unify(ht(a), ht(b), Substitution{});
    if (!r) continue;
    Hat once = r.sub.apply(ht(a));
    CHECK(hat_eq(r.sub.apply(once), once));
  }
}

TEST_CASE("apply is a homomorphism over constructors") {
  for (int i = 0; i < 200; ++i) {
    TypeRef a = random_type(2), b = random_type(2);
    UnifyResult r = unify(ht(a), ht(b), Substitution{});
    if (!r) continue;
    TypeRef whole = r.sub.apply(arrow(a, b));
    CHECK(type_eq(whole, arrow(r.sub.apply(a), r.sub.apply(b))));
  }
}

TEST_CASE("unify is symmetric up to renaming") {
  for (int i = 0; i < 400; ++i) {
    TypeRef a = random_type(2), b = random_type(2);
    UnifyResult ab = unify(ht(a), ht(b), Substitution{});
    UnifyResult ba = unify(ht(b), ht(a), Substitution{});
    CHECK(static_cast<bool>(ab) == static_cast<bool>(ba));
    if (!ab || !ba) continue;
    CHECK(to_string(rename_canonical(ab.sub.apply(ht(a)))) ==
          to_string(rename_canonical(ba.sub.apply(ht(a)))));
  }
}

TEST_CASE("most general unifier: every ground unifier factors through") {
  // Oracle: enumerate candidate ground substitutions over a small universe;
  // each one that unifies the pair must be an instance of the computed
  // unifier.
  std::vector<TypeRef> metas_tys = small_meta_types();
  std::vector<TypeRef> grounds = small_ground_types();
  int solvable = 0, ground_unifiers = 0;
  for (const auto& a : metas_tys) {
    for (const auto& b : metas_tys) {
      UnifyResult r = unify(ht(a), ht(b), Substitution{});
      if (r) ++solvable;
      for (const auto& g0 : grounds) {
        for (const auto& g1 : grounds) {
          TypeRef ga = ground_apply(a, g0, g1);
          TypeRef gb = ground_apply(b, g0, g1);
          if (!type_eq(ga, gb)) continue;
          ++ground_unifiers;
          REQUIRE(static_cast<bool>(r));
          std::map<int, TypeRef> binding;
          CHECK(match_onto(r.sub.apply(a), ga, binding));
        }
      }
    }
  }
  CHECK(solvable > 100);
  CHECK(ground_unifiers > 1000);
}
