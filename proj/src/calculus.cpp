#include "redlab/calculus.hpp"

#include <map>
#include <sstream>

#include "redlab/error.hpp"
#include "redlab/parse.hpp"

namespace redlab {

const HeadDecl* Calculus::find_head(const std::string& n) const {
  for (const auto& h : heads)
    if (h.name == n) return &h;
  return nullptr;
}

const TypeConDecl* Calculus::find_typecon(const std::string& n) const {
  for (const auto& t : typecons)
    if (t.name == n) return &t;
  return nullptr;
}

const ReductionRule* Calculus::find_reduction(const std::string& n) const {
  for (const auto& r : reductions)
    if (r.name == n) return &r;
  return nullptr;
}

std::vector<const TypeRule*> Calculus::rules_for(const std::string& head) const {
  std::vector<const TypeRule*> out;
  for (const auto& r : rules)
    if (r.conclusion_subject &&
        (r.conclusion_subject->tag == Term::Tag::Node ||
         r.conclusion_subject->tag == Term::Tag::Binder) &&
        r.conclusion_subject->name == head)
      out.push_back(&r);
  return out;
}

TypeStyle Calculus::type_style(bool alias) const {
  TypeStyle st;
  st.alias = alias;
  for (const auto& t : typecons)
    if (t.infix && t.name != "->") st.infix.insert(t.name);
  return st;
}

namespace {

void collect_term_metas(const TermRef& t, std::vector<std::string>& out) {
  switch (t->tag) {
    case Term::Tag::Meta:
      out.push_back(t->name);
      return;
    case Term::Tag::Binder:
      collect_term_metas(t->body, out);
      return;
    case Term::Tag::Node:
      for (const auto& a : t->args) collect_term_metas(a, out);
      return;
    default:
      return;
  }
}

void check_type_schema(const Calculus& c, const TypeRef& t,
                       const std::string& where,
                       std::vector<Diagnostic>& out) {
  if (!t) {
    out.push_back({"BadSchema", where + ": missing type"});
    return;
  }
  if (t->tag == Type::Tag::Con) {
    const TypeConDecl* d = c.find_typecon(t->name);
    if (!d) {
      out.push_back(
          {"UnknownTypeCon", where + ": type connective '" + t->name +
                                 "' is not declared"});
    } else if (d->arity != static_cast<int>(t->args.size())) {
      out.push_back({"ArityMismatch",
                     where + ": type connective '" + t->name + "' expects " +
                         std::to_string(d->arity) + " arguments, got " +
                         std::to_string(t->args.size())});
    }
    for (const auto& a : t->args) check_type_schema(c, a, where, out);
  }
}

void check_hat_schema(const Calculus& c, const Hat& h, const std::string& where,
                      std::vector<Diagnostic>& out) {
  if (h.tag == Hat::Tag::Ty) check_type_schema(c, h.type, where, out);
}

// Structural checks shared by redex schemas: heads known, arities right,
// binder heads used as binders.
void check_term_shape(const Calculus& c, const TermRef& t,
                      const std::string& where, bool allow_meta,
                      std::vector<Diagnostic>& out) {
  switch (t->tag) {
    case Term::Tag::Var:
      if (c.find_head(t->name))
        out.push_back({"HeadAsVariable", where + ": head '" + t->name +
                                             "' used as a variable"});
      return;
    case Term::Tag::Meta:
      if (!allow_meta)
        out.push_back({"UnexpectedMeta",
                       where + ": term metavariable '$" + t->name +
                           "' not allowed here"});
      return;
    case Term::Tag::Binder: {
      const HeadDecl* d = c.find_head(t->name);
      if (!d) {
        out.push_back(
            {"UnknownHead", where + ": head '" + t->name + "' is not declared"});
      } else if (!d->is_binder()) {
        out.push_back({"BadBinder", where + ": head '" + t->name +
                                        "' is not a binder but is used with a "
                                        "bound variable"});
      }
      check_term_shape(c, t->body, where, allow_meta, out);
      return;
    }
    case Term::Tag::Node: {
      const HeadDecl* d = c.find_head(t->name);
      if (!d) {
        out.push_back(
            {"UnknownHead", where + ": head '" + t->name + "' is not declared"});
      } else {
        if (d->is_binder())
          out.push_back({"BadBinder", where + ": binder head '" + t->name +
                                          "' used without a bound variable"});
        if (d->arity != static_cast<int>(t->args.size()))
          out.push_back({"ArityMismatch",
                         where + ": head '" + t->name + "' expects " +
                             std::to_string(d->arity) + " arguments, got " +
                             std::to_string(t->args.size())});
      }
      for (const auto& a : t->args)
        check_term_shape(c, a, where, allow_meta, out);
      return;
    }
  }
}

// Occurrences of $m in the redex together with the binders on the path.
struct MetaOccurrence {
  int binders_above = 0;
  // Innermost binder directly above the occurrence, if the occurrence is the
  // binder's body.
  const Term* parent_binder = nullptr;
};

void find_meta(const TermRef& t, const std::string& meta, int binders,
               const Term* parent_binder, std::vector<MetaOccurrence>& out) {
  switch (t->tag) {
    case Term::Tag::Meta:
      if (t->name == meta) out.push_back({binders, parent_binder});
      return;
    case Term::Tag::Binder:
      find_meta(t->body, meta, binders + 1, t.get(), out);
      return;
    case Term::Tag::Node:
      for (const auto& a : t->args) find_meta(a, meta, binders, nullptr, out);
      return;
    default:
      return;
  }
}

}  // namespace

std::vector<Diagnostic> validate(const Calculus& c) {
  std::vector<Diagnostic> out;

  std::map<std::string, int> seen;
  for (const auto& t : c.typecons)
    if (++seen["ty:" + t.name] == 2)
      out.push_back({"DuplicateName", "type connective '" + t.name +
                                          "' declared more than once"});
  for (const auto& h : c.heads) {
    if (++seen["hd:" + h.name] == 2)
      out.push_back(
          {"DuplicateName", "head '" + h.name + "' declared more than once"});
    if (h.arity < 0)
      out.push_back({"ArityMismatch", "head '" + h.name + "' has negative arity"});
    if (h.binds) {
      if (h.arity != 1 || *h.binds != 0)
        out.push_back({"BadBinder",
                       "binder head '" + h.name +
                           "' must have arity 1 binding argument 0"});
    }
  }

  for (const auto& r : c.rules) {
    const std::string where = "rule " + r.name;
    const TermRef& concl = r.conclusion_subject;
    std::vector<std::string> concl_metas;
    if (!concl) {
      out.push_back({"BadSchema", where + ": missing conclusion subject"});
      continue;
    }
    if (concl->tag == Term::Tag::Binder) {
      const HeadDecl* d = c.find_head(concl->name);
      if (!d)
        out.push_back({"UnknownHead",
                       where + ": head '" + concl->name + "' is not declared"});
      else if (!d->is_binder())
        out.push_back({"BadBinder", where + ": head '" + concl->name +
                                        "' is not a binder"});
      if (concl->body->tag != Term::Tag::Meta)
        out.push_back({"NotSyntaxDirected",
                       where + ": binder body in the conclusion must be a "
                               "term metavariable"});
      else
        concl_metas.push_back(concl->body->name);
    } else if (concl->tag == Term::Tag::Node) {
      const HeadDecl* d = c.find_head(concl->name);
      if (!d) {
        out.push_back({"UnknownHead",
                       where + ": head '" + concl->name + "' is not declared"});
      } else {
        if (d->is_binder())
          out.push_back({"BadBinder", where + ": binder head '" + concl->name +
                                          "' used without a bound variable"});
        if (d->arity != static_cast<int>(concl->args.size()))
          out.push_back({"ArityMismatch",
                         where + ": head '" + concl->name + "' expects " +
                             std::to_string(d->arity) + " arguments, got " +
                             std::to_string(concl->args.size())});
      }
      for (const auto& a : concl->args) {
        if (a->tag != Term::Tag::Meta) {
          out.push_back({"NotSyntaxDirected",
                         where + ": conclusion arguments must be distinct term "
                                 "metavariables, found '" +
                             to_string(a) + "'"});
        } else {
          concl_metas.push_back(a->name);
        }
      }
    } else {
      out.push_back({"NotSyntaxDirected",
                     where + ": conclusion subject must be a head applied to "
                             "term metavariables"});
    }
    for (size_t i = 0; i < concl_metas.size(); ++i)
      for (size_t j = i + 1; j < concl_metas.size(); ++j)
        if (concl_metas[i] == concl_metas[j])
          out.push_back({"NotSyntaxDirected",
                         where + ": conclusion metavariable '$" +
                             concl_metas[i] + "' repeated"});

    bool concl_is_binder = concl->tag == Term::Tag::Binder;
    for (const auto& pr : r.premises) {
      bool in_concl = false;
      for (const auto& m : concl_metas) in_concl |= m == pr.subject_meta;
      if (!in_concl)
        out.push_back({"PremiseMetaNotInConclusion",
                       where + ": premise subject '$" + pr.subject_meta +
                           "' does not occur in the conclusion"});
      if (pr.hyp_var) {
        if (!concl_is_binder)
          out.push_back({"HypothesisWithoutBinder",
                         where + ": hypothesis on a rule whose conclusion "
                                 "binds no variable"});
        else if (*pr.hyp_var != concl->bound)
          out.push_back({"HypothesisWithoutBinder",
                         where + ": hypothesis variable '" + *pr.hyp_var +
                             "' is not the conclusion's bound variable"});
        check_type_schema(c, pr.hyp_type, where, out);
      } else if (concl_is_binder && concl->body->tag == Term::Tag::Meta &&
                 pr.subject_meta == concl->body->name) {
        out.push_back({"MissingHypothesis",
                       where + ": premise for the binder body must discharge "
                               "the bound variable"});
      }
      check_hat_schema(c, pr.hat, where, out);
    }
    check_hat_schema(c, r.conclusion_hat, where, out);
  }

  for (const auto& h : c.heads)
    if (c.rules_for(h.name).empty())
      out.push_back({"NoRuleForHead",
                     "head '" + h.name + "' has no type-assignment rule"});

  for (const auto& r : c.reductions) {
    const std::string where = "reduction " + r.name;
    if (++seen["red:" + r.name] == 2)
      out.push_back({"DuplicateName",
                     "reduction '" + r.name + "' declared more than once"});
    if (!r.redex) {
      out.push_back({"BadRedex", where + ": missing redex"});
      continue;
    }
    if (r.redex->tag != Term::Tag::Node && r.redex->tag != Term::Tag::Binder) {
      out.push_back(
          {"BadRedex", where + ": redex must start with a head, found '" +
                           to_string(r.redex) + "'"});
      continue;
    }
    check_term_shape(c, r.redex, where, true, out);

    std::vector<std::string> redex_metas;
    collect_term_metas(r.redex, redex_metas);
    auto in_redex = [&](const std::string& m) {
      for (const auto& x : redex_metas)
        if (x == m) return true;
      return false;
    };
    if (!in_redex(r.contractum.meta))
      out.push_back({"ContractumMetaNotInRedex",
                     where + ": contractum metavariable '$" +
                         r.contractum.meta + "' does not occur in the redex"});
    if (r.contractum.is_subst && !in_redex(r.contractum.subst_meta))
      out.push_back({"ContractumMetaNotInRedex",
                     where + ": substitution metavariable '$" +
                         r.contractum.subst_meta +
                         "' does not occur in the redex"});

    std::vector<MetaOccurrence> occ;
    find_meta(r.redex, r.contractum.meta, 0, nullptr, occ);
    if (occ.size() > 1) {
      out.push_back({"ContractumAmbiguous",
                     where + ": contractum metavariable '$" +
                         r.contractum.meta +
                         "' occurs more than once in the redex"});
    } else if (occ.size() == 1) {
      // Keep every instance's free variables inside the redex's: a bare
      // contractum may not sit under a redex binder, and the substitution
      // form must consume the one binder on its path.
      if (!r.contractum.is_subst) {
        if (occ[0].binders_above > 0)
          out.push_back({"ContractumEscapesBinder",
                         where + ": contractum '$" + r.contractum.meta +
                             "' sits under a binder; its bound variable would "
                             "escape"});
      } else {
        if (!occ[0].parent_binder ||
            occ[0].parent_binder->bound != r.contractum.subst_var)
          out.push_back({"ContractumEscapesBinder",
                         where + ": substitution form must target the body of "
                                 "a binder binding '" +
                             r.contractum.subst_var + "'"});
        else if (occ[0].binders_above != 1)
          out.push_back({"ContractumEscapesBinder",
                         where + ": the substituted binder may not sit under "
                                 "another binder"});
        // The substituted term must come from outside the binder.
        std::vector<MetaOccurrence> socc;
        find_meta(r.redex, r.contractum.subst_meta, 0, nullptr, socc);
        for (const auto& o : socc)
          if (o.binders_above > 0)
            out.push_back({"ContractumEscapesBinder",
                           where + ": substitution metavariable '$" +
                               r.contractum.subst_meta +
                               "' sits under a binder"});
      }
    }
  }

  return out;
}

void check_term(const Calculus& c, const TermRef& t) {
  std::vector<Diagnostic> out;
  check_term_shape(c, t, "term", false, out);
  if (!out.empty()) throw DomainError(out[0].code, out[0].message);
}

void check_schema(const Calculus& c, const TermRef& t) {
  std::vector<Diagnostic> out;
  check_term_shape(c, t, "schema", true, out);
  if (!out.empty()) throw DomainError(out[0].code, out[0].message);
}

namespace {

const char* kStlc = R"(calculus stlc
typecon -> 2 infix
head lam constructor 1 binds 0
head app destructor 2
rule arrow-I:  [x: ?A] |- $t : ?B  ==>  lam x. $t : ?A -> ?B
rule arrow-E:  $s : ?A -> ?B , $t : ?A  ==>  app($s, $t) : ?B
reduction beta:  app(lam x. $t, $s)  ~>  $t[$s/x]
)";

const char* kTonk = R"(calculus tonk
typecon -> 2 infix
typecon tonk 2 infix
head lam constructor 1 binds 0
head app destructor 2
head k constructor 1
head k' destructor 1
rule arrow-I:  [x: ?A] |- $t : ?B  ==>  lam x. $t : ?A -> ?B
rule arrow-E:  $s : ?A -> ?B , $t : ?A  ==>  app($s, $t) : ?B
rule tonk-I:  $t : ?A  ==>  k($t) : ?A tonk ?B
rule tonk-E:  $t : ?A tonk ?B  ==>  k'($t) : ?B
reduction beta:  app(lam x. $t, $s)  ~>  $t[$s/x]
reduction tonk-red:  k'(k($t))  ~>  $t
)";

const char* kLiar = R"(calculus liar
typecon -> 2 infix
head lam constructor 1 binds 0
head app destructor 2
head l constructor 1
head l' destructor 1
rule arrow-I:  [x: ?A] |- $t : ?B  ==>  lam x. $t : ?A -> ?B
rule arrow-E:  $s : ?A -> ?B , $t : ?A  ==>  app($s, $t) : ?B
rule L-I:  $t : L -> bot  ==>  l($t) : L
rule L-E:  $t : L  ==>  l'($t) : L -> bot
reduction beta:  app(lam x. $t, $s)  ~>  $t[$s/x]
reduction liar-red:  l'(l($t))  ~>  $t
)";

const char* kEkman = R"(calculus stlc+ekman
typecon -> 2 infix
head lam constructor 1 binds 0
head app destructor 2
rule arrow-I:  [x: ?A] |- $t : ?B  ==>  lam x. $t : ?A -> ?B
rule arrow-E:  $s : ?A -> ?B , $t : ?A  ==>  app($s, $t) : ?B
reduction beta:  app(lam x. $t, $s)  ~>  $t[$s/x]
reduction ekman:  app($y, app($x, $t))  ~>  $t
)";

const char* kCore = R"(calculus core
typecon -> 2 infix
head lam constructor 1 binds 0
head app destructor 2
rule arrow-I:  [x: ?A] |- $t : ?B  ==>  lam x. $t : ?A -> ?B
rule arrow-I-bang:  [x: ?A] |- $t : FROWN  ==>  lam x. $t : ?A -> ?B
rule arrow-E:  $s : ?A -> ?B , $t : ?A  ==>  app($s, $t) : ?B
reduction beta:  app(lam x. $t, $s)  ~>  $t[$s/x]
)";

}  // namespace

const std::vector<std::string>& builtin_names() {
  static const std::vector<std::string> names = {"stlc", "tonk", "liar",
                                                 "stlc+ekman", "core"};
  return names;
}

Calculus builtin(const std::string& name) {
  const char* src = nullptr;
  if (name == "stlc") src = kStlc;
  else if (name == "tonk") src = kTonk;
  else if (name == "liar") src = kLiar;
  else if (name == "stlc+ekman") src = kEkman;
  else if (name == "core") src = kCore;
  if (!src)
    throw DomainError("UnknownCalculus",
                      "unknown built-in calculus '" + name +
                          "' (expected stlc, tonk, liar, stlc+ekman or core)");
  return parse_calculus(src);
}

std::string pretty_print(const Calculus& c) {
  std::ostringstream out;
  TypeStyle st = c.type_style();
  out << "calculus " << c.name << "\n";
  for (const auto& t : c.typecons) {
    out << "typecon " << t.name << ' ' << t.arity;
    if (t.infix) out << " infix";
    out << "\n";
  }
  for (const auto& h : c.heads) {
    out << "head " << h.name << ' '
        << (h.constructor ? "constructor" : "destructor") << ' ' << h.arity;
    if (h.binds) out << " binds " << *h.binds;
    out << "\n";
  }
  for (const auto& r : c.rules) {
    out << "rule " << r.name << ":  ";
    for (size_t i = 0; i < r.premises.size(); ++i) {
      if (i) out << " , ";
      const Premise& p = r.premises[i];
      if (p.hyp_var)
        out << "[" << *p.hyp_var << ": " << to_string(p.hyp_type, st)
            << "] |- ";
      out << '$' << p.subject_meta << " : " << to_string(p.hat, st);
    }
    out << "  ==>  " << to_string(r.conclusion_subject) << " : "
        << to_string(r.conclusion_hat, st) << "\n";
  }
  for (const auto& r : c.reductions) {
    out << "reduction " << r.name << ":  " << to_string(r.redex) << "  ~>  $"
        << r.contractum.meta;
    if (r.contractum.is_subst)
      out << "[$" << r.contractum.subst_meta << "/" << r.contractum.subst_var
          << "]";
    out << "\n";
  }
  return out.str();
}

namespace {

bool premise_eq(const Premise& a, const Premise& b) {
  if (a.hyp_var.has_value() != b.hyp_var.has_value()) return false;
  if (a.hyp_var && (*a.hyp_var != *b.hyp_var || !type_eq(a.hyp_type, b.hyp_type)))
    return false;
  return a.subject_meta == b.subject_meta && hat_eq(a.hat, b.hat);
}

}  // namespace

bool calculus_eq(const Calculus& a, const Calculus& b) {
  if (a.name != b.name || a.typecons.size() != b.typecons.size() ||
      a.heads.size() != b.heads.size() || a.rules.size() != b.rules.size() ||
      a.reductions.size() != b.reductions.size())
    return false;
  for (size_t i = 0; i < a.typecons.size(); ++i) {
    const auto &x = a.typecons[i], &y = b.typecons[i];
    if (x.name != y.name || x.arity != y.arity || x.infix != y.infix)
      return false;
  }
  for (size_t i = 0; i < a.heads.size(); ++i) {
    const auto &x = a.heads[i], &y = b.heads[i];
    if (x.name != y.name || x.constructor != y.constructor ||
        x.arity != y.arity || x.binds != y.binds)
      return false;
  }
  for (size_t i = 0; i < a.rules.size(); ++i) {
    const auto &x = a.rules[i], &y = b.rules[i];
    if (x.name != y.name || x.premises.size() != y.premises.size() ||
        !term_eq(x.conclusion_subject, y.conclusion_subject) ||
        !hat_eq(x.conclusion_hat, y.conclusion_hat))
      return false;
    for (size_t j = 0; j < x.premises.size(); ++j)
      if (!premise_eq(x.premises[j], y.premises[j])) return false;
  }
  for (size_t i = 0; i < a.reductions.size(); ++i) {
    const auto &x = a.reductions[i], &y = b.reductions[i];
    if (x.name != y.name || !term_eq(x.redex, y.redex) ||
        x.contractum.meta != y.contractum.meta ||
        x.contractum.is_subst != y.contractum.is_subst ||
        x.contractum.subst_meta != y.contractum.subst_meta ||
        x.contractum.subst_var != y.contractum.subst_var)
      return false;
  }
  return true;
}

}  // namespace redlab
