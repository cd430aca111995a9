#include "redlab/infer.hpp"

#include <algorithm>
#include <map>
#include <sstream>

#include "redlab/error.hpp"

namespace redlab {

namespace {

// Reconstruction walks the term bottom-up. At every node the applicable
// rules are those whose conclusion head matches; each applicable rule forks
// a branch. A branch carries its own substitution and demand maps, so forks
// are independent; fresh metavariables come from a supply shared across
// branches (ids are disjoint, canonical renaming normalizes them later).

struct EngineState {
  Substitution sub;
  std::map<std::string, Hat> free_demands;
  std::map<std::string, Hat> schema_hats;
};

struct Partial {
  EngineState state;
  Hat hat;
  DerivNode deriv;
};

using Env = std::map<std::string, Hat>;

struct Engine {
  const Calculus& calc;
  MetaSupply supply;
  int max_branches;
  bool limit_hit = false;

  void cap(std::vector<Partial>& ps) {
    if (static_cast<int>(ps.size()) > max_branches) {
      ps.resize(max_branches);
      limit_hit = true;
    }
  }

  TypeRef inst_type(const TypeRef& t, std::map<std::string, int>& svars) {
    switch (t->tag) {
      case Type::Tag::SVar: {
        auto it = svars.find(t->name);
        if (it == svars.end())
          it = svars.emplace(t->name, supply.fresh()).first;
        return tymeta(it->second);
      }
      case Type::Tag::Con: {
        std::vector<TypeRef> args;
        args.reserve(t->args.size());
        for (const auto& a : t->args) args.push_back(inst_type(a, svars));
        return tcon(t->name, std::move(args));
      }
      default:
        return t;
    }
  }

  Hat inst_hat(const Hat& h, std::map<std::string, int>& svars) {
    if (h.tag == Hat::Tag::Ty) return Hat::ty(inst_type(h.type, svars));
    return h;  // FROWN (rule schemas never contain hat metavariables)
  }

  std::vector<Partial> go(const TermRef& t, const Env& env,
                          const EngineState& state) {
    switch (t->tag) {
      case Term::Tag::Var: {
        auto it = env.find(t->name);
        if (it != env.end()) {
          Partial p{state, it->second, {"hyp", t, it->second, {}, {}}};
          return {std::move(p)};
        }
        EngineState st = state;
        auto d = st.free_demands.find(t->name);
        Hat h;
        if (d != st.free_demands.end()) {
          h = d->second;
        } else {
          h = Hat::ty(tymeta(supply.fresh()));
          st.free_demands.emplace(t->name, h);
        }
        Partial p{std::move(st), h, {"assume", t, h, {}, {}}};
        return {std::move(p)};
      }
      case Term::Tag::Meta: {
        EngineState st = state;
        auto d = st.schema_hats.find(t->name);
        Hat h;
        if (d != st.schema_hats.end()) {
          h = d->second;
        } else {
          h = Hat::hatmeta(supply.fresh());
          st.schema_hats.emplace(t->name, h);
        }
        Partial p{std::move(st), h, {"schema", t, h, {}, {}}};
        return {std::move(p)};
      }
      case Term::Tag::Binder:
      case Term::Tag::Node:
        return go_node(t, env, state);
    }
    return {};
  }

  std::vector<Partial> go_node(const TermRef& t, const Env& env,
                               const EngineState& state) {
    std::vector<Partial> results;
    for (const TypeRule* rule : calc.rules_for(t->name)) {
      // The conclusion subject determines which subterm each premise
      // metavariable stands for, and how the rule's bound variable maps to
      // the term's.
      const TermRef& concl = rule->conclusion_subject;
      if ((concl->tag == Term::Tag::Binder) != (t->tag == Term::Tag::Binder))
        continue;
      std::map<std::string, TermRef> parts;
      std::string rule_bound, term_bound;
      if (t->tag == Term::Tag::Binder) {
        parts.emplace(concl->body->name, t->body);
        rule_bound = concl->bound;
        term_bound = t->bound;
      } else {
        if (concl->args.size() != t->args.size()) continue;
        for (size_t i = 0; i < t->args.size(); ++i)
          parts.emplace(concl->args[i]->name, t->args[i]);
      }

      std::map<std::string, int> svars;
      std::vector<Premise> premises = rule->premises;
      std::vector<Hat> premise_hats;
      std::vector<std::optional<Hat>> premise_hyps;
      for (auto& pr : premises) {
        premise_hats.push_back(inst_hat(pr.hat, svars));
        if (pr.hyp_var)
          premise_hyps.push_back(Hat::ty(inst_type(pr.hyp_type, svars)));
        else
          premise_hyps.push_back(std::nullopt);
      }
      Hat concl_hat = inst_hat(rule->conclusion_hat, svars);

      std::vector<Partial> partials;
      partials.push_back({state, concl_hat, {rule->name, t, concl_hat, {}, {}}});
      for (size_t i = 0; i < premises.size() && !partials.empty(); ++i) {
        const TermRef& sub = parts.at(premises[i].subject_meta);
        Env env2 = env;
        if (premise_hyps[i]) env2[term_bound] = *premise_hyps[i];
        std::vector<Partial> next;
        for (const Partial& part : partials) {
          for (Partial& s : go(sub, env2, part.state)) {
            UnifyResult u = unify(s.hat, premise_hats[i], s.state.sub);
            if (!u) continue;
            Partial np = part;
            np.state = std::move(s.state);
            np.state.sub = std::move(u.sub);
            if (premise_hyps[i])
              s.deriv.hyp = std::make_pair(term_bound, *premise_hyps[i]);
            np.deriv.children.push_back(std::move(s.deriv));
            next.push_back(std::move(np));
          }
        }
        partials = std::move(next);
        cap(partials);
      }
      for (Partial& p : partials) results.push_back(std::move(p));
      cap(results);
    }
    return results;
  }
};

void resolve_deriv(DerivNode& n, const Substitution& sub) {
  n.hat = sub.apply(n.hat);
  if (n.hyp) n.hyp->second = sub.apply(n.hyp->second);
  for (auto& c : n.children) resolve_deriv(c, sub);
}

void rename_deriv(DerivNode& n, MetaRenamer& r) {
  n.hat = rename_canonical(n.hat, r);
  if (n.hyp) n.hyp->second = rename_canonical(n.hyp->second, r);
  for (auto& c : n.children) rename_deriv(c, r);
}

InferBranch finalize(Partial&& p) {
  InferBranch b;
  b.subst = p.state.sub;
  b.conclusion = b.subst.apply(p.hat);
  for (const auto& [v, h] : p.state.free_demands)
    b.context.emplace_back(v, b.subst.apply(h));
  for (const auto& [m, h] : p.state.schema_hats)
    b.schema_metas.emplace_back(m, b.subst.apply(h));
  b.deriv = std::move(p.deriv);
  resolve_deriv(b.deriv, b.subst);

  MetaRenamer r;
  b.conclusion = rename_canonical(b.conclusion, r);
  for (auto& [v, h] : b.context) h = rename_canonical(h, r);
  for (auto& [m, h] : b.schema_metas) h = rename_canonical(h, r);
  rename_deriv(b.deriv, r);
  return b;
}

Reconstruction run_reconstruction(const Calculus& c, const TermRef& t,
                                  const InferOptions& opts) {
  Engine eng{c, {}, opts.max_branches};
  std::vector<Partial> parts = eng.go(t, {}, {});
  Reconstruction out;
  out.branch_limit_hit = eng.limit_hit;
  for (Partial& p : parts) out.branches.push_back(finalize(std::move(p)));
  return out;
}

}  // namespace

Reconstruction reconstruct(const Calculus& c, const TermRef& t,
                           const InferOptions& opts) {
  check_term(c, t);
  return run_reconstruction(c, t, opts);
}

Reconstruction reconstruct_schema(const Calculus& c, const TermRef& redex,
                                  const InferOptions& opts) {
  check_schema(c, redex);
  return run_reconstruction(c, redex, opts);
}

namespace {

// Move the metavariables of a hat into a range disjoint from the branch's
// canonical ?0..?n ids, so unifying against a branch cannot alias them.
constexpr int kGivenOffset = 1 << 20;

TypeRef shift_type(const TypeRef& t) {
  switch (t->tag) {
    case Type::Tag::Meta:
      return tymeta(t->meta + kGivenOffset);
    case Type::Tag::SVar:
      // Schema variables in user-supplied types behave as metavariables.
      return t;
    case Type::Tag::Con: {
      std::vector<TypeRef> args;
      args.reserve(t->args.size());
      for (const auto& a : t->args) args.push_back(shift_type(a));
      return tcon(t->name, std::move(args));
    }
    default:
      return t;
  }
}

TypeRef desvar_type(const TypeRef& t, std::map<std::string, int>& map,
                    int& next) {
  switch (t->tag) {
    case Type::Tag::SVar: {
      auto it = map.find(t->name);
      if (it == map.end()) it = map.emplace(t->name, next++).first;
      return tymeta(it->second);
    }
    case Type::Tag::Con: {
      std::vector<TypeRef> args;
      args.reserve(t->args.size());
      for (const auto& a : t->args) args.push_back(desvar_type(a, map, next));
      return tcon(t->name, std::move(args));
    }
    default:
      return t;
  }
}

Hat prepare_given(const Hat& h, std::map<std::string, int>& svar_map,
                  int& next) {
  if (h.tag != Hat::Tag::Ty) return h;
  return Hat::ty(desvar_type(shift_type(h.type), svar_map, next));
}

}  // namespace

bool typecheck(const Calculus& c, const ContextMap& ctx, const TermRef& t,
               const Hat& h) {
  Reconstruction rec = reconstruct(c, t);
  std::map<std::string, int> svar_map;
  int next_given = kGivenOffset * 2;
  Hat goal = prepare_given(h, svar_map, next_given);
  std::vector<std::pair<std::string, Hat>> given;
  for (const auto& [v, ch] : ctx)
    given.emplace_back(v, prepare_given(ch, svar_map, next_given));

  for (const InferBranch& b : rec.branches) {
    UnifyResult u = unify(b.conclusion, goal, Substitution{});
    if (!u) continue;
    bool ok = true;
    Substitution s = std::move(u.sub);
    for (const auto& [v, demand] : b.context) {
      const Hat* bound = nullptr;
      for (const auto& [gv, gh] : given)
        if (gv == v) bound = &gh;
      if (!bound) {
        ok = false;
        break;
      }
      UnifyResult u2 = unify(demand, *bound, std::move(s));
      if (!u2) {
        ok = false;
        break;
      }
      s = std::move(u2.sub);
    }
    if (ok) return true;
  }
  return false;
}

Hat Skolemizer::operator()(const Hat& h) {
  struct Walk {
    std::map<int, TypeRef>& table;
    TypeRef ty(const TypeRef& t) {
      switch (t->tag) {
        case Type::Tag::Meta: {
          auto it = table.find(t->meta);
          if (it == table.end())
            it = table
                     .emplace(t->meta,
                              atom("sk" + std::to_string(table.size())))
                     .first;
          return it->second;
        }
        case Type::Tag::Con: {
          std::vector<TypeRef> args;
          for (const auto& a : t->args) args.push_back(ty(a));
          return tcon(t->name, std::move(args));
        }
        default:
          return t;
      }
    }
  } w{table};
  if (h.tag == Hat::Tag::Ty) return Hat::ty(w.ty(h.type));
  if (h.tag == Hat::Tag::Meta) {
    // A dangling hat metavariable rigidifies to a fresh atom as well.
    auto it = table.find(h.meta);
    if (it == table.end())
      it = table.emplace(h.meta, atom("sk" + std::to_string(table.size())))
               .first;
    return Hat::ty(it->second);
  }
  return h;
}

ContextMap Skolemizer::operator()(const ContextMap& ctx) {
  ContextMap out;
  out.reserve(ctx.size());
  for (const auto& [v, h] : ctx) out.emplace_back(v, (*this)(h));
  return out;
}

namespace {

// Replay unifies fresh rule metas against rigidified branch hats. A branch
// hat's metavariables become opaque atoms so the rule instance must
// reproduce them exactly.
Hat rigidify(const Hat& h, std::map<int, TypeRef>& table) {
  Skolemizer sk{std::move(table)};
  Hat out = sk(h);
  table = std::move(sk.table);
  return out;
}

struct Replayer {
  const Calculus& calc;
  const InferBranch& branch;
  std::map<int, TypeRef> rigid;
  MetaSupply supply{1 << 20};

  Hat hat_of(const DerivNode& n) { return rigidify(n.hat, rigid); }

  bool node(const DerivNode& n, const std::map<std::string, Hat>& env) {
    if (n.rule == "hyp") {
      if (!n.subject || n.subject->tag != Term::Tag::Var) return false;
      auto it = env.find(n.subject->name);
      return it != env.end() && hat_eq(it->second, hat_of(n));
    }
    if (n.rule == "assume") {
      if (!n.subject || n.subject->tag != Term::Tag::Var) return false;
      for (const auto& [v, h] : branch.context)
        if (v == n.subject->name) return hat_eq(rigidify(h, rigid), hat_of(n));
      return false;
    }
    if (n.rule == "schema") {
      if (!n.subject || n.subject->tag != Term::Tag::Meta) return false;
      for (const auto& [m, h] : branch.schema_metas)
        if (m == n.subject->name) return hat_eq(rigidify(h, rigid), hat_of(n));
      return false;
    }

    const TypeRule* rule = nullptr;
    for (const auto& r : calc.rules)
      if (r.name == n.rule) rule = &r;
    if (!rule || !n.subject) return false;
    const TermRef& concl = rule->conclusion_subject;
    if (concl->name != n.subject->name) return false;
    if ((concl->tag == Term::Tag::Binder) !=
        (n.subject->tag == Term::Tag::Binder))
      return false;

    std::map<std::string, TermRef> parts;
    std::string term_bound;
    if (n.subject->tag == Term::Tag::Binder) {
      parts.emplace(concl->body->name, n.subject->body);
      term_bound = n.subject->bound;
    } else {
      if (concl->args.size() != n.subject->args.size()) return false;
      for (size_t i = 0; i < concl->args.size(); ++i)
        parts.emplace(concl->args[i]->name, n.subject->args[i]);
    }
    if (n.children.size() != rule->premises.size()) return false;

    // Instantiate the rule with fresh metas and force them to match the
    // recorded hats.
    std::map<std::string, int> svars;
    auto inst_ty = [&](const TypeRef& t) {
      struct I {
        std::map<std::string, int>& svars;
        MetaSupply& supply;
        TypeRef ty(const TypeRef& t) {
          if (t->tag == Type::Tag::SVar) {
            auto it = svars.find(t->name);
            if (it == svars.end())
              it = svars.emplace(t->name, supply.fresh()).first;
            return tymeta(it->second);
          }
          if (t->tag == Type::Tag::Con) {
            std::vector<TypeRef> args;
            for (const auto& a : t->args) args.push_back(ty(a));
            return tcon(t->name, std::move(args));
          }
          return t;
        }
      } i{svars, supply};
      return i.ty(t);
    };
    auto inst_hat = [&](const Hat& h) {
      return h.tag == Hat::Tag::Ty ? Hat::ty(inst_ty(h.type)) : h;
    };

    Substitution s;
    UnifyResult u = unify(inst_hat(rule->conclusion_hat), hat_of(n), s);
    if (!u) return false;
    s = std::move(u.sub);
    for (size_t i = 0; i < rule->premises.size(); ++i) {
      const Premise& pr = rule->premises[i];
      const DerivNode& child = n.children[i];
      auto part = parts.find(pr.subject_meta);
      if (part == parts.end() || !child.subject ||
          !term_eq(child.subject, part->second))
        return false;
      UnifyResult up = unify(inst_hat(pr.hat), hat_of(child), s);
      if (!up) return false;
      s = std::move(up.sub);
      std::map<std::string, Hat> env2 = env;
      if (pr.hyp_var) {
        Hat hyp = s.apply(Hat::ty(inst_ty(pr.hyp_type)));
        // The recorded hypothesis must agree with the rule instance.
        if (!child.hyp || child.hyp->first != term_bound ||
            !hat_eq(rigidify(child.hyp->second, rigid), hyp))
          return false;
        env2[term_bound] = hyp;
      } else if (child.hyp) {
        return false;
      }
      if (!node(child, env2)) return false;
    }
    return true;
  }
};

}  // namespace

bool replay(const Calculus& c, const InferBranch& b) {
  Replayer r{c, b, {}};
  // Root hat must agree with the branch conclusion.
  if (!hat_eq(rigidify(b.conclusion, r.rigid), r.hat_of(b.deriv)))
    return false;
  return r.node(b.deriv, {});
}

std::string render_deriv(const DerivNode& n, const TypeStyle& style,
                         int indent) {
  std::ostringstream out;
  out << std::string(indent * 2, ' ');
  if (n.hyp)
    out << "[" << n.hyp->first << " : " << to_string(n.hyp->second, style)
        << "] |- ";
  out << to_string(n.subject) << " : " << to_string(n.hat, style) << "   ["
      << n.rule << "]\n";
  for (const auto& c : n.children) out << render_deriv(c, style, indent + 1);
  return out.str();
}

std::string render_branch(const InferBranch& b, const TypeStyle& style) {
  std::ostringstream out;
  out << "conclusion: " << to_string(b.conclusion, style) << "\n";
  if (!b.context.empty()) {
    out << "context:\n";
    for (const auto& [v, h] : b.context)
      out << "  " << v << " : " << to_string(h, style) << "\n";
  }
  if (!b.schema_metas.empty()) {
    out << "schema metavariables:\n";
    for (const auto& [m, h] : b.schema_metas)
      out << "  $" << m << " : " << to_string(h, style) << "\n";
  }
  return out.str();
}

}  // namespace redlab
