#include "redlab/rewrite.hpp"

#include <algorithm>
#include <map>
#include <queue>
#include <random>
#include <set>
#include <sstream>

#include "redlab/error.hpp"

namespace redlab {

std::string path_to_string(const Path& p) {
  if (p.empty()) return "root";
  std::string s;
  for (size_t i = 0; i < p.size(); ++i) {
    if (i) s += '.';
    s += std::to_string(p[i]);
  }
  return s;
}

namespace {

struct MatchState {
  std::map<std::string, TermRef> metas;
  std::map<std::string, std::string> bound;  // schema bound -> term bound
};

bool match_schema(const TermRef& schema, const TermRef& t, MatchState& ms) {
  switch (schema->tag) {
    case Term::Tag::Meta: {
      auto it = ms.metas.find(schema->name);
      if (it != ms.metas.end()) return alpha_eq(it->second, t);
      ms.metas.emplace(schema->name, t);
      return true;
    }
    case Term::Tag::Var: {
      if (t->tag != Term::Tag::Var) return false;
      auto it = ms.bound.find(schema->name);
      if (it != ms.bound.end()) return it->second == t->name;
      return schema->name == t->name;
    }
    case Term::Tag::Binder: {
      if (t->tag != Term::Tag::Binder || schema->name != t->name) return false;
      auto old = ms.bound.find(schema->bound) != ms.bound.end()
                     ? std::optional<std::string>(ms.bound[schema->bound])
                     : std::nullopt;
      ms.bound[schema->bound] = t->bound;
      bool ok = match_schema(schema->body, t->body, ms);
      if (old)
        ms.bound[schema->bound] = *old;
      else
        ms.bound.erase(schema->bound);
      return ok;
    }
    case Term::Tag::Node: {
      if (t->tag != Term::Tag::Node || schema->name != t->name ||
          schema->args.size() != t->args.size())
        return false;
      for (size_t i = 0; i < schema->args.size(); ++i)
        if (!match_schema(schema->args[i], t->args[i], ms)) return false;
      return true;
    }
  }
  return false;
}

// After a successful match, the substitution form needs the term's name for
// the schema binder that owns the contractum metavariable.
bool find_subst_var(const TermRef& schema, const TermRef& t,
                    const ReductionRule& r, std::string& out) {
  if (schema->tag == Term::Tag::Binder && t->tag == Term::Tag::Binder) {
    if (schema->bound == r.contractum.subst_var &&
        schema->body->tag == Term::Tag::Meta &&
        schema->body->name == r.contractum.meta) {
      out = t->bound;
      return true;
    }
    return find_subst_var(schema->body, t->body, r, out);
  }
  if (schema->tag == Term::Tag::Node && t->tag == Term::Tag::Node &&
      schema->args.size() == t->args.size()) {
    for (size_t i = 0; i < schema->args.size(); ++i)
      if (find_subst_var(schema->args[i], t->args[i], r, out)) return true;
  }
  return false;
}

// The contractum is a position inside the redex: either a bound metavariable
// or the substitution form built from one.
std::optional<TermRef> try_rule(const ReductionRule& r, const TermRef& t) {
  MatchState ms;
  if (!match_schema(r.redex, t, ms)) return std::nullopt;
  auto body = ms.metas.find(r.contractum.meta);
  if (body == ms.metas.end()) return std::nullopt;
  if (!r.contractum.is_subst) return body->second;
  auto arg = ms.metas.find(r.contractum.subst_meta);
  if (arg == ms.metas.end()) return std::nullopt;
  std::string term_var;
  if (!find_subst_var(r.redex, t, r, term_var)) return std::nullopt;
  return substitute(body->second, term_var, arg->second);
}

TermRef replace_at(const TermRef& t, const Path& pos, size_t i,
                   const TermRef& sub) {
  if (i == pos.size()) return sub;
  int k = pos[i];
  if (t->tag == Term::Tag::Binder) {
    if (k != 0) throw DomainError("InvalidPosition", "no such position");
    return tbinder(t->name, t->bound, replace_at(t->body, pos, i + 1, sub));
  }
  if (t->tag == Term::Tag::Node) {
    if (k < 0 || k >= static_cast<int>(t->args.size()))
      throw DomainError("InvalidPosition", "no such position");
    std::vector<TermRef> args = t->args;
    args[k] = replace_at(args[k], pos, i + 1, sub);
    return tnode(t->name, std::move(args));
  }
  throw DomainError("InvalidPosition", "no such position");
}

const TermRef* subterm_at(const TermRef& t, const Path& pos, size_t i) {
  if (i == pos.size()) return &t;
  int k = pos[i];
  if (t->tag == Term::Tag::Binder && k == 0)
    return subterm_at(t->body, pos, i + 1);
  if (t->tag == Term::Tag::Node && k >= 0 &&
      k < static_cast<int>(t->args.size()))
    return subterm_at(t->args[k], pos, i + 1);
  return nullptr;
}

bool step_rec(const Calculus& c, const TermRef& root, const TermRef& t,
              Path& here, StepResult& out) {
  for (const auto& rule : c.reductions) {
    if (auto contractum = try_rule(rule, t)) {
      out.kind = StepResult::Kind::Reduced;
      out.rule = rule.name;
      out.position = here;
      out.next = replace_at(root, here, 0, *contractum);
      return true;
    }
  }
  if (t->tag == Term::Tag::Binder) {
    here.push_back(0);
    if (step_rec(c, root, t->body, here, out)) return true;
    here.pop_back();
  } else if (t->tag == Term::Tag::Node) {
    for (size_t i = 0; i < t->args.size(); ++i) {
      here.push_back(static_cast<int>(i));
      if (step_rec(c, root, t->args[i], here, out)) return true;
      here.pop_back();
    }
  }
  return false;
}

void all_steps_rec(const Calculus& c, const TermRef& root, const TermRef& t,
                   Path& here, std::vector<Redex>& out) {
  for (const auto& rule : c.reductions) {
    if (auto contractum = try_rule(rule, t))
      out.push_back({here, rule.name, replace_at(root, here, 0, *contractum)});
  }
  if (t->tag == Term::Tag::Binder) {
    here.push_back(0);
    all_steps_rec(c, root, t->body, here, out);
    here.pop_back();
  } else if (t->tag == Term::Tag::Node) {
    for (size_t i = 0; i < t->args.size(); ++i) {
      here.push_back(static_cast<int>(i));
      all_steps_rec(c, root, t->args[i], here, out);
      here.pop_back();
    }
  }
}

}  // namespace

StepResult step(const Calculus& c, const TermRef& t) {
  StepResult out;
  Path here;
  step_rec(c, t, t, here, out);
  return out;
}

StepResult step_at(const Calculus& c, const TermRef& t, const Path& pos) {
  const TermRef* sub = subterm_at(t, pos, 0);
  if (!sub)
    throw DomainError("InvalidPosition",
                      "position " + path_to_string(pos) + " does not exist");
  for (const auto& rule : c.reductions) {
    if (auto contractum = try_rule(rule, *sub)) {
      StepResult out;
      out.kind = StepResult::Kind::Reduced;
      out.rule = rule.name;
      out.position = pos;
      out.next = replace_at(t, pos, 0, *contractum);
      return out;
    }
  }
  throw DomainError("InvalidPosition", "no redex at position " +
                                           path_to_string(pos));
}

std::optional<TermRef> apply_rule_at(const Calculus& c, const ReductionRule& r,
                                     const TermRef& t, const Path& pos) {
  (void)c;
  const TermRef* sub = subterm_at(t, pos, 0);
  if (!sub) return std::nullopt;
  auto contractum = try_rule(r, *sub);
  if (!contractum) return std::nullopt;
  return replace_at(t, pos, 0, *contractum);
}

std::vector<Redex> all_steps(const Calculus& c, const TermRef& t) {
  std::vector<Redex> out;
  Path here;
  all_steps_rec(c, t, t, here, out);
  return out;
}

NormalizeResult normalize(const Calculus& c, const TermRef& t, int max_steps) {
  if (max_steps < 1)
    throw DomainError("BadBounds", "max_steps must be at least 1");
  NormalizeResult out;
  std::vector<CanonicalTerm> trace;
  std::map<std::string, int> seen;
  TermRef cur = t;
  trace.push_back(canonicalize(cur));
  seen.emplace(trace.back().text, 0);
  for (int n = 0; n < max_steps; ++n) {
    StepResult s = step(c, cur);
    if (s.kind == StepResult::Kind::NoRedex) {
      out.kind = NormalizeResult::Kind::NormalForm;
      out.term = cur;
      out.steps = n;
      return out;
    }
    cur = s.next;
    CanonicalTerm canon = canonicalize(cur);
    auto hit = seen.find(canon.text);
    if (hit != seen.end()) {
      out.kind = NormalizeResult::Kind::Cycle;
      out.term = cur;
      out.steps = n + 1;
      out.cycle.assign(trace.begin() + hit->second, trace.end());
      out.cycle.push_back(std::move(canon));
      return out;
    }
    seen.emplace(canon.text, static_cast<int>(trace.size()));
    trace.push_back(std::move(canon));
  }
  out.kind = NormalizeResult::Kind::StepLimit;
  out.term = cur;
  out.steps = max_steps;
  return out;
}

std::vector<int> ReductionGraph::normal_form_nodes() const {
  std::vector<bool> has_out(nodes.size(), false);
  for (const auto& e : edges) has_out[e.from] = true;
  std::vector<int> out;
  for (size_t i = 0; i < nodes.size(); ++i)
    if (!has_out[i]) out.push_back(static_cast<int>(i));
  return out;
}

ReductionGraph reduction_graph(const Calculus& c, const TermRef& t,
                               int max_nodes, int max_depth) {
  if (max_nodes < 1 || max_depth < 1)
    throw DomainError("BadBounds", "graph bounds must be at least 1");
  ReductionGraph g;
  std::map<std::string, int> index;
  std::vector<int> depth;
  CanonicalTerm root = canonicalize(t);
  index.emplace(root.text, 0);
  g.nodes.push_back(std::move(root));
  depth.push_back(0);
  std::queue<int> work;
  work.push(0);
  while (!work.empty()) {
    int id = work.front();
    work.pop();
    if (depth[id] >= max_depth) {
      if (!all_steps(c, g.nodes[id].term).empty()) g.truncated = true;
      continue;
    }
    for (const Redex& r : all_steps(c, g.nodes[id].term)) {
      CanonicalTerm canon = canonicalize(r.result);
      auto it = index.find(canon.text);
      int to;
      if (it != index.end()) {
        to = it->second;
      } else {
        if (static_cast<int>(g.nodes.size()) >= max_nodes) {
          g.truncated = true;
          continue;
        }
        to = static_cast<int>(g.nodes.size());
        index.emplace(canon.text, to);
        g.nodes.push_back(std::move(canon));
        depth.push_back(depth[id] + 1);
        work.push(to);
      }
      g.edges.push_back({id, to, r.rule, r.position});
    }
  }
  std::sort(g.edges.begin(), g.edges.end(), [](const GraphEdge& a,
                                               const GraphEdge& b) {
    if (a.from != b.from) return a.from < b.from;
    if (a.position != b.position) return a.position < b.position;
    if (a.rule != b.rule) return a.rule < b.rule;
    return a.to < b.to;
  });
  return g;
}

JoinResult joinable(const Calculus& c, const TermRef& a, const TermRef& b,
                    const Bounds& bounds) {
  ReductionGraph ga = reduction_graph(c, a, bounds.max_nodes, bounds.max_depth);
  ReductionGraph gb = reduction_graph(c, b, bounds.max_nodes, bounds.max_depth);
  std::set<std::string> na;
  for (const auto& n : ga.nodes) na.insert(n.text);
  JoinResult out;
  for (const auto& n : gb.nodes) {
    if (!na.count(n.text)) continue;
    if (!out.joined || n.text < out.witness.text) {
      out.joined = true;
      out.witness = n;
    }
  }
  return out;
}

namespace {

// Goal-directed generation: grow a ground typing derivation downward,
// spending the budget on lam/app nodes. Deterministic for a fixed seed.
struct Generator {
  std::mt19937_64 rng;
  int var_counter = 0;

  int pick(int n) { return static_cast<int>(rng() % static_cast<uint64_t>(n)); }

  TypeRef random_type(int depth) {
    static const char* atoms[] = {"p", "q", "r"};
    if (depth <= 0 || pick(3) == 0) return atom(atoms[pick(3)]);
    return arrow(random_type(depth - 1), random_type(depth - 1));
  }

  std::optional<TermRef> build(std::vector<std::pair<std::string, TypeRef>>& env,
                               const TypeRef& goal, int budget) {
    std::vector<int> vars;
    for (size_t i = 0; i < env.size(); ++i)
      if (type_eq(env[i].second, goal)) vars.push_back(static_cast<int>(i));

    bool goal_arrow = goal->tag == Type::Tag::Con && goal->name == "->";
    // Weighted options: prefer structure while budget lasts, close with a
    // variable when it runs out.
    for (int attempt = 0; attempt < 4; ++attempt) {
      int die = pick(6);
      if (budget <= 0 || (die == 0 && !vars.empty())) {
        if (vars.empty()) return std::nullopt;
        return tvar(env[vars[pick(static_cast<int>(vars.size()))]].first);
      }
      if (goal_arrow && (die <= 2 || budget == 1)) {
        std::string v = "v" + std::to_string(var_counter++);
        env.emplace_back(v, goal->args[0]);
        auto body = build(env, goal->args[1], budget - 1);
        env.pop_back();
        if (body) return tbinder("lam", v, std::move(*body));
        continue;
      }
      if (budget >= 2) {
        // Argument type is drawn from the environment or invented small.
        TypeRef arg_ty = env.empty() || pick(2) == 0
                             ? random_type(1)
                             : env[pick(static_cast<int>(env.size()))].second;
        int left = 1 + pick(budget - 1);
        auto fn = build(env, arrow(arg_ty, goal), left);
        if (!fn) continue;
        auto arg = build(env, arg_ty, budget - 1 - left);
        if (!arg) continue;
        return tnode("app", {std::move(*fn), std::move(*arg)});
      }
    }
    return std::nullopt;
  }
};

}  // namespace

TermRef generate_well_typed(const Calculus& c, int size, uint64_t seed) {
  if (size < 1) throw DomainError("GenerationFailed", "size must be at least 1");
  const HeadDecl* lam = c.find_head("lam");
  const HeadDecl* app = c.find_head("app");
  if (!lam || !lam->is_binder() || !app || app->arity != 2 ||
      !c.find_typecon("->"))
    throw DomainError("GenerationFailed",
                      "calculus lacks the lam/app arrow fragment");
  Generator gen{std::mt19937_64(seed)};
  for (int attempt = 0; attempt < 256; ++attempt) {
    TypeRef goal = gen.random_type(2);
    if (goal->tag != Type::Tag::Con) continue;  // closed atoms are unreachable
    std::vector<std::pair<std::string, TypeRef>> env;
    gen.var_counter = 0;
    if (auto t = gen.build(env, goal, size)) return *t;
  }
  throw DomainError("GenerationFailed",
                    "could not close a derivation within size " +
                        std::to_string(size));
}

std::string to_dot(const ReductionGraph& g) {
  auto escape = [](const std::string& s) {
    std::string out;
    for (char c : s) {
      if (c == '"' || c == '\\') out += '\\';
      out += c;
    }
    return out;
  };
  std::ostringstream out;
  out << "digraph reduction {\n";
  out << "  rankdir=TB;\n";
  for (size_t i = 0; i < g.nodes.size(); ++i)
    out << "  n" << i << " [label=\"" << escape(g.nodes[i].text) << "\"];\n";
  for (const auto& e : g.edges)
    out << "  n" << e.from << " -> n" << e.to << " [label=\"" << e.rule << "@"
        << path_to_string(e.position) << "\"];\n";
  out << "}\n";
  return out.str();
}

}  // namespace redlab
