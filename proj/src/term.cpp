#include "redlab/term.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <optional>
#include <sstream>

namespace redlab {

TermRef tvar(std::string name) {
  auto t = std::make_shared<Term>();
  t->tag = Term::Tag::Var;
  t->name = std::move(name);
  return t;
}

TermRef tbinder(std::string head, std::string bound, TermRef body) {
  auto t = std::make_shared<Term>();
  t->tag = Term::Tag::Binder;
  t->name = std::move(head);
  t->bound = std::move(bound);
  t->body = std::move(body);
  return t;
}

TermRef tnode(std::string head, std::vector<TermRef> args) {
  auto t = std::make_shared<Term>();
  t->tag = Term::Tag::Node;
  t->name = std::move(head);
  t->args = std::move(args);
  return t;
}

TermRef tmeta(std::string name) {
  auto t = std::make_shared<Term>();
  t->tag = Term::Tag::Meta;
  t->name = std::move(name);
  return t;
}

bool term_eq(const TermRef& a, const TermRef& b) {
  if (a.get() == b.get()) return true;
  if (a->tag != b->tag || a->name != b->name) return false;
  switch (a->tag) {
    case Term::Tag::Var:
    case Term::Tag::Meta:
      return true;
    case Term::Tag::Binder:
      return a->bound == b->bound && term_eq(a->body, b->body);
    case Term::Tag::Node: {
      if (a->args.size() != b->args.size()) return false;
      for (size_t i = 0; i < a->args.size(); ++i)
        if (!term_eq(a->args[i], b->args[i])) return false;
      return true;
    }
  }
  return false;
}

namespace {

void free_vars_into(const TermRef& t, std::set<std::string>& bound,
                    std::set<std::string>& out) {
  switch (t->tag) {
    case Term::Tag::Var:
      if (!bound.count(t->name)) out.insert(t->name);
      return;
    case Term::Tag::Meta:
      return;
    case Term::Tag::Binder: {
      bool inserted = bound.insert(t->bound).second;
      free_vars_into(t->body, bound, out);
      if (inserted) bound.erase(t->bound);
      return;
    }
    case Term::Tag::Node:
      for (const auto& a : t->args) free_vars_into(a, bound, out);
      return;
  }
}

bool alpha_eq_rec(const TermRef& a, const TermRef& b,
                  std::map<std::string, std::string>& a2b,
                  std::map<std::string, std::string>& b2a) {
  if (a->tag != b->tag) return false;
  switch (a->tag) {
    case Term::Tag::Var: {
      auto ia = a2b.find(a->name);
      auto ib = b2a.find(b->name);
      if (ia != a2b.end() || ib != b2a.end()) {
        // At least one side is bound; both must be, and consistently.
        return ia != a2b.end() && ib != b2a.end() && ia->second == b->name &&
               ib->second == a->name;
      }
      return a->name == b->name;  // both free
    }
    case Term::Tag::Meta:
      return a->name == b->name;
    case Term::Tag::Binder: {
      if (a->name != b->name) return false;
      auto olda = a2b.find(a->bound) != a2b.end()
                      ? std::optional<std::string>(a2b[a->bound])
                      : std::nullopt;
      auto oldb = b2a.find(b->bound) != b2a.end()
                      ? std::optional<std::string>(b2a[b->bound])
                      : std::nullopt;
      a2b[a->bound] = b->bound;
      b2a[b->bound] = a->bound;
      bool ok = alpha_eq_rec(a->body, b->body, a2b, b2a);
      if (olda)
        a2b[a->bound] = *olda;
      else
        a2b.erase(a->bound);
      if (oldb)
        b2a[b->bound] = *oldb;
      else
        b2a.erase(b->bound);
      return ok;
    }
    case Term::Tag::Node: {
      if (a->name != b->name || a->args.size() != b->args.size()) return false;
      for (size_t i = 0; i < a->args.size(); ++i)
        if (!alpha_eq_rec(a->args[i], b->args[i], a2b, b2a)) return false;
      return true;
    }
  }
  return false;
}

// Smallest numeric suffix on the stem of `base` avoiding `taken`.
std::string fresh_name(const std::string& base,
                       const std::set<std::string>& taken) {
  std::string stem = base;
  while (stem.size() > 1 && isdigit(static_cast<unsigned char>(stem.back())))
    stem.pop_back();
  for (int k = 1;; ++k) {
    std::string cand = stem + std::to_string(k);
    if (!taken.count(cand)) return cand;
  }
}

TermRef subst_rec(const TermRef& t, const std::string& var, const TermRef& s,
                  const std::set<std::string>& fv_s) {
  switch (t->tag) {
    case Term::Tag::Var:
      return t->name == var ? s : t;
    case Term::Tag::Meta:
      return t;
    case Term::Tag::Node: {
      std::vector<TermRef> args;
      args.reserve(t->args.size());
      bool changed = false;
      for (const auto& a : t->args) {
        TermRef na = subst_rec(a, var, s, fv_s);
        changed |= na.get() != a.get();
        args.push_back(std::move(na));
      }
      return changed ? tnode(t->name, std::move(args)) : t;
    }
    case Term::Tag::Binder: {
      if (t->bound == var) return t;  // shadowed, no free occurrence below
      std::set<std::string> fv_body = free_vars(t->body);
      if (!fv_body.count(var)) return t;  // nothing to replace
      if (fv_s.count(t->bound)) {
        // Rename the binder so it cannot capture a free variable of s. The
        // renaming is itself a substitution whose payload {nb} may collide
        // with binders further in, so it gets the same treatment.
        std::set<std::string> taken = fv_body;
        taken.insert(fv_s.begin(), fv_s.end());
        taken.insert(var);
        std::string nb = fresh_name(t->bound, taken);
        TermRef renamed = subst_rec(t->body, t->bound, tvar(nb), {nb});
        return tbinder(t->name, nb, subst_rec(renamed, var, s, fv_s));
      }
      return tbinder(t->name, t->bound, subst_rec(t->body, var, s, fv_s));
    }
  }
  return t;
}

void subterms_rec(const TermRef& t, std::vector<TermRef>& out) {
  out.push_back(t);
  switch (t->tag) {
    case Term::Tag::Binder:
      subterms_rec(t->body, out);
      return;
    case Term::Tag::Node:
      for (const auto& a : t->args) subterms_rec(a, out);
      return;
    default:
      return;
  }
}

void to_string_rec(const TermRef& t, std::ostringstream& out) {
  switch (t->tag) {
    case Term::Tag::Var:
      out << t->name;
      return;
    case Term::Tag::Meta:
      out << '$' << t->name;
      return;
    case Term::Tag::Binder:
      out << t->name << ' ' << t->bound << ". ";
      to_string_rec(t->body, out);
      return;
    case Term::Tag::Node:
      out << t->name << '(';
      for (size_t i = 0; i < t->args.size(); ++i) {
        if (i) out << ", ";
        to_string_rec(t->args[i], out);
      }
      out << ')';
      return;
  }
}

TermRef canon_rec(const TermRef& t, std::map<std::string, std::string>& ren,
                  int& counter) {
  switch (t->tag) {
    case Term::Tag::Var: {
      auto it = ren.find(t->name);
      return it == ren.end() ? t : tvar(it->second);
    }
    case Term::Tag::Meta:
      return t;
    case Term::Tag::Binder: {
      std::string nb = "#" + std::to_string(counter++);
      auto old = ren.find(t->bound) != ren.end()
                     ? std::optional<std::string>(ren[t->bound])
                     : std::nullopt;
      ren[t->bound] = nb;
      TermRef body = canon_rec(t->body, ren, counter);
      if (old)
        ren[t->bound] = *old;
      else
        ren.erase(t->bound);
      return tbinder(t->name, nb, body);
    }
    case Term::Tag::Node: {
      std::vector<TermRef> args;
      args.reserve(t->args.size());
      for (const auto& a : t->args) args.push_back(canon_rec(a, ren, counter));
      return tnode(t->name, std::move(args));
    }
  }
  return t;
}

}  // namespace

std::set<std::string> free_vars(const TermRef& t) {
  std::set<std::string> bound, out;
  free_vars_into(t, bound, out);
  return out;
}

bool alpha_eq(const TermRef& a, const TermRef& b) {
  std::map<std::string, std::string> a2b, b2a;
  return alpha_eq_rec(a, b, a2b, b2a);
}

TermRef substitute(const TermRef& t, const std::string& var, const TermRef& s) {
  return subst_rec(t, var, s, free_vars(s));
}

std::vector<TermRef> subterms(const TermRef& t) {
  std::vector<TermRef> out;
  subterms_rec(t, out);
  return out;
}

int term_size(const TermRef& t) {
  int n = 1;
  if (t->tag == Term::Tag::Binder) n += term_size(t->body);
  if (t->tag == Term::Tag::Node)
    for (const auto& a : t->args) n += term_size(a);
  return n;
}

std::string to_string(const TermRef& t) {
  std::ostringstream out;
  to_string_rec(t, out);
  return out.str();
}

bool has_meta(const TermRef& t) {
  if (t->tag == Term::Tag::Meta) return true;
  if (t->tag == Term::Tag::Binder) return has_meta(t->body);
  if (t->tag == Term::Tag::Node)
    for (const auto& a : t->args)
      if (has_meta(a)) return true;
  return false;
}

CanonicalTerm canonicalize(const TermRef& t) {
  std::map<std::string, std::string> ren;
  int counter = 0;
  TermRef c = canon_rec(t, ren, counter);
  return CanonicalTerm{c, to_string(c)};
}

}  // namespace redlab
