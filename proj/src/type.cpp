#include "redlab/type.hpp"

#include <sstream>

namespace redlab {

TypeRef atom(std::string name) {
  auto t = std::make_shared<Type>();
  t->tag = Type::Tag::Atom;
  t->name = std::move(name);
  return t;
}

TypeRef tcon(std::string name, std::vector<TypeRef> args) {
  auto t = std::make_shared<Type>();
  t->tag = Type::Tag::Con;
  t->name = std::move(name);
  t->args = std::move(args);
  return t;
}

TypeRef arrow(TypeRef from, TypeRef to) {
  return tcon("->", {std::move(from), std::move(to)});
}

TypeRef tymeta(int id) {
  auto t = std::make_shared<Type>();
  t->tag = Type::Tag::Meta;
  t->meta = id;
  return t;
}

TypeRef tysvar(std::string name) {
  auto t = std::make_shared<Type>();
  t->tag = Type::Tag::SVar;
  t->name = std::move(name);
  return t;
}

bool type_eq(const TypeRef& a, const TypeRef& b) {
  if (a.get() == b.get()) return true;
  if (a->tag != b->tag) return false;
  switch (a->tag) {
    case Type::Tag::Atom:
    case Type::Tag::SVar:
      return a->name == b->name;
    case Type::Tag::Meta:
      return a->meta == b->meta;
    case Type::Tag::Con: {
      if (a->name != b->name || a->args.size() != b->args.size()) return false;
      for (size_t i = 0; i < a->args.size(); ++i)
        if (!type_eq(a->args[i], b->args[i])) return false;
      return true;
    }
  }
  return false;
}

Hat Hat::ty(TypeRef t) {
  Hat h;
  h.tag = Tag::Ty;
  h.type = std::move(t);
  return h;
}

Hat Hat::frown() {
  Hat h;
  h.tag = Tag::Frown;
  return h;
}

Hat Hat::hatmeta(int id) {
  Hat h;
  h.tag = Tag::Meta;
  h.meta = id;
  return h;
}

bool hat_eq(const Hat& a, const Hat& b) {
  if (a.tag != b.tag) return false;
  switch (a.tag) {
    case Hat::Tag::Frown:
      return true;
    case Hat::Tag::Meta:
      return a.meta == b.meta;
    case Hat::Tag::Ty:
      return type_eq(a.type, b.type);
  }
  return false;
}

TypeRef Substitution::walk(TypeRef t) const {
  while (t->tag == Type::Tag::Meta) {
    auto it = types_.find(t->meta);
    if (it == types_.end()) break;
    t = it->second;
  }
  return t;
}

Hat Substitution::walk(Hat h) const {
  while (h.tag == Hat::Tag::Meta) {
    auto it = hats_.find(h.meta);
    if (it == hats_.end()) break;
    h = it->second;
  }
  if (h.tag == Hat::Tag::Ty) h.type = walk(h.type);
  return h;
}

TypeRef Substitution::apply(const TypeRef& t) const {
  TypeRef w = walk(t);
  if (w->tag != Type::Tag::Con) return w;
  std::vector<TypeRef> args;
  args.reserve(w->args.size());
  bool changed = false;
  for (const auto& a : w->args) {
    TypeRef na = apply(a);
    changed |= na.get() != a.get();
    args.push_back(std::move(na));
  }
  return changed || w.get() != t.get() ? tcon(w->name, std::move(args)) : t;
}

Hat Substitution::apply(const Hat& h) const {
  Hat w = walk(h);
  if (w.tag == Hat::Tag::Ty) w.type = apply(w.type);
  return w;
}

namespace {

bool occurs(int id, const TypeRef& t, const Substitution& s) {
  TypeRef w = s.walk(t);
  switch (w->tag) {
    case Type::Tag::Meta:
      return w->meta == id;
    case Type::Tag::Con:
      for (const auto& a : w->args)
        if (occurs(id, a, s)) return true;
      return false;
    default:
      return false;
  }
}

UnifyFail unify_ty_rec(TypeRef a, TypeRef b, Substitution& s) {
  a = s.walk(a);
  b = s.walk(b);
  if (a->tag == Type::Tag::Meta && b->tag == Type::Tag::Meta &&
      a->meta == b->meta)
    return UnifyFail::None;
  if (a->tag == Type::Tag::Meta) {
    if (occurs(a->meta, b, s)) return UnifyFail::Occurs;
    s.bind_type(a->meta, b);
    return UnifyFail::None;
  }
  if (b->tag == Type::Tag::Meta) return unify_ty_rec(b, a, s);
  if (a->tag != b->tag) return UnifyFail::Mismatch;
  switch (a->tag) {
    case Type::Tag::Atom:
      return a->name == b->name ? UnifyFail::None : UnifyFail::Mismatch;
    case Type::Tag::Con: {
      if (a->name != b->name || a->args.size() != b->args.size())
        return UnifyFail::Mismatch;
      for (size_t i = 0; i < a->args.size(); ++i) {
        UnifyFail f = unify_ty_rec(a->args[i], b->args[i], s);
        if (f != UnifyFail::None) return f;
      }
      return UnifyFail::None;
    }
    default:
      // SVar must be instantiated away before unification.
      return UnifyFail::Mismatch;
  }
}

UnifyFail unify_hat_rec(Hat a, Hat b, Substitution& s) {
  a = s.walk(a);
  b = s.walk(b);
  if (a.tag == Hat::Tag::Meta && b.tag == Hat::Tag::Meta && a.meta == b.meta)
    return UnifyFail::None;
  if (a.tag == Hat::Tag::Meta) {
    s.bind_hat(a.meta, b);
    return UnifyFail::None;
  }
  if (b.tag == Hat::Tag::Meta) return unify_hat_rec(b, a, s);
  if (a.tag == Hat::Tag::Frown && b.tag == Hat::Tag::Frown)
    return UnifyFail::None;
  if (a.tag == Hat::Tag::Ty && b.tag == Hat::Tag::Ty)
    return unify_ty_rec(a.type, b.type, s);
  return UnifyFail::Mismatch;  // FROWN against a type
}

}  // namespace

UnifyResult unify(const Hat& a, const Hat& b, Substitution s) {
  UnifyResult r;
  r.fail = unify_hat_rec(a, b, s);
  r.sub = std::move(s);
  return r;
}

UnifyResult unify_types(const TypeRef& a, const TypeRef& b, Substitution s) {
  UnifyResult r;
  r.fail = unify_ty_rec(a, b, s);
  r.sub = std::move(s);
  return r;
}

namespace {

void meta_vars_rec(const TypeRef& t, std::set<int>& out) {
  switch (t->tag) {
    case Type::Tag::Meta:
      out.insert(t->meta);
      return;
    case Type::Tag::Con:
      for (const auto& a : t->args) meta_vars_rec(a, out);
      return;
    default:
      return;
  }
}

}  // namespace

std::set<int> meta_vars(const TypeRef& t) {
  std::set<int> out;
  meta_vars_rec(t, out);
  return out;
}

std::set<int> meta_vars(const Hat& h) {
  std::set<int> out;
  if (h.tag == Hat::Tag::Meta) out.insert(h.meta);
  if (h.tag == Hat::Tag::Ty) meta_vars_rec(h.type, out);
  return out;
}

int MetaRenamer::rename(int id) {
  auto it = map.find(id);
  if (it != map.end()) return it->second;
  int n = next++;
  map.emplace(id, n);
  return n;
}

TypeRef rename_canonical(const TypeRef& t, MetaRenamer& r) {
  switch (t->tag) {
    case Type::Tag::Meta:
      return tymeta(r.rename(t->meta));
    case Type::Tag::Con: {
      std::vector<TypeRef> args;
      args.reserve(t->args.size());
      for (const auto& a : t->args) args.push_back(rename_canonical(a, r));
      return tcon(t->name, std::move(args));
    }
    default:
      return t;
  }
}

Hat rename_canonical(const Hat& h, MetaRenamer& r) {
  switch (h.tag) {
    case Hat::Tag::Meta:
      return Hat::hatmeta(r.rename(h.meta));
    case Hat::Tag::Ty:
      return Hat::ty(rename_canonical(h.type, r));
    default:
      return h;
  }
}

Hat rename_canonical(const Hat& h) {
  MetaRenamer r;
  return rename_canonical(h, r);
}

std::string meta_alias(int i) {
  std::string s(1, static_cast<char>('A' + i % 26));
  if (i >= 26) s += std::to_string(i / 26);
  return s;
}

namespace {

// Precedence: 0 = arrow (loosest, right-assoc), 1 = named infix, 2 = atomic.
void ty_str_rec(const TypeRef& t, const TypeStyle& st, int prec,
                std::ostringstream& out) {
  switch (t->tag) {
    case Type::Tag::Atom:
      out << t->name;
      return;
    case Type::Tag::SVar:
      out << '?' << t->name;
      return;
    case Type::Tag::Meta:
      out << (st.alias ? meta_alias(t->meta) : "?" + std::to_string(t->meta));
      return;
    case Type::Tag::Con: {
      bool is_arrow = t->name == "->" && t->args.size() == 2;
      bool is_infix = !is_arrow && st.infix.count(t->name) &&
                      t->args.size() == 2;
      if (is_arrow) {
        bool paren = prec > 0;
        if (paren) out << '(';
        ty_str_rec(t->args[0], st, 1, out);
        out << " -> ";
        ty_str_rec(t->args[1], st, 0, out);
        if (paren) out << ')';
      } else if (is_infix) {
        bool paren = prec > 1;
        if (paren) out << '(';
        ty_str_rec(t->args[0], st, 2, out);
        out << ' ' << t->name << ' ';
        ty_str_rec(t->args[1], st, 2, out);
        if (paren) out << ')';
      } else {
        out << t->name << '(';
        for (size_t i = 0; i < t->args.size(); ++i) {
          if (i) out << ", ";
          ty_str_rec(t->args[i], st, 0, out);
        }
        out << ')';
      }
      return;
    }
  }
}

}  // namespace

std::string to_string(const TypeRef& t, const TypeStyle& style) {
  std::ostringstream out;
  ty_str_rec(t, style, 0, out);
  return out.str();
}

std::string to_string(const Hat& h, const TypeStyle& style) {
  switch (h.tag) {
    case Hat::Tag::Frown:
      return "FROWN";
    case Hat::Tag::Meta:
      return style.alias ? meta_alias(h.meta) : "?" + std::to_string(h.meta);
    case Hat::Tag::Ty:
      return to_string(h.type, style);
  }
  return {};
}

}  // namespace redlab
