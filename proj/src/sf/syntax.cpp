#include "sfbox/sf/syntax.hpp"

#include <set>

#include "sfbox/diagnostic.hpp"
#include "sfbox/sf/print.hpp"

namespace sfbox::sf {

TypePtr atom(std::string name) {
  return std::make_shared<Type>(Type{Type::Kind::Atom, std::move(name), nullptr, nullptr});
}

TypePtr arrow(TypePtr a, TypePtr b) {
  return std::make_shared<Type>(Type{Type::Kind::Arrow, {}, std::move(a), std::move(b)});
}

TypePtr boxed(TypePtr a) {
  return std::make_shared<Type>(Type{Type::Kind::Box, {}, std::move(a), nullptr});
}

bool type_equal(const TypePtr& a, const TypePtr& b) {
  if (a->kind != b->kind) return false;
  switch (a->kind) {
    case Type::Kind::Atom: return a->atom == b->atom;
    case Type::Kind::Arrow: return type_equal(a->arg, b->arg) && type_equal(a->res, b->res);
    case Type::Kind::Box: return type_equal(a->arg, b->arg);
  }
  return false;
}

std::vector<TypePtr> spine_args(const TypePtr& t) {
  std::vector<TypePtr> out;
  for (TypePtr cur = t; cur->kind == Type::Kind::Arrow; cur = cur->res) out.push_back(cur->arg);
  return out;
}

const std::string& spine_target(const TypePtr& t) {
  const Type* cur = t.get();
  while (cur->kind == Type::Kind::Arrow) cur = cur->res.get();
  return cur->atom;
}

Ctx Ctx::extend(std::string name, std::string a) const {
  Ctx out = *this;
  out.entries.push_back({std::move(name), std::move(a)});
  return out;
}

Ctx Ctx::drop(std::size_t n) const {
  if (n > entries.size()) fail(Code::BadShift, "cannot drop " + std::to_string(n) + " entries from " + show(*this));
  Ctx out;
  out.var = var;
  out.entries.assign(entries.begin(), entries.end() - static_cast<std::ptrdiff_t>(n));
  return out;
}

bool same_shape(const Ctx& a, const Ctx& b) {
  if (a.var != b.var || a.entries.size() != b.entries.size()) return false;
  for (std::size_t i = 0; i < a.entries.size(); ++i)
    if (a.entries[i].atom != b.entries[i].atom) return false;
  return true;
}

ErasedCtx erase(const Ctx& c) {
  ErasedCtx out;
  out.reserve(c.entries.size());
  for (const auto& e : c.entries) out.push_back(e.name);
  return out;
}

TermPtr const_app(std::string c, std::vector<TermPtr> args) {
  auto t = std::make_shared<Term>();
  t->kind = Term::Kind::Const;
  t->name = std::move(c);
  t->args = std::move(args);
  return t;
}

TermPtr lam(std::string x, TermPtr body) {
  auto t = std::make_shared<Term>();
  t->kind = Term::Kind::Lam;
  t->name = std::move(x);
  t->body = std::move(body);
  return t;
}

TermPtr box(TermPtr body) {
  auto t = std::make_shared<Term>();
  t->kind = Term::Kind::Box;
  t->body = std::move(body);
  return t;
}

TermPtr bvar(std::string x) {
  auto t = std::make_shared<Term>();
  t->kind = Term::Kind::BVar;
  t->name = std::move(x);
  return t;
}

TermPtr qvar(std::string u) {
  auto t = std::make_shared<Term>();
  t->kind = Term::Kind::QVar;
  t->name = std::move(u);
  return t;
}

TermPtr pvar(std::string v, unsigned weakening) {
  auto t = std::make_shared<Term>();
  t->kind = Term::Kind::PVar;
  t->name = std::move(v);
  t->weakening = weakening;
  return t;
}

TermPtr clo(TermPtr body, Subst s, Ctx domain, Ctx range) {
  auto t = std::make_shared<Term>();
  t->kind = Term::Kind::Clo;
  t->body = std::move(body);
  t->subst = std::move(s);
  t->domain = std::move(domain);
  t->range = std::move(range);
  return t;
}

bool is_ground(const TermPtr& m) {
  switch (m->kind) {
    case Term::Kind::QVar:
    case Term::Kind::PVar:
    case Term::Kind::Clo: return false;
    case Term::Kind::BVar: return true;
    case Term::Kind::Lam:
    case Term::Kind::Box: return is_ground(m->body);
    case Term::Kind::Const:
      for (const auto& a : m->args)
        if (!is_ground(a)) return false;
      return true;
  }
  return false;
}

namespace {
std::shared_ptr<Pattern> make_pattern(Pattern::Kind k, std::string name) {
  auto p = std::make_shared<Pattern>();
  p->kind = k;
  p->name = std::move(name);
  return p;
}
}  // namespace

PatternPtr plam(std::string x, PatternPtr body) {
  auto p = make_pattern(Pattern::Kind::Lam, std::move(x));
  p->body = std::move(body);
  return p;
}

PatternPtr pbox(PatternPtr body) {
  auto p = make_pattern(Pattern::Kind::Box, "");
  p->body = std::move(body);
  return p;
}

PatternPtr pbvar(std::string x) { return make_pattern(Pattern::Kind::BVar, std::move(x)); }

PatternPtr pconst(std::string c, std::vector<PatternPtr> args) {
  auto p = make_pattern(Pattern::Kind::Const, std::move(c));
  p->args = std::move(args);
  return p;
}

PatternPtr pqvar(std::string u) { return make_pattern(Pattern::Kind::QVar, std::move(u)); }

PatternPtr ppvar(std::string v, unsigned weakening) {
  auto p = make_pattern(Pattern::Kind::PVar, std::move(v));
  p->weakening = weakening;
  return p;
}

bool Signature::has_atom(std::string_view a) const {
  for (const auto& x : atoms)
    if (x == a) return true;
  return false;
}

TypePtr Signature::constructor(std::string_view c) const {
  for (const auto& [name, ty] : constructors)
    if (name == c) return ty;
  return nullptr;
}

void wf_type(const Signature& sig, const TypePtr& t) {
  switch (t->kind) {
    case Type::Kind::Atom:
      if (!sig.has_atom(t->atom)) fail(Code::UndeclaredAtom, "undeclared atomic type '" + t->atom + "'");
      return;
    case Type::Kind::Arrow:
      wf_type(sig, t->arg);
      wf_type(sig, t->res);
      return;
    case Type::Kind::Box: wf_type(sig, t->arg); return;
  }
}

void wf_ctx(const Signature& sig, const Ctx& c) {
  for (const auto& e : c.entries)
    if (!sig.has_atom(e.atom)) fail(Code::UndeclaredAtom, "undeclared atomic type '" + e.atom + "' in context");
}

void wf_signature(const Signature& sig) {
  std::set<std::string> seen;
  for (const auto& a : sig.atoms)
    if (!seen.insert(a).second) fail(Code::DuplicateName, "duplicate declaration of '" + a + "'");
  for (const auto& [name, ty] : sig.constructors) {
    if (!seen.insert(name).second) fail(Code::DuplicateName, "duplicate declaration of '" + name + "'");
    wf_type(sig, ty);
    const Type* cur = ty.get();
    while (cur->kind == Type::Kind::Arrow) cur = cur->res.get();
    if (cur->kind != Type::Kind::Atom)
      fail(Code::NonAtomicTarget, "constructor '" + name + "' does not construct an atomic type");
  }
}

}  // namespace sfbox::sf
