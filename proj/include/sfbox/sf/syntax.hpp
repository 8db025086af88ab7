#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace sfbox::sf {

struct Type;
using TypePtr = std::shared_ptr<const Type>;

struct Type {
  enum class Kind { Atom, Arrow, Box };
  Kind kind;
  std::string atom;  // Atom
  TypePtr arg;       // Arrow argument, Box body
  TypePtr res;       // Arrow result

  bool is_atom() const { return kind == Kind::Atom; }
};

TypePtr atom(std::string name);
TypePtr arrow(TypePtr a, TypePtr b);
TypePtr boxed(TypePtr a);
bool type_equal(const TypePtr& a, const TypePtr& b);

// For a constructor type A1 -> ... -> An -> a: the Ai and a.
std::vector<TypePtr> spine_args(const TypePtr& t);
const std::string& spine_target(const TypePtr& t);

struct CtxEntry {
  std::string name;
  std::string atom;

  bool operator==(const CtxEntry&) const = default;
};

// Psi ::= . | g | Psi, x:a   -- `var` is the context variable standing for an unknown prefix.
struct Ctx {
  std::optional<std::string> var;
  std::vector<CtxEntry> entries;

  std::size_t size() const { return entries.size(); }
  bool closed() const { return !var && entries.empty(); }
  Ctx extend(std::string name, std::string atom) const;
  Ctx drop(std::size_t n) const;

  bool operator==(const Ctx&) const = default;
};

// Contexts compare positionally: same context variable and same atoms. Names are irrelevant.
bool same_shape(const Ctx& a, const Ctx& b);

using ErasedCtx = std::vector<std::string>;
ErasedCtx erase(const Ctx& c);

struct Term;
using TermPtr = std::shared_ptr<const Term>;

// Domain of (shift n; e1; ...; ek) with range Psi is drop(Psi, n), x1, ..., xk.
struct Subst {
  std::size_t shift = 0;
  std::vector<TermPtr> entries;  // innermost last
  bool elided = false;           // surface `_` or bare list; the checker computes `shift`
};

struct Term {
  enum class Kind { Const, Lam, Box, BVar, QVar, PVar, Clo };
  Kind kind;
  std::string name;           // constant, binder, or variable
  std::vector<TermPtr> args;  // Const
  TermPtr body;               // Lam, Box, Clo
  unsigned weakening = 1;     // PVar: number of '#'
  Subst subst;                // Clo
  Ctx domain;                 // Clo, filled in by the checker
  Ctx range;                  // Clo, filled in by the checker
};

TermPtr const_app(std::string c, std::vector<TermPtr> args = {});
TermPtr lam(std::string x, TermPtr body);
TermPtr box(TermPtr body);
TermPtr bvar(std::string x);
TermPtr qvar(std::string u);
TermPtr pvar(std::string v, unsigned weakening = 1);
TermPtr clo(TermPtr body, Subst s, Ctx domain = {}, Ctx range = {});

bool is_ground(const TermPtr& m);

struct Pattern;
using PatternPtr = std::shared_ptr<const Pattern>;

struct Pattern {
  enum class Kind { Lam, Box, BVar, Const, QVar, PVar };
  Kind kind;
  std::string name;
  std::vector<PatternPtr> args;  // Const
  PatternPtr body;               // Lam, Box
  unsigned weakening = 1;        // PVar
};

PatternPtr plam(std::string x, PatternPtr body);
PatternPtr pbox(PatternPtr body);
PatternPtr pbvar(std::string x);
PatternPtr pconst(std::string c, std::vector<PatternPtr> args = {});
PatternPtr pqvar(std::string u);
PatternPtr ppvar(std::string v, unsigned weakening = 1);

struct ContextualType {
  Ctx ctx;
  std::string atom;
};

struct ContextualObject {
  ErasedCtx ectx;
  TermPtr term;
};

struct Signature {
  std::vector<std::string> atoms;
  std::vector<std::pair<std::string, TypePtr>> constructors;

  bool has_atom(std::string_view a) const;
  TypePtr constructor(std::string_view c) const;  // nullptr when undeclared
  bool has_constructor(std::string_view c) const { return constructor(c) != nullptr; }
};

void wf_signature(const Signature& sig);
void wf_type(const Signature& sig, const TypePtr& t);
void wf_ctx(const Signature& sig, const Ctx& c);

}  // namespace sfbox::sf
