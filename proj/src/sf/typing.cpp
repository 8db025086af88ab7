#include "sfbox/sf/typing.hpp"

#include <set>

#include "sfbox/diagnostic.hpp"
#include "sfbox/sf/print.hpp"

namespace sfbox::sf {

namespace {

const CtxEntry* lookup_entry(const Ctx& psi, const std::string& x) {
  for (auto it = psi.entries.rbegin(); it != psi.entries.rend(); ++it)
    if (it->name == x) return &*it;
  return nullptr;
}

void expect_atom(const TypePtr& a, const std::string& have, const std::string& what) {
  if (!a->is_atom() || a->atom != have)
    fail(Code::TypeMismatch, what + " has type " + have + " but " + show(a) + " was expected");
}

class TermChecker {
public:
  TermChecker(const Signature& sig, const Ambient& amb) : sig_(sig), amb_(amb) {}

  TermPtr check(const Ctx& psi, const TermPtr& m, const TypePtr& a) {
    switch (m->kind) {
      case Term::Kind::Lam: {
        if (a->kind != Type::Kind::Arrow || !a->arg->is_atom())
          fail(Code::TypeMismatch, "\\" + m->name + ". ... checked against " + show(a));
        auto body = check(psi.extend(m->name, a->arg->atom), m->body, a->res);
        return body == m->body ? m : lam(m->name, body);
      }
      case Term::Kind::Box: {
        if (a->kind != Type::Kind::Box) fail(Code::TypeMismatch, "box checked against " + show(a));
        outer_.push_back(psi);
        auto body = check(Ctx{}, m->body, a->arg);
        outer_.pop_back();
        return body == m->body ? m : box(body);
      }
      case Term::Kind::BVar: {
        if (const CtxEntry* e = lookup_entry(psi, m->name)) {
          expect_atom(a, e->atom, "variable " + m->name);
          return m;
        }
        for (const auto& o : outer_)
          if (lookup_entry(o, m->name)) fail(Code::NotClosed, "boxed term mentions outer variable " + m->name);
        fail(Code::UnboundVar, "unbound variable " + m->name + " in context " + show(psi));
      }
      case Term::Kind::Const: {
        TypePtr ty = sig_.constructor(m->name);
        if (!ty) fail(Code::UnboundVar, "unknown constructor " + m->name);
        auto params = spine_args(ty);
        if (params.size() != m->args.size())
          fail(Code::SpineArity, m->name + " expects " + std::to_string(params.size()) + " arguments, got " +
                                     std::to_string(m->args.size()));
        expect_atom(a, spine_target(ty), m->name + " ...");
        std::vector<TermPtr> args;
        bool changed = false;
        for (std::size_t i = 0; i < params.size(); ++i) {
          args.push_back(check(psi, m->args[i], params[i]));
          changed = changed || args.back() != m->args[i];
        }
        return changed ? const_app(m->name, std::move(args)) : m;
      }
      case Term::Kind::QVar: {
        auto entry = lookup_amb(m->name);
        expect_atom(a, entry.type.atom, "'" + m->name);
        if (!same_shape(entry.type.ctx, psi)) context_error("'" + m->name, entry.type.ctx, psi);
        return m;
      }
      case Term::Kind::PVar: {
        auto entry = lookup_amb(m->name);
        if (!entry.param) fail(Code::TypeMismatch, m->name + " is not bound to a variable; #" + m->name + " is not allowed");
        expect_atom(a, entry.type.atom, "#" + m->name);
        std::size_t skip = m->weakening - 1;
        if (skip > psi.size() || !same_shape(psi.drop(skip), entry.type.ctx))
          context_error(std::string(m->weakening, '#') + m->name, entry.type.ctx, psi);
        return m;
      }
      case Term::Kind::Clo: {
        Ctx phi;
        if (m->body->kind == Term::Kind::QVar) {
          phi = lookup_amb(m->body->name).type.ctx;
        } else {
          phi = m->domain;
        }
        Subst s = check_subst(psi, m->subst, phi);
        auto body = check(phi, m->body, a);
        return clo(body, std::move(s), phi, psi);
      }
    }
    fail(Code::InternalInvariantViolation, "unknown SF term");
  }

  Subst check_subst(const Ctx& psi, const Subst& sigma, const Ctx& phi) {
    const std::size_t k = sigma.entries.size();
    if (phi.size() < k)
      fail(Code::LengthMismatch, "substitution has " + std::to_string(k) + " entries but domain " + show(phi) +
                                     " has only " + std::to_string(phi.size()));
    Ctx prefix = phi.drop(k);
    Subst out;
    if (sigma.elided) {
      if (psi.size() < prefix.size())
        fail(Code::LengthMismatch, "cannot find a shift from " + show(prefix) + " into " + show(psi));
      out.shift = psi.size() - prefix.size();
      if (!same_shape(psi.drop(out.shift), prefix))
        fail(Code::BadShift, "domain " + show(phi) + " is not a weakening of " + show(psi));
    } else {
      out.shift = sigma.shift;
      if (out.shift > psi.size())
        fail(Code::BadShift, "^" + std::to_string(out.shift) + " drops more than the entries of " + show(psi));
      Ctx kept = psi.drop(out.shift);
      if (kept.var != prefix.var || kept.size() != prefix.size())
        fail(Code::LengthMismatch, "substitution of " + show(sigma) + " does not cover " + show(phi));
      if (!same_shape(kept, prefix)) fail(Code::BadShift, "shifted part " + show(kept) + " differs from " + show(prefix));
    }
    for (std::size_t i = 0; i < k; ++i) {
      const auto& entry = phi.entries[prefix.size() + i];
      try {
        out.entries.push_back(check(psi, sigma.entries[i], atom(entry.atom)));
      } catch (const Error& e) {
        if (e.code() != Code::TypeMismatch) throw;
        fail(Code::EntryTypeMismatch, "entry for " + entry.name + ": " + e.diag().message);
      }
    }
    return out;
  }

private:
  AmbientEntry lookup_amb(const std::string& u) {
    auto e = amb_(u);
    if (!e) fail(Code::UnboundVar, "unbound contextual variable " + u);
    return *e;
  }

  [[noreturn]] void context_error(const std::string& what, const Ctx& declared, const Ctx& psi) {
    if (!outer_.empty() && psi.closed() && !declared.closed())
      fail(Code::NotClosed, what + " lives in " + show(declared) + " and cannot occur in a closed box");
    fail(Code::ContextMismatch, what + " lives in " + show(declared) + " but is used in " + show(psi));
  }

  const Signature& sig_;
  const Ambient& amb_;
  std::vector<Ctx> outer_;
};

class PatternChecker {
public:
  explicit PatternChecker(const Signature& sig) : sig_(sig) {}

  void check(const Ctx& psi, const PatternPtr& r, const TypePtr& a) {
    switch (r->kind) {
      case Pattern::Kind::Lam:
        if (a->kind != Type::Kind::Arrow || !a->arg->is_atom())
          fail(Code::TypeMismatch, "pattern \\" + r->name + ". ... at type " + show(a));
        check(psi.extend(r->name, a->arg->atom), r->body, a->res);
        return;
      case Pattern::Kind::Box:
        if (a->kind != Type::Kind::Box) fail(Code::TypeMismatch, "box pattern at type " + show(a));
        check(Ctx{}, r->body, a->arg);
        return;
      case Pattern::Kind::BVar: {
        const CtxEntry* e = lookup_entry(psi, r->name);
        if (!e) fail(Code::UnboundVar, "unbound variable " + r->name + " in pattern");
        expect_atom(a, e->atom, "variable " + r->name);
        return;
      }
      case Pattern::Kind::Const: {
        TypePtr ty = sig_.constructor(r->name);
        if (!ty) fail(Code::UnboundVar, "unknown constructor " + r->name);
        auto params = spine_args(ty);
        if (params.size() != r->args.size())
          fail(Code::SpineArity, r->name + " expects " + std::to_string(params.size()) + " arguments, got " +
                                     std::to_string(r->args.size()));
        expect_atom(a, spine_target(ty), r->name + " ...");
        for (std::size_t i = 0; i < params.size(); ++i) check(psi, r->args[i], params[i]);
        return;
      }
      case Pattern::Kind::QVar:
        if (!a->is_atom()) fail(Code::TypeMismatch, "'" + r->name + " at non-atomic type " + show(a));
        bind(r->name, ContextualType{psi, a->atom}, false);
        return;
      case Pattern::Kind::PVar: {
        if (!a->is_atom()) fail(Code::TypeMismatch, "#" + r->name + " at non-atomic type " + show(a));
        std::size_t skip = r->weakening - 1;
        if (skip > psi.size())
          fail(Code::WeakeningTooDeep, std::string(r->weakening, '#') + r->name + " skips more entries than " + show(psi));
        bind(r->name, ContextualType{psi.drop(skip), a->atom}, true);
        return;
      }
    }
  }

  std::vector<PatternBinding> bindings;

private:
  void bind(const std::string& name, ContextualType t, bool param) {
    if (!seen_.insert(name).second) fail(Code::NonLinear, name + " occurs twice in the pattern");
    bindings.push_back({name, std::move(t), param});
  }

  const Signature& sig_;
  std::set<std::string> seen_;
};

}  // namespace

Ambient empty_ambient() {
  return [](const std::string&) -> std::optional<AmbientEntry> { return std::nullopt; };
}

TermPtr check_sf_term(const Signature& sig, const Ambient& amb, const Ctx& psi, const TermPtr& m,
                      const TypePtr& a) {
  TermChecker c(sig, amb);
  return c.check(psi, m, a);
}

Subst check_sf_subst(const Signature& sig, const Ambient& amb, const Ctx& psi, const Subst& sigma,
                     const Ctx& phi) {
  TermChecker c(sig, amb);
  return c.check_subst(psi, sigma, phi);
}

std::vector<PatternBinding> check_sf_pattern(const Signature& sig, const Ctx& psi, const PatternPtr& r,
                                             const TypePtr& a) {
  PatternChecker c(sig);
  c.check(psi, r, a);
  return std::move(c.bindings);
}

}  // namespace sfbox::sf
