#include "sfbox/translate/translate.hpp"

#include "sfbox/coreml/print.hpp"
#include "sfbox/diagnostic.hpp"
#include "sfbox/sf/print.hpp"
#include "sfbox/target/embedding.hpp"

namespace sfbox::translate {

using T::con;
using T::tdata;

T::TypePtr trans_sf_type(const sf::TypePtr& a) {
  switch (a->kind) {
    case sf::Type::Kind::Atom:
      return T::t_base(tdata(a->atom));
    case sf::Type::Kind::Arrow:
      return T::t_arr(trans_sf_type(a->arg), trans_sf_type(a->res));
    case sf::Type::Kind::Box:
      return T::t_boxed(trans_sf_type(a->arg));
  }
  fail(Code::InternalInvariantViolation, "unknown SF type");
}

T::TypePtr trans_sf_ctx(const sf::Ctx& psi) {
  T::TypePtr out = psi.var ? T::tvar(*psi.var) : T::t_nil();
  for (auto& e : psi.entries) out = T::t_cons(out, tdata(e.atom));
  return out;
}

T::TypePtr trans_type(const ml::TypePtr& t) {
  switch (t->kind) {
    case ml::Type::Kind::Data: {
      std::vector<T::TypePtr> idx;
      for (auto& i : t->indices) idx.push_back(trans_sf_ctx(i));
      return tdata(t->name, std::move(idx));
    }
    case ml::Type::Kind::Arrow:
      return T::tarrow(trans_type(t->dom), trans_type(t->cod));
    case ml::Type::Kind::Ctx:
      return T::t_sftm(trans_sf_ctx(t->ctype.ctx), T::t_base(tdata(t->ctype.atom)));
    case ml::Type::Kind::Param:
      return T::t_var(trans_sf_ctx(t->ctype.ctx), tdata(t->ctype.atom));
    case ml::Type::Kind::Forall:
      return T::tforall(t->vars, trans_type(t->body));
  }
  fail(Code::InternalInvariantViolation, "unknown ML type");
}

namespace {

T::TypePtr product(const std::vector<T::TypePtr>& ts) {
  T::TypePtr out = ts.back();
  for (std::size_t i = ts.size() - 1; i-- > 0;) out = T::tprod(ts[i], out);
  return out;
}

T::TypePtr ctx_of_drop(const sf::Ctx& psi, std::size_t n) { return trans_sf_ctx(psi.drop(n)); }

const std::string& entry_atom(const sf::Ctx& psi, std::size_t from_end) {
  return psi.entries[psi.size() - 1 - from_end].atom;
}

// Variable at distance d from the innermost end of psi, with atom a.
T::ExprPtr var_index(const sf::Ctx& psi, std::size_t d, const std::string& a) {
  T::ExprPtr e = con("Top", {ctx_of_drop(psi, d + 1), tdata(a)});
  for (std::size_t k = d; k >= 1; --k)
    e = con("Pop", {ctx_of_drop(psi, k), tdata(a), tdata(entry_atom(psi, k - 1))}, e);
  return e;
}

// Wraps e : var(drop(psi, n), a) into var(psi, a).
T::ExprPtr pops(const sf::Ctx& psi, std::size_t n, const std::string& a, T::ExprPtr e) {
  for (std::size_t k = n; k >= 1; --k)
    e = con("Pop", {ctx_of_drop(psi, k), tdata(a), tdata(entry_atom(psi, k - 1))}, e);
  return e;
}

std::optional<std::size_t> distance(const std::vector<std::string>& names, const std::string& x) {
  for (std::size_t d = 0; d < names.size(); ++d)
    if (names[names.size() - 1 - d] == x) return d;
  return std::nullopt;
}

std::vector<std::string> names_of(const sf::Ctx& psi) {
  std::vector<std::string> out;
  for (auto& e : psi.entries) out.push_back(e.name);
  return out;
}

sf::TypePtr spine_rest(const std::vector<sf::TypePtr>& params, std::size_t from, const std::string& a) {
  sf::TypePtr t = sf::atom(a);
  for (std::size_t i = params.size(); i-- > from;) t = sf::arrow(params[i], t);
  return t;
}

class Translator {
public:
  struct Scope {
    TranslationContext tc;
    T::BindingsPtr gamma;
  };

  Translator(const sf::Signature& sig, std::vector<Obligation>* obs) : sig_(sig), obs_(obs) {}

  std::string decl;

  void oblige(const Scope& sc, Obligation o) {
    if (!obs_) return;
    o.decl = decl;
    o.vars = sc.tc.ctx_vars;
    for (auto& [a, b] : sc.tc.refinements) o.equalities.emplace_back(trans_sf_ctx(a), trans_sf_ctx(b));
    o.gamma = sc.gamma;
    obs_->push_back(std::move(o));
  }

  T::ExprPtr term(const Scope& sc, const sf::TermPtr& m, const sf::Ctx& psi, const sf::TypePtr& a) {
    switch (m->kind) {
      case sf::Term::Kind::Lam:
        return con("Lam", {trans_sf_ctx(psi), tdata(a->arg->atom), trans_sf_type(a->res)},
                   term(sc, m->body, psi.extend(m->name, a->arg->atom), a->res));
      case sf::Term::Kind::Box:
        return con("Box", {trans_sf_ctx(psi), trans_sf_type(a->arg)}, term(sc, m->body, sf::Ctx{}, a->arg));
      case sf::Term::Kind::BVar: {
        auto d = distance(names_of(psi), m->name);
        if (!d) fail(Code::InternalInvariantViolation, "variable " + m->name + " not in " + sf::show(psi));
        return con("Var", {trans_sf_ctx(psi), tdata(a->atom)}, var_index(psi, *d, a->atom));
      }
      case sf::Term::Kind::Const: {
        auto ty = sig_.constructor(m->name);
        auto params = sf::spine_args(ty);
        T::ExprPtr sp = con("Empty", {trans_sf_ctx(psi), trans_sf_type(a)});
        for (std::size_t i = params.size(); i-- > 0;)
          sp = con("Cons",
                   {trans_sf_ctx(psi), trans_sf_type(params[i]), trans_sf_type(spine_rest(params, i + 1, a->atom)),
                    trans_sf_type(a)},
                   T::pair(term(sc, m->args[i], psi, params[i]), sp));
        return con("C", {trans_sf_ctx(psi), trans_sf_type(ty), tdata(a->atom)}, T::pair(con(m->name), sp));
      }
      case sf::Term::Kind::QVar: {
        auto it = sc.tc.ml_vars.find(m->name);
        if (it == sc.tc.ml_vars.end()) fail(Code::InternalInvariantViolation, "unbound quoted variable " + m->name);
        if (it->second->kind == ml::Type::Kind::Param)
          return con("Var", {trans_sf_ctx(psi), tdata(a->atom)}, T::var(m->name));
        return T::var(m->name);
      }
      case sf::Term::Kind::PVar:
        return con("Var", {trans_sf_ctx(psi), tdata(a->atom)}, pops(psi, m->weakening - 1, a->atom, T::var(m->name)));
      case sf::Term::Kind::Clo: {
        const sf::Ctx& phi = m->domain;
        auto f = T::tyapp(T::tyapp(T::tyapp(T::var(T::kApplySub), trans_sf_ctx(psi)), trans_sf_ctx(phi)),
                          trans_sf_type(a));
        auto s = subst(sc, m->subst, phi, psi);
        return T::app(T::app(f, term(sc, m->body, phi, a)), s);
      }
    }
    fail(Code::InternalInvariantViolation, "unknown SF term");
  }

  T::ExprPtr subst(const Scope& sc, const sf::Subst& sigma, const sf::Ctx& phi, const sf::Ctx& psi) {
    std::size_t n = sigma.shift, k = sigma.entries.size();
    T::ExprPtr sh = con("Id", {ctx_of_drop(psi, n)});
    for (std::size_t j = n; j >= 1; --j)
      sh = con("Suc", {ctx_of_drop(psi, j), ctx_of_drop(psi, n), tdata(entry_atom(psi, j - 1))}, sh);
    T::ExprPtr s = con("Shift", {trans_sf_ctx(psi), ctx_of_drop(psi, n)}, sh);
    for (std::size_t i = 0; i < k; ++i) {
      const std::string& a = phi.entries[phi.size() - k + i].atom;
      s = con("Dot", {trans_sf_ctx(psi), ctx_of_drop(phi, k - i), tdata(a)},
              T::pair(s, term(sc, sigma.entries[i], psi, sf::atom(a))));
    }
    oblige(sc, {Obligation::Kind::Subst, "", sf::show(sigma), {}, {}, nullptr, s, nullptr,
                T::t_sub(trans_sf_ctx(psi), trans_sf_ctx(phi)), {}});
    return s;
  }

  PatternImage pattern(const sf::PatternPtr& r, const sf::Ctx& psi, const sf::TypePtr& a) {
    PatternImage out;
    out.pattern = pat(r, psi, a, out.bindings);
    return out;
  }

  T::ExprPtr expr(const Scope& sc, const ml::ExprPtr& e) {
    switch (e->kind) {
      case ml::Expr::Kind::Var:
        return T::var(e->name);
      case ml::Expr::Kind::Inst: {
        T::ExprPtr f = expr(sc, e->fn);
        for (auto& c : e->ctxs) f = T::tyapp(f, trans_sf_ctx(c));
        return f;
      }
      case ml::Expr::Kind::App:
        return T::app(expr(sc, e->fn), expr(sc, e->arg));
      case ml::Expr::Kind::ConApp: {
        std::vector<T::TypePtr> ts;
        for (auto& c : e->ctxs) ts.push_back(trans_sf_ctx(c));
        return con(e->name, std::move(ts), args(sc, e->args));
      }
      case ml::Expr::Kind::Fun: {
        Scope inner = sc;
        const ml::TypePtr& self = e->type;
        ml::TypePtr arrow = self->kind == ml::Type::Kind::Forall ? self->body : self;
        for (auto& g : e->ctx_params) inner.tc.ctx_vars.push_back(g);
        add_var(inner, e->name, self);
        add_var(inner, e->param, arrow->dom);
        T::ExprPtr body = T::lam(e->param, trans_type(arrow->dom), expr(inner, e->body));
        for (auto it = e->ctx_params.rbegin(); it != e->ctx_params.rend(); ++it) body = T::tylam(*it, body);
        return T::fix(e->name, trans_type(self), body);
      }
      case ml::Expr::Kind::Let: {
        Scope inner = sc;
        add_var(inner, e->name, e->type);
        return T::let(e->name, trans_type(e->type), expr(sc, e->arg), expr(inner, e->body));
      }
      case ml::Expr::Kind::Match: {
        std::vector<T::Branch> bs;
        for (auto& b : e->branches) {
          Scope inner = sc;
          std::vector<std::pair<std::string, T::TypePtr>> image;
          auto p = ml_pattern(inner, b.pattern, image);
          oblige(sc, {Obligation::Kind::Pattern, "", ml::show(b.pattern), {}, {}, nullptr, nullptr, p, trans_type(e->type),
                         image});
          bs.push_back({p, expr(inner, b.body)});
        }
        return T::match(expr(sc, e->arg), std::move(bs));
      }
      case ml::Expr::Kind::CMatch: {
        T::ExprPtr scrut = expr(sc, e->arg);
        const auto& u = e->type->ctype;
        if (e->type->kind == ml::Type::Kind::Param)
          scrut = con("Var", {trans_sf_ctx(u.ctx), tdata(u.atom)}, scrut);
        std::vector<T::Branch> bs;
        for (auto& b : e->cbranches) {
          auto img = pattern(b.pattern, b.at.ctx, sf::atom(b.at.atom));
          Scope inner = sc;
          std::vector<std::pair<std::string, T::TypePtr>> expected;
          for (std::size_t i = 0; i < b.binder_names.size(); ++i) {
            add_var(inner, b.binder_names[i], b.binder_types[i]);
            expected.emplace_back(b.binder_names[i], trans_type(b.binder_types[i]));
          }
          oblige(sc, {Obligation::Kind::CtxPattern, "", sf::show(b.pattern), {}, {}, nullptr, nullptr, img.pattern,
                      T::t_sftm(trans_sf_ctx(b.at.ctx), T::t_base(tdata(b.at.atom))), expected});
          bs.push_back({img.pattern, expr(inner, b.body)});
        }
        return T::match(scrut, std::move(bs));
      }
      case ml::Expr::Kind::CtxObj: {
        const auto& u = e->type->ctype;
        auto out = term(sc, e->term, u.ctx, sf::atom(u.atom));
        oblige(sc, {Obligation::Kind::Term, "", ml::show(e), {}, {}, nullptr, out, nullptr, trans_type(e->type), {}});
        return out;
      }
      case ml::Expr::Kind::Ann:
        return T::let("_#ann", trans_type(e->type), expr(sc, e->fn), T::var("_#ann"));
    }
    fail(Code::InternalInvariantViolation, "unknown ML expression");
  }

  static void add_var(Scope& sc, const std::string& x, const ml::TypePtr& t) {
    sc.tc.ml_vars[x] = t;
    sc.gamma = T::bind(sc.gamma, x, trans_type(t));
  }

private:
  T::ExprPtr args(const Scope& sc, const std::vector<ml::ExprPtr>& as) {
    if (as.empty()) return nullptr;
    T::ExprPtr out = expr(sc, as.back());
    for (std::size_t i = as.size() - 1; i-- > 0;) out = T::pair(expr(sc, as[i]), out);
    return out;
  }

  T::PatternPtr ml_pattern(Scope& sc, const ml::PatternPtr& p, std::vector<std::pair<std::string, T::TypePtr>>& image) {
    if (p->kind == ml::Pattern::Kind::Var) {
      std::string x = p->name == "_" ? "_#" + std::to_string(++wild_) : p->name;
      add_var(sc, x, p->type);
      image.emplace_back(x, trans_type(p->type));
      return T::pvar(x);
    }
    for (auto& g : p->ctx_params) sc.tc.ctx_vars.push_back(g);
    for (std::size_t i = 0; i < p->con_indices.size(); ++i)
      sc.tc.refinements.emplace_back(p->con_indices[i], p->scrut_indices[i]);
    T::PatternPtr sub;
    if (!p->args.empty()) {
      sub = ml_pattern(sc, p->args.back(), image);
      for (std::size_t i = p->args.size() - 1; i-- > 0;) {
        auto l = ml_pattern(sc, p->args[i], image);
        sub = T::ppair(l, sub);
      }
    }
    return T::pcon(p->name, p->ctx_params, sub);
  }

  std::vector<std::string> holes(std::size_t n) {
    std::vector<std::string> out;
    for (std::size_t i = 0; i < n; ++i) out.push_back("_#" + std::to_string(++hole_));
    return out;
  }

  T::PatternPtr var_pat(std::size_t d) {
    T::PatternPtr p = T::pcon("Top", holes(2));
    for (std::size_t i = 0; i < d; ++i) p = T::pcon("Pop", holes(3), p);
    return p;
  }

  T::PatternPtr pat(const sf::PatternPtr& r, const sf::Ctx& psi, const sf::TypePtr& a,
                    std::vector<std::pair<std::string, T::TypePtr>>& image) {
    switch (r->kind) {
      case sf::Pattern::Kind::Lam:
        return T::pcon("Lam", holes(3), pat(r->body, psi.extend(r->name, a->arg->atom), a->res, image));
      case sf::Pattern::Kind::Box:
        return T::pcon("Box", holes(2), pat(r->body, sf::Ctx{}, a->arg, image));
      case sf::Pattern::Kind::BVar: {
        auto d = distance(names_of(psi), r->name);
        if (!d) fail(Code::InternalInvariantViolation, "pattern variable " + r->name + " not in " + sf::show(psi));
        return T::pcon("Var", holes(2), var_pat(*d));
      }
      case sf::Pattern::Kind::Const: {
        auto params = sf::spine_args(sig_.constructor(r->name));
        std::vector<T::PatternPtr> subs;
        for (std::size_t i = 0; i < params.size(); ++i) subs.push_back(pat(r->args[i], psi, params[i], image));
        T::PatternPtr sp = T::pcon("Empty", holes(2));
        for (std::size_t i = subs.size(); i-- > 0;) sp = T::pcon("Cons", holes(4), T::ppair(subs[i], sp));
        return T::pcon("C", holes(3), T::ppair(T::pcon(r->name, {}), sp));
      }
      case sf::Pattern::Kind::QVar:
        image.emplace_back(r->name, T::t_sftm(trans_sf_ctx(psi), trans_sf_type(a)));
        return T::pvar(r->name);
      case sf::Pattern::Kind::PVar: {
        image.emplace_back(r->name, T::t_var(ctx_of_drop(psi, r->weakening - 1), tdata(a->atom)));
        T::PatternPtr p = T::pvar(r->name);
        for (unsigned i = 1; i < r->weakening; ++i) p = T::pcon("Pop", holes(3), p);
        return T::pcon("Var", holes(2), p);
      }
    }
    fail(Code::InternalInvariantViolation, "unknown SF pattern");
  }

  const sf::Signature& sig_;
  std::vector<Obligation>* obs_;
  int hole_ = 0;
  int wild_ = 0;
};

}  // namespace

T::Signature trans_signature(const ml::Program& p) {
  T::Signature s = T::embedding_signature();
  for (auto& a : p.sf.atoms) s.types.emplace_back(a, 0);
  for (auto& [c, ty] : p.sf.constructors)
    s.cons.push_back({c, {}, nullptr, "con", {trans_sf_type(ty), tdata(sf::spine_target(ty))}});
  for (auto& d : p.data) {
    s.types.emplace_back(d.name, d.arity);
    for (auto& k : d.cons) {
      T::TypePtr arg;
      if (!k.args.empty()) {
        std::vector<T::TypePtr> ts;
        for (auto& a : k.args) ts.push_back(trans_type(a));
        arg = product(ts);
      }
      std::vector<T::TypePtr> idx;
      for (auto& i : k.indices) idx.push_back(trans_sf_ctx(i));
      s.cons.push_back({k.name, k.ctx_params, arg, d.name, std::move(idx)});
    }
  }
  return s;
}

T::ExprPtr trans_sf_term(const sf::Signature& sig, const TranslationContext& tc, const sf::TermPtr& m,
                         const sf::Ctx& psi, const sf::TypePtr& a) {
  Translator tr(sig, nullptr);
  return tr.term({tc, nullptr}, m, psi, a);
}

T::ExprPtr trans_sf_subst(const sf::Signature& sig, const TranslationContext& tc, const sf::Subst& sigma,
                          const sf::Ctx& phi, const sf::Ctx& psi) {
  Translator tr(sig, nullptr);
  return tr.subst({tc, nullptr}, sigma, phi, psi);
}

PatternImage trans_sf_pattern(const sf::Signature& sig, const sf::PatternPtr& r, const sf::Ctx& psi,
                              const sf::TypePtr& a) {
  Translator tr(sig, nullptr);
  return tr.pattern(r, psi, a);
}

Translation trans_program(const ml::Program& p) {
  Translation out;
  out.program.sig = trans_signature(p);
  Translator tr(p.sf, &out.obligations);
  Translator::Scope sc{{}, T::builtin_bindings()};
  for (auto& d : p.defs) {
    tr.decl = d.name;
    auto body = tr.expr(sc, d.body);
    out.program.defs.push_back({d.name, trans_type(d.type), body});
    Translator::add_var(sc, d.name, d.type);
  }
  out.program.main = p.main;
  return out;
}

namespace {

T::ValuePtr embed_term(std::vector<std::string>& names, const sf::TermPtr& m) {
  switch (m->kind) {
    case sf::Term::Kind::Lam: {
      names.push_back(m->name);
      auto body = embed_term(names, m->body);
      names.pop_back();
      return T::con_value("Lam", body);
    }
    case sf::Term::Kind::Box: {
      std::vector<std::string> closed;
      return T::con_value("Box", embed_term(closed, m->body));
    }
    case sf::Term::Kind::BVar: {
      auto d = distance(names, m->name);
      if (!d) fail(Code::InternalInvariantViolation, "free variable " + m->name + " in a value");
      T::ValuePtr v = T::con_value("Top");
      for (std::size_t i = 0; i < *d; ++i) v = T::con_value("Pop", v);
      return T::con_value("Var", v);
    }
    case sf::Term::Kind::Const: {
      T::ValuePtr sp = T::con_value("Empty");
      for (auto it = m->args.rbegin(); it != m->args.rend(); ++it)
        sp = T::con_value("Cons", T::pair_value(embed_term(names, *it), sp));
      return T::con_value("C", T::pair_value(T::con_value(m->name), sp));
    }
    default:
      fail(Code::InternalInvariantViolation, "contextual value is not ground: " + sf::show(m));
  }
}

}  // namespace

T::ValuePtr embed_object(const sf::ContextualObject& obj) {
  auto names = obj.ectx;
  return embed_term(names, obj.term);
}

T::ValuePtr trans_value(const ml::Program& p, const ml::ValuePtr& v, const ml::TypePtr& t) {
  switch (v->kind) {
    case ml::Value::Kind::Ctx: {
      auto e = embed_object(v->obj);
      if (t->kind == ml::Type::Kind::Param) return e->a;
      return e;
    }
    case ml::Value::Kind::Data: {
      auto [k, d] = p.find_con(v->name);
      if (!k) fail(Code::InternalInvariantViolation, "unknown constructor " + v->name);
      if (v->args.empty()) return T::con_value(v->name);
      T::ValuePtr arg = trans_value(p, v->args.back(), k->args.back());
      for (std::size_t i = v->args.size() - 1; i-- > 0;)
        arg = T::pair_value(trans_value(p, v->args[i], k->args[i]), arg);
      return T::con_value(v->name, arg);
    }
    case ml::Value::Kind::Fun:
      break;
  }
  fail(Code::InternalInvariantViolation, "function values have no value translation");
}

}  // namespace sfbox::translate
