#include "sfbox/coreml/check.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <optional>
#include <set>

#include "sfbox/coreml/print.hpp"
#include "sfbox/sf/print.hpp"
#include "sfbox/sf/subst.hpp"
#include "sfbox/sf/typing.hpp"

namespace sfbox::ml {

namespace {

using VarLookup = std::function<std::optional<std::string>(const std::string&)>;

sf::Ctx resolve_ctx_with(const Program& p, const VarLookup& lookup, const sf::Ctx& c) {
  sf::Ctx out;
  if (c.var) {
    auto v = lookup(*c.var);
    if (!v) fail(Code::UnboundContextVar, "unbound context variable " + *c.var);
    out.var = *v;
  }
  for (const auto& e : c.entries) {
    if (!p.sf.has_atom(e.atom)) fail(Code::UndeclaredAtom, "undeclared atomic type " + e.atom + " in " + sf::show(c));
    out.entries.push_back(e);
  }
  return out;
}

TypePtr resolve_with(const Program& p, const VarLookup& lookup, const TypePtr& t, bool allow_forall) {
  switch (t->kind) {
    case Type::Kind::Data: {
      const DataDecl* d = p.find_data(t->name);
      if (!d) fail(Code::UnboundVar, "unknown data type " + t->name);
      if (t->indices.size() != d->arity)
        fail(Code::ArityError, t->name + " takes " + std::to_string(d->arity) + " context indices, got " +
                                   std::to_string(t->indices.size()));
      std::vector<sf::Ctx> idx;
      for (const auto& i : t->indices) idx.push_back(resolve_ctx_with(p, lookup, i));
      return data_type(t->name, std::move(idx));
    }
    case Type::Kind::Arrow:
      return arrow(resolve_with(p, lookup, t->dom, false), resolve_with(p, lookup, t->cod, false));
    case Type::Kind::Ctx:
    case Type::Kind::Param: {
      if (!p.sf.has_atom(t->ctype.atom)) fail(Code::UndeclaredAtom, "undeclared atomic type " + t->ctype.atom);
      sf::ContextualType u{resolve_ctx_with(p, lookup, t->ctype.ctx), t->ctype.atom};
      return t->kind == Type::Kind::Ctx ? ctx_type(std::move(u)) : param_type(std::move(u));
    }
    case Type::Kind::Forall: {
      if (!allow_forall)
        fail(Code::TypeMismatch, "context quantification is only allowed at the head of a definition's type: " + show(t));
      std::set<std::string> bound;
      for (const auto& v : t->vars)
        if (!bound.insert(v).second) fail(Code::DuplicateName, "context variable " + v + " is bound twice");
      VarLookup inner = [&](const std::string& v) -> std::optional<std::string> {
        if (bound.count(v)) return v;
        return lookup(v);
      };
      return forall(t->vars, resolve_with(p, inner, t->body, false));
    }
  }
  fail(Code::InternalInvariantViolation, "unknown ML type");
}

VarLookup list_lookup(const std::vector<std::string>& vars) {
  return [&vars](const std::string& v) -> std::optional<std::string> {
    if (std::find(vars.begin(), vars.end(), v) != vars.end()) return v;
    return std::nullopt;
  };
}

struct Scope {
  std::map<std::string, TypePtr> vars;
  std::map<std::string, std::string> ctx_names;  // as written -> internal
  std::set<std::string> rigid;
  CtxSubst refine;

  TypePtr norm(const TypePtr& t) const { return subst_type(refine, t); }
  sf::Ctx norm(const sf::Ctx& c) const { return subst_ctx(refine, c); }

  VarLookup lookup() const {
    return [this](const std::string& v) -> std::optional<std::string> {
      auto it = ctx_names.find(v);
      if (it == ctx_names.end()) return std::nullopt;
      return it->second;
    };
  }
};

std::shared_ptr<Expr> copy(const ExprPtr& e) { return std::make_shared<Expr>(*e); }

bool ctx_has_meta(const sf::Ctx& c) { return c.var && is_meta(*c.var); }

class Checker {
public:
  Checker(const Program& p, std::vector<Diagnostic>& warnings) : prog_(p), warnings_(warnings) {}

  ExprPtr check(const Scope& sc, const ExprPtr& e, const TypePtr& tau) {
    return at_loc(e->loc, [&] { return check_(sc, e, sc.norm(tau)); });
  }

  std::pair<ExprPtr, TypePtr> infer(const Scope& sc, const ExprPtr& e, const TypePtr& hint) {
    return at_loc(e->loc, [&] { return infer_(sc, e, hint); });
  }

private:
  ExprPtr check_(const Scope& sc, const ExprPtr& e, const TypePtr& tau) {
    switch (e->kind) {
      case Expr::Kind::Fun: return check_fun(sc, e, tau);
      case Expr::Kind::Let: {
        auto [i, t] = infer(sc, e->arg, nullptr);
        Scope inner = sc;
        inner.vars[e->name] = t;
        auto out = copy(e);
        out->arg = i;
        out->type = t;
        out->body = check(inner, e->body, tau);
        return out;
      }
      case Expr::Kind::Match: return check_match(sc, e, tau);
      case Expr::Kind::CMatch: return check_cmatch(sc, e, tau);
      case Expr::Kind::CtxObj:
        if (tau->kind != Type::Kind::Ctx)
          fail(Code::TypeMismatch, "contextual object " + show(e) + " checked against " + show(tau));
        return check_literal(sc, e, tau->ctype);
      default: {
        auto [out, t] = infer(sc, e, tau);
        t = sc.norm(t);
        if (!type_equal(t, tau))
          fail(Code::TypeMismatch, show(e) + " has type " + show(t) + " but " + show(tau) + " was expected");
        return out;
      }
    }
  }

  std::string fresh_ctx_var(const Scope& sc, const std::string& base) {
    return sf::fresh_name(base, [&](const std::string& n) { return sc.rigid.count(n) > 0; });
  }

  ExprPtr check_fun(const Scope& sc, const ExprPtr& e, const TypePtr& tau) {
    if (tau->kind != Type::Kind::Forall) return check_fun_arrow(sc, e, tau, tau);
    Scope inner = sc;
    CtxSubst ren;
    std::vector<std::string> internals;
    for (const auto& v : tau->vars) {
      std::string n = fresh_ctx_var(inner, v);
      ren[v] = sf::Ctx{n, {}};
      internals.push_back(n);
      inner.rigid.insert(n);
      inner.ctx_names[v] = n;
    }
    TypePtr body = inst_type(ren, tau->body);
    TypePtr self = forall(internals, body);
    auto out = check_fun_arrow(inner, e, body, self);
    out->ctx_params = internals;
    return out;
  }

  std::shared_ptr<Expr> check_fun_arrow(const Scope& sc, const ExprPtr& e, const TypePtr& tau, const TypePtr& self) {
    if (tau->kind != Type::Kind::Arrow)
      fail(Code::TypeMismatch, "function fun " + e->name + " " + e->param + " checked against " + show(tau));
    Scope inner = sc;
    inner.vars[e->name] = self;
    inner.vars[e->param] = tau->dom;
    auto out = copy(e);
    out->body = check(inner, e->body, tau->cod);
    out->type = self;
    out->ctx_params.clear();
    return out;
  }

  ExprPtr check_match(const Scope& sc, const ExprPtr& e, const TypePtr& tau) {
    auto [s, st0] = infer(sc, e->arg, nullptr);
    TypePtr st = sc.norm(st0);
    if (st->kind != Type::Kind::Data)
      fail(Code::PatternTypeMismatch, "constructor patterns used on a value of type " + show(st));
    auto out = copy(e);
    out->arg = s;
    out->type = st;
    out->branches.clear();
    for (const auto& b : e->branches) {
      Scope inner = sc;
      std::set<std::string> seen;
      auto pat = at_loc(b.pattern->loc, [&] { return check_pattern(inner, b.pattern, st, seen); });
      if (!pat) {
        warnings_.push_back({Code::UnreachableBranch,
                             "branch " + show(b.pattern) + " can never match a value of type " + show(st), b.pattern->loc});
        continue;
      }
      out->branches.push_back({pat, check(inner, b.body, tau)});
    }
    return out;
  }

  // Returns nullptr when the constructor's indices cannot agree with the scrutinee's type.
  PatternPtr check_pattern(Scope& sc, const PatternPtr& p, const TypePtr& ty, std::set<std::string>& seen) {
    if (p->kind == Pattern::Kind::Var) {
      if (p->name != "_" && !seen.insert(p->name).second)
        fail(Code::NonLinear, p->name + " occurs twice in the pattern", p->loc);
      if (p->name != "_") sc.vars[p->name] = ty;
      auto out = std::make_shared<Pattern>(*p);
      out->type = ty;
      return out;
    }
    auto [con, dd] = prog_.find_con(p->name);
    if (!con) fail(Code::UnboundVar, "unknown constructor " + p->name, p->loc);
    if (ty->kind != Type::Kind::Data || dd->name != ty->name)
      fail(Code::PatternTypeMismatch, p->name + " builds " + dd->name + ", not " + show(ty), p->loc);
    if (p->args.size() != con->args.size())
      fail(Code::ArityError, p->name + " expects " + std::to_string(con->args.size()) + " arguments, pattern has " +
                                 std::to_string(p->args.size()), p->loc);
    if (!p->ctx_binders.empty() && p->ctx_binders.size() != con->ctx_params.size())
      fail(Code::ArityError, p->name + " binds " + std::to_string(con->ctx_params.size()) + " context variables",
           p->loc);
    auto out = std::make_shared<Pattern>(*p);
    CtxSubst ren;
    for (std::size_t i = 0; i < con->ctx_params.size(); ++i) {
      const std::string& written = p->ctx_binders.empty() ? con->ctx_params[i] : p->ctx_binders[i];
      std::string n = fresh_ctx_var(sc, written);
      ren[con->ctx_params[i]] = sf::Ctx{n, {}};
      sc.rigid.insert(n);
      if (!p->ctx_binders.empty()) sc.ctx_names[written] = n;
      out->ctx_params.push_back(n);
    }
    CtxSubst theta = sc.refine;
    Bindable bindable = [&](const std::string& v) { return sc.rigid.count(v) > 0; };
    for (std::size_t i = 0; i < con->indices.size(); ++i) {
      sf::Ctx ci = inst_ctx(ren, con->indices[i]);
      out->con_indices.push_back(ci);
      out->scrut_indices.push_back(ty->indices[i]);
      if (!unify_ctx(ci, ty->indices[i], theta, bindable)) return nullptr;
    }
    sc.refine = theta;
    for (std::size_t i = 0; i < p->args.size(); ++i) {
      TypePtr at = sc.norm(inst_type(ren, con->args[i]));
      auto sub = check_pattern(sc, p->args[i], at, seen);
      if (!sub) return nullptr;
      out->args[i] = sub;
    }
    return out;
  }

  ExprPtr check_cmatch(const Scope& sc, const ExprPtr& e, const TypePtr& tau) {
    auto [s, st0] = infer(sc, e->arg, nullptr);
    TypePtr st = sc.norm(st0);
    if (st->kind != Type::Kind::Ctx && st->kind != Type::Kind::Param)
      fail(Code::PatternTypeMismatch, "contextual patterns used on a value of type " + show(st));
    auto out = copy(e);
    out->arg = s;
    out->type = st;
    out->cbranches.clear();
    for (const auto& b : e->cbranches) {
      at_loc(b.loc, [&] {
        CBranch cb = b;
        sf::Ctx psi = name_lit(sc, st->ctype.ctx, b.ctx);
        auto binds = sf::check_sf_pattern(prog_.sf, psi, b.pattern, sf::atom(st->ctype.atom));
        Scope inner = sc;
        cb.at = {psi, st->ctype.atom};
        for (const auto& bd : binds) {
          TypePtr t = bd.param ? param_type(bd.type) : ctx_type(bd.type);
          inner.vars[bd.name] = t;
          cb.binder_types.push_back(t);
          cb.binder_names.push_back(bd.name);
        }
        cb.body = check(inner, b.body, tau);
        out->cbranches.push_back(std::move(cb));
      });
    }
    return out;
  }

  bool open_literal(const Scope& sc, const LitCtx& lit) const {
    return lit.turnstile && !lit.names.empty() && (lit.names[0] == "_" || sc.ctx_names.count(lit.names[0]) > 0);
  }

  // The context `psi` with the names a literal or branch gives to its entries.
  sf::Ctx name_lit(const Scope& sc, const sf::Ctx& psi0, const LitCtx& lit) {
    sf::Ctx psi = sc.norm(psi0);
    sf::Ctx out = psi;
    for (auto& en : out.entries) en.name = "";
    if (!lit.turnstile) return out;
    bool open = open_literal(sc, lit);
    std::size_t start = open ? 1 : 0;
    std::size_t k = lit.names.size() - start;
    if (open && k > psi.size())
      fail(Code::ContextMismatch, "literal context " + show(lit) + " names more entries than " + sf::show(psi) + " has");
    if (!open && (psi.var || k != psi.size()))
      fail(Code::ContextMismatch, "literal context " + show(lit) + " does not match " + sf::show(psi));
    std::set<std::string> seen;
    for (std::size_t j = 0; j < k; ++j) {
      const std::string& name = lit.names[start + j];
      std::size_t pos = psi.size() - k + j;
      if (start + j < lit.atoms.size() && !lit.atoms[start + j].empty() &&
          lit.atoms[start + j] != psi.entries[pos].atom)
        fail(Code::ContextMismatch, name + ":" + lit.atoms[start + j] + " stands for an entry of type " +
                                        psi.entries[pos].atom + " in " + sf::show(psi));
      if (name == "_") continue;
      if (!seen.insert(name).second) fail(Code::DuplicateName, name + " is bound twice in " + show(lit));
      out.entries[pos].name = name;
    }
    return out;
  }

  sf::Ambient ambient(const Scope& sc) {
    return [&sc](const std::string& u) -> std::optional<sf::AmbientEntry> {
      auto it = sc.vars.find(u);
      if (it == sc.vars.end()) return std::nullopt;
      TypePtr t = sc.norm(it->second);
      if (t->kind == Type::Kind::Ctx) return sf::AmbientEntry{t->ctype, false};
      if (t->kind == Type::Kind::Param) return sf::AmbientEntry{t->ctype, true};
      fail(Code::TypeMismatch, u + " has type " + show(t) + " and cannot be quoted");
    };
  }

  ExprPtr check_literal(const Scope& sc, const ExprPtr& e, const sf::ContextualType& u) {
    sf::Ctx psi = name_lit(sc, u.ctx, e->lit);
    auto m = sf::check_sf_term(prog_.sf, ambient(sc), psi, e->term, sf::atom(u.atom));
    auto out = copy(e);
    out->term = m;
    out->type = ctx_type({psi, u.atom});
    return out;
  }

  // The contextual type of a literal checked without an expected type.
  TypePtr synth_literal(const Scope& sc, const ExprPtr& e) {
    const sf::TermPtr& m = e->term;
    const LitCtx& lit = e->lit;
    auto amb = ambient(sc);
    auto amb_of = [&](const std::string& u) {
      auto a = amb(u);
      if (!a) fail(Code::UnboundVar, "unbound contextual variable " + u);
      return *a;
    };
    if (m->kind == sf::Term::Kind::QVar || (m->kind == sf::Term::Kind::PVar && m->weakening == 1))
      return ctx_type(amb_of(m->name).type);
    sf::Ctx psi;
    if (lit.turnstile) {
      bool open = open_literal(sc, lit);
      std::size_t start = open ? 1 : 0;
      std::vector<std::string> names(lit.names.begin() + static_cast<std::ptrdiff_t>(start), lit.names.end());
      std::vector<std::string> atoms(names.size());
      for (std::size_t j = 0; j < names.size(); ++j)
        if (start + j < lit.atoms.size()) atoms[j] = lit.atoms[start + j];
      bool quoted_clo = m->kind == sf::Term::Kind::Clo && m->body->kind == sf::Term::Kind::QVar;
      if (open && !(quoted_clo && m->subst.elided))
        fail(Code::CannotInferContext, "cannot infer the context of " + show(e) + "; annotate it");
      if (quoted_clo) {
        const sf::Ctx phi = amb_of(m->body->name).type.ctx;
        std::size_t k = m->subst.entries.size();
        if (k > phi.size())
          fail(Code::LengthMismatch, "substitution in " + show(e) + " has more entries than " + sf::show(phi));
        if (open) psi = phi.drop(k);
        // a variable used as the i-th entry has the type of the i-th entry of the domain
        for (std::size_t i = 0; i < k; ++i) {
          const auto& en = m->subst.entries[i];
          if (en->kind != sf::Term::Kind::BVar) continue;
          for (std::size_t j = names.size(); j-- > 0;) {
            if (names[j] != en->name) continue;
            if (atoms[j].empty()) atoms[j] = phi.entries[phi.size() - k + i].atom;
            break;
          }
        }
      }
      for (std::size_t j = 0; j < names.size(); ++j) {
        if (atoms[j].empty())
          fail(Code::CannotInferContext, "cannot infer the type of " + names[j] + " in " + show(e) + "; write " +
                                             names[j] + ":atom");
        psi.entries.push_back({names[j] == "_" ? "" : names[j], atoms[j]});
      }
    }
    std::string a;
    switch (m->kind) {
      case sf::Term::Kind::Const: {
        auto ty = prog_.sf.constructor(m->name);
        if (!ty) fail(Code::UnboundVar, "unknown constructor " + m->name);
        a = sf::spine_target(ty);
        break;
      }
      case sf::Term::Kind::BVar: {
        for (auto it = psi.entries.rbegin(); it != psi.entries.rend() && a.empty(); ++it)
          if (it->name == m->name) a = it->atom;
        if (a.empty()) fail(Code::UnboundVar, "unbound variable " + m->name + " in " + show(e));
        break;
      }
      case sf::Term::Kind::Clo:
        if (m->body->kind == sf::Term::Kind::QVar) {
          a = amb_of(m->body->name).type.atom;
          break;
        }
        [[fallthrough]];
      default: fail(Code::CannotSynthesize, "cannot synthesize a type for " + show(e) + "; add an annotation");
    }
    return ctx_type({psi, a});
  }

  std::pair<ExprPtr, TypePtr> infer_(const Scope& sc, const ExprPtr& e, const TypePtr& hint) {
    switch (e->kind) {
      case Expr::Kind::App:
      case Expr::Kind::Var:
      case Expr::Kind::Inst: return infer_spine(sc, e, hint);
      case Expr::Kind::ConApp: return infer_con(sc, e, hint);
      case Expr::Kind::Ann: {
        TypePtr t = sc.norm(resolve_with(prog_, sc.lookup(), e->type, false));
        auto body = check(sc, e->fn, t);
        return {ann(body, t, e->loc), t};
      }
      case Expr::Kind::CtxObj: {
        auto out = check_literal(sc, e, synth_literal(sc, e)->ctype);
        return {out, out->type};
      }
      default: fail(Code::CannotSynthesize, "cannot synthesize a type for " + show(e) + "; add an annotation");
    }
  }

  std::string new_meta() { return "?" + std::to_string(++metas_); }

  struct Spine {
    std::vector<ExprPtr> args;
    TypePtr result;
  };

  // Checks `args` against the arrow type `ty`, solving metavariables from synthesizing arguments,
  // then from the expected type, then from literal arguments.
  Spine check_spine(const Scope& sc, const ExprPtr& whole, const std::vector<ExprPtr>& args, TypePtr ty,
                    const TypePtr& hint, CtxSubst& theta) {
    Bindable metas = [](const std::string& v) { return is_meta(v); };
    auto unify_or_fail = [&](const TypePtr& want, const TypePtr& have, const ExprPtr& arg) {
      if (!unify_type(want, have, theta, metas))
        fail(Code::TypeMismatch, "argument " + show(arg) + " has type " + show(have) + " but " +
                                     show(subst_type(theta, want)) + " was expected", arg->loc);
    };
    Spine out;
    out.args.resize(args.size());
    std::vector<TypePtr> doms(args.size());
    std::vector<std::size_t> deferred;
    TypePtr cur = ty;
    for (std::size_t i = 0; i < args.size(); ++i) {
      cur = sc.norm(subst_type(theta, cur));
      if (cur->kind != Type::Kind::Arrow)
        fail(Code::TypeMismatch, "in " + show(whole) + ": a value of type " + show(cur) + " is applied to " +
                                     show(args[i]));
      doms[i] = cur->dom;
      TypePtr d = subst_type(theta, cur->dom);
      if (!has_meta(d)) {
        out.args[i] = check(sc, args[i], d);
      } else if (args[i]->neutral()) {
        auto [a, ta] = infer(sc, args[i], nullptr);
        out.args[i] = a;
        unify_or_fail(d, sc.norm(ta), args[i]);
      } else {
        deferred.push_back(i);
      }
      cur = cur->cod;
    }
    if (hint && has_meta(subst_type(theta, cur))) {
      CtxSubst saved = theta;
      if (!unify_type(cur, hint, theta, metas)) theta = saved;
    }
    for (std::size_t i : deferred) {
      TypePtr d = subst_type(theta, doms[i]);
      if (has_meta(d) && args[i]->kind == Expr::Kind::CtxObj) {
        TypePtr t = at_loc(args[i]->loc, [&] { return synth_literal(sc, args[i]); });
        unify_or_fail(d, t, args[i]);
        d = subst_type(theta, d);
      }
      if (has_meta(d))
        fail(Code::CannotInferContext, "cannot infer the contexts for argument " + show(args[i]) + " of " +
                                           show(whole) + "; instantiate explicitly", args[i]->loc);
      out.args[i] = check(sc, args[i], d);
    }
    out.result = sc.norm(subst_type(theta, cur));
    if (has_meta(out.result))
      fail(Code::CannotInferContext, "cannot infer the contexts in the type of " + show(whole) + "; instantiate explicitly");
    return out;
  }

  std::vector<sf::Ctx> solved(const ExprPtr& whole, const std::vector<std::string>& metas, const CtxSubst& theta) {
    std::vector<sf::Ctx> out;
    for (const auto& m : metas) {
      sf::Ctx c = subst_ctx(theta, sf::Ctx{m, {}});
      if (ctx_has_meta(c))
        fail(Code::CannotInferContext, "cannot infer all contexts of " + show(whole) + "; instantiate explicitly");
      out.push_back(std::move(c));
    }
    return out;
  }

  std::vector<sf::Ctx> resolve_ctxs(const Scope& sc, const std::vector<sf::Ctx>& cs) {
    std::vector<sf::Ctx> out;
    for (const auto& c : cs) out.push_back(sc.norm(resolve_ctx_with(prog_, sc.lookup(), c)));
    return out;
  }

  std::pair<ExprPtr, TypePtr> infer_spine(const Scope& sc, const ExprPtr& e, const TypePtr& hint) {
    std::vector<ExprPtr> args;
    std::vector<ExprPtr> apps;
    ExprPtr h = e;
    while (h->kind == Expr::Kind::App) {
      apps.push_back(h);
      args.push_back(h->arg);
      h = h->fn;
    }
    std::reverse(args.begin(), args.end());
    std::reverse(apps.begin(), apps.end());
    CtxSubst theta;
    std::vector<std::string> metas;
    ExprPtr head;
    TypePtr ty;
    if (h->kind == Expr::Kind::Var) {
      ty = lookup_var(sc, h);
      head = h;
      if (ty->kind == Type::Kind::Forall) {
        CtxSubst inst;
        for (const auto& v : ty->vars) {
          metas.push_back(new_meta());
          inst[v] = sf::Ctx{metas.back(), {}};
        }
        ty = inst_type(inst, ty->body);
      }
    } else if (h->kind == Expr::Kind::Inst) {
      TypePtr tf;
      if (h->fn->kind == Expr::Kind::Var) {
        tf = lookup_var(sc, h->fn);
        head = h->fn;
      } else {
        std::tie(head, tf) = infer(sc, h->fn, nullptr);
      }
      if (tf->kind != Type::Kind::Forall)
        fail(Code::TypeMismatch, show(h->fn) + " has type " + show(tf) + " and takes no contexts", h->loc);
      if (tf->vars.size() != h->ctxs.size())
        fail(Code::ArityError, show(h->fn) + " takes " + std::to_string(tf->vars.size()) + " contexts, got " +
                                   std::to_string(h->ctxs.size()), h->loc);
      auto cs = at_loc(h->loc, [&] { return resolve_ctxs(sc, h->ctxs); });
      CtxSubst inst;
      for (std::size_t i = 0; i < cs.size(); ++i) inst[tf->vars[i]] = cs[i];
      ty = inst_type(inst, tf->body);
      head = ml::inst(head, cs, h->loc);
    } else {
      std::tie(head, ty) = infer(sc, h, nullptr);
    }
    Spine sp = check_spine(sc, e, args, ty, hint, theta);
    if (!metas.empty()) {
      auto i = std::make_shared<Expr>(*ml::inst(head, solved(e, metas, theta), h->loc));
      i->explicit_ctxs = false;
      head = i;
    }
    ExprPtr out = head;
    for (std::size_t i = 0; i < sp.args.size(); ++i) out = app(out, sp.args[i], apps[i]->loc);
    return {out, sp.result};
  }

  TypePtr lookup_var(const Scope& sc, const ExprPtr& v) {
    auto it = sc.vars.find(v->name);
    if (it == sc.vars.end()) fail(Code::UnboundVar, "unbound variable " + v->name, v->loc);
    return sc.norm(it->second);
  }

  std::pair<ExprPtr, TypePtr> infer_con(const Scope& sc, const ExprPtr& e, const TypePtr& hint) {
    auto [con, dd] = prog_.find_con(e->name);
    if (!con) fail(Code::UnboundVar, "unknown constructor " + e->name);
    if (e->args.size() != con->args.size())
      fail(Code::ArityError, e->name + " expects " + std::to_string(con->args.size()) + " arguments, got " +
                                 std::to_string(e->args.size()));
    CtxSubst inst;
    std::vector<std::string> metas;
    std::vector<sf::Ctx> ctxs;
    if (e->explicit_ctxs) {
      if (e->ctxs.size() != con->ctx_params.size())
        fail(Code::ArityError, e->name + " takes " + std::to_string(con->ctx_params.size()) + " contexts, got " +
                                   std::to_string(e->ctxs.size()));
      ctxs = resolve_ctxs(sc, e->ctxs);
      for (std::size_t i = 0; i < ctxs.size(); ++i) inst[con->ctx_params[i]] = ctxs[i];
    } else {
      for (const auto& v : con->ctx_params) {
        metas.push_back(new_meta());
        inst[v] = sf::Ctx{metas.back(), {}};
      }
    }
    std::vector<sf::Ctx> idx;
    for (const auto& i : con->indices) idx.push_back(inst_ctx(inst, i));
    TypePtr ty = data_type(dd->name, std::move(idx));
    for (auto it = con->args.rbegin(); it != con->args.rend(); ++it) ty = arrow(inst_type(inst, *it), ty);
    CtxSubst theta;
    Spine sp = check_spine(sc, e, e->args, ty, hint, theta);
    if (!e->explicit_ctxs) ctxs = solved(e, metas, theta);
    return {con_app(e->name, sp.args, std::move(ctxs), e->explicit_ctxs, e->loc), sp.result};
  }

  const Program& prog_;
  std::vector<Diagnostic>& warnings_;
  int metas_ = 0;
};

Scope scope_of(const Gamma& g) {
  Scope sc;
  for (const auto& v : g.ctx_vars) {
    sc.rigid.insert(v);
    sc.ctx_names[v] = v;
  }
  for (const auto& [x, t] : g.vars) sc.vars[x] = t;
  return sc;
}

}  // namespace

TypePtr resolve_type(const Program& p, const std::vector<std::string>& ctx_vars, const TypePtr& t, bool allow_forall) {
  return resolve_with(p, list_lookup(ctx_vars), t, allow_forall);
}

void check_declarations(const Program& p) {
  sf::wf_signature(p.sf);
  std::set<std::string> names;
  const auto& reserved = reserved_names();
  auto claim = [&](const std::string& n, SourceLoc loc) {
    if (std::find(reserved.begin(), reserved.end(), n) != reserved.end())
      fail(Code::ReservedName, n + " is reserved for the embedding of SF", loc);
    if (!names.insert(n).second) fail(Code::DuplicateName, n + " is declared twice", loc);
  };
  for (const auto& a : p.sf.atoms) claim(a, {});
  for (const auto& [c, t] : p.sf.constructors) claim(c, {});
  for (const auto& d : p.data) claim(d.name, d.loc);
  for (const auto& d : p.data)
    for (const auto& c : d.cons) claim(c.name, c.loc);
  for (const auto& d : p.defs) claim(d.name, d.loc);
  for (const auto& d : p.data) {
    for (const auto& c : d.cons) {
      at_loc(c.loc, [&] {
        std::set<std::string> params;
        for (const auto& v : c.ctx_params)
          if (!params.insert(v).second) fail(Code::DuplicateName, "context variable " + v + " is bound twice in " + c.name);
        for (const auto& a : c.args) resolve_type(p, c.ctx_params, a, false);
        if (c.indices.size() != d.arity)
          fail(Code::ArityError, c.name + " must build " + d.name + " with " + std::to_string(d.arity) + " indices");
        for (const auto& i : c.indices) resolve_ctx_with(p, list_lookup(c.ctx_params), i);
      });
    }
  }
  if (p.main && !p.find_def(*p.main)) fail(Code::UnboundVar, "main names unknown definition " + *p.main);
}

Checked check_program(const Program& p) {
  check_declarations(p);
  Checked out{p, {}};
  Checker ch(p, out.warnings);
  Scope sc;
  for (auto& d : out.program.defs) {
    at_loc(d.loc, [&] {
      d.type = resolve_type(p, {}, d.type, true);
      d.body = ch.check(sc, d.body, d.type);
    });
    sc.vars[d.name] = d.type;
  }
  return out;
}

ExprPtr check_expr(const Program& p, const Gamma& g, const ExprPtr& e, const TypePtr& tau,
                   std::vector<Diagnostic>* warnings) {
  std::vector<Diagnostic> local;
  Checker ch(p, warnings ? *warnings : local);
  return ch.check(scope_of(g), e, resolve_type(p, g.ctx_vars, tau, true));
}

std::pair<ExprPtr, TypePtr> infer_expr(const Program& p, const Gamma& g, const ExprPtr& e) {
  std::vector<Diagnostic> local;
  Checker ch(p, local);
  return ch.infer(scope_of(g), e, nullptr);
}

}  // namespace sfbox::ml
