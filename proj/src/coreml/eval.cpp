#include "sfbox/coreml/eval.hpp"

#include "sfbox/coreml/print.hpp"
#include "sfbox/sf/alpha.hpp"
#include "sfbox/sf/match.hpp"
#include "sfbox/sf/print.hpp"
#include "sfbox/sf/subst.hpp"
#include "sfbox/sf/typing.hpp"

namespace sfbox::ml {

ValuePtr data_value(std::string k, std::vector<ValuePtr> args, std::vector<sf::ErasedCtx> ctxs) {
  auto v = std::make_shared<Value>();
  v->kind = Value::Kind::Data;
  v->name = std::move(k);
  v->args = std::move(args);
  v->ctxs = std::move(ctxs);
  return v;
}

ValuePtr ctx_value(sf::ContextualObject obj) {
  auto v = std::make_shared<Value>();
  v->kind = Value::Kind::Ctx;
  v->obj = std::move(obj);
  return v;
}

EnvPtr bind_value(EnvPtr env, std::string x, ValuePtr v) {
  return std::make_shared<Env>(Env{std::move(x), std::move(v), std::nullopt, std::move(env)});
}

EnvPtr bind_ctx(EnvPtr env, std::string g, sf::ErasedCtx names) {
  return std::make_shared<Env>(Env{std::move(g), nullptr, std::move(names), std::move(env)});
}

ValuePtr lookup_value(const EnvPtr& env, const std::string& x) {
  for (const Env* e = env.get(); e; e = e->next.get())
    if (!e->ctx && e->name == x) return e->value;
  fail(Code::InternalInvariantViolation, "unbound variable " + x + " at run time");
}

namespace {

const sf::ErasedCtx& lookup_ctx(const EnvPtr& env, const std::string& g) {
  for (const Env* e = env.get(); e; e = e->next.get())
    if (e->ctx && e->name == g) return *e->ctx;
  fail(Code::InternalInvariantViolation, "unbound context variable " + g + " at run time");
}

// Runtime names for a static context: the names its variable stands for, then fresh names for
// the entries.
sf::ErasedCtx rt_ctx(const EnvPtr& env, const sf::Ctx& c) {
  sf::ErasedCtx out;
  if (c.var) out = lookup_ctx(env, *c.var);
  for (const auto& e : c.entries) out.push_back(sf::fresh_name(e.name.empty() ? "v" : e.name, out));
  return out;
}

std::vector<std::string> static_names(const sf::Ctx& c, std::size_t n) {
  std::vector<std::string> names;
  for (const auto& e : c.entries) names.push_back(e.name);
  return sf::align_names(names, n);
}

const sf::ContextualObject& object_of(const EnvPtr& env, const std::string& u) {
  ValuePtr v = lookup_value(env, u);
  if (v->kind != Value::Kind::Ctx) fail(Code::InternalInvariantViolation, u + " is not bound to a contextual object");
  return v->obj;
}

// Evaluates an SF term whose free variables are named by `S` statically and by `R` at run time
// (same length, positional).
sf::TermPtr eval_sf(const EnvPtr& env, const std::vector<std::string>& S, const sf::ErasedCtx& R,
                    const sf::TermPtr& m) {
  using K = sf::Term::Kind;
  switch (m->kind) {
    case K::BVar:
      for (std::size_t i = S.size(); i-- > 0;)
        if (S[i] == m->name) return sf::bvar(R[i]);
      fail(Code::InternalInvariantViolation, "variable " + m->name + " escaped its context at run time");
    case K::Lam: {
      std::string y = sf::fresh_name(m->name, R);
      auto S2 = S;
      auto R2 = R;
      S2.push_back(m->name);
      R2.push_back(y);
      return sf::lam(y, eval_sf(env, S2, R2, m->body));
    }
    case K::Box: return sf::box(eval_sf(env, {}, {}, m->body));
    case K::Const: {
      std::vector<sf::TermPtr> args;
      for (const auto& a : m->args) args.push_back(eval_sf(env, S, R, a));
      return sf::const_app(m->name, std::move(args));
    }
    case K::QVar: {
      const auto& obj = object_of(env, m->name);
      if (obj.ectx.size() != R.size())
        fail(Code::InternalInvariantViolation, "'" + m->name + " has " + std::to_string(obj.ectx.size()) +
                                                   " context entries at run time, expected " + std::to_string(R.size()));
      return sf::rename_ctx(obj.ectx, R, obj.term);
    }
    case K::PVar: {
      const auto& obj = object_of(env, m->name);
      std::size_t skip = m->weakening - 1;
      if (obj.term->kind != K::BVar || obj.ectx.size() + skip != R.size())
        fail(Code::InternalInvariantViolation, "#" + m->name + " is not a variable of the current context");
      for (std::size_t i = obj.ectx.size(); i-- > 0;)
        if (obj.ectx[i] == obj.term->name) return sf::bvar(R[i]);
      fail(Code::InternalInvariantViolation, "#" + m->name + " names no context entry");
    }
    case K::Clo: {
      const sf::Subst& s = m->subst;
      if (s.shift > R.size()) fail(Code::InternalInvariantViolation, "shift beyond the runtime context");
      sf::Subst rs;
      rs.shift = s.shift;
      for (const auto& e : s.entries) rs.entries.push_back(eval_sf(env, S, R, e));
      sf::ErasedCtx D(R.begin(), R.end() - static_cast<std::ptrdiff_t>(s.shift));
      std::size_t k = s.entries.size();
      const auto& dom = m->domain.entries;
      for (std::size_t i = 0; i < k; ++i) {
        const std::string& base = dom.size() >= k ? dom[dom.size() - k + i].name : std::string();
        D.push_back(sf::fresh_name(base.empty() ? "v" : base, D));
      }
      auto body = eval_sf(env, static_names(m->domain, D.size()), D, m->body);
      return sf::apply_subst(rs, D, R, body);
    }
  }
  fail(Code::InternalInvariantViolation, "unknown SF term");
}

class Evaluator {
public:
  Evaluator(const Program& p, Fuel& fuel) : prog_(p), fuel_(fuel) {}

  ValuePtr eval(const EnvPtr& env, const ExprPtr& e) {
    fuel_.step();
    switch (e->kind) {
      case Expr::Kind::Fun: {
        auto v = std::make_shared<Value>();
        v->kind = Value::Kind::Fun;
        v->fun = e;
        v->env = env;
        v->instantiated = e->ctx_params.empty();
        return v;
      }
      case Expr::Kind::Let: return eval(bind_value(env, e->name, eval(env, e->arg)), e->body);
      case Expr::Kind::Match: {
        ValuePtr v = eval(env, e->arg);
        for (const auto& b : e->branches)
          if (auto env2 = match_ml(b.pattern, v, env)) return eval(*env2, b.body);
        fail(Code::MatchFailure, "no branch matches " + show(v), e->loc);
      }
      case Expr::Kind::CMatch: {
        ValuePtr v = eval(env, e->arg);
        const auto& obj = v->obj;
        for (const auto& b : e->cbranches) {
          auto names = static_names(b.at.ctx, obj.ectx.size());
          auto rho = sf::match_sf(obj.ectx, names, b.pattern, obj.term);
          if (!rho) continue;
          EnvPtr env2 = env;
          for (const auto& bd : *rho) env2 = bind_value(env2, bd.name, ctx_value(bd.value));
          return eval(env2, b.body);
        }
        fail(Code::MatchFailure, "no branch matches " + show(v), e->loc);
      }
      case Expr::Kind::CtxObj: {
        const sf::Ctx& psi = e->type->ctype.ctx;
        sf::ErasedCtx R = rt_ctx(env, psi);
        return ctx_value({R, eval_sf(env, static_names(psi, R.size()), R, e->term)});
      }
      case Expr::Kind::App: {
        ValuePtr f = eval(env, e->fn);
        ValuePtr a = eval(env, e->arg);
        return apply(f, a);
      }
      case Expr::Kind::ConApp: {
        std::vector<ValuePtr> args;
        for (const auto& a : e->args) args.push_back(eval(env, a));
        std::vector<sf::ErasedCtx> ctxs;
        for (const auto& c : e->ctxs) ctxs.push_back(rt_ctx(env, c));
        return data_value(e->name, std::move(args), std::move(ctxs));
      }
      case Expr::Kind::Var: return lookup_value(env, e->name);
      case Expr::Kind::Ann: return eval(env, e->fn);
      case Expr::Kind::Inst: {
        ValuePtr f = eval(env, e->fn);
        if (f->kind != Value::Kind::Fun) fail(Code::InternalInvariantViolation, "instantiating a non-function");
        auto v = std::make_shared<Value>(*f);
        v->ctxs.clear();
        for (const auto& c : e->ctxs) v->ctxs.push_back(rt_ctx(env, c));
        v->instantiated = true;
        return v;
      }
    }
    fail(Code::InternalInvariantViolation, "unknown expression");
  }

  ValuePtr apply(const ValuePtr& f, const ValuePtr& a) {
    if (f->kind != Value::Kind::Fun || !f->instantiated)
      fail(Code::InternalInvariantViolation, "application of " + show(f));
    const Expr& fn = *f->fun;
    EnvPtr env = f->env;
    ValuePtr self = f;
    if (!fn.ctx_params.empty()) {
      for (std::size_t i = 0; i < fn.ctx_params.size(); ++i) env = bind_ctx(env, fn.ctx_params[i], f->ctxs[i]);
      auto generic = std::make_shared<Value>(*f);
      generic->ctxs.clear();
      generic->instantiated = false;
      self = generic;
    }
    env = bind_value(env, fn.name, self);
    env = bind_value(env, fn.param, a);
    return eval(env, fn.body);
  }

private:
  const Program& prog_;
  Fuel& fuel_;
};

bool value_has_type(const Program& p, const ValuePtr& v, const TypePtr& t) {
  switch (t->kind) {
    case Type::Kind::Arrow:
    case Type::Kind::Forall: return v->kind == Value::Kind::Fun;
    case Type::Kind::Ctx:
    case Type::Kind::Param: {
      if (v->kind != Value::Kind::Ctx || t->ctype.ctx.var) return false;
      const auto& obj = v->obj;
      const auto& entries = t->ctype.ctx.entries;
      if (obj.ectx.size() != entries.size() || !sf::is_ground(obj.term)) return false;
      if (t->kind == Type::Kind::Param && obj.term->kind != sf::Term::Kind::BVar) return false;
      sf::Ctx psi;
      for (std::size_t i = 0; i < entries.size(); ++i) psi.entries.push_back({obj.ectx[i], entries[i].atom});
      try {
        sf::check_sf_term(p.sf, sf::empty_ambient(), psi, obj.term, sf::atom(t->ctype.atom));
      } catch (const Error&) {
        return false;
      }
      return true;
    }
    case Type::Kind::Data: {
      if (v->kind != Value::Kind::Data) return false;
      auto [con, dd] = p.find_con(v->name);
      if (!con || dd->name != t->name || con->args.size() != v->args.size()) return false;
      CtxSubst theta;
      Bindable params = [&](const std::string& g) {
        return std::find(con->ctx_params.begin(), con->ctx_params.end(), g) != con->ctx_params.end();
      };
      for (std::size_t i = 0; i < con->indices.size(); ++i)
        if (!unify_ctx(con->indices[i], t->indices[i], theta, params)) return false;
      for (std::size_t i = 0; i < con->args.size(); ++i) {
        TypePtr at = subst_type(theta, con->args[i]);
        std::vector<std::string> free;
        ctx_vars_of(at, free);
        // a constructor context not fixed by the indices: the argument's contexts are unknown
        if (!free.empty()) continue;
        if (!value_has_type(p, v->args[i], at)) return false;
      }
      return true;
    }
  }
  return false;
}

}  // namespace

std::optional<EnvPtr> match_ml(const PatternPtr& pat, const ValuePtr& v, const EnvPtr& env) {
  if (pat->kind == Pattern::Kind::Var) return bind_value(env, pat->name, v);
  if (v->kind != Value::Kind::Data || v->name != pat->name) return std::nullopt;
  EnvPtr out = env;
  for (std::size_t i = 0; i < pat->ctx_params.size() && i < v->ctxs.size(); ++i)
    out = bind_ctx(out, pat->ctx_params[i], v->ctxs[i]);
  for (std::size_t i = 0; i < pat->args.size(); ++i) {
    auto next = match_ml(pat->args[i], v->args[i], out);
    if (!next) return std::nullopt;
    out = *next;
  }
  return out;
}

ValuePtr eval(const Program& p, const EnvPtr& env, const ExprPtr& e, Fuel& fuel) {
  Evaluator ev(p, fuel);
  return ev.eval(env, e);
}

EnvPtr eval_defs(const Program& p, Fuel& fuel) {
  Evaluator ev(p, fuel);
  EnvPtr env;
  for (const auto& d : p.defs) env = bind_value(env, d.name, at_loc(d.loc, [&] { return ev.eval(env, d.body); }));
  return env;
}

ValuePtr run_main(const Program& p, Fuel& fuel) {
  if (!p.main) fail(Code::UnboundVar, "the program designates no main definition");
  return lookup_value(eval_defs(p, fuel), *p.main);
}

std::string show(const ValuePtr& v) {
  switch (v->kind) {
    case Value::Kind::Data: {
      std::string s = v->name;
      for (const auto& a : v->args) {
        std::string sa = show(a);
        bool compound = a->kind == Value::Kind::Data && !a->args.empty();
        s += " " + (compound ? "(" + sa + ")" : sa);
      }
      return s;
    }
    case Value::Kind::Fun: return "<fun " + v->fun->name + ">";
    case Value::Kind::Ctx: return sf::show(v->obj);
  }
  return "?";
}

bool value_equal(const ValuePtr& a, const ValuePtr& b) {
  if (a->kind != b->kind) return false;
  switch (a->kind) {
    case Value::Kind::Data:
      if (a->name != b->name || a->args.size() != b->args.size()) return false;
      for (std::size_t i = 0; i < a->args.size(); ++i)
        if (!value_equal(a->args[i], b->args[i])) return false;
      return true;
    case Value::Kind::Fun: return a == b;
    case Value::Kind::Ctx: return sf::alpha_eq(a->obj, b->obj);
  }
  return false;
}

bool check_value(const Program& p, const ValuePtr& v, const TypePtr& t) { return value_has_type(p, v, t); }

}  // namespace sfbox::ml
