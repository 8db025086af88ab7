#include "sfbox/coreml/syntax.hpp"

#include <algorithm>
#include <set>

#include "sfbox/sf/subst.hpp"

namespace sfbox::ml {

namespace {

std::shared_ptr<Type> make(Type::Kind k) {
  auto t = std::make_shared<Type>();
  t->kind = k;
  return t;
}

std::shared_ptr<Expr> make_expr(Expr::Kind k, SourceLoc loc) {
  auto e = std::make_shared<Expr>();
  e->kind = k;
  e->loc = loc;
  return e;
}

bool ctx_mentions(const sf::Ctx& c, const std::string& v) { return c.var && *c.var == v; }

}  // namespace

TypePtr data_type(std::string name, std::vector<sf::Ctx> indices) {
  auto t = make(Type::Kind::Data);
  t->name = std::move(name);
  t->indices = std::move(indices);
  return t;
}

TypePtr arrow(TypePtr a, TypePtr b) {
  auto t = make(Type::Kind::Arrow);
  t->dom = std::move(a);
  t->cod = std::move(b);
  return t;
}

TypePtr ctx_type(sf::ContextualType u) {
  auto t = make(Type::Kind::Ctx);
  t->ctype = std::move(u);
  return t;
}

TypePtr param_type(sf::ContextualType u) {
  auto t = make(Type::Kind::Param);
  t->ctype = std::move(u);
  return t;
}

TypePtr forall(std::vector<std::string> vars, TypePtr body) {
  if (vars.empty()) return body;
  auto t = make(Type::Kind::Forall);
  t->vars = std::move(vars);
  t->body = std::move(body);
  return t;
}

namespace {

sf::Ctx apply_ctx(const CtxSubst& s, const sf::Ctx& c, bool chase) {
  if (!chase) {
    if (!c.var) return c;
    auto it = s.find(*c.var);
    if (it == s.end()) return c;
    sf::Ctx out = it->second;
    out.entries.insert(out.entries.end(), c.entries.begin(), c.entries.end());
    return out;
  }
  sf::Ctx cur = c;
  // Solutions may mention other solved variables; chase until the head is unsolved.
  for (std::size_t guard = 0; cur.var && guard < 10000; ++guard) {
    auto it = s.find(*cur.var);
    if (it == s.end()) break;
    sf::Ctx next = it->second;
    next.entries.insert(next.entries.end(), cur.entries.begin(), cur.entries.end());
    cur = std::move(next);
  }
  return cur;
}

TypePtr apply_type(const CtxSubst& s, const TypePtr& t, bool chase) {
  if (s.empty()) return t;
  switch (t->kind) {
    case Type::Kind::Data: {
      auto out = make(Type::Kind::Data);
      out->name = t->name;
      for (const auto& i : t->indices) out->indices.push_back(apply_ctx(s, i, chase));
      return out;
    }
    case Type::Kind::Arrow: return arrow(apply_type(s, t->dom, chase), apply_type(s, t->cod, chase));
    case Type::Kind::Ctx: return ctx_type({apply_ctx(s, t->ctype.ctx, chase), t->ctype.atom});
    case Type::Kind::Param: return param_type({apply_ctx(s, t->ctype.ctx, chase), t->ctype.atom});
    case Type::Kind::Forall: {
      CtxSubst inner = s;
      for (const auto& v : t->vars) inner.erase(v);
      std::set<std::string> free_in_range;
      for (const auto& [k, c] : inner)
        if (c.var) free_in_range.insert(*c.var);
      std::vector<std::string> vars = t->vars;
      TypePtr body = t->body;
      CtxSubst rename;
      for (auto& v : vars) {
        if (!free_in_range.count(v)) continue;
        std::vector<std::string> used;
        ctx_vars_of(body, used);
        std::string fresh = sf::fresh_name(v, [&](const std::string& n) {
          return free_in_range.count(n) || inner.count(n) || std::find(used.begin(), used.end(), n) != used.end() ||
                 std::find(vars.begin(), vars.end(), n) != vars.end();
        });
        rename[v] = sf::Ctx{fresh, {}};
        v = fresh;
      }
      if (!rename.empty()) body = apply_type(rename, body, false);
      return forall(std::move(vars), apply_type(inner, body, chase));
    }
  }
  return t;
}

}  // namespace

sf::Ctx subst_ctx(const CtxSubst& s, const sf::Ctx& c) { return apply_ctx(s, c, true); }
TypePtr subst_type(const CtxSubst& s, const TypePtr& t) { return apply_type(s, t, true); }
sf::Ctx inst_ctx(const CtxSubst& s, const sf::Ctx& c) { return apply_ctx(s, c, false); }
TypePtr inst_type(const CtxSubst& s, const TypePtr& t) { return apply_type(s, t, false); }

void ctx_vars_of(const TypePtr& t, std::vector<std::string>& out) {
  auto add = [&](const sf::Ctx& c) {
    if (c.var) out.push_back(*c.var);
  };
  switch (t->kind) {
    case Type::Kind::Data:
      for (const auto& i : t->indices) add(i);
      return;
    case Type::Kind::Arrow:
      ctx_vars_of(t->dom, out);
      ctx_vars_of(t->cod, out);
      return;
    case Type::Kind::Ctx:
    case Type::Kind::Param: add(t->ctype.ctx); return;
    case Type::Kind::Forall:
      for (const auto& v : t->vars) out.push_back(v);
      ctx_vars_of(t->body, out);
      return;
  }
}

bool has_meta(const TypePtr& t) {
  std::vector<std::string> vs;
  ctx_vars_of(t, vs);
  return std::any_of(vs.begin(), vs.end(), is_meta);
}

namespace {

TypePtr canonical_forall(const TypePtr& t, std::size_t& depth) {
  CtxSubst s;
  std::vector<std::string> vars;
  for (const auto& v : t->vars) {
    std::string c = "%" + std::to_string(depth++);
    s[v] = sf::Ctx{c, {}};
    vars.push_back(c);
  }
  auto out = make(Type::Kind::Forall);
  out->vars = vars;
  out->body = subst_type(s, t->body);
  return out;
}

bool equal_at(const TypePtr& a, const TypePtr& b, std::size_t depth) {
  if (a->kind != b->kind) return false;
  switch (a->kind) {
    case Type::Kind::Data:
      if (a->name != b->name || a->indices.size() != b->indices.size()) return false;
      for (std::size_t i = 0; i < a->indices.size(); ++i)
        if (!sf::same_shape(a->indices[i], b->indices[i])) return false;
      return true;
    case Type::Kind::Arrow: return equal_at(a->dom, b->dom, depth) && equal_at(a->cod, b->cod, depth);
    case Type::Kind::Ctx:
    case Type::Kind::Param: return a->ctype.atom == b->ctype.atom && sf::same_shape(a->ctype.ctx, b->ctype.ctx);
    case Type::Kind::Forall: {
      if (a->vars.size() != b->vars.size()) return false;
      std::size_t da = depth, db = depth;
      auto ca = canonical_forall(a, da);
      auto cb = canonical_forall(b, db);
      return equal_at(ca->body, cb->body, da);
    }
  }
  return false;
}

}  // namespace

bool type_equal(const TypePtr& a, const TypePtr& b) { return equal_at(a, b, 0); }

bool unify_ctx(const sf::Ctx& a0, const sf::Ctx& b0, CtxSubst& s, const Bindable& bindable) {
  sf::Ctx a = subst_ctx(s, a0);
  sf::Ctx b = subst_ctx(s, b0);
  while (!a.entries.empty() && !b.entries.empty()) {
    if (a.entries.back().atom != b.entries.back().atom) return false;
    a.entries.pop_back();
    b.entries.pop_back();
  }
  auto bind = [&](const std::string& v, const sf::Ctx& other) {
    if (ctx_mentions(other, v)) return other.entries.empty();
    s[v] = other;
    return true;
  };
  if (a.entries.empty() && a.var && bindable(*a.var)) return bind(*a.var, b);
  if (b.entries.empty() && b.var && bindable(*b.var)) return bind(*b.var, a);
  return a.entries.empty() && b.entries.empty() && a.var == b.var;
}

bool unify_type(const TypePtr& a, const TypePtr& b, CtxSubst& s, const Bindable& bindable) {
  if (a->kind != b->kind) return false;
  switch (a->kind) {
    case Type::Kind::Data:
      if (a->name != b->name || a->indices.size() != b->indices.size()) return false;
      for (std::size_t i = 0; i < a->indices.size(); ++i)
        if (!unify_ctx(a->indices[i], b->indices[i], s, bindable)) return false;
      return true;
    case Type::Kind::Arrow: return unify_type(a->dom, b->dom, s, bindable) && unify_type(a->cod, b->cod, s, bindable);
    case Type::Kind::Ctx:
    case Type::Kind::Param:
      return a->ctype.atom == b->ctype.atom && unify_ctx(a->ctype.ctx, b->ctype.ctx, s, bindable);
    case Type::Kind::Forall: return type_equal(subst_type(s, a), subst_type(s, b));
  }
  return false;
}

PatternPtr pvar(std::string x, SourceLoc loc) {
  auto p = std::make_shared<Pattern>();
  p->kind = Pattern::Kind::Var;
  p->name = std::move(x);
  p->loc = loc;
  return p;
}

PatternPtr pcon(std::string k, std::vector<PatternPtr> args, std::vector<std::string> ctx_binders, SourceLoc loc) {
  auto p = std::make_shared<Pattern>();
  p->kind = Pattern::Kind::Con;
  p->name = std::move(k);
  p->args = std::move(args);
  p->ctx_binders = std::move(ctx_binders);
  p->loc = loc;
  return p;
}

ExprPtr fun(std::string f, std::string x, ExprPtr body, SourceLoc loc) {
  auto e = make_expr(Expr::Kind::Fun, loc);
  e->name = std::move(f);
  e->param = std::move(x);
  e->body = std::move(body);
  return e;
}

ExprPtr let(std::string x, ExprPtr i, ExprPtr body, SourceLoc loc) {
  auto e = make_expr(Expr::Kind::Let, loc);
  e->name = std::move(x);
  e->arg = std::move(i);
  e->body = std::move(body);
  return e;
}

ExprPtr match(ExprPtr i, std::vector<Branch> bs, SourceLoc loc) {
  auto e = make_expr(Expr::Kind::Match, loc);
  e->arg = std::move(i);
  e->branches = std::move(bs);
  return e;
}

ExprPtr cmatch(ExprPtr i, std::vector<CBranch> bs, SourceLoc loc) {
  auto e = make_expr(Expr::Kind::CMatch, loc);
  e->arg = std::move(i);
  e->cbranches = std::move(bs);
  return e;
}

ExprPtr ctx_obj(LitCtx lit, sf::TermPtr m, SourceLoc loc) {
  auto e = make_expr(Expr::Kind::CtxObj, loc);
  e->lit = std::move(lit);
  e->term = std::move(m);
  return e;
}

ExprPtr app(ExprPtr f, ExprPtr a, SourceLoc loc) {
  auto e = make_expr(Expr::Kind::App, loc);
  e->fn = std::move(f);
  e->arg = std::move(a);
  return e;
}

ExprPtr con_app(std::string k, std::vector<ExprPtr> args, std::vector<sf::Ctx> ctxs, bool explicit_ctxs,
                SourceLoc loc) {
  auto e = make_expr(Expr::Kind::ConApp, loc);
  e->name = std::move(k);
  e->args = std::move(args);
  e->ctxs = std::move(ctxs);
  e->explicit_ctxs = explicit_ctxs;
  return e;
}

ExprPtr var(std::string x, SourceLoc loc) {
  auto e = make_expr(Expr::Kind::Var, loc);
  e->name = std::move(x);
  return e;
}

ExprPtr ann(ExprPtr i, TypePtr t, SourceLoc loc) {
  auto e = make_expr(Expr::Kind::Ann, loc);
  e->fn = std::move(i);
  e->type = std::move(t);
  return e;
}

ExprPtr inst(ExprPtr f, std::vector<sf::Ctx> ctxs, SourceLoc loc) {
  auto e = make_expr(Expr::Kind::Inst, loc);
  e->fn = std::move(f);
  e->ctxs = std::move(ctxs);
  e->explicit_ctxs = true;
  return e;
}

const DataDecl* Program::find_data(const std::string& d) const {
  for (const auto& dd : data)
    if (dd.name == d) return &dd;
  return nullptr;
}

std::pair<const DataCon*, const DataDecl*> Program::find_con(const std::string& k) const {
  for (const auto& dd : data)
    for (const auto& c : dd.cons)
      if (c.name == k) return {&c, &dd};
  return {nullptr, nullptr};
}

const Def* Program::find_def(const std::string& name) const {
  for (const auto& d : defs)
    if (d.name == name) return &d;
  return nullptr;
}

const std::vector<std::string>& reserved_names() {
  static const std::vector<std::string> names = {
      "base", "arr",   "boxed", "nil", "cons", "var",   "sftm", "sp",    "shift", "sub", "con",      "Top",
      "Pop",  "Lam",   "Var",   "Box", "C",    "Empty", "Cons", "Id",    "Suc",   "Shift", "Dot", "apply_sub"};
  return names;
}

}  // namespace sfbox::ml
